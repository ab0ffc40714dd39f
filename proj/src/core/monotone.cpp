#include "monotone.hpp"

#include <cmath>

namespace wk {

namespace {

// Split point between a and b: geometric when both are positive and far apart.
double split(double a, double b) {
    if (a > 0.0 && b / a > 4.0) return std::sqrt(a) * std::sqrt(b);
    return a + 0.5 * (b - a);
}

} // namespace

double generalized_inverse(const MonotoneMap& g, double y) {
    if (!std::isfinite(y)) throw Error(ErrorKind::Domain, "generalized inverse needs a finite level");
    const double lo = g.lo, hi = g.hi;

    // Bracket: a with g(a) < y (or a = lo) and b with g(b) >= y.
    double b = hi < kInf ? (lo > 0.0 ? std::sqrt(lo * hi) : lo + 0.5 * (hi - lo)) : std::max(1.0, 2.0 * lo);
    int guard = 0;
    while (g(b) < y) {
        if (++guard > 2200) throw Error(ErrorKind::Domain, "level lies above the range of the map");
        const double nb = hi < kInf ? hi - 0.5 * (hi - b) : 2.0 * b;
        if (nb == b || !std::isfinite(nb)) throw Error(ErrorKind::Domain, "level lies above the range of the map");
        b = nb;
    }
    double a = b;
    guard = 0;
    for (;;) {
        const double na = lo > 0.0 ? lo + 0.5 * (a - lo) : 0.5 * a;
        if (na == a || na <= lo || ++guard > 2200) return lo; // g >= y arbitrarily close to lo
        a = na;
        if (g(a) < y) break;
        b = a;
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = split(a, b);
        if (!(mid > a && mid < b)) break;
        if (g(mid) >= y)
            b = mid;
        else
            a = mid;
    }
    return b;
}

double generalized_inverse_decreasing(const std::function<double(double)>& F, double y) {
    MonotoneMap g;
    g.eval = [&F](double x) { return -F(x); };
    g.lo = 0.0;
    g.hi = kInf;
    return generalized_inverse(g, -y);
}

Growth compose_growth(const Growth& num, const Growth& den) {
    using K = Growth::Kind;
    Growth g;
    if (den.kind == K::Bounded || den.kind == K::Unknown || num.kind == K::Unknown) return g;
    if (num.kind == K::Bounded) {
        g.kind = K::Bounded;
        return g;
    }
    if (num.kind == K::Power && den.kind == K::Power) {
        g.kind = K::Power;
        g.index = num.index / den.index;
    } else if (num.kind == K::Slow && den.kind == K::Power) {
        g.kind = K::Slow;
    } else if (num.kind == K::Power && den.kind == K::Slow) {
        g.kind = K::Rapid;
    } else if (num.kind == K::Rapid && den.kind == K::Power) {
        g.kind = K::Rapid;
    } else if (num.kind == K::Power && den.kind == K::Rapid) {
        g.kind = K::Slow;
    }
    return g;
}

MonotoneMap distribution(const Profile& p, double b, const std::string& label) {
    MonotoneMap m;
    m.eval = [p, b](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= b) x = std::nextafter(b, 0.0);
        return p.cumulative(x);
    };
    m.lo = 0.0;
    m.hi = b;
    m.at_zero = p.cumulative_growth(End::Zero, b);
    // Tables are data: their constant extension past the last point says nothing about the tail.
    if (b == kInf && p.family() != Profile::Family::Table) m.at_infinity = p.cumulative_growth(End::Infinity, b);
    double c = 0.0, a = 0.0;
    if (p.is_pure_power(&c, &a) && a > -1.0) m.exact_power = Leading{c / (a + 1.0), a + 1.0, 0.0};
    if (p.family() == Profile::Family::Table) m.data_hi = p.points().back().first;
    m.label = label;
    return m;
}

MonotoneMap compose_distributions(const Profile& numerator, const Profile& denominator, double b,
                                  const std::string& label) {
    MonotoneMap num = distribution(numerator, b);
    MonotoneMap den = distribution(denominator, b);
    MonotoneMap m;
    m.label = label;
    m.lo = 0.0;
    if (denominator.integrable_at(b) == Tri::No)
        m.hi = kInf;
    else
        m.hi = denominator.cumulative(b == kInf ? 1e300 : std::nextafter(b, 0.0));
    if (num.exact_power && den.exact_power && b == kInf) {
        const double e = num.exact_power->a / den.exact_power->a;
        const double c = num.exact_power->c * std::pow(den.exact_power->c, -e);
        m.exact_power = Leading{c, e, 0.0};
        m.eval = [c, e](double u) { return u <= 0.0 ? 0.0 : c * std::pow(u, e); };
    } else {
        m.eval = [num, den](double u) {
            if (u <= 0.0) return 0.0;
            return num(generalized_inverse(den, u));
        };
    }
    m.at_zero = compose_growth(num.at_zero, den.at_zero);
    auto tail = [b](const Profile& p) {
        return p.family() == Profile::Family::Table ? Growth{} : p.cumulative_growth(End::Infinity, b);
    };
    if (m.hi == kInf) m.at_infinity = compose_growth(tail(numerator), tail(denominator));
    if (denominator.family() == Profile::Family::Table) m.data_hi = den(den.data_hi);
    if (numerator.family() == Profile::Family::Table && den.data_hi == kInf)
        m.data_hi = den(num.data_hi);
    return m;
}

namespace {

Growth invert_growth(const Growth& g) {
    Growth out;
    switch (g.kind) {
    case Growth::Kind::Power:
        out.kind = Growth::Kind::Power;
        out.index = 1.0 / g.index;
        break;
    case Growth::Kind::Slow: out.kind = Growth::Kind::Rapid; break;
    case Growth::Kind::Rapid: out.kind = Growth::Kind::Slow; break;
    default: break;
    }
    return out;
}

} // namespace

MonotoneMap inverse_map(const MonotoneMap& g) {
    MonotoneMap m;
    m.lo = g.lo > 0.0 ? g(g.lo) : 0.0;
    m.hi = g.hi == kInf ? (g.at_infinity.kind == Growth::Kind::Bounded ? g(1e300) : kInf) : g(g.hi);
    m.eval = [g](double y) { return y <= 0.0 ? g.lo : generalized_inverse(g, y); };
    if (g.exact_power) {
        const double c = g.exact_power->c, a = g.exact_power->a;
        m.exact_power = Leading{std::pow(c, -1.0 / a), 1.0 / a, 0.0};
        m.eval = [c, a](double y) { return y <= 0.0 ? 0.0 : std::pow(y / c, 1.0 / a); };
    }
    m.at_zero = invert_growth(g.at_zero);
    if (m.hi == kInf) m.at_infinity = invert_growth(g.at_infinity);
    if (g.data_hi < kInf) m.data_hi = g(g.data_hi);
    m.label = g.label.empty() ? "" : "(" + g.label + ")^-1";
    return m;
}

} // namespace wk
