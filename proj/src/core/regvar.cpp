#include "regvar.hpp"

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace wk {

const char* to_string(VariationVerdict::Kind k) {
    switch (k) {
    case VariationVerdict::Kind::Regular: return "regular";
    case VariationVerdict::Kind::Slow: return "slow";
    case VariationVerdict::Kind::Rapid: return "rapid";
    default: return "inconclusive";
    }
}

std::vector<double> variation_window(const MonotoneMap& g, End end, const VariationOptions& opt, int per_decade) {
    double decades = opt.decades;
    double reach = 0.0;
    if (end == End::Infinity) {
        if (g.hi < kInf) throw Error(ErrorKind::Domain, "map has a bounded argument range; there is no end at infinity");
        reach = std::min(opt.reach_infinity, g.data_hi);
        if (g.data_lo > 0.0) decades = std::min(decades, std::log10(reach / g.data_lo));
    } else {
        reach = std::max(opt.reach_zero, g.data_lo);
        if (g.data_hi < kInf) decades = std::min(decades, std::log10(g.data_hi / reach));
        if (g.hi < kInf) decades = std::min(decades, std::log10(0.5 * g.hi / reach));
    }
    if (!(decades >= 2.0))
        throw Error(ErrorKind::Classification, "insufficient range: sampled data spans fewer than 2 decades");
    const int n = static_cast<int>(std::lround(decades * per_decade));
    std::vector<double> xs(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double e = decades * (1.0 - static_cast<double>(i) / n); // distance (in decades) from the reach
        xs[i] = end == End::Infinity ? reach * std::pow(10.0, -e) : reach * std::pow(10.0, e);
    }
    return xs;
}

namespace {

constexpr std::array<double, 3> kT{0.5, 0.25, 0.125};

struct Samples {
    std::vector<double> xs;
    std::vector<std::array<double, 3>> ratio; // per x, per t
};

Samples sample(const MonotoneMap& g, End end, const VariationOptions& opt, int per_decade) {
    Samples s;
    s.xs = variation_window(g, end, opt, per_decade);
    s.ratio.resize(s.xs.size());
    double prev_x = NAN, prev_g = NAN;
    for (size_t i = 0; i < s.xs.size(); ++i) {
        const double x = s.xs[i];
        const double gx = g(x);
        if (!(gx > 0.0) || !std::isfinite(gx))
            throw Error(ErrorKind::Domain, "map must be positive and finite near the end");
        if (!std::isnan(prev_g)) {
            const bool up = x > prev_x;
            const double lo = up ? prev_g : gx, hi = up ? gx : prev_g;
            if (lo > hi * (1.0 + 1e-12)) throw Error(ErrorKind::Domain, "non-monotone input map");
        }
        prev_x = x;
        prev_g = gx;
        for (size_t k = 0; k < kT.size(); ++k) s.ratio[i][k] = g(x * kT[k]) / gx;
    }
    return s;
}

std::vector<RatioRow> to_table(const Samples& s) {
    std::vector<RatioRow> rows;
    rows.reserve(s.xs.size() * kT.size());
    for (size_t i = 0; i < s.xs.size(); ++i)
        for (size_t k = 0; k < kT.size(); ++k) rows.push_back({s.xs[i], kT[k], s.ratio[i][k]});
    return rows;
}

// Mean of the local index ln(ratio)/ln(t) at t = 1/2, per decade, in order toward the end.
std::vector<double> decade_index(const Samples& s, int per_decade) {
    std::vector<double> out;
    for (size_t start = 0; start + per_decade < s.xs.size() + 1; start += per_decade) {
        double sum = 0.0;
        int n = 0;
        for (size_t i = start; i < std::min(s.xs.size(), start + per_decade); ++i) {
            sum += std::log(s.ratio[i][0]) / std::log(kT[0]);
            ++n;
        }
        out.push_back(sum / n);
    }
    return out;
}

} // namespace

VariationVerdict classify_variation(const MonotoneMap& g, End end, const VariationOptions& opt) {
    VariationVerdict v;
    v.end = end;
    const Growth& gr = end == End::Zero ? g.at_zero : g.at_infinity;
    const bool symbolic = gr.kind == Growth::Kind::Power || gr.kind == Growth::Kind::Slow ||
                          gr.kind == Growth::Kind::Rapid ||
                          (gr.kind == Growth::Kind::Bounded && end == End::Infinity);
    if (symbolic) {
        v.symbolic = true;
        switch (gr.kind) {
        case Growth::Kind::Power:
            v.kind = VariationVerdict::Kind::Regular;
            v.alpha = gr.index;
            v.note = "symbolic: leading power of the coefficient family";
            break;
        case Growth::Kind::Rapid:
            v.kind = VariationVerdict::Kind::Rapid;
            v.note = "symbolic: power composed with a slowly varying inverse";
            break;
        default:
            v.kind = VariationVerdict::Kind::Slow;
            v.note = gr.kind == Growth::Kind::Bounded ? "symbolic: bounded with a positive limit"
                                                      : "symbolic: logarithmic leading term";
        }
        try {
            v.table = to_table(sample(g, end, opt, 10));
        } catch (const Error&) {
            // Diagnostics are best effort on the symbolic path.
        }
        return v;
    }

    const Samples s = sample(g, end, opt, opt.per_decade);
    v.table = to_table(s);
    const size_t outer = std::min(s.xs.size(), static_cast<size_t>(opt.outer_decades * opt.per_decade + 1));
    const size_t first = s.xs.size() - outer;

    for (size_t i = first; i < s.xs.size(); ++i)
        for (double r : s.ratio[i])
            if (!(r > 0.0) || !std::isfinite(r)) {
                v.kind = VariationVerdict::Kind::Rapid;
                v.note = "numeric: ratio underflows in the outer window";
                return v;
            }

    const std::vector<double> A = decade_index(s, opt.per_decade);
    bool increasing = true, decreasing = true;
    for (size_t k = 1; k < A.size(); ++k) {
        if (A[k] < A[k - 1]) increasing = false;
        if (A[k] > A[k - 1] + 1e-3) decreasing = false;
    }
    if (increasing && A.back() > 1.0 && A.back() > 3.0 * A.front()) {
        v.kind = VariationVerdict::Kind::Rapid;
        v.note = "numeric: local index grows without bound";
        return v;
    }
    if (A.back() < opt.slow_index && decreasing && A.back() < 0.9 * A.front()) {
        v.kind = VariationVerdict::Kind::Slow;
        v.note = "numeric: local index below " + num(opt.slow_index) + " and decreasing";
        return v;
    }
    double lo = kInf, hi = -kInf, sum = 0.0;
    int n = 0;
    for (size_t i = first; i < s.xs.size(); ++i)
        for (size_t k = 0; k < kT.size(); ++k) {
            const double a = std::log(s.ratio[i][k]) / std::log(kT[k]);
            lo = std::min(lo, a);
            hi = std::max(hi, a);
            sum += a;
            ++n;
        }
    if (hi - lo <= opt.regular_spread) {
        v.kind = VariationVerdict::Kind::Regular;
        v.alpha = sum / n;
        v.note = "numeric: local index estimates agree across scales and factors";
        return v;
    }
    v.note = "numeric: local index estimates disagree across scales (spread " + num(hi - lo) + ")";
    return v;
}

PIVerdict positively_increasing(const MonotoneMap& g, End end, const VariationOptions& opt) {
    PIVerdict v;
    v.end = end;
    const Growth& gr = end == End::Zero ? g.at_zero : g.at_infinity;
    if (gr.kind == Growth::Kind::Power && gr.index > 0.0) {
        v.symbolic = true;
        v.verdict = Tri::Yes;
        v.reason = "regularly varying with positive index";
        for (size_t k = 0; k < 3; ++k) v.S[k] = std::pow(v.t[k], gr.index);
        v.C = 1.0;
        v.beta = gr.index;
        return v;
    }
    if (gr.kind == Growth::Kind::Rapid) {
        v.symbolic = true;
        v.verdict = Tri::Yes;
        v.reason = "rapidly varying";
        v.S = {0.0, 0.0, 0.0};
        return v;
    }
    if (gr.kind == Growth::Kind::Slow || (gr.kind == Growth::Kind::Bounded && end == End::Infinity)) {
        v.symbolic = true;
        v.verdict = Tri::No;
        v.reason = "slowly varying";
        v.S = {1.0, 1.0, 1.0};
        return v;
    }

    const Samples s = sample(g, end, opt, opt.per_decade);
    const size_t outer = std::min(s.xs.size(), static_cast<size_t>(opt.outer_decades * opt.per_decade + 1));
    const size_t first = s.xs.size() - outer;
    for (size_t k = 0; k < 3; ++k) {
        double m = 0.0;
        for (size_t i = first; i < s.xs.size(); ++i) m = std::max(m, s.ratio[i][k]);
        v.S[k] = m;
    }
    for (size_t start = 0; start + opt.per_decade < s.xs.size() + 1; start += opt.per_decade) {
        double m = 0.0;
        for (size_t i = start; i < std::min(s.xs.size(), start + static_cast<size_t>(opt.per_decade)); ++i)
            m = std::max(m, s.ratio[i][0]);
        v.decade_trend.push_back(m);
    }
    // Fit ln S(t) = ln C + beta ln t over the three factors.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t k = 0; k < 3; ++k) {
        if (!(v.S[k] > 0.0)) continue;
        const double X = std::log(v.t[k]), Y = std::log(v.S[k]);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++n;
    }
    if (n >= 2) {
        v.beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        v.C = std::exp((sy - v.beta * sx) / n);
    }
    bool nonincreasing = true;
    for (size_t k = 1; k < v.decade_trend.size(); ++k)
        if (v.decade_trend[k] > v.decade_trend[k - 1] + 1e-3) nonincreasing = false;
    double dev = 0.0;
    for (double S : v.S) dev = std::max(dev, std::abs(S - 1.0));
    if (v.S[0] <= opt.pi_yes && nonincreasing) {
        v.verdict = Tri::Yes;
        v.reason = "numeric: S(1/2) <= " + num(opt.pi_yes) + " with a non-increasing trend";
    } else if (dev <= opt.pi_no) {
        v.verdict = Tri::No;
        v.reason = "numeric: S(t) within " + num(opt.pi_no) + " of 1 for all sampled t";
    } else {
        v.verdict = Tri::Unknown;
        v.reason = "numeric: neither threshold met";
    }
    return v;
}

KaramataReport karamata_integral_check(const Profile& f, double gamma, double alpha, End end, double reach) {
    KaramataReport rep;
    rep.end = end;
    rep.gamma = gamma;
    rep.alpha = alpha;
    if (reach <= 0.0) reach = end == End::Infinity ? 1e6 : 1e-6;
    rep.divergent = std::abs(gamma + alpha) < 1e-14;

    // int_0^x t^(gamma-1) f(t) dt, piecewise in log t between breakpoints.
    auto weighted = [&](double x0, double x1) {
        if (gamma == 1.0) return f.integral(x0, x1);
        double total = 0.0;
        std::vector<double> cuts{x0 > 0.0 ? x0 : 1e-30 * x1};
        for (double bp : f.breakpoints(x0, x1)) cuts.push_back(bp);
        cuts.push_back(x1);
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            auto h = [&](double v) {
                const double t = std::exp(v);
                return std::pow(t, gamma) * f.value(t);
            };
            total += integrate_gk(h, std::log(cuts[i]), std::log(cuts[i + 1]), 15, 1e-13);
        }
        return total;
    };

    const double lo = end == End::Infinity ? 1.0 : reach;
    const double hi = end == End::Infinity ? reach : 1.0;
    const int n = static_cast<int>(std::lround(std::log10(hi / lo) * 10.0));
    std::vector<double> xs;
    for (int i = 0; i <= n; ++i) xs.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / n));
    double acc = weighted(0.0, lo), prev = lo;
    for (double x : xs) {
        if (x > prev) acc += weighted(prev, x);
        prev = x;
        const double scale = std::pow(x, gamma) * f.value(x);
        const double ratio = rep.divergent ? acc / scale : acc / (scale / (gamma + alpha));
        rep.rows.push_back({x, ratio});
    }
    // The final decade is the decade nearest the end.
    double dev = 0.0;
    for (const auto& r : rep.rows) {
        const bool last = end == End::Infinity ? r.x >= hi / 10.0 * (1 - 1e-12) : r.x <= lo * 10.0 * (1 + 1e-12);
        if (last) dev = std::max(dev, std::abs(r.ratio - 1.0));
    }
    rep.final_decade_deviation = dev;
    rep.converges = !rep.divergent && dev <= 0.02;
    return rep;
}

} // namespace wk
