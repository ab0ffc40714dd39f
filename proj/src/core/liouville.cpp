#include "liouville.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

namespace wk {

namespace odeint = boost::numeric::odeint;

const char* to_string(C0Tail::Kind k) {
    switch (k) {
    case C0Tail::Kind::Linear: return "linear";
    case C0Tail::Kind::Exponential: return "exponential";
    case C0Tail::Kind::InverseSquare: return "inverse-square";
    case C0Tail::Kind::Fitted: return "fitted";
    default: return "unknown";
    }
}

namespace {

using State4 = std::array<double, 4>; // c0, c0p, xi, Wt

struct ZeroRhs {
    const Profile* w;
    const Profile* r;
    const Profile* q;
    double seg_end;

    void operator()(const State4& y, State4& dy, double x) const {
        const double xe = x >= seg_end ? std::nextafter(seg_end, 0.0) : x;
        const double R = r->value(xe), W = w->value(xe), Q = q->is_zero() ? 0.0 : q->value(xe);
        dy[0] = R * y[1];
        dy[1] = Q * y[0];
        dy[2] = R / (y[0] * y[0]);
        dy[3] = W * y[0] * y[0];
    }
};

std::vector<double> sample_grid(double b, const C0Options& opt) {
    std::vector<double> g;
    const int k0 = static_cast<int>(std::lround(std::log10(opt.x_min) * opt.per_decade));
    auto at = [&](int k) { return std::pow(10.0, static_cast<double>(k) / opt.per_decade); };
    if (b == kInf) {
        const int k1 = static_cast<int>(std::lround(std::log10(opt.x_max) * opt.per_decade));
        for (int k = k0; k <= k1; ++k) g.push_back(at(k));
        return g;
    }
    const double half = 0.5 * b;
    for (int k = k0; at(k) < half; ++k) g.push_back(at(k));
    for (int k = 0; k <= 9 * opt.per_decade; ++k) g.push_back(b - half * at(-k));
    return g;
}

bool constant_r(const Profile& r, double* rho) { return r.is_constant(rho); }

// Least-squares slope of log c0 against log x over samples with x in [lo, hi].
double loglog_slope(const std::vector<C0Sample>& s, double lo, double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& p : s) {
        if (p.x < lo || p.x > hi) continue;
        const double X = std::log(p.x), Y = std::log(p.c0);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++n;
    }
    if (n < 3) return NAN;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const C0Sample* sample_at(const std::vector<C0Sample>& s, double x) {
    for (const auto& p : s)
        if (p.x == x) return &p;
    return nullptr;
}

C0Tail fitted_tail(const C0Solution& sol) {
    C0Tail t;
    t.kind = C0Tail::Kind::Fitted;
    const double X = sol.x_end;
    const double k2 = loglog_slope(sol.samples, X / 100.0, X);
    const double k1 = loglog_slope(sol.samples, X / 100.0, X / 10.0);
    const double k0 = loglog_slope(sol.samples, X / 10.0, X);
    t.kappa = k2;
    t.slowly_varying = std::isfinite(k0) && std::isfinite(k1) && std::abs(k0 - k1) > 0.02;
    t.evidence = "log c0 against log x over [" + num(X / 100.0) + ", " + num(X) + "]: exponent " + num(k2) +
                 (t.slowly_varying ? " (local exponent still drifting: " + num(k1) + " then " + num(k0) + ")" : "");
    return t;
}

C0Tail classify_tail(const Problem& p, const C0Solution& sol) {
    C0Tail t;
    if (p.b < kInf) {
        t.evidence = "finite b: no tail class toward infinity";
        return t;
    }
    if (sol.stopped_on_growth) {
        t.kind = C0Tail::Kind::Exponential;
        t.evidence = "c0 exceeded the growth limit by x = " + num(sol.x_end);
        return t;
    }
    double rho = 1.0;
    const bool rconst = constant_r(p.r, &rho);
    if (!rconst || p.q.family() == Profile::Family::Table || p.q.named() != Profile::Named::None) return fitted_tail(sol);

    const double xt = p.q.is_zero() ? 0.0 : p.q.segments().back().from;
    const Segment tail = p.q.is_zero() ? Segment{0.0, kInf, 0.0, 0.0, 0.0, 0.0} : p.q.segments().back();
    double c0t = 1.0, c0pt = 0.0;
    if (xt > 0.0) {
        const C0Sample* s = sample_at(sol.samples, xt);
        if (!s) return fitted_tail(sol);
        c0t = s->c0;
        c0pt = s->c0p;
    }
    const double d0 = rho * c0pt; // c0'(xt)

    if (tail.c == 0.0) {
        t.kind = C0Tail::Kind::Linear;
        t.exact = true;
        t.slope = d0;
        t.intercept = c0t - d0 * xt;
        if (t.slope < -1e-12 * c0t)
            throw Error(ErrorKind::Domain, "c(x,0) vanishes at x = " + num(xt + c0t / -t.slope) +
                                               ": the spectrum is not nonnegative");
        if (std::abs(t.slope) <= 1e-12 * c0t) t.slope = 0.0;
        t.kappa = t.slope > 0.0 ? 1.0 : 0.0;
        t.evidence = "q vanishes beyond x = " + num(xt) + ": c0 = " + num(t.slope) + " x + " + num(t.intercept);
        return t;
    }
    if (tail.c > 0.0 && tail.p == 0.0 && tail.a == 0.0) {
        t.kind = C0Tail::Kind::Exponential;
        t.exact = true;
        t.evidence = "q is the positive constant " + num(tail.c) + " beyond x = " + num(xt) +
                     ": c0 grows like exp(" + num(std::sqrt(rho * tail.c)) + " x)";
        return t;
    }
    if (tail.c > 0.0 && tail.a > -2.0) {
        t.kind = C0Tail::Kind::Exponential;
        t.exact = true;
        t.evidence = "x^2 q(x) -> infinity: c0 grows faster than any power";
        return t;
    }
    if (tail.a == -2.0 && tail.p == 0.0 && tail.center < xt && 1.0 + 4.0 * rho * tail.c > 0.0) {
        t.kind = C0Tail::Kind::InverseSquare;
        t.exact = true;
        const double l = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * rho * tail.c));
        const double u = xt - tail.center;
        double A = (l * c0t + u * d0) / ((2.0 * l + 1.0) * std::pow(u, l + 1.0));
        if (std::abs(A * std::pow(u, l + 1.0)) <= 1e-9 * std::abs(c0t)) A = 0.0;
        t.l = l;
        t.center = tail.center;
        t.A = A;
        t.B = (c0t - A * std::pow(u, l + 1.0)) * std::pow(u, l);
        if (A < 0.0 || (A == 0.0 && t.B <= 0.0))
            throw Error(ErrorKind::Domain, "c(x,0) changes sign on the inverse-square tail: the spectrum is not nonnegative");
        t.kappa = A > 0.0 ? l + 1.0 : -l;
        t.evidence = "q = " + num(tail.c) + " (x - " + num(tail.center) + ")^-2 beyond x = " + num(xt) + ": l = " + num(l) +
                     ", c0 = " + num(A) + " u^" + num(l + 1.0) + " + " + num(t.B) + " u^" + num(-l) +
                     (A == 0.0 ? " (the sampled tail integrals pick up the growing solution through rounding)" : "");
        return t;
    }
    return fitted_tail(sol);
}

} // namespace

C0Solution solve_c0(const Problem& p, const C0Options& opt) {
    p.validate();
    if (p.r.is_atomic() || p.w.is_atomic()) throw Error(ErrorKind::Unsupported, "the zero-energy solve needs density coefficients");
    C0Solution sol;
    const Profile &w = p.w, &r = p.r, &q = p.q;
    const std::vector<double> grid = sample_grid(p.b, opt);
    const double top = grid.back();
    std::vector<double> targets = grid;
    for (const auto* prof : {&w, &r, &q})
        for (double bp : prof->breakpoints(0.0, top)) targets.push_back(bp);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    State4 y{1.0, 0.0, 0.0, 0.0};
    double x = 0.0;
    if (w.singular_at_zero() || r.singular_at_zero() || q.singular_at_zero()) {
        // First-order start across an integrable singularity at 0.
        const double d = 1e-3 * targets.front();
        const double R = r.integral(0.0, d), Q = q.is_zero() ? 0.0 : q.integral(0.0, d);
        y = {1.0 + R * Q, Q, R, w.integral(0.0, d)};
        x = d;
    }
    auto stepper = odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State4>());
    for (double t : targets) {
        if (t <= x) continue;
        ZeroRhs rhs{&w, &r, &q, t};
        double dt = std::min(1e-3 * std::max(x, 1e-6), t - x);
        auto watch = [&](const State4& s, double at) {
            if (!(s[0] > 0.0))
                throw Error(ErrorKind::Domain, "c(x,0) vanishes near x = " + num(at) + ": the spectrum is not nonnegative");
        };
        odeint::integrate_adaptive(stepper, rhs, y, x, t, dt, watch);
        x = t;
        sol.samples.push_back({x, y[0], y[1], y[2], y[3]});
        if (std::abs(y[0]) > opt.growth_limit || y[3] > 1e250) {
            sol.stopped_on_growth = true;
            break;
        }
    }
    sol.x_end = x;
    sol.tail = classify_tail(p, sol);
    return sol;
}

namespace {

Tri power_integrable(double e, double logp, bool exact) {
    if (exact) {
        if (e < -1.0 - 1e-9) return Tri::Yes;
        if (e > -1.0 + 1e-9) return Tri::No;
        return logp < -1.0 ? Tri::Yes : Tri::No;
    }
    if (e < -1.05) return Tri::Yes;
    if (e > -0.95) return Tri::No;
    return Tri::Unknown;
}

// Log-log interpolation through (xi, Wt) samples with power extrapolation past both ends.
MonotoneMap tilde_map(const std::vector<C0Sample>& s, double B, Growth at_zero, Growth at_inf) {
    auto xs = std::make_shared<std::vector<double>>();
    auto ys = std::make_shared<std::vector<double>>();
    for (const auto& p : s)
        if (p.xi > 0.0 && p.Wt > 0.0 && (xs->empty() || p.xi > xs->back())) {
            xs->push_back(std::log(p.xi));
            ys->push_back(std::log(p.Wt));
        }
    if (xs->size() < 2) throw Error(ErrorKind::Numeric, "too few zero-energy samples for the transformed weight");
    const size_t n = xs->size();
    const double s0 = at_zero.kind == Growth::Kind::Power ? at_zero.index : ((*ys)[1] - (*ys)[0]) / ((*xs)[1] - (*xs)[0]);
    const double s1 = at_inf.kind == Growth::Kind::Power ? at_inf.index
                                                         : ((*ys)[n - 1] - (*ys)[n - 2]) / ((*xs)[n - 1] - (*xs)[n - 2]);
    MonotoneMap m;
    m.eval = [xs, ys, s0, s1, B](double xi) {
        if (xi <= 0.0) return 0.0;
        if (xi >= B) return kInf;
        const double X = std::log(xi);
        const auto& a = *xs;
        const auto& v = *ys;
        if (X <= a.front()) return std::exp(v.front() + s0 * (X - a.front()));
        if (X >= a.back()) return std::exp(v.back() + s1 * (X - a.back()));
        const size_t i = std::upper_bound(a.begin(), a.end(), X) - a.begin();
        const double t = (X - a[i - 1]) / (a[i] - a[i - 1]);
        return std::exp(v[i - 1] + t * (v[i] - v[i - 1]));
    };
    m.lo = 0.0;
    m.hi = B;
    m.at_zero = at_zero;
    m.at_infinity = at_inf;
    m.data_lo = std::exp(xs->front());
    m.data_hi = std::exp(xs->back());
    m.label = "W~";
    return m;
}

} // namespace

TransformResult transform(const Problem& p, const C0Options& opt) {
    TransformResult T;
    if (p.q.is_zero()) {
        T.c0 = solve_c0(p, opt);
        T.B = p.b;
        T.W_tilde = distribution(p.w, p.b, "W~");
        T.w_tilde = p.w;
        T.c0_in_L2w = p.w.integrable_at(p.b);
        T.inv_c0_in_L2 = p.b < kInf ? Tri::Yes : p.r.integrable_at(p.b);
        T.trail.push_back("q = 0: identity transform, c0 = 1, xi = R(x)");
        return T;
    }
    T.c0 = solve_c0(p, opt);
    const C0Solution& sol = T.c0;
    const C0Tail& tail = sol.tail;
    T.trail.push_back("zero-energy solution c0 > 0 on the sampled range up to x = " + num(sol.x_end));
    T.trail.push_back(std::string("c0 tail: ") + to_string(tail.kind) + "; " + tail.evidence);

    const auto wlead = p.b == kInf ? p.w.leading(End::Infinity, kInf) : std::nullopt;
    const Leading wv = wlead.value_or(Leading{});
    const bool wpos = wlead.has_value() && wv.c > 0.0;
    const C0Sample& last = sol.samples.back();
    T.trail.push_back("tail quadratures to x = " + num(last.x) + ": int w c0^2 = " + num(last.Wt) +
                      ", int r c0^-2 = " + num(last.xi));

    double rho = 1.0;
    const bool rconst = p.r.is_constant(&rho);
    if (p.b < kInf) {
        T.trail.push_back("finite b: integrability read from the sampled integrals is not decided");
    } else if (tail.kind == C0Tail::Kind::Exponential) {
        T.inv_c0_in_L2 = rconst ? Tri::Yes : Tri::Unknown;
        T.c0_in_L2w = wpos ? Tri::No : Tri::Unknown;
    } else if (tail.kind != C0Tail::Kind::Unknown && std::isfinite(tail.kappa)) {
        const bool exact = tail.exact && !tail.slowly_varying;
        if (wpos) T.c0_in_L2w = power_integrable(2.0 * tail.kappa + wv.a, wv.p, exact);
        if (rconst) T.inv_c0_in_L2 = power_integrable(-2.0 * tail.kappa, 0.0, exact);
    }
    T.trail.push_back(std::string("c0 in L2(w): ") + to_string(T.c0_in_L2w) + "; 1/c0 in L2: " + to_string(T.inv_c0_in_L2));

    // B = xi(b-): the sampled integral plus the exact tail where one is known.
    T.B = kInf;
    if (p.b < kInf || T.inv_c0_in_L2 == Tri::Yes) {
        double rest = 0.0;
        if (tail.kind == C0Tail::Kind::Linear && tail.slope > 0.0)
            rest = rho / (tail.slope * (tail.slope * last.x + tail.intercept));
        else if (tail.kind == C0Tail::Kind::InverseSquare && tail.A > 0.0)
            rest = rho * std::pow(last.x - tail.center, -(2.0 * tail.l + 1.0)) / ((2.0 * tail.l + 1.0) * tail.A * tail.A);
        T.B = last.xi + rest;
    }
    T.trail.push_back("B = xi(b-) = " + (T.B == kInf ? std::string("infinity") : num(T.B)));

    Growth at_zero = p.w.cumulative_growth(End::Zero, p.b);
    Growth at_inf;
    if (T.B == kInf && p.b == kInf) {
        if (T.c0_in_L2w == Tri::Yes) {
            at_inf.kind = Growth::Kind::Bounded;
        } else if (tail.exact && std::isfinite(tail.kappa) && wpos) {
            const Growth num_g{Growth::Kind::Power, 2.0 * tail.kappa + wv.a + 1.0};
            Growth den_g;
            if (2.0 * tail.kappa < 1.0 - 1e-12)
                den_g = {Growth::Kind::Power, 1.0 - 2.0 * tail.kappa};
            else
                den_g = {Growth::Kind::Slow, 0.0};
            if (num_g.index > 0.0) at_inf = compose_growth(num_g, den_g);
            T.trail.push_back(std::string("W~ at infinity: ") + to_string(at_inf.kind) +
                              (at_inf.kind == Growth::Kind::Power ? " index " + num(at_inf.index) : ""));
        }
    }
    T.W_tilde = tilde_map(sol.samples, T.B, at_zero, at_inf);

    std::vector<std::pair<double, double>> pts;
    for (const auto& s : sol.samples) {
        if (!(s.xi > 0.0) || (!pts.empty() && s.xi <= pts.back().first)) continue;
        const double rv = p.r.value(s.x);
        pts.emplace_back(s.xi, p.w.value(s.x) * std::pow(s.c0, 4) / rv);
    }
    T.w_tilde = Profile::table(std::move(pts));
    return T;
}

OdeModel liouville_model(const Problem& p) {
    p.validate();
    if (p.r.is_atomic() || p.w.is_atomic()) throw Error(ErrorKind::Unsupported, "the Liouville model needs density coefficients");
    OdeModel base = make_model(p);
    OdeModel m;
    m.b = p.b;
    auto w = std::make_shared<Profile>(p.w);
    auto r = std::make_shared<Profile>(p.r);
    auto q = std::make_shared<Profile>(p.q);
    m.aux0 = {1.0, 0.0};
    m.coeffs = [w, r](double x, const double* aux, double& R, double& W, double& Q) {
        const double c0 = aux[0];
        if (!(c0 > 0.0)) throw Error(ErrorKind::Domain, "c(x,0) vanishes near x = " + num(x));
        R = r->value(x) / (c0 * c0);
        W = w->value(x) * c0 * c0;
        Q = 0.0;
    };
    m.aux_rhs = [r, q](double x, const double* aux, double* d) {
        d[0] = r->value(x) * aux[1];
        d[1] = (q->is_zero() ? 0.0 : q->value(x)) * aux[0];
    };
    m.breakpoints = base.breakpoints;
    if (p.w.singular_at_zero() || p.r.singular_at_zero() || p.q.singular_at_zero())
        throw Error(ErrorKind::Unsupported, "the Liouville model needs coefficients bounded at 0");
    if (p.b < kInf) throw Error(ErrorKind::Unsupported, "the Liouville model is implemented for b = infinity");
    return m;
}

InvarianceReport verify_m_invariance(const Problem& p, const std::vector<cplx>& lambdas, const WeylOptions& opt) {
    InvarianceReport rep;
    p.validate();
    const EndpointClass cls = limit_point_classify(p).cls;
    if (p.q.is_zero()) {
        rep.trail.push_back("q = 0: identity transform, residual 0");
        for (const cplx& l : lambdas) {
            const MSample s = m_eval(p, l, opt);
            rep.rows.push_back({l, s, s, 0.0, 2.0 * s.enclosure, true});
        }
        return rep;
    }
    if (cls != EndpointClass::LimitPoint)
        throw Error(ErrorKind::Unsupported, "m-invariance is checked in the limit-point case only");
    const OdeModel model = liouville_model(p);
    rep.trail.push_back("transformed m computed with r / c0^2, w c0^2, q = 0 and c0 carried along the integration");
    for (const cplx& l : lambdas) {
        const MSample a = m_eval(p, l, opt);
        const MSample b = m_eval_model(model, EndpointClass::LimitPoint, Boundary::Neumann, l, opt);
        const double res = std::abs(a.m - b.m);
        const double bound = a.enclosure + b.enclosure + 1e-12 * std::abs(a.m);
        rep.rows.push_back({l, a, b, res, bound, res <= bound});
        rep.max_residual = std::max(rep.max_residual, res);
        rep.ok = rep.ok && res <= bound;
    }
    return rep;
}

} // namespace wk
