#include "help.hpp"

#include <algorithm>
#include <cmath>

namespace wk {

const char* to_string(Validity v) {
    switch (v) {
    case Validity::Valid: return "valid";
    case Validity::Invalid: return "invalid";
    default: return "inconclusive";
    }
}

Validity from_tri(Tri t) {
    switch (t) {
    case Tri::Yes: return Validity::Valid;
    case Tri::No: return Validity::Invalid;
    default: return Validity::Inconclusive;
    }
}

namespace {

Tri both(Tri a, Tri b) {
    if (a == Tri::No || b == Tri::No) return Tri::No;
    if (a == Tri::Yes && b == Tri::Yes) return Tri::Yes;
    return Tri::Unknown;
}

std::string pi_line(const std::string& name, const PIVerdict& v) {
    return name + " positively increasing at " + (v.end == End::Zero ? "0" : "infinity") + ": " + to_string(v.verdict) +
           " (" + v.reason + ")";
}

PIVerdict pi_or_unknown(const MonotoneMap& g, End end, const VariationOptions& vopt) {
    try {
        return positively_increasing(g, end, vopt);
    } catch (const Error& e) {
        PIVerdict v;
        v.end = end;
        v.reason = e.what();
        return v;
    }
}

} // namespace

CoefficientVerdict help_coefficient_check(const Problem& p, const VariationOptions& vopt) {
    if (!p.q.is_zero()) throw Error(ErrorKind::Unsupported, "the coefficient HELP criterion needs q = 0");
    p.validate();
    CoefficientVerdict out;
    const Tri wi = p.w.integrable_at(p.b), ri = p.r.integrable_at(p.b);
    if (wi == Tri::Unknown || ri == Tri::Unknown)
        throw Error(ErrorKind::Classification, "integrability of w or r at b is undecided");
    const MonotoneMap g = compose_distributions(p.r, p.w, p.b, "R o W^-1");
    if (wi == Tri::Yes) {
        out.route = "w integrable";
        const PIVerdict v = pi_or_unknown(g, End::Zero, vopt);
        out.pi.push_back(v);
        out.verdict = from_tri(v.verdict);
        out.trail.push_back("coefficient HELP criterion, w integrable at b: only the behaviour at 0 matters");
        out.trail.push_back(pi_line("R o W^-1", v));
    } else if (ri == Tri::Yes) {
        out.route = "r integrable, w not";
        out.verdict = Validity::Invalid;
        out.trail.push_back("coefficient HELP criterion, r integrable and w not integrable at b: the inequality fails");
    } else {
        out.route = "both distributions unbounded";
        const PIVerdict v0 = pi_or_unknown(g, End::Zero, vopt);
        const PIVerdict v1 = pi_or_unknown(g, End::Infinity, vopt);
        out.pi = {v0, v1};
        out.verdict = from_tri(both(v0.verdict, v1.verdict));
        out.trail.push_back("coefficient HELP criterion, both distributions unbounded: PI at 0 and at infinity");
        out.trail.push_back(pi_line("R o W^-1", v0));
        out.trail.push_back(pi_line("R o W^-1", v1));
    }
    return out;
}

namespace {

std::vector<double> rho_grid(const EverittOptions& eo) {
    std::vector<double> g;
    const int k0 = static_cast<int>(std::lround(std::log10(eo.rho_lo) * eo.per_decade));
    const int k1 = static_cast<int>(std::lround(std::log10(eo.rho_hi) * eo.per_decade));
    for (int k = k0; k <= k1; ++k) g.push_back(std::pow(10.0, static_cast<double>(k) / eo.per_decade));
    return g;
}

// Samples both rays of the sector boundary; the worst sample comes first in `worst`.
bool sector_passes(const Problem& p, double theta, const std::vector<double>& rho, const WeylOptions& opt,
                   std::vector<SectorSample>* out, std::optional<SectorSample>* worst) {
    bool pass = true;
    double worst_val = -kInf;
    for (double phi : {theta, kPi - theta}) {
        for (double r : rho) {
            const cplx lambda = std::polar(r, phi);
            const MSample s = m_eval(p, lambda, opt);
            const double am = std::abs(s.m);
            const double v = (lambda * lambda * s.m).imag() / (r * r * am);
            const double tol = std::max(1e-9, 2.0 * s.enclosure / am);
            const bool bad = v > tol;
            SectorSample smp{theta, r, lambda, s.m, phi, v, tol, bad};
            if (out) out->push_back(smp);
            if (bad) {
                pass = false;
                if (v - tol > worst_val) {
                    worst_val = v - tol;
                    if (worst) *worst = smp;
                }
            }
        }
    }
    return pass;
}

} // namespace

namespace {

struct Bisection {
    double theta0;
    std::vector<std::pair<double, bool>> steps;
    std::vector<SectorSample> pass_samples, fail_samples;
    std::optional<SectorSample> worst;
};

Bisection bisect_sector(const Problem& p, const std::vector<double>& rho, double tol, const WeylOptions& opt) {
    Bisection b;
    double lo = 0.0, hi = 0.5 * kPi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        std::vector<SectorSample> smp;
        std::optional<SectorSample> worst;
        const bool ok = sector_passes(p, mid, rho, opt, &smp, &worst);
        b.steps.emplace_back(mid, ok);
        if (ok) {
            hi = mid;
            b.pass_samples = std::move(smp);
        } else {
            lo = mid;
            b.fail_samples = std::move(smp);
            b.worst = worst;
        }
    }
    b.theta0 = hi;
    return b;
}

} // namespace

EverittReport everitt_scan(const Problem& p, const EverittOptions& eo, const WeylOptions& opt) {
    p.validate();
    if (!(eo.rho_lo > 0.0 && eo.rho_hi > eo.rho_lo && eo.per_decade >= 2 && eo.theta_tol > 0.0))
        throw Error(ErrorKind::Domain, "bad sector grid");
    EverittReport rep;
    const auto rho = rho_grid(eo);
    Bisection b = bisect_sector(p, rho, eo.theta_tol, opt);
    rep.theta0 = b.theta0;
    rep.bisection = b.steps;
    rep.samples = std::move(b.pass_samples);
    rep.samples.insert(rep.samples.end(), b.fail_samples.begin(), b.fail_samples.end());
    rep.violation = b.worst;
    rep.trail.push_back("sector criterion: -Im(lambda^2 m) >= 0 on both rays arg lambda = theta, pi - theta, rho in [" +
                        num(eo.rho_lo) + ", " + num(eo.rho_hi) + "] at " + std::to_string(eo.per_decade) + " per decade");
    const bool near_axis = rep.theta0 >= 0.5 * kPi - eo.theta_tol;
    rep.edge_pinned = rep.violation && (rep.violation->rho <= 10.0 * rho.front() || rep.violation->rho >= 0.1 * rho.back());
    bool drifting = false;
    if (!near_axis && rep.edge_pinned) {
        // theta0 is only a lower bound when the worst violation sits at the grid edge: watch it over nested windows.
        const double lo_dec = std::log10(eo.rho_lo), hi_dec = std::log10(eo.rho_hi);
        const double span = std::min(-lo_dec, hi_dec);
        for (double d : {span / 3.0, 2.0 * span / 3.0}) {
            EverittOptions sub = eo;
            sub.rho_lo = std::pow(10.0, -d);
            sub.rho_hi = std::pow(10.0, d);
            rep.window_theta0.emplace_back(d, bisect_sector(p, rho_grid(sub), eo.theta_tol, opt).theta0);
        }
        rep.window_theta0.emplace_back(span, rep.theta0);
        drifting = true;
        for (size_t i = 1; i < rep.window_theta0.size(); ++i)
            if (!(rep.window_theta0[i].second > rep.window_theta0[i - 1].second + 0.5 * eo.theta_tol)) drifting = false;
        std::string seq;
        for (const auto& [d, t] : rep.window_theta0) seq += (seq.empty() ? "" : ", ") + num(t);
        rep.trail.push_back("worst violation sits in the outer decade of the rho grid; theta0 over nested windows: " + seq);
    }
    rep.valid = !near_axis && !drifting;
    rep.verdict = rep.valid ? Validity::Valid : Validity::Invalid;
    rep.K = rep.valid ? 1.0 / std::cos(rep.theta0) : kInf;
    if (rep.valid)
        rep.trail.push_back("theta0 = " + num(rep.theta0) + ", K = 1/cos theta0 = " + num(rep.K));
    else if (near_axis)
        rep.trail.push_back("no sector with theta below pi/2 - " + num(eo.theta_tol) + " passes: HELP invalid, K unbounded");
    else
        rep.trail.push_back("theta0 grows with every widening of the window toward pi/2: HELP invalid, K unbounded");
    if (rep.violation)
        rep.trail.push_back("worst violation at theta = " + num(rep.violation->theta) + ", arg = " + num(rep.violation->arg) +
                            ", rho = " + num(rep.violation->rho) + ": Im(lambda^2 m)/|lambda^2 m| = " +
                            num(rep.violation->im_lambda2_m));
    return rep;
}

std::vector<std::pair<double, double>> factorial_sequence(int n_max) {
    if (n_max < 1 || n_max > 80) throw Error(ErrorKind::Domain, "factorial sequence needs 1 <= n <= 80");
    std::vector<std::pair<double, double>> out;
    for (int n = 1; n <= n_max; ++n) out.emplace_back(std::tgamma(2.0 * n + 1.0), std::tgamma(2.0 * n + 2.0));
    return out;
}

LowerBoundReport help_lower_bound(const Problem& p, const std::vector<std::pair<double, double>>& seq) {
    p.validate();
    if (p.w.is_atomic() || p.r.is_atomic()) throw Error(ErrorKind::Unsupported, "test-function bounds need density coefficients");
    LowerBoundReport rep;
    double wc = 0.0;
    const bool unit_w = p.w.is_constant(&wc) && wc == 1.0;
    // For w != 1 the bound applies to R o W^-1 on the W scale.
    const MonotoneMap g = unit_w ? distribution(p.r, p.b, "R") : compose_distributions(p.r, p.w, p.b, "R o W^-1");
    if (!unit_w) rep.trail.push_back("w is not 1: a_n, b_n are read on the W scale and A, B come from R o W^-1");
    rep.trail.push_back("test functions f_n give 1/K <= (B_n/A_n - 1)^2 + a_n/(b_n - a_n) (A_n/B_n)^2");
    int n = 0;
    for (const auto& [a, b] : seq) {
        ++n;
        if (!(a > 0.0 && b > a && b < g.hi))
            throw Error(ErrorKind::Domain, "sequence term " + std::to_string(n) + " needs 0 < a_n < b_n < end of the scale");
        const double A = g(a), B = g(b);
        if (!(A > 0.0)) throw Error(ErrorKind::Domain, "R vanishes at a_" + std::to_string(n));
        const double d = B / A - 1.0;
        const double K = 1.0 / (d * d + a / (b - a) * (A / B) * (A / B));
        rep.rows.push_back({n, a, b, A, B, K});
        rep.max_K = std::max(rep.max_K, K);
    }
    rep.trail.push_back("max K_n = " + num(rep.max_K) + " over " + std::to_string(rep.rows.size()) + " terms");
    return rep;
}

CoefficientVerdict help_with_potential(const Problem& p, const VariationOptions& vopt, const C0Options& copt) {
    p.validate();
    double rc = 0.0;
    if (!(p.r.is_constant(&rc) && rc == 1.0)) throw Error(ErrorKind::Unsupported, "the potential HELP route needs r = 1");
    if (!p.q.nonnegative()) throw Error(ErrorKind::Unsupported, "the potential HELP route needs q >= 0");
    if (p.b < kInf) throw Error(ErrorKind::Unsupported, "the potential HELP route needs b = infinity");
    CoefficientVerdict out;
    const TransformResult T = transform(p, copt);
    out.trail = T.trail;
    const MonotoneMap inv = inverse_map(T.W_tilde);
    if (T.c0_in_L2w == Tri::Yes) {
        out.route = "c0 in L2(w)";
        const PIVerdict v = pi_or_unknown(inv, End::Zero, vopt);
        out.pi.push_back(v);
        out.verdict = from_tri(v.verdict);
        out.trail.push_back("potential HELP criterion, c0 in L2(w): only the behaviour at 0 matters");
        out.trail.push_back(pi_line("W~^-1", v));
    } else if (T.inv_c0_in_L2 == Tri::Yes && T.c0_in_L2w == Tri::No) {
        out.route = "1/c0 in L2, c0 not in L2(w)";
        out.verdict = Validity::Invalid;
        out.trail.push_back("potential HELP criterion, 1/c0 in L2 and c0 not in L2(w): the inequality fails");
    } else if (T.inv_c0_in_L2 == Tri::No && T.c0_in_L2w == Tri::No) {
        out.route = "neither";
        const PIVerdict v0 = pi_or_unknown(inv, End::Zero, vopt);
        const PIVerdict v1 = pi_or_unknown(inv, End::Infinity, vopt);
        out.pi = {v0, v1};
        out.verdict = from_tri(both(v0.verdict, v1.verdict));
        out.trail.push_back("potential HELP criterion, neither c0 in L2(w) nor 1/c0 in L2: PI of W~^-1 at 0 and infinity");
        out.trail.push_back(pi_line("W~^-1", v0));
        out.trail.push_back(pi_line("W~^-1", v1));
    } else {
        out.route = "undecided";
        out.trail.push_back("integrability of c0 undecided: no verdict");
    }
    return out;
}

HelpVerdict help_check(const Problem& p, const HelpOptions& ho) {
    p.validate();
    if (!p.q.is_zero() && !p.q.nonnegative())
        throw Error(ErrorKind::Unsupported, "the HELP routes take q = 0 or q >= 0 only");
    HelpVerdict v;
    v.trail.push_back(std::string("imaginary-axis HELP criterion: sup Re m(iy)/Im m(iy) over y > 0, boundary ") +
                      to_string(p.boundary) + " at b");
    v.at_infinity = ratio_criterion(p, End::Infinity, RatioKind::ReIm, ho.ratio, ho.weyl, ho.variation);
    v.at_zero = ratio_criterion(p, End::Zero, RatioKind::ReIm, ho.ratio, ho.weyl, ho.variation);
    v.sup_ratio = std::max(v.at_infinity.sup, v.at_zero.sup);
    for (const auto* r : {&v.at_infinity, &v.at_zero}) {
        v.trail.push_back(std::string("window toward ") + (r->end == End::Infinity ? "y = infinity" : "y = 0") + ": " +
                          to_string(r->resolved) + " (raw " + to_string(r->raw) + ", slope " + num(r->slope) +
                          ", sup " + num(r->sup) + ")");
    }
    const Bound a = v.at_infinity.resolved, b = v.at_zero.resolved;
    if (a == Bound::Bounded && b == Bound::Bounded)
        v.validity = Validity::Valid;
    else if (a == Bound::Unbounded || b == Bound::Unbounded)
        v.validity = Validity::Invalid;
    if (v.validity == Validity::Invalid) v.sup_ratio = kInf;

    try {
        v.coefficient = p.q.is_zero() ? help_coefficient_check(p, ho.variation) : help_with_potential(p, ho.variation);
    } catch (const Error& e) {
        v.coefficient.trail.push_back(std::string("coefficient route unavailable: ") + e.what());
    }
    v.disagreement = v.validity != Validity::Inconclusive && v.coefficient.verdict != Validity::Inconclusive &&
                     v.validity != v.coefficient.verdict;
    v.trail.push_back(std::string("coefficient route (") + v.coefficient.route + "): " + to_string(v.coefficient.verdict));
    if (v.disagreement) v.trail.push_back("DISAGREEMENT between the imaginary-axis and coefficient routes");

    if (ho.everitt) {
        v.everitt = everitt_scan(p, ho.everitt_opt, ho.weyl);
        if (v.everitt->valid) v.K_hi = v.everitt->K;
        v.trail.insert(v.trail.end(), v.everitt->trail.begin(), v.everitt->trail.end());
        if (v.validity != Validity::Inconclusive && v.everitt->verdict != v.validity)
            v.trail.push_back("DISAGREEMENT between the sector criterion and the imaginary-axis criterion");
    }
    if (!ho.bound_sequence.empty()) {
        v.lower = help_lower_bound(p, ho.bound_sequence);
        v.K_lo = v.lower->max_K;
        v.trail.insert(v.trail.end(), v.lower->trail.begin(), v.lower->trail.end());
    }
    if (std::isfinite(v.K_lo) || std::isfinite(v.K_hi))
        v.trail.push_back("K in [" + (std::isfinite(v.K_lo) ? num(v.K_lo) : std::string("?")) + ", " +
                          (std::isfinite(v.K_hi) ? num(v.K_hi) : std::string("infinity")) + "]");
    return v;
}

} // namespace wk
