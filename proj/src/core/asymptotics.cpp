#include "asymptotics.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace wk {

double kasahara_constant(double nu) {
    if (!(nu >= 0.0 && nu <= 1.0)) throw Error(ErrorKind::Domain, "nu must lie in [0, 1]");
    if (nu == 0.0 || nu == 1.0) return 1.0;
    using boost::math::tgamma;
    return std::pow(nu, 1.0 - nu) * tgamma(nu) / (std::pow(1.0 - nu, nu) * tgamma(1.0 - nu));
}

const char* to_string(AsymptoteModel::Validity v) {
    switch (v) {
    case AsymptoteModel::Validity::ExactFamily: return "exact-family";
    case AsymptoteModel::Validity::Fitted: return "fitted";
    default: return "unavailable";
    }
}

cplx AsymptoteModel::predict(cplx mu, double rho) const {
    if (validity == Validity::Unavailable) throw Error(ErrorKind::Classification, "asymptote model unavailable: " + reason);
    return K * std::pow(-mu, -nu) * f(rho);
}

AsymptoteModel kasahara_model(const Problem& p, End end, const VariationOptions& vopt) {
    if (!p.q.is_zero()) throw Error(ErrorKind::Unsupported, "the asymptote model needs q = 0");
    p.validate();
    AsymptoteModel M;
    M.end = end;
    // Large energies see the coefficients near x = 0, small energies see them near b.
    const End coeff_end = end == End::Infinity ? End::Zero : End::Infinity;
    M.trail.push_back(std::string("m near lambda = ") + (end == End::Infinity ? "infinity" : "0") +
                      " follows R o W^-1 at " + (coeff_end == End::Zero ? "0" : "infinity"));

    const MonotoneMap WR = compose_distributions(p.w, p.r, p.b, "W o R^-1");
    if (coeff_end == End::Infinity && WR.hi < kInf) {
        M.reason = "R is bounded at b, so the coefficient ratio has no end at infinity; see the bounded-endpoint shortcut";
        M.trail.push_back(M.reason);
        return M;
    }
    const MonotoneMap RW = compose_distributions(p.r, p.w, p.b, "R o W^-1");
    if (coeff_end == End::Infinity && RW.hi < kInf) {
        M.reason = "W is bounded at b, so the coefficient ratio has no end at infinity; see the bounded-endpoint shortcut";
        M.trail.push_back(M.reason);
        return M;
    }

    VariationVerdict v;
    try {
        v = classify_variation(RW, coeff_end, vopt);
    } catch (const Error& e) {
        M.reason = std::string("variation class unavailable: ") + e.what();
        M.trail.push_back(M.reason);
        return M;
    }
    switch (v.kind) {
    case VariationVerdict::Kind::Regular:
        if (!(v.alpha > 0.0)) {
            M.reason = "R o W^-1 has nonpositive index";
            return M;
        }
        M.alpha = v.alpha;
        M.nu = v.alpha / (1.0 + v.alpha);
        M.trail.push_back("R o W^-1 regularly varying with index " + num(v.alpha) + ": nu = alpha/(1+alpha) = " + num(M.nu));
        break;
    case VariationVerdict::Kind::Slow:
        M.alpha = 0.0;
        M.nu = 0.0;
        M.trail.push_back("R o W^-1 slowly varying: nu = 0");
        break;
    case VariationVerdict::Kind::Rapid:
        M.alpha = kInf;
        M.nu = 1.0;
        M.trail.push_back("R o W^-1 rapidly varying: nu = 1");
        break;
    default:
        M.reason = "variation class of R o W^-1 is inconclusive (" + v.note + ")";
        M.trail.push_back(M.reason);
        return M;
    }
    M.K = kasahara_constant(M.nu);
    M.validity = v.symbolic ? AsymptoteModel::Validity::ExactFamily : AsymptoteModel::Validity::Fitted;

    if (WR.exact_power) {
        const double c = WR.exact_power->c, a = WR.exact_power->a;
        M.F = [c, a](double x) { return 1.0 / (c * std::pow(x, 1.0 + a)); };
        M.f = [c, a](double rho) { return std::pow(c * rho, -1.0 / (1.0 + a)); };
        M.trail.push_back("W o R^-1 is an exact power: f in closed form");
    } else {
        // Beyond R(b) the ratio map is +infinity, so F vanishes there.
        auto F = [WR](double x) { return x >= WR.hi ? 0.0 : 1.0 / (x * WR(x)); };
        M.F = F;
        M.f = [F](double rho) { return generalized_inverse_decreasing(F, rho); };
        M.trail.push_back("f = generalized inverse of F by bisection");
    }
    return M;
}

AsymptoteReport verify_asymptote(const Problem& p, const AsymptoteModel& model, const std::vector<double>& rho,
                                 const WeylOptions& opt) {
    if (model.validity == AsymptoteModel::Validity::Unavailable)
        throw Error(ErrorKind::Classification, "asymptote model unavailable: " + model.reason);
    AsymptoteReport rep;
    rep.end = model.end;
    std::vector<double> grid = rho;
    // Order toward the end so per-decade summaries read outward.
    std::sort(grid.begin(), grid.end());
    if (model.end == End::Zero) std::reverse(grid.begin(), grid.end());
    const cplx mus[2] = {cplx(0.0, 1.0), std::polar(1.0, 0.75 * kPi)};
    for (double r : grid) {
        if (!(r > 0.0)) throw Error(ErrorKind::Domain, "rho grid must be positive");
        for (const cplx& mu : mus) {
            const MSample s = m_eval(p, mu * r, opt);
            const cplx pred = model.predict(mu, r);
            AsymptoteRow row{r, mu, s.m, pred, std::abs(s.m / pred - 1.0), s.enclosure / std::abs(pred)};
            rep.rows.push_back(row);
        }
    }
    if (rep.rows.empty()) return rep;
    // Per-decade maxima.
    double cur = NAN, key = NAN;
    for (const auto& row : rep.rows) {
        const double d = model.end == End::Infinity ? std::floor(std::log10(row.rho)) : std::ceil(std::log10(row.rho));
        if (std::isnan(key) || d != key) {
            if (!std::isnan(key)) rep.per_decade.emplace_back(std::pow(10.0, key), cur);
            key = d;
            cur = 0.0;
        }
        cur = std::max(cur, row.deviation);
    }
    rep.per_decade.emplace_back(std::pow(10.0, key), cur);
    // Non-increasing over the last two decades, up to the enclosure noise of the later decade.
    const size_t n = rep.per_decade.size();
    auto noise = [&](double start) {
        double e = 0.0;
        for (const auto& row : rep.rows)
            if (row.rho >= std::min(start, 10.0 * start) && row.rho <= std::max(start, 10.0 * start))
                e = std::max(e, row.enclosure);
        return 2.0 * e;
    };
    rep.shrinking = n >= 3;
    for (size_t i = n >= 3 ? n - 2 : n; i < n; ++i)
        if (rep.per_decade[i].second > rep.per_decade[i - 1].second + noise(rep.per_decade[i].first))
            rep.shrinking = false;
    rep.final_deviation = rep.per_decade.back().second;
    return rep;
}

const char* to_string(RatioKind k) { return k == RatioKind::ReIm ? "re/im" : "im/re"; }

const char* to_string(Bound b) {
    switch (b) {
    case Bound::Bounded: return "bounded";
    case Bound::Unbounded: return "unbounded";
    default: return "inconclusive";
    }
}

const char* to_string(EndpointShortcut::Case c) {
    switch (c) {
    case EndpointShortcut::Case::WIntegrable: return "w-integrable";
    case EndpointShortcut::Case::RIntegrable: return "r-integrable";
    default: return "defer";
    }
}

EndpointShortcut bounded_endpoint_shortcut(const Problem& p) {
    EndpointShortcut s;
    const Tri wi = p.w.integrable_at(p.b), ri = p.r.integrable_at(p.b);
    if (wi == Tri::Unknown || ri == Tri::Unknown)
        throw Error(ErrorKind::Classification, "integrability of w or r at b is undecided");
    if (wi == Tri::Yes) {
        s.which = EndpointShortcut::Case::WIntegrable;
        s.trail.push_back("W bounded at b: m = -a/lambda + Stieltjes part, Re m(iy)/Im m(iy) -> 0 as y -> 0");
    } else if (ri == Tri::Yes) {
        s.which = EndpointShortcut::Case::RIntegrable;
        s.trail.push_back("R bounded, W unbounded at b: m -> a > 0, Re m(iy)/Im m(iy) -> infinity as y -> 0");
    } else {
        s.trail.push_back("W and R unbounded at b: defer to the ratio criterion");
    }
    return s;
}

namespace {

Bound from_pi(Tri t) {
    switch (t) {
    case Tri::Yes: return Bound::Bounded;
    case Tri::No: return Bound::Unbounded;
    default: return Bound::Inconclusive;
    }
}

} // namespace

Bound ratio_prediction(const Problem& p, End end, RatioKind which, const VariationOptions& vopt, std::string* reason) {
    auto say = [&](const std::string& s) {
        if (reason) *reason = s;
    };
    if (!p.q.is_zero()) {
        say("no coefficient prediction for q != 0 (see the Liouville routes)");
        return Bound::Inconclusive;
    }
    const char* num_name = which == RatioKind::ReIm ? "R o W^-1" : "W o R^-1";
    if (end == End::Zero) {
        const EndpointShortcut sc = bounded_endpoint_shortcut(p);
        if (sc.which == EndpointShortcut::Case::WIntegrable) {
            say(sc.trail.front());
            return which == RatioKind::ReIm ? Bound::Bounded : Bound::Unbounded;
        }
        if (sc.which == EndpointShortcut::Case::RIntegrable) {
            say(sc.trail.front());
            return which == RatioKind::ReIm ? Bound::Unbounded : Bound::Bounded;
        }
    }
    const MonotoneMap g = which == RatioKind::ReIm ? compose_distributions(p.r, p.w, p.b, num_name)
                                                   : compose_distributions(p.w, p.r, p.b, num_name);
    // Large y probes the coefficients at 0; small y probes them at infinity.
    const End ce = end == End::Infinity ? End::Zero : End::Infinity;
    try {
        const PIVerdict v = positively_increasing(g, ce, vopt);
        say(std::string(num_name) + " positively increasing at " + (ce == End::Zero ? "0" : "infinity") + ": " +
            to_string(v.verdict) + " (" + v.reason + ")");
        return from_pi(v.verdict);
    } catch (const Error& e) {
        say(std::string("coefficient prediction unavailable: ") + e.what());
        return Bound::Inconclusive;
    }
}

std::vector<RatioSample> ratio_samples(const Problem& p, End end, const RatioOptions& ropt, const WeylOptions& opt) {
    const double reach = end == End::Infinity ? ropt.reach_infinity : ropt.reach_zero;
    const double decades = std::abs(std::log10(reach));
    if (!(decades >= 2.0)) throw Error(ErrorKind::Domain, "ratio window must span at least 2 decades");
    const int count = static_cast<int>(std::lround(decades * ropt.per_decade));
    std::vector<RatioSample> out;
    for (int i = 1; i <= count; ++i) {
        const double e = decades * static_cast<double>(i) / count;
        const double y = end == End::Infinity ? std::pow(10.0, e) : std::pow(10.0, -e);
        const MSample s = m_eval(p, cplx(0.0, y), opt);
        out.push_back({y, s.m, NAN, s.enclosure});
    }
    return out;
}

RatioReport ratio_from_samples(const Problem& p, End end, RatioKind which, const std::vector<RatioSample>& base,
                               const RatioOptions& ropt, const VariationOptions& vopt) {
    RatioReport rep;
    rep.end = end;
    rep.which = which;
    rep.samples = base;
    if (base.size() < 4) throw Error(ErrorKind::Domain, "ratio window needs at least 4 samples");
    for (auto& s : rep.samples) {
        const double re = s.m.real(), im = s.m.imag();
        s.ratio = which == RatioKind::ReIm ? re / im : im / re;
    }
    rep.y_lo = std::min(rep.samples.front().y, rep.samples.back().y);
    rep.y_hi = std::max(rep.samples.front().y, rep.samples.back().y);

    std::vector<double> all;
    for (const auto& s : rep.samples) all.push_back(s.ratio);
    rep.sup = *std::max_element(all.begin(), all.end());
    std::vector<double> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    rep.median = sorted[sorted.size() / 2];

    // Outer window and log-log slope against the distance toward the end.
    const size_t outer = std::min(rep.samples.size(), static_cast<size_t>(ropt.outer_decades * ropt.per_decade + 1));
    const size_t first = rep.samples.size() - outer;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    rep.outer_max = 0.0;
    bool nonpositive = false;
    for (size_t i = first; i < rep.samples.size(); ++i) {
        const auto& s = rep.samples[i];
        rep.outer_max = std::max(rep.outer_max, s.ratio);
        if (!(s.ratio > 0.0)) nonpositive = true;
        const double X = end == End::Infinity ? std::log(s.y) : -std::log(s.y);
        const double Y = std::log(std::max(std::abs(s.ratio), 1e-300));
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    const double k = static_cast<double>(outer);
    rep.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);

    const double med = std::max(std::abs(rep.median), 1e-300);
    if (nonpositive) {
        rep.raw = Bound::Inconclusive;
        rep.trail.push_back("ratio not positive in the outer window (sign at numerical noise level)");
    } else if (rep.slope >= ropt.slope_unbounded && rep.outer_max > ropt.unbounded_factor * med) {
        rep.raw = Bound::Unbounded;
    } else if (rep.slope <= ropt.slope_bounded && rep.outer_max < ropt.bounded_factor * med) {
        rep.raw = Bound::Bounded;
    } else {
        rep.raw = Bound::Inconclusive;
    }
    rep.trail.push_back(std::string("sampled ") + to_string(which) + " over " + num(rep.y_lo) + " <= y <= " +
                        num(rep.y_hi) + ": slope " + num(rep.slope) + ", outer max " + num(rep.outer_max) +
                        ", median " + num(rep.median) + " -> " + to_string(rep.raw));

    rep.prediction = ratio_prediction(p, end, which, vopt, &rep.prediction_reason);
    rep.trail.push_back("coefficient side: " + rep.prediction_reason);

    rep.resolved = rep.raw;
    if (rep.raw == Bound::Inconclusive && rep.prediction != Bound::Inconclusive && !nonpositive) {
        const bool consistent = rep.prediction == Bound::Unbounded ? rep.slope >= ropt.slope_unbounded
                                                                   : rep.slope <= ropt.slope_bounded;
        if (consistent) {
            rep.resolved = rep.prediction;
            rep.trail.push_back(std::string("resolved to ") + to_string(rep.resolved) +
                                ": the fitted trend has the sign the coefficient side predicts");
        }
    }
    rep.disagreement = rep.raw != Bound::Inconclusive && rep.prediction != Bound::Inconclusive &&
                       rep.raw != rep.prediction;
    if (rep.disagreement) rep.trail.push_back("DISAGREEMENT between the sampled ratio and the coefficient side");
    return rep;
}

RatioReport ratio_criterion(const Problem& p, End end, RatioKind which, const RatioOptions& ropt,
                            const WeylOptions& opt, const VariationOptions& vopt) {
    p.validate();
    return ratio_from_samples(p, end, which, ratio_samples(p, end, ropt, opt), ropt, vopt);
}

} // namespace wk
