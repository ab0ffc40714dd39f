#include "indefinite.hpp"

#include <algorithm>
#include <cmath>

namespace wk {

IndefiniteProblem IndefiniteProblem::from_json(const nlohmann::json& j) {
    IndefiniteProblem ip;
    ip.half = Problem::from_json(j);
    if (j.contains("even")) {
        if (!j.at("even").is_boolean()) throw Error(ErrorKind::Parse, "\"even\" must be a boolean");
        ip.even = j.at("even").get<bool>();
    }
    if (j.contains("coupling")) {
        if (!j.at("coupling").is_number()) throw Error(ErrorKind::Parse, "\"coupling\" must be a number");
        ip.coupling = j.at("coupling").get<double>();
    }
    return ip;
}

const char* to_string_similar(Tri t) {
    switch (t) {
    case Tri::Yes: return "similar";
    case Tri::No: return "not similar";
    default: return "inconclusive";
    }
}

const char* to_string(FPVerdict::WellPosed w) { return w == FPVerdict::WellPosed::Yes ? "yes" : "undetermined"; }

namespace {

void require_even(const IndefiniteProblem& ip) {
    if (!ip.even) throw Error(ErrorKind::Unsupported, "the similarity criteria need even coefficients");
    ip.half.validate();
}

Tri both(Tri a, Tri b) {
    if (a == Tri::No || b == Tri::No) return Tri::No;
    if (a == Tri::Yes && b == Tri::Yes) return Tri::Yes;
    return Tri::Unknown;
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

std::string pi_line(const std::string& name, const PIVerdict& v) {
    return name + " positively increasing at " + (v.end == End::Zero ? "0" : "infinity") + ": " + to_string(v.verdict) +
           " (" + v.reason + ")";
}

bool unit(const Profile& p) {
    double c = 0.0;
    return p.is_constant(&c) && c == 1.0;
}

std::vector<double> default_stieltjes_grid() {
    std::vector<double> g;
    for (int k = -8; k <= 8; ++k) g.push_back(-std::pow(10.0, 0.5 * k));
    return g;
}

} // namespace

Problem similarity_problem(const Problem& p) {
    Problem s = p;
    const EndpointClass cls = limit_point_classify(p).cls;
    if (cls != EndpointClass::LimitPoint) s.boundary = Boundary::Dirichlet;
    return s;
}

Tri kernel_trivial(const Problem& p, std::string* note, const C0Options& copt) {
    auto say = [&](const std::string& s) {
        if (note) *note = s;
    };
    if (p.q.is_zero()) {
        if (limit_point_classify(p).cls != EndpointClass::LimitPoint) {
            say("q = 0 with psi(b) = 0 at a regular or limit-circle b: the zero-energy solutions are affine in R(|x|) and "
                "none vanishes at both ends");
            return Tri::Yes;
        }
        const Tri wi = p.w.integrable_at(p.b);
        if (wi == Tri::No) {
            say("q = 0 and w is not integrable at b: the constant zero-energy solution is not in L2(w), so 0 is not an eigenvalue");
            return Tri::Yes;
        }
        say(wi == Tri::Yes ? "w is integrable at b: no evidence that 0 is not an eigenvalue"
                           : "integrability of w at b undecided: no kernel evidence");
        return Tri::Unknown;
    }
    try {
        const TransformResult T = transform(p, copt);
        if (T.c0_in_L2w == Tri::No) {
            say("c(x,0) is not in L2(w): 0 is not an eigenvalue");
            return Tri::Yes;
        }
        say(std::string("c(x,0) in L2(w): ") + to_string(T.c0_in_L2w) + "; no kernel evidence");
    } catch (const Error& e) {
        say(std::string("kernel evidence unavailable: ") + e.what());
    }
    return Tri::Unknown;
}

SimilarityVerdict similarity_check(const IndefiniteProblem& ip, const SimilarityOptions& so) {
    require_even(ip);
    const Problem p = similarity_problem(ip.half);
    SimilarityVerdict v;
    if (p.boundary != ip.half.boundary)
        v.trail.push_back("regular or limit-circle b: the even operator on (-b, b) takes psi(b) = 0");

    const StieltjesReport st =
        stieltjes_check(p, so.stieltjes_grid.empty() ? default_stieltjes_grid() : so.stieltjes_grid, so.weyl);
    if (!st.pass)
        throw Error(ErrorKind::Domain, "the half-line operator is not nonnegative (m fails the Stieltjes test: " +
                                           st.violation + ")");
    v.stieltjes_pass = true;
    v.trail.push_back("nonnegativity surrogate-verified: m positive and increasing on the sampled negative axis");

    v.at_infinity = ratio_criterion(p, End::Infinity, RatioKind::ImRe, so.ratio, so.weyl, so.variation);
    v.at_zero = ratio_criterion(p, End::Zero, RatioKind::ImRe, so.ratio, so.weyl, so.variation);
    v.regular_at_infinity = v.at_infinity.resolved;
    v.regular_at_zero = v.at_zero.resolved;
    v.C_infinity = v.regular_at_infinity == Bound::Unbounded ? kInf : v.at_infinity.sup;
    v.C_zero = v.regular_at_zero == Bound::Unbounded ? kInf : v.at_zero.sup;
    v.C = std::max(v.C_infinity, v.C_zero);
    v.trail.push_back("similarity criterion: sup Im m(iy)/Re m(iy); infinity is a regular critical point iff the sup over y > 1 is finite");
    v.trail.push_back("window y > 1: " + std::string(to_string(v.regular_at_infinity)) + " (raw " +
                      to_string(v.at_infinity.raw) + ", slope " + num(v.at_infinity.slope) + ", sup " +
                      num(v.at_infinity.sup) + ")");
    v.trail.push_back("window y < 1: " + std::string(to_string(v.regular_at_zero)) + " (raw " + to_string(v.at_zero.raw) +
                      ", slope " + num(v.at_zero.slope) + ", sup " + num(v.at_zero.sup) + ")");

    v.kernel_trivial = kernel_trivial(ip.half, &v.kernel_note, so.c0);
    v.regular_at_zero_reported = v.regular_at_zero;
    if (v.kernel_trivial != Tri::Yes && v.regular_at_zero == Bound::Bounded) {
        v.regular_at_zero_reported = Bound::Inconclusive;
        v.trail.push_back("0 as a regular critical point needs ker A = ker A^2: " + v.kernel_note + "; downgraded");
    } else {
        v.trail.push_back("kernel: " + v.kernel_note);
    }

    if (v.regular_at_infinity == Bound::Bounded && v.regular_at_zero == Bound::Bounded)
        v.similar = Tri::Yes;
    else if (v.regular_at_infinity == Bound::Unbounded || v.regular_at_zero == Bound::Unbounded)
        v.similar = Tri::No;
    v.trail.push_back(std::string("sup over all y > 0: ") + to_string_similar(v.similar));
    if (v.regular_at_zero == Bound::Unbounded) v.trail.push_back("0 is a singular critical point");
    if (v.regular_at_infinity == Bound::Unbounded) v.trail.push_back("infinity is a singular critical point");
    return v;
}

SimCoefficientVerdict similarity_coefficient_check(const IndefiniteProblem& ip, const VariationOptions& vopt) {
    require_even(ip);
    const Problem& p = ip.half;
    if (!p.q.is_zero()) throw Error(ErrorKind::Unsupported, "the coefficient similarity criterion needs q = 0");
    SimCoefficientVerdict out;
    const Tri wi = p.w.integrable_at(p.b), ri = p.r.integrable_at(p.b);
    if (wi == Tri::Unknown || ri == Tri::Unknown)
        throw Error(ErrorKind::Classification, "integrability of w or r at b is undecided");
    const MonotoneMap g = compose_distributions(p.w, p.r, p.b, "W o R^-1");
    if (ri == Tri::Yes) {
        out.route = "r integrable";
        const PIVerdict v = pi_or_unknown(g, End::Zero, vopt);
        out.pi.push_back(v);
        out.similar = v.verdict;
        out.trail.push_back("coefficient similarity criterion, r integrable at b: only the behaviour at 0 matters");
        out.trail.push_back(pi_line("W o R^-1", v));
    } else if (wi == Tri::Yes) {
        out.route = "w integrable, r not";
        out.similar = Tri::No;
        out.trail.push_back("coefficient similarity criterion, w integrable and r not integrable at b: not similar");
    } else {
        out.route = "both distributions unbounded";
        const PIVerdict v0 = pi_or_unknown(g, End::Zero, vopt);
        const PIVerdict v1 = pi_or_unknown(g, End::Infinity, vopt);
        out.pi = {v0, v1};
        out.similar = both(v0.verdict, v1.verdict);
        out.trail.push_back("coefficient similarity criterion, both distributions unbounded: PI at 0 and at infinity");
        out.trail.push_back(pi_line("W o R^-1", v0));
        out.trail.push_back(pi_line("W o R^-1", v1));
    }
    return out;
}

PotentialSimilarity similarity_with_potential(const IndefiniteProblem& ip, const VariationOptions& vopt,
                                              const C0Options& copt) {
    require_even(ip);
    const Problem& p = ip.half;
    if (!unit(p.r)) throw Error(ErrorKind::Unsupported, "the potential similarity route needs r = 1");
    if (p.b < kInf) throw Error(ErrorKind::Unsupported, "the potential similarity route needs b = infinity");
    PotentialSimilarity out;
    const TransformResult T = transform(p, copt);
    out.trail = T.trail;
    out.c0_in_L2w = T.c0_in_L2w;
    out.inv_c0_in_L2 = T.inv_c0_in_L2;
    out.tail = T.c0.tail;

    if (T.c0_in_L2w == Tri::Yes) {
        out.route = "c0 in L2(w)";
        out.similar = Tri::No;
        out.trail.push_back("potential similarity criterion, c0 in L2(w): not similar");
    } else if (T.inv_c0_in_L2 == Tri::Yes) {
        out.route = "1/c0 in L2";
        const PIVerdict v = pi_or_unknown(distribution(p.w, p.b, "W"), End::Zero, vopt);
        out.pi.push_back(v);
        out.similar = v.verdict;
        out.trail.push_back("potential similarity criterion, 1/c0 in L2: only W at 0 matters");
        out.trail.push_back(pi_line("W", v));
    } else if (T.c0_in_L2w == Tri::No && T.inv_c0_in_L2 == Tri::No) {
        out.route = "neither";
        const PIVerdict v0 = pi_or_unknown(T.W_tilde, End::Zero, vopt);
        const PIVerdict v1 = pi_or_unknown(T.W_tilde, End::Infinity, vopt);
        out.pi = {v0, v1};
        out.similar = both(v0.verdict, v1.verdict);
        out.trail.push_back("potential similarity criterion, neither c0 in L2(w) nor 1/c0 in L2: PI of W~ at 0 and infinity");
        out.trail.push_back(pi_line("W~", v0));
        out.trail.push_back(pi_line("W~", v1));
    } else {
        out.route = "undecided";
        out.trail.push_back("integrability of c0 undecided");
    }

    // Inverse-square classification for w = 1.
    const C0Tail& t = T.c0.tail;
    if (unit(p.w) && (t.kind == C0Tail::Kind::InverseSquare || (t.kind == C0Tail::Kind::Linear && t.exact))) {
        const double l = t.kind == C0Tail::Kind::Linear ? 0.0 : t.l;
        out.l = l;
        const bool A_zero = t.kind == C0Tail::Kind::InverseSquare ? t.A == 0.0 : t.slope == 0.0;
        std::string why;
        if (l < 0.5 - 1e-12) {
            out.l_classification = Tri::Yes;
            why = "l in [-1/2, 1/2): similar";
        } else if (std::abs(l - 0.5) <= 1e-12) {
            out.l_classification = A_zero ? Tri::No : Tri::Yes;
            why = std::string("l = 1/2: similar iff c0 is unbounded; c0 is ") + (A_zero ? "bounded" : "unbounded");
        } else {
            // c0 ~ u^(l+1) is never in L2; c0 ~ u^-l is for l > 1/2.
            out.l_classification = A_zero ? Tri::No : Tri::Yes;
            why = std::string("l > 1/2: similar iff c0 is not in L2; c0 is ") + (A_zero ? "in L2" : "not in L2");
        }
        out.trail.push_back("inverse-square tail classification, l = " + num(l) + ": " + why);
        if (out.similar == Tri::Unknown) {
            out.similar = out.l_classification;
        } else if (out.similar != out.l_classification) {
            out.trail.push_back("DISAGREEMENT between the inverse-square classification and the integrability routes");
        }
    }
    return out;
}

namespace {

cplx D_of(const Problem& p, double c, cplx z, const WeylOptions& opt, cplx* mp, cplx* mm) {
    const MSample a = m_eval(p, z, opt);
    const MSample b = m_eval(p, -z, opt);
    if (mp) *mp = a.m;
    if (mm) *mm = b.m;
    return c * a.m + b.m;
}

} // namespace

SpectrumProbeReport nonreal_spectrum_probe(const IndefiniteProblem& ip, const ProbeOptions& po) {
    require_even(ip);
    if (!(po.n_re >= 2 && po.n_im >= 2 && po.re_hi > po.re_lo && po.im_hi > po.im_lo && po.im_lo > 0.0))
        throw Error(ErrorKind::Domain, "probe grid needs at least 2 x 2 points in the open upper half-plane");
    const Problem p = similarity_problem(ip.half);
    const double c = ip.coupling;
    SpectrumProbeReport rep;
    rep.coupling = c;
    const int nr = po.n_re, ni = po.n_im;
    std::vector<double> mags;
    for (int j = 0; j < ni; ++j)
        for (int i = 0; i < nr; ++i) {
            const cplx z(po.re_lo + (po.re_hi - po.re_lo) * i / (nr - 1), po.im_lo + (po.im_hi - po.im_lo) * j / (ni - 1));
            ProbePoint pt;
            pt.z = z;
            pt.D = D_of(p, c, z, po.weyl, &pt.m_plus, &pt.m_minus);
            rep.grid.push_back(pt);
            mags.push_back(std::abs(pt.m_plus) + std::abs(pt.m_minus));
        }
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    rep.scale = std::max(mags[mags.size() / 2], 1e-300);
    rep.trail.push_back("D(z) = " + num(c) + " m(z) + m(-z) on a " + std::to_string(nr) + " x " + std::to_string(ni) +
                        " grid; scale = median |m(z)| + |m(-z)| = " + num(rep.scale));

    const double hr = (po.re_hi - po.re_lo) / (nr - 1), hi = (po.im_hi - po.im_lo) / (ni - 1);
    const double span = po.re_hi - po.re_lo;
    const double re_box[2] = {po.re_lo - 0.5 * span, po.re_hi + 0.5 * span};
    const double im_box = 2.0 * po.im_hi;
    auto at = [&](int i, int j) { return std::abs(rep.grid[j * nr + i].D); };
    for (int j = 0; j < ni; ++j)
        for (int i = 0; i < nr; ++i) {
            const double v = at(i, j);
            if (!std::isfinite(v)) continue;
            bool local_min = true;
            for (int dj = -1; dj <= 1 && local_min; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const int a = i + di, b = j + dj;
                    if ((di || dj) && a >= 0 && a < nr && b >= 0 && b < ni && at(a, b) < v) {
                        local_min = false;
                        break;
                    }
                }
            if (!local_min) continue;
            // Complex secant from the grid point.
            ProbeRoot root;
            root.iterations = 0;
            root.start = rep.grid[j * nr + i].z;
            cplx z0 = root.start, z1 = root.start + cplx(0.1 * hr, 0.1 * hi);
            cplx d0 = rep.grid[j * nr + i].D, d1;
            try {
                d1 = D_of(p, c, z1, po.weyl, nullptr, nullptr);
                int it = 0;
                for (; it < 50; ++it) {
                    if (std::abs(d1) < 1e-12 * rep.scale) break;
                    const cplx den = d1 - d0;
                    if (std::abs(den) == 0.0) break;
                    cplx z2 = z1 - d1 * (z1 - z0) / den;
                    if (z2.imag() < 1e-3) {
                        root.note = "iterate left the upper half-plane";
                        z2 = cplx(z2.real(), 0.5 * z1.imag());
                    }
                    // D tends to 0 at infinity, so a run away from the box is not a zero.
                    if (z2.real() < re_box[0] || z2.real() > re_box[1] || z2.imag() > im_box) {
                        root.note = "iterate left the probe region";
                        root.iterations = it;
                        throw Error(ErrorKind::Numeric, "secant diverged");
                    }
                    z0 = z1;
                    d0 = d1;
                    z1 = z2;
                    d1 = D_of(p, c, z1, po.weyl, nullptr, nullptr);
                }
                root.iterations = it;
            } catch (const Error& e) {
                if (root.note.empty()) root.note = std::string("refinement stopped: ") + e.what();
                d1 = cplx(kInf, 0.0);
            }
            root.z = z1;
            root.residual = std::abs(d1) / rep.scale;
            root.accepted = root.residual < 1e-8 && z1.imag() > 1e-3;
            if (root.accepted) {
                bool dup = false;
                for (const cplx& z : rep.zeros)
                    if (std::abs(z - z1) < 1e-6 * std::max(1.0, std::abs(z))) dup = true;
                if (!dup) rep.zeros.push_back(z1);
            }
            rep.candidates.push_back(root);
        }
    rep.trail.push_back(std::to_string(rep.candidates.size()) + " local minima of |D| refined, " + std::to_string(rep.zeros.size()) +
                        " accepted zeros (|D| < 1e-8 scale, Im z > 1e-3)");
    for (const cplx& z : rep.zeros)
        rep.trail.push_back("nonreal eigenvalue of A_c near z = " + num(z.real()) + " + " + num(z.imag()) + "i");
    return rep;
}

LrgReport lrg_equivalence_report(const IndefiniteProblem& ip, const SimilarityOptions& so) {
    LrgReport rep;
    rep.similarity = similarity_check(ip, so);
    const Bound a = rep.similarity.regular_at_infinity, b = rep.similarity.regular_at_zero;
    rep.ratio_sup = a == Bound::Bounded && b == Bound::Bounded   ? Bound::Bounded
                    : a == Bound::Unbounded || b == Bound::Unbounded ? Bound::Unbounded
                                                                     : Bound::Inconclusive;
    rep.trail.push_back(std::string("similarity: ") + to_string_similar(rep.similarity.similar));
    rep.trail.push_back(std::string("sup over y > 0 of Im m(iy)/Re m(iy): ") + to_string(rep.ratio_sup));
    const Tri ratio_tri = rep.ratio_sup == Bound::Bounded ? Tri::Yes : rep.ratio_sup == Bound::Unbounded ? Tri::No : Tri::Unknown;
    rep.agree = rep.similarity.similar == ratio_tri;
    if (ip.half.q.is_zero()) {
        Problem s = similarity_problem(ip.half);
        std::swap(s.w, s.r);
        s.boundary = Boundary::Neumann;
        s.endpoint = EndpointClass::Auto;
        s.name = ip.half.name.empty() ? "" : ip.half.name + "/swapped";
        HelpOptions ho;
        ho.ratio = so.ratio;
        ho.weyl = so.weyl;
        ho.variation = so.variation;
        rep.swapped_help = help_check(s, ho);
        rep.trail.push_back(std::string("HELP inequality with w and r swapped: ") + to_string(rep.swapped_help->validity));
        const Tri h = rep.swapped_help->validity == Validity::Valid     ? Tri::Yes
                      : rep.swapped_help->validity == Validity::Invalid ? Tri::No
                                                                        : Tri::Unknown;
        rep.agree = rep.agree && h == rep.similarity.similar;
    }
    rep.trail.push_back(rep.agree ? "linear resolvent growth chain consistent"
                                  : "DISAGREEMENT in the linear resolvent growth chain");
    return rep;
}

FPVerdict fp_wellposedness(const IndefiniteProblem& ip, const SimilarityOptions& so) {
    require_even(ip);
    const Problem& p = ip.half;
    FPVerdict v;
    double wc = 0.0, wa = 0.0;
    const bool power_w = p.w.is_pure_power(&wc, &wa);
    if (p.q.is_zero()) {
        const SimCoefficientVerdict cv = similarity_coefficient_check(ip, so.variation);
        v.similar = cv.similar;
        v.route = "coefficient similarity criterion (" + cv.route + ")";
        v.trail = cv.trail;
        if (v.similar == Tri::Unknown) {
            const SimilarityVerdict sv = similarity_check(ip, so);
            v.similar = sv.similar;
            v.route = "imaginary-axis similarity criterion";
            v.trail.insert(v.trail.end(), sv.trail.begin(), sv.trail.end());
        }
        if (power_w && unit(p.r))
            v.trail.push_back("power weight |x|^" + num(wa) + " with r = 1 and q = 0: W o R^-1 is a power, similar at both ends");
    } else {
        try {
            const PotentialSimilarity ps = similarity_with_potential(ip, so.variation, so.c0);
            v.similar = ps.similar;
            v.route = "potential similarity criterion (" + ps.route + ")";
            v.trail = ps.trail;
            if (power_w && wa == 1.0 && (ps.tail.kind == C0Tail::Kind::Linear || ps.tail.kind == C0Tail::Kind::InverseSquare)) {
                const double l = ps.tail.kind == C0Tail::Kind::Linear ? 0.0 : ps.tail.l;
                if (l >= -0.5 && l < 1.0) {
                    v.trail.push_back("weight x with inverse-square index l = " + num(l) + " in [-1/2, 1): well posed");
                } else {
                    const bool in_L2 = 2.0 * ps.tail.kappa < -1.0;
                    v.trail.push_back("weight x with l = " + num(l) + " >= 1: needs c0 not in L2; c0 is " +
                                      (in_L2 ? "in L2" : "not in L2"));
                }
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Unsupported) throw;
            const SimilarityVerdict sv = similarity_check(ip, so);
            v.similar = sv.similar;
            v.route = "imaginary-axis similarity criterion";
            v.trail = sv.trail;
        }
    }
    v.kernel_trivial = kernel_trivial(p, &v.kernel_note, so.c0);
    v.trail.push_back("kernel: " + v.kernel_note);
    if (v.similar == Tri::Yes && v.kernel_trivial == Tri::Yes) {
        v.well_posed = FPVerdict::WellPosed::Yes;
        v.trail.push_back("similar to a self-adjoint operator with trivial kernel: unique strong solutions");
    } else {
        v.trail.push_back(std::string("similarity ") + to_string_similar(v.similar) + ", kernel evidence " +
                          to_string(v.kernel_trivial) + ": the sufficient conditions do not apply, undetermined");
    }
    return v;
}

} // namespace wk
