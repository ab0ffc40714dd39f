#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <regex>
#include <set>

namespace wk {

using nlohmann::json;

std::string format_complex(cplx z) {
    char buf[96];
    const double im = z.imag();
    std::snprintf(buf, sizeof buf, "%.17g%s%.17gi", z.real(), std::signbit(im) ? "-" : "+", std::abs(im));
    return buf;
}

cplx parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    static const std::string real = R"([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex full("^(" + real + ")([+-])((?:\\d+\\.?\\d*|\\.\\d+)(?:[eE][+-]?\\d+)?)?i$");
    static const std::regex imag_only("^([+-]?)((?:\\d+\\.?\\d*|\\.\\d+)(?:[eE][+-]?\\d+)?)?i$");
    static const std::regex real_only("^" + real + "$");
    std::smatch m;
    if (std::regex_match(s, m, full)) {
        const double im = m[3].matched ? std::stod(m[3].str()) : 1.0;
        return {std::stod(m[1].str()), m[2].str() == "-" ? -im : im};
    }
    if (std::regex_match(s, m, imag_only)) {
        const double im = m[2].matched ? std::stod(m[2].str()) : 1.0;
        return {0.0, m[1].str() == "-" ? -im : im};
    }
    if (std::regex_match(s, real_only)) return {std::stod(s), 0.0};
    throw Error(ErrorKind::Parse, "cannot parse complex number \"" + text + "\" (expected a+bi)");
}

namespace {

json jnum(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json jtri(Tri t) { return to_string(t); }

json table(std::vector<std::string> columns, json rows) {
    return json{{"columns", std::move(columns)}, {"rows", std::move(rows)}};
}

VerdictClass from_tri_class(Tri t) {
    return t == Tri::Yes ? VerdictClass::Positive : t == Tri::No ? VerdictClass::Negative : VerdictClass::Inconclusive;
}

VerdictClass from_bound(Bound b) {
    return b == Bound::Bounded ? VerdictClass::Positive
                               : b == Bound::Unbounded ? VerdictClass::Negative : VerdictClass::Inconclusive;
}

VerdictClass from_validity(Validity v) {
    return v == Validity::Valid ? VerdictClass::Positive
                                : v == Validity::Invalid ? VerdictClass::Negative : VerdictClass::Inconclusive;
}

/// Typed access to the options object; leftover keys are reported as a parse error.
class Opts {
public:
    explicit Opts(const json& j) : j_(j.is_null() ? json::object() : j) {
        if (!j_.is_object()) throw Error(ErrorKind::Parse, "options must be a JSON object");
    }

    bool has(const std::string& k) {
        used_.insert(k);
        return j_.contains(k);
    }

    double number(const std::string& k, double dflt) {
        if (!has(k)) return dflt;
        const json& v = j_.at(k);
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s == "inf") return kInf;
            try {
                size_t pos = 0;
                const double d = std::stod(s, &pos);
                if (pos == s.size()) return d;
            } catch (const std::exception&) {
            }
        }
        throw Error(ErrorKind::Parse, "option \"" + k + "\" must be a number");
    }

    double positive(const std::string& k, double dflt) {
        const double v = number(k, dflt);
        if (!(v > 0.0)) throw Error(ErrorKind::Parse, "option \"" + k + "\" must be positive");
        return v;
    }

    int integer(const std::string& k, int dflt, int lo, int hi) {
        const double v = number(k, dflt);
        if (v != std::floor(v) || v < lo || v > hi)
            throw Error(ErrorKind::Parse, "option \"" + k + "\" must be an integer in [" + std::to_string(lo) + ", " +
                                              std::to_string(hi) + "]");
        return static_cast<int>(v);
    }

    bool flag(const std::string& k, bool dflt) {
        if (!has(k)) return dflt;
        if (!j_.at(k).is_boolean()) throw Error(ErrorKind::Parse, "option \"" + k + "\" must be true or false");
        return j_.at(k).get<bool>();
    }

    std::string text(const std::string& k, const std::string& dflt) {
        if (!has(k)) return dflt;
        if (!j_.at(k).is_string()) throw Error(ErrorKind::Parse, "option \"" + k + "\" must be a string");
        return j_.at(k).get<std::string>();
    }

    std::string choice(const std::string& k, const std::string& dflt, std::initializer_list<const char*> allowed) {
        const std::string v = text(k, dflt);
        for (const char* a : allowed)
            if (v == a) return v;
        std::string list;
        for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
        throw Error(ErrorKind::Parse, "option \"" + k + "\" must be one of " + list);
    }

    const json& raw(const std::string& k) {
        used_.insert(k);
        return j_.at(k);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw Error(ErrorKind::Parse, "unknown option \"" + it.key() + "\"");
    }

    const json& all() const { return j_; }

private:
    json j_;
    std::set<std::string> used_;
};

// Tolerance and grid overrides accepted by every command.
struct Common {
    WeylOptions weyl;
    RatioOptions ratio;
    VariationOptions variation;
    C0Options c0;
    EverittOptions everitt;
};

Common read_common(Opts& o) {
    Common c;
    c.weyl.ode_rtol = o.positive("ode_rtol", c.weyl.ode_rtol);
    c.weyl.ode_atol = o.positive("ode_atol", c.weyl.ode_atol);
    c.weyl.disk_rtol = o.positive("disk_rtol", c.weyl.disk_rtol);
    c.weyl.x_cap = o.positive("x_cap", c.weyl.x_cap);
    c.ratio.reach_infinity = o.positive("y_hi", c.ratio.reach_infinity);
    c.ratio.reach_zero = o.positive("y_lo", c.ratio.reach_zero);
    c.ratio.per_decade = o.integer("ratio_per_decade", c.ratio.per_decade, 2, 200);
    c.variation.per_decade = o.integer("variation_per_decade", c.variation.per_decade, 2, 400);
    c.c0.rtol = o.positive("c0_rtol", c.c0.rtol);
    c.c0.per_decade = o.integer("c0_per_decade", c.c0.per_decade, 2, 400);
    c.everitt.rho_lo = o.positive("rho_lo", c.everitt.rho_lo);
    c.everitt.rho_hi = o.positive("rho_hi", c.everitt.rho_hi);
    c.everitt.per_decade = o.integer("rho_per_decade", c.everitt.per_decade, 2, 100);
    c.everitt.theta_tol = o.positive("theta_tol", c.everitt.theta_tol);
    o.number("seed", 0); // echoed in the provenance; no command draws random grids yet
    if (!(c.ratio.reach_zero < 1.0 && c.ratio.reach_infinity > 1.0))
        throw Error(ErrorKind::Parse, "y_lo must lie below 1 and y_hi above 1");
    if (!(c.everitt.rho_lo < c.everitt.rho_hi)) throw Error(ErrorKind::Parse, "rho_lo must lie below rho_hi");
    return c;
}

End read_end(Opts& o, const char* dflt) {
    return o.choice("end", dflt, {"zero", "infinity"}) == "zero" ? End::Zero : End::Infinity;
}

json msample_json(const MSample& s) {
    return json{{"lambda", format_complex(s.lambda)}, {"m", format_complex(s.m)}, {"enclosure", jnum(s.enclosure)},
                {"method", s.method}, {"x_trunc", jnum(s.x_trunc)}, {"drift", jnum(s.drift)}, {"steps", s.steps}};
}

json pi_json(const PIVerdict& v) {
    json S = json::array();
    for (int i = 0; i < 3; ++i) S.push_back(json{{"t", v.t[i]}, {"S", jnum(v.S[i])}});
    json trend = json::array();
    for (double d : v.decade_trend) trend.push_back(jnum(d));
    return json{{"end", to_string(v.end)}, {"verdict", to_string(v.verdict)}, {"S", S}, {"C", jnum(v.C)},
                {"beta", jnum(v.beta)}, {"decade_trend", trend}, {"symbolic", v.symbolic}, {"reason", v.reason}};
}

json pis_json(const std::vector<PIVerdict>& pis) {
    json a = json::array();
    for (const auto& v : pis) a.push_back(pi_json(v));
    return a;
}

json ratio_rows(const RatioReport& r) {
    json rows = json::array();
    for (const auto& s : r.samples)
        rows.push_back(json{s.y, jnum(s.m.real()), jnum(s.m.imag()), jnum(s.ratio), jnum(s.enclosure)});
    return rows;
}

json ratio_json(const RatioReport& r, bool with_samples) {
    json j{{"end", to_string(r.end)},
           {"which", to_string(r.which)},
           {"y_lo", r.y_lo},
           {"y_hi", r.y_hi},
           {"sup", jnum(r.sup)},
           {"median", jnum(r.median)},
           {"outer_max", jnum(r.outer_max)},
           {"slope", jnum(r.slope)},
           {"raw", to_string(r.raw)},
           {"prediction", to_string(r.prediction)},
           {"prediction_reason", r.prediction_reason},
           {"resolved", to_string(r.resolved)},
           {"disagreement", r.disagreement},
           {"trail", r.trail}};
    if (with_samples) j["samples"] = table({"y", "re_m", "im_m", "ratio", "enclosure"}, ratio_rows(r));
    return j;
}

json everitt_rows(const EverittReport& e) {
    json rows = json::array();
    for (const auto& s : e.samples) rows.push_back(json{s.theta, s.rho, s.arg, jnum(s.im_lambda2_m)});
    return rows;
}

json everitt_json(const EverittReport& e) {
    json bis = json::array();
    for (const auto& [t, ok] : e.bisection) bis.push_back(json{t, ok});
    json win = json::array();
    for (const auto& [d, t] : e.window_theta0) win.push_back(json{{"decades", d}, {"theta0", jnum(t)}});
    json j{{"theta0", jnum(e.theta0)}, {"K", jnum(e.K)},           {"valid", e.valid},
           {"verdict", to_string(e.verdict)}, {"edge_pinned", e.edge_pinned}, {"window_theta0", win},
           {"bisection", bis}, {"trail", e.trail}};
    if (e.violation)
        j["violation"] = json{{"theta", e.violation->theta},
                              {"rho", e.violation->rho},
                              {"lambda", format_complex(e.violation->lambda)},
                              {"m", format_complex(e.violation->m)},
                              {"im_lambda2_m", jnum(e.violation->im_lambda2_m)},
                              {"tolerance", jnum(e.violation->tolerance)}};
    return j;
}

json lower_json(const LowerBoundReport& l) {
    json rows = json::array();
    for (const auto& r : l.rows) rows.push_back(json{r.n, r.a, r.b, jnum(r.A), jnum(r.B), jnum(r.K)});
    return json{{"max_K", jnum(l.max_K)}, {"table", table({"n", "a", "b", "A", "B", "K"}, rows)}, {"trail", l.trail}};
}

json coefficient_json(const CoefficientVerdict& c) {
    return json{{"verdict", to_string(c.verdict)}, {"route", c.route}, {"pi", pis_json(c.pi)}, {"trail", c.trail}};
}

json tail_json(const C0Tail& t) {
    return json{{"kind", to_string(t.kind)}, {"kappa", jnum(t.kappa)},   {"exact", t.exact},
                {"slope", jnum(t.slope)},    {"intercept", jnum(t.intercept)}, {"l", jnum(t.l)},
                {"A", jnum(t.A)},            {"B", jnum(t.B)},           {"center", jnum(t.center)},
                {"slowly_varying", t.slowly_varying}, {"evidence", t.evidence}};
}

json similarity_json(const SimilarityVerdict& v) {
    return json{{"similar", to_string_similar(v.similar)},
                {"regular_at_infinity", to_string(v.regular_at_infinity)},
                {"regular_at_zero", to_string(v.regular_at_zero_reported)},
                {"regular_at_zero_before_kernel_check", to_string(v.regular_at_zero)},
                {"C_infinity", jnum(v.C_infinity)},
                {"C_zero", jnum(v.C_zero)},
                {"C", jnum(v.C)},
                {"kernel_trivial", jtri(v.kernel_trivial)},
                {"kernel_note", v.kernel_note},
                {"stieltjes_pass", v.stieltjes_pass},
                {"at_infinity", ratio_json(v.at_infinity, false)},
                {"at_zero", ratio_json(v.at_zero, false)},
                {"trail", v.trail}};
}

json similarity_table(const SimilarityVerdict& v) {
    json rows = json::array();
    for (const RatioReport* r : {&v.at_zero, &v.at_infinity})
        for (const auto& s : r->samples) rows.push_back(json{s.y, jnum(s.m.real()), jnum(s.m.imag()), jnum(s.ratio)});
    std::sort(rows.begin(), rows.end(), [](const json& a, const json& b) { return a[0].get<double>() < b[0].get<double>(); });
    return table({"y", "re_m", "im_m", "im_over_re"}, rows);
}

json help_json(const HelpVerdict& h) {
    json j{{"validity", to_string(h.validity)},
           {"sup_ratio", jnum(h.sup_ratio)},
           {"K_lo", jnum(h.K_lo)},
           {"K_hi", jnum(h.K_hi)},
           {"disagreement", h.disagreement},
           {"at_infinity", ratio_json(h.at_infinity, false)},
           {"at_zero", ratio_json(h.at_zero, false)},
           {"coefficient", coefficient_json(h.coefficient)}};
    if (h.everitt) j["everitt"] = everitt_json(*h.everitt);
    if (h.lower) j["lower_bound"] = lower_json(*h.lower);
    return j;
}

std::vector<std::pair<double, double>> read_sequence(Opts& o) {
    const int n = o.integer("n", 8, 1, 80);
    if (!o.has("seq") || (o.raw("seq").is_string() && o.raw("seq").get<std::string>() == "factorial"))
        return factorial_sequence(n);
    const json& s = o.raw("seq");
    if (s.is_string()) throw Error(ErrorKind::Parse, "seq must be \"factorial\" or a list of [a, b] pairs");
    std::vector<std::pair<double, double>> out;
    try {
        for (const auto& pr : s) out.emplace_back(pr.at(0).get<double>(), pr.at(1).get<double>());
    } catch (const json::exception&) {
        throw Error(ErrorKind::Parse, "seq must be \"factorial\" or a list of [a, b] pairs");
    }
    if (out.empty()) throw Error(ErrorKind::Parse, "seq is empty");
    return out;
}

MonotoneMap read_map(Opts& o, const Problem& p) {
    const std::string role = o.choice("map", "WoR^-1", {"W", "R", "WoR^-1", "RoW^-1"});
    if (role == "W") return distribution(p.w, p.b, "W");
    if (role == "R") return distribution(p.r, p.b, "R");
    if (role == "WoR^-1") return compose_distributions(p.w, p.r, p.b, "W o R^-1");
    return compose_distributions(p.r, p.w, p.b, "R o W^-1");
}

SimilarityOptions sim_options(const Common& c) {
    SimilarityOptions so;
    so.ratio = c.ratio;
    so.weyl = c.weyl;
    so.variation = c.variation;
    so.c0 = c.c0;
    return so;
}

IndefiniteProblem indefinite(const Problem& p, Opts& o) {
    IndefiniteProblem ip;
    ip.half = p;
    ip.even = o.flag("even", true);
    ip.coupling = o.number("coupling", 1.0);
    return ip;
}

using Handler = std::function<void(const Problem&, Opts&, const Common&, Report&)>;

void mfun_eval(const Problem& p, Opts& o, const Common& c, Report& r) {
    std::vector<cplx> lambdas;
    if (o.has("lambda")) {
        const json& l = o.raw("lambda");
        if (l.is_string())
            lambdas.push_back(parse_complex(l.get<std::string>()));
        else if (l.is_array())
            for (const auto& e : l) {
                if (!e.is_string()) throw Error(ErrorKind::Parse, "lambda entries must be \"a+bi\" strings");
                lambdas.push_back(parse_complex(e.get<std::string>()));
            }
        else
            throw Error(ErrorKind::Parse, "lambda must be an \"a+bi\" string or a list of them");
    } else {
        lambdas.push_back(cplx(0.0, 1.0));
    }
    json rows = json::array(), samples = json::array();
    for (cplx l : lambdas) {
        const MSample s = m_eval(p, l, c.weyl);
        samples.push_back(msample_json(s));
        rows.push_back(json{format_complex(l), jnum(s.m.real()), jnum(s.m.imag()), jnum(s.enclosure)});
    }
    r.body["samples"] = samples;
    r.body["endpoint"] = to_string(limit_point_classify(p).cls);
    r.body["table"] = table({"lambda", "re_m", "im_m", "enclosure"}, rows);
    r.body["trail"] = limit_point_classify(p).trail;
}

void mfun_table(const Problem& p, Opts& o, const Common& c, Report& r) {
    const std::string axis = o.choice("axis", "imag", {"imag", "negative-real"});
    const double from = o.positive("from", 1e-6), to = o.positive("to", 1e6);
    const int pd = o.integer("per_decade", 8, 2, 200);
    if (!(from < to)) throw Error(ErrorKind::Parse, "from must lie below to");
    const int n = static_cast<int>(std::ceil(std::log10(to / from) * pd - 1e-9));
    json rows = json::array();
    for (int k = 0; k <= n; ++k) {
        const double y = std::min(to, from * std::pow(10.0, static_cast<double>(k) / pd));
        const cplx lambda = axis == "imag" ? cplx(0.0, y) : cplx(-y, 0.0);
        const MSample s = m_eval(p, lambda, c.weyl);
        rows.push_back(json{y, jnum(s.m.real()), jnum(s.m.imag()), jnum(s.enclosure)});
    }
    r.body["axis"] = axis;
    r.body["table"] = table({"y", "re_m", "im_m", "enclosure"}, rows);
    r.body["trail"] = limit_point_classify(p).trail;
}

void regvar_classify(const Problem& p, Opts& o, const Common& c, Report& r) {
    const MonotoneMap g = read_map(o, p);
    const End end = read_end(o, "infinity");
    const VariationVerdict v = classify_variation(g, end, c.variation);
    const PIVerdict pi = positively_increasing(g, end, c.variation);
    json rows = json::array();
    for (const auto& row : v.table) rows.push_back(json{row.x, row.t, jnum(row.ratio)});
    r.body["map"] = g.label;
    r.body["end"] = to_string(end);
    r.body["kind"] = to_string(v.kind);
    r.body["alpha"] = jnum(v.alpha);
    r.body["symbolic"] = v.symbolic;
    r.body["note"] = v.note;
    r.body["positively_increasing"] = pi_json(pi);
    r.body["table"] = table({"x", "t", "ratio"}, rows);
    r.body["trail"] = json{g.label + " at " + to_string(end) + ": " + to_string(v.kind) +
                               (v.kind == VariationVerdict::Kind::Regular ? " with index " + num(v.alpha) : std::string()),
                           pi.reason};
    r.verdict = v.kind == VariationVerdict::Kind::Inconclusive ? VerdictClass::Inconclusive : VerdictClass::Positive;
}

void asym_model(const Problem& p, Opts& o, const Common& c, Report& r) {
    const End end = read_end(o, "infinity");
    const AsymptoteModel m = kasahara_model(p, end, c.variation);
    const double rho = o.positive("rho", 1.0);
    r.body["end"] = to_string(end);
    r.body["alpha"] = jnum(m.alpha);
    r.body["nu"] = jnum(m.nu);
    r.body["K"] = jnum(m.K);
    r.body["validity"] = to_string(m.validity);
    r.body["reason"] = m.reason;
    r.body["trail"] = m.trail;
    if (m.validity != AsymptoteModel::Validity::Unavailable) {
        json rows = json::array();
        for (cplx mu : {cplx(0.0, 1.0), std::polar(1.0, 0.75 * kPi)})
            rows.push_back(json{format_complex(mu), rho, jnum(m.f(rho)), format_complex(m.predict(mu, rho))});
        r.body["table"] = table({"mu", "rho", "f", "model"}, rows);
    }
    r.verdict = m.validity == AsymptoteModel::Validity::Unavailable ? VerdictClass::Inconclusive : VerdictClass::Positive;
}

void asym_verify(const Problem& p, Opts& o, const Common& c, Report& r) {
    const End end = read_end(o, "infinity");
    const int pd = o.integer("per_decade", 4, 1, 50);
    const int decades = o.integer("decades", 6, 2, 12);
    const AsymptoteModel m = kasahara_model(p, end, c.variation);
    r.body["end"] = to_string(end);
    r.body["nu"] = jnum(m.nu);
    r.body["K"] = jnum(m.K);
    r.body["validity"] = to_string(m.validity);
    r.body["trail"] = m.trail;
    if (m.validity == AsymptoteModel::Validity::Unavailable) {
        r.body["reason"] = m.reason;
        r.verdict = VerdictClass::Inconclusive;
        return;
    }
    std::vector<double> rho;
    for (int k = 0; k <= decades * pd; ++k) {
        const double e = static_cast<double>(k) / pd;
        rho.push_back(std::pow(10.0, end == End::Infinity ? e : -e));
    }
    const AsymptoteReport a = verify_asymptote(p, m, rho, c.weyl);
    json rows = json::array();
    for (const auto& row : a.rows)
        rows.push_back(json{row.rho, format_complex(row.mu), format_complex(row.m), format_complex(row.model),
                            jnum(row.deviation), jnum(row.enclosure)});
    json dec = json::array();
    for (const auto& [d, v] : a.per_decade) dec.push_back(json{{"decade", d}, {"max_deviation", jnum(v)}});
    r.body["per_decade"] = dec;
    r.body["shrinking"] = a.shrinking;
    r.body["final_deviation"] = jnum(a.final_deviation);
    r.body["table"] = table({"rho", "mu", "m", "model", "deviation", "enclosure"}, rows);
    r.verdict = a.shrinking ? VerdictClass::Positive : VerdictClass::Negative;
}

void asym_ratio(const Problem& p, Opts& o, const Common& c, Report& r) {
    const End end = read_end(o, "infinity");
    const RatioKind which = o.choice("which", "re/im", {"re/im", "im/re"}) == "re/im" ? RatioKind::ReIm : RatioKind::ImRe;
    const RatioReport rep = ratio_criterion(p, end, which, c.ratio, c.weyl, c.variation);
    r.body.update(ratio_json(rep, false));
    r.body["table"] = table({"y", "re_m", "im_m", "ratio", "enclosure"}, ratio_rows(rep));
    r.verdict = from_bound(rep.resolved);
}

HelpOptions help_options(const Common& c) {
    HelpOptions ho;
    ho.everitt_opt = c.everitt;
    ho.ratio = c.ratio;
    ho.weyl = c.weyl;
    ho.variation = c.variation;
    return ho;
}

void help_check_cmd(const Problem& p, Opts& o, const Common& c, Report& r) {
    HelpOptions ho = help_options(c);
    ho.everitt = o.flag("everitt", false);
    if (o.has("seq")) ho.bound_sequence = read_sequence(o);
    const HelpVerdict h = help_check(p, ho);
    r.body.update(help_json(h));
    r.body["table"] = table({"y", "re_m", "im_m", "ratio", "enclosure"}, [&] {
        json rows = ratio_rows(h.at_zero);
        std::reverse(rows.begin(), rows.end());
        for (const auto& row : ratio_rows(h.at_infinity)) rows.push_back(row);
        return rows;
    }());
    r.body["trail"] = h.trail;
    r.verdict = from_validity(h.validity);
}

void help_everitt(const Problem& p, Opts&, const Common& c, Report& r) {
    const EverittReport e = everitt_scan(p, c.everitt, c.weyl);
    r.body.update(everitt_json(e));
    r.body["table"] = table({"theta", "rho", "arg", "im_lambda2_m"}, everitt_rows(e));
    r.verdict = from_validity(e.verdict);
}

void help_bound(const Problem& p, Opts& o, const Common&, Report& r) {
    const auto seq = read_sequence(o);
    const LowerBoundReport l = help_lower_bound(p, seq);
    const json j = lower_json(l);
    r.body["max_K"] = j["max_K"];
    r.body["table"] = j["table"];
    r.body["trail"] = l.trail;
    // Lower bounds only ever refute the inequality; a bounded sequence decides nothing.
    r.verdict = VerdictClass::Inconclusive;
}

void help_potential(const Problem& p, Opts&, const Common& c, Report& r) {
    const CoefficientVerdict v = help_with_potential(p, c.variation, c.c0);
    r.body.update(coefficient_json(v));
    r.body["table"] = table({"end", "verdict", "S_half"}, [&] {
        json rows = json::array();
        for (const auto& pi : v.pi) rows.push_back(json{to_string(pi.end), to_string(pi.verdict), jnum(pi.S[0])});
        return rows;
    }());
    r.verdict = from_validity(v.verdict);
}

void sim_check(const Problem& p, Opts& o, const Common& c, Report& r) {
    const SimilarityVerdict v = similarity_check(indefinite(p, o), sim_options(c));
    r.body.update(similarity_json(v));
    r.body["table"] = similarity_table(v);
    r.verdict = from_tri_class(v.similar);
}

void sim_coeff(const Problem& p, Opts& o, const Common& c, Report& r) {
    const SimCoefficientVerdict v = similarity_coefficient_check(indefinite(p, o), c.variation);
    r.body["similar"] = to_string_similar(v.similar);
    r.body["route"] = v.route;
    r.body["pi"] = pis_json(v.pi);
    r.body["table"] = table({"end", "verdict", "S_half"}, [&] {
        json rows = json::array();
        for (const auto& pi : v.pi) rows.push_back(json{to_string(pi.end), to_string(pi.verdict), jnum(pi.S[0])});
        return rows;
    }());
    r.body["trail"] = v.trail;
    r.verdict = from_tri_class(v.similar);
}

void sim_potential(const Problem& p, Opts& o, const Common& c, Report& r) {
    const PotentialSimilarity v = similarity_with_potential(indefinite(p, o), c.variation, c.c0);
    r.body["similar"] = to_string_similar(v.similar);
    r.body["route"] = v.route;
    r.body["pi"] = pis_json(v.pi);
    r.body["l"] = v.l ? jnum(*v.l) : json(nullptr);
    r.body["l_classification"] = to_string_similar(v.l_classification);
    r.body["c0_in_L2w"] = jtri(v.c0_in_L2w);
    r.body["inv_c0_in_L2"] = jtri(v.inv_c0_in_L2);
    r.body["tail"] = tail_json(v.tail);
    r.body["table"] = table({"end", "verdict", "S_half"}, [&] {
        json rows = json::array();
        for (const auto& pi : v.pi) rows.push_back(json{to_string(pi.end), to_string(pi.verdict), jnum(pi.S[0])});
        return rows;
    }());
    r.body["trail"] = v.trail;
    r.verdict = from_tri_class(v.similar);
}

void sim_probe(const Problem& p, Opts& o, const Common& c, Report& r) {
    ProbeOptions po;
    po.weyl = c.weyl;
    po.re_lo = o.number("re_lo", po.re_lo);
    po.re_hi = o.number("re_hi", po.re_hi);
    po.im_lo = o.positive("im_lo", po.im_lo);
    po.im_hi = o.positive("im_hi", po.im_hi);
    po.n_re = o.integer("n_re", po.n_re, 2, 400);
    po.n_im = o.integer("n_im", po.n_im, 2, 400);
    const SpectrumProbeReport rep = nonreal_spectrum_probe(indefinite(p, o), po);
    json rows = json::array();
    for (const auto& g : rep.grid)
        rows.push_back(json{g.z.real(), g.z.imag(), jnum(g.D.real()), jnum(g.D.imag()), jnum(std::abs(g.D))});
    json cands = json::array();
    for (const auto& k : rep.candidates)
        cands.push_back(json{{"start", format_complex(k.start)}, {"z", format_complex(k.z)},
                             {"residual", jnum(k.residual)}, {"iterations", k.iterations},
                             {"accepted", k.accepted}, {"note", k.note}});
    json zeros = json::array();
    for (cplx z : rep.zeros) zeros.push_back(format_complex(z));
    r.body["coupling"] = rep.coupling;
    r.body["scale"] = jnum(rep.scale);
    r.body["candidates"] = cands;
    r.body["zeros"] = zeros;
    r.body["nonreal_spectrum"] = !rep.zeros.empty();
    r.body["table"] = table({"re_z", "im_z", "re_D", "im_D", "abs_D"}, rows);
    r.body["trail"] = rep.trail;
    // Positive: no nonreal eigenvalue found in the probed region.
    r.verdict = rep.zeros.empty() ? VerdictClass::Positive : VerdictClass::Negative;
}

void sim_lrg(const Problem& p, Opts& o, const Common& c, Report& r) {
    const LrgReport rep = lrg_equivalence_report(indefinite(p, o), sim_options(c));
    r.body["similarity"] = similarity_json(rep.similarity);
    r.body["ratio_sup"] = to_string(rep.ratio_sup);
    if (rep.swapped_help) r.body["swapped_help"] = help_json(*rep.swapped_help);
    r.body["agree"] = rep.agree;
    json rows = json::array();
    rows.push_back(json{"similarity", to_string_similar(rep.similarity.similar)});
    rows.push_back(json{"sup Im m / Re m", to_string(rep.ratio_sup)});
    if (rep.swapped_help) rows.push_back(json{"HELP, w and r swapped", to_string(rep.swapped_help->validity)});
    r.body["table"] = table({"route", "verdict"}, rows);
    r.body["trail"] = rep.trail;
    r.verdict = rep.agree ? VerdictClass::Positive : VerdictClass::Negative;
}

void fp_check(const Problem& p, Opts& o, const Common& c, Report& r) {
    const FPVerdict v = fp_wellposedness(indefinite(p, o), sim_options(c));
    r.body["well_posed"] = to_string(v.well_posed);
    r.body["route"] = v.route;
    r.body["similar"] = to_string_similar(v.similar);
    r.body["kernel_trivial"] = jtri(v.kernel_trivial);
    r.body["kernel_note"] = v.kernel_note;
    r.body["table"] = table({"condition", "value"}, json::array({json{"similar", to_string_similar(v.similar)},
                                                                json{"kernel trivial", to_string(v.kernel_trivial)}}));
    r.body["trail"] = v.trail;
    r.verdict = v.well_posed == FPVerdict::WellPosed::Yes ? VerdictClass::Positive : VerdictClass::Inconclusive;
}

void liouville_transform(const Problem& p, Opts&, const Common& c, Report& r) {
    const TransformResult T = transform(p, c.c0);
    Problem t;
    t.name = p.name.empty() ? "liouville-transform" : p.name + "/liouville";
    t.w = T.w_tilde;
    t.r = Profile::constant(1.0);
    t.b = T.B;
    t.boundary = p.boundary;
    json rows = json::array();
    for (const auto& s : T.c0.samples) rows.push_back(json{s.x, jnum(s.c0), jnum(s.c0p), jnum(s.xi), jnum(s.Wt)});
    r.body["transformed"] = t.to_json();
    r.body["B"] = jnum(T.B);
    r.body["c0_in_L2w"] = jtri(T.c0_in_L2w);
    r.body["inv_c0_in_L2"] = jtri(T.inv_c0_in_L2);
    r.body["tail"] = tail_json(T.c0.tail);
    r.body["stopped_on_growth"] = T.c0.stopped_on_growth;
    r.body["table"] = table({"x", "c0", "c0_prime", "xi", "W_tilde"}, rows);
    r.body["trail"] = T.trail;
}

void liouville_verify(const Problem& p, Opts& o, const Common& c, Report& r) {
    std::vector<cplx> lambdas;
    if (o.has("lambda")) {
        const json& l = o.raw("lambda");
        if (l.is_string())
            lambdas.push_back(parse_complex(l.get<std::string>()));
        else
            for (const auto& e : l) lambdas.push_back(parse_complex(e.get<std::string>()));
    } else {
        lambdas = {cplx(0.0, 1.0), cplx(0.0, 2.0)};
    }
    const InvarianceReport rep = verify_m_invariance(p, lambdas, c.weyl);
    json rows = json::array();
    for (const auto& row : rep.rows)
        rows.push_back(json{format_complex(row.lambda), format_complex(row.original.m), format_complex(row.transformed.m),
                            jnum(row.residual), jnum(row.bound), row.ok});
    r.body["max_residual"] = jnum(rep.max_residual);
    r.body["ok"] = rep.ok;
    r.body["table"] = table({"lambda", "m_original", "m_transformed", "residual", "bound", "ok"}, rows);
    r.body["trail"] = rep.trail;
    r.verdict = rep.ok ? VerdictClass::Positive : VerdictClass::Negative;
}

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h{
        {"mfun eval", mfun_eval},
        {"mfun table", mfun_table},
        {"regvar classify", regvar_classify},
        {"asym model", asym_model},
        {"asym verify", asym_verify},
        {"asym ratio", asym_ratio},
        {"help check", help_check_cmd},
        {"help everitt", help_everitt},
        {"help bound", help_bound},
        {"help potential", help_potential},
        {"sim check", sim_check},
        {"sim coeff", sim_coeff},
        {"sim potential", sim_potential},
        {"sim probe", sim_probe},
        {"sim lrg", sim_lrg},
        {"fp check", fp_check},
        {"liouville transform", liouville_transform},
        {"liouville verify", liouville_verify},
    };
    return h;
}

std::string csv_cell(const json& v) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    if (v.is_null()) return "nan";
    if (v.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    return v.dump();
}

} // namespace

std::vector<std::string> command_names() {
    std::vector<std::string> out;
    for (const auto& [k, _] : handlers()) out.push_back(k);
    return out;
}

Report run_command(const std::string& command, const Problem& p, const json& options) {
    const auto it = handlers().find(command);
    if (it == handlers().end()) throw Error(ErrorKind::Parse, "unknown command \"" + command + "\"");
    Opts o(options);
    const Common c = read_common(o);
    Report r;
    r.body = json::object();
    r.body["command"] = command;
    r.body["problem"] = p.name;
    it->second(p, o, c, r);
    o.finish();
    r.body["exit_class"] = static_cast<int>(r.verdict);
    if (!r.body.contains("trail")) r.body["trail"] = json::array();
    if (!r.body.contains("table")) r.body["table"] = table({}, json::array());
    r.body["provenance"] = json{{"tool", "weylkit"},
                                {"version", kToolVersion},
                                {"command", command},
                                {"config", json{{"problem", p.to_json()}, {"options", o.all()}}},
                                {"trail", r.body["trail"]}};
    return r;
}

std::string table_csv(const json& body) {
    std::string out;
    const json& t = body.at("table");
    const auto& cols = t.at("columns");
    for (size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i].get<std::string>();
    out += "\n";
    for (const auto& row : t.at("rows")) {
        for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += "\n";
    }
    return out;
}

} // namespace wk
