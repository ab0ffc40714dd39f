// Runs the acceptance criteria and prints one PASS/FAIL line for each. Exit status is the number of failures.
#include "asymptotics.hpp"
#include "help.hpp"
#include "indefinite.hpp"
#include "liouville.hpp"
#include "regvar.hpp"
#include "weyl.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace wk;

namespace {

const cplx I(0.0, 1.0);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void note(const std::string& what) { notes.push_back("     " + what); }
};

IndefiniteProblem even(const std::string& name) {
    IndefiniteProblem ip;
    ip.half = catalog(name);
    return ip;
}

Outcome closed_form_oracle() {
    Outcome o;
    const Problem p = catalog("hardy-littlewood");
    for (cplx l : {I, 2.0 * I, cplx(-1.0, 1.0), 10.0 * I, I / 100.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        const MSample s = m_eval(p, l);
        const double dt = seconds_since(t0);
        const double e = rel(s.m, std::pow(-l, -0.5));
        o.check(e <= 1e-6 && dt < 1.0, fmt("lambda = %g%+gi: rel err %.2e, %.3f s", l.real(), l.imag(), e, dt));
    }
    return o;
}

Outcome homogeneous_power() {
    Outcome o;
    const Problem p = catalog("power-r2x");
    const MSample s = m_eval(p, I);
    // R = x^2, W = x: F(x) = x^(-3/2), f(y) = y^(-2/3), f(1) = 1.
    const double K13 = kasahara_constant(1.0 / 3.0);
    const cplx literal = K13 * std::pow(-I, -1.0 / 3.0);
    const double e = rel(s.m, literal);
    o.check(e <= 1e-4, fmt("m(i) = %.10f%+.10fi vs K_{1/3} (-i)^(-1/3) = %.6f%+.6fi: rel err %.3e", s.m.real(),
                           s.m.imag(), literal.real(), literal.imag(), e));
    const AsymptoteModel m = kasahara_model(p, End::Infinity);
    const cplx model = m.predict(I, 1.0);
    o.note(fmt("diagnostic: model nu = %.6f, K_nu = %.12f, K_nu (-i)^(-nu) f(1) = %.10f%+.10fi, rel err %.3e", m.nu, m.K,
               model.real(), model.imag(), rel(s.m, model)));
    return o;
}

Outcome everitt_constants() {
    Outcome o;
    const EverittReport hl = everitt_scan(catalog("hardy-littlewood"));
    o.check(std::abs(hl.theta0 - M_PI / 3) <= 0.01, fmt("w = r = 1: theta0 = %.5f (pi/3 = %.5f)", hl.theta0, M_PI / 3));
    o.check(std::abs(hl.K - 2.0) <= 0.05, fmt("w = r = 1: K = %.5f", hl.K));
    const EverittReport r2 = everitt_scan(catalog("power-r2x"));
    o.check(std::abs(r2.theta0 - M_PI / 4) <= 0.01, fmt("r = 2x: theta0 = %.5f (pi/4 = %.5f)", r2.theta0, M_PI / 4));
    return o;
}

Outcome help_battery() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    struct Case {
        const char* name;
        Validity expect;
    };
    for (const Case c : {Case{"hardy-littlewood", Validity::Valid}, Case{"r-inverse-tail", Validity::Invalid},
                         Case{"potential-step", Validity::Invalid}}) {
        const HelpVerdict v = help_check(catalog(c.name));
        o.check(v.validity == c.expect, fmt("%s: %s (ratio at 0 raw %s, at infinity raw %s)", c.name, to_string(v.validity),
                                            to_string(v.at_zero.raw), to_string(v.at_infinity.raw)));
        o.check(v.coefficient.verdict == v.validity && !v.disagreement,
                fmt("%s: coefficient route (%s) says %s", c.name, v.coefficient.route.c_str(),
                    to_string(v.coefficient.verdict)));
    }
    const double dt = seconds_since(t0);
    o.check(dt < 120.0, fmt("runtime %.2f s", dt));
    return o;
}

Outcome similarity_battery() {
    Outcome o;
    const SimilarityVerdict hl = similarity_check(even("hardy-littlewood"));
    o.check(hl.similar == Tri::Yes, fmt("w = r = 1: %s, C = %.6f", to_string_similar(hl.similar), hl.C));
    for (const char* name : {"A_l-log", "factorial-weight"}) {
        const SimilarityVerdict v = similarity_check(even(name));
        o.check(v.similar == Tri::No, fmt("%s: %s", name, to_string_similar(v.similar)));
        const Problem p = similarity_problem(catalog(name));
        const cplx a = m_eval(p, 1e-2 * I).m, b = m_eval(p, 1e-6 * I).m;
        const double ra = a.imag() / a.real(), rb = b.imag() / b.real();
        o.check(rb > 10.0 * ra && v.at_zero.slope > 0.0,
                fmt("%s: Im/Re at y = 1e-2 is %.4f, at y = 1e-6 is %.4f (factor %.3f, need > 10), trend slope %.4f", name,
                    ra, rb, rb / ra, v.at_zero.slope));
    }
    const PotentialSimilarity l0 = similarity_with_potential(even("potential-step"));
    o.check(l0.l && *l0.l == 0.0 && l0.l_classification == Tri::Yes && l0.similar == Tri::Yes,
            fmt("l = 0 (q = chi[0,1]): %s", to_string_similar(l0.similar)));
    const PotentialSimilarity l1 = similarity_with_potential(even("inverse-square-l1"));
    o.check(l1.l && std::abs(*l1.l - 1.0) < 1e-12 && l1.c0_in_L2w == Tri::Yes && l1.similar == Tri::No,
            fmt("l = 1, c0 in L2: %s", to_string_similar(l1.similar)));
    return o;
}

Problem random_tabulated(std::mt19937& rng, const std::string& name) {
    std::uniform_real_distribution<double> U(0.5, 2.0);
    std::vector<std::pair<double, double>> w, r;
    for (int i = 0; i <= 24; ++i) {
        w.emplace_back(0.25 * i, U(rng));
        r.emplace_back(0.25 * i, U(rng));
    }
    Problem p = catalog("hardy-littlewood");
    p.name = name;
    p.w = Profile::table(w);
    p.r = Profile::table(r);
    return p;
}

Outcome duality() {
    Outcome o;
    std::mt19937 rng(20261016);
    std::vector<Problem> ps = {catalog("hardy-littlewood"), catalog("power-r2x"), catalog("atomic-a"),
                               random_tabulated(rng, "random-table-1"), random_tabulated(rng, "random-table-2")};
    const std::vector<cplx> ls = {I, 2.0 * I, 0.1 * I, 10.0 * I, cplx(1, 1), cplx(-1, 1), cplx(3, 0.5), cplx(-3, 0.5),
                                  cplx(0.5, 0.05), cplx(-0.2, 2)};
    for (const Problem& p : ps) {
        int good = 0;
        double worst = 0.0;
        for (cplx l : ls) {
            const DualResidual d = m_dual_identity(p, l);
            good += d.ok;
            worst = std::max(worst, d.residual / std::max(d.bound, 1e-300));
        }
        o.check(good == static_cast<int>(ls.size()),
                fmt("%s: %d/%zu within the combined enclosure, worst residual/bound %.3f", p.name.c_str(), good, ls.size(),
                    worst));
    }
    return o;
}

Outcome structural_invariants() {
    Outcome o;
    std::vector<std::string> names;
    for (std::string n : catalog_names()) names.push_back(n == "power-weight:<alpha>" ? "power-weight:0.5" : n);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> re(-5.0, 5.0), lim(-3.0, 1.0);
    int positive = 0, total = 0;
    double drift = 0.0;
    for (int k = 0; k < 200; ++k) {
        const Problem p = catalog(names[k % names.size()]);
        const cplx l(re(rng), std::pow(10.0, lim(rng)));
        const MSample s = m_eval(p, l);
        positive += s.m.imag() > 0.0;
        drift = std::max(drift, s.drift);
        ++total;
    }
    o.check(positive == total, fmt("Im m > 0 at %d/%d random lambda over %zu catalog problems", positive, total, names.size()));
    o.check(drift <= 1e-8, fmt("max Wronskian drift %.2e", drift));

    bool nested = true, inside = true;
    double smallest = kInf;
    auto disks = [&](const Problem& p, cplx l, cplx exact) {
        double last = kInf;
        for (double x : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            const WeylDisk d = weyl_disk(p, l, x);
            nested = nested && d.radius < last;
            // Radii fall below double resolution of m by x = 8 (4e-19 for r = 2x at 2i): floor at 1e-12 |m|.
            inside = inside && std::abs(exact - d.center) <= d.radius * (1.0 + 1e-9) + 1e-12 * std::abs(exact);
            smallest = std::min(smallest, d.radius);
            last = d.radius;
        }
    };
    for (cplx l : {I, 2.0 * I, cplx(-1, 1)}) disks(catalog("hardy-littlewood"), l, std::pow(-l, -0.5));
    // mpmath Hankel closed form for r = 2x (tools/oracles.py).
    disks(catalog("power-r2x"), I, cplx(0.45924823600396132, 0.79544127804524271));
    disks(catalog("power-r2x"), 2.0 * I, cplx(0.28930825983423984, 0.50109660508224103));
    o.check(nested, "Weyl disk radii strictly decrease along x = 1/4 ... 8");
    o.check(inside, fmt("exact m lies in every disk within 1e-12 |m| (w = r = 1 at 3 lambda, r = 2x at 2 lambda; "
                        "smallest radius %.1e)",
                        smallest));
    return o;
}

Outcome liouville_invariance() {
    Outcome o;
    for (const char* name : {"potential-step", "potential-one"}) {
        const InvarianceReport r = verify_m_invariance(catalog(name), {I, 2.0 * I});
        o.check(r.max_residual <= 1e-4, fmt("%s: max |m - m~| = %.2e", name, r.max_residual));
    }
    return o;
}

Outcome regvar_classifier() {
    Outcome o;
    struct Case {
        double c, a, p;
    };
    const Case cases[] = {{1, 0, 0},  {2, 1, 0},  {1, -0.5, 0}, {3, 2, 0}, {1, 0, 1},
                          {1, 1, -1}, {0.5, 0.25, 2}, {1, -0.9, 0}, {1, 3, 0.5}, {2, 0.5, -0.5}};
    int exact = 0;
    for (const auto& k : cases) {
        const MonotoneMap g = distribution(Profile::power(k.c, k.a, k.p), kInf, "W");
        bool ok = true;
        for (End end : {End::Zero, End::Infinity}) {
            const VariationVerdict v = classify_variation(g, end);
            ok = ok && v.kind == VariationVerdict::Kind::Regular && std::abs(v.alpha - (k.a + 1.0)) <= 1e-6;
        }
        exact += ok;
    }
    o.check(exact == 10, fmt("%d/10 power-log profiles classified with the exact index at both ends", exact));

    MonotoneMap lg;
    lg.eval = [](double x) { return std::log1p(x); };
    lg.label = "log(1+x)";
    o.check(classify_variation(lg, End::Infinity).kind == VariationVerdict::Kind::Slow, "log(1+x) slowly varying");

    const Tri pw = positively_increasing(distribution(Profile::power(1.0, 0.5), kInf, "x^1.5"), End::Infinity).verdict;
    const Tri pl = positively_increasing(distribution(catalog("A_l-log").w, kInf, "log(1+x)"), End::Infinity).verdict;
    const Tri pf = positively_increasing(distribution(Profile::factorial_weight(), kInf, "W"), End::Infinity).verdict;
    o.check(pw == Tri::Yes && pl == Tri::No && pf == Tri::No,
            fmt("PI: x^1.5 %s, log(1+x) %s, factorial-weight W %s", to_string(pw), to_string(pl), to_string(pf)));

    const KaramataReport a = karamata_integral_check(Profile::power(2.0, 2.0), 1.0, 2.0, End::Infinity);
    const KaramataReport b = karamata_integral_check(Profile::power(1.0, 0.5), 1.0, 0.5, End::Zero);
    o.check(a.final_decade_deviation < 0.02 && b.final_decade_deviation < 0.02,
            fmt("Karamata ratio deviation over the final decade: 2x^2 at infinity %.4f, x^0.5 at 0 %.4f",
                a.final_decade_deviation, b.final_decade_deviation));
    return o;
}

Outcome lower_bounds() {
    Outcome o;
    const LowerBoundReport f = help_lower_bound(catalog("factorial-r"), factorial_sequence(8));
    std::ostringstream ks;
    for (const auto& row : f.rows) ks << fmt(" %.2f", row.K);
    o.check(f.max_K > 100.0, "factorial r: max K_n over n <= 8 = " + fmt("%.2f", f.max_K) + " (need > 100); K_n =" + ks.str());
    const LowerBoundReport big = help_lower_bound(catalog("factorial-r"), factorial_sequence(80));
    o.note(fmt("diagnostic: K_n grows without bound along the sequence, K_80 = %.2f", big.rows.back().K));
    const LowerBoundReport x = help_lower_bound(catalog("hardy-littlewood"), factorial_sequence(8));
    o.check(x.max_K < 10.0, fmt("R = x: max K_n = %.3g", x.max_K));
    return o;
}

Outcome fp_verdicts() {
    Outcome o;
    for (const char* a : {"-0.5", "0", "1", "2"}) {
        const FPVerdict v = fp_wellposedness(even(std::string("power-weight:") + a));
        o.check(v.well_posed == FPVerdict::WellPosed::Yes, fmt("|x|^%s: %s", a, to_string(v.well_posed)));
    }
    const FPVerdict l0 = fp_wellposedness(even("weight-x-l0"));
    o.check(l0.well_posed == FPVerdict::WellPosed::Yes, fmt("w = x, l = 0: %s", to_string(l0.well_posed)));
    const FPVerdict fw = fp_wellposedness(even("factorial-weight"));
    o.check(fw.well_posed == FPVerdict::WellPosed::Undetermined, fmt("factorial weight: %s", to_string(fw.well_posed)));
    return o;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const Criterion all[] = {
        {"closed-form m oracle", closed_form_oracle},
        {"homogeneous power asymptote", homogeneous_power},
        {"sector constants", everitt_constants},
        {"HELP verdict battery", help_battery},
        {"similarity battery", similarity_battery},
        {"duality identity", duality},
        {"structural invariants", structural_invariants},
        {"Liouville invariance", liouville_invariance},
        {"regular variation classifier", regvar_classifier},
        {"test-function lower bounds", lower_bounds},
        {"forward-backward verdicts", fp_verdicts},
    };
    int failed = 0, k = 0;
    for (const auto& c : all) {
        ++k;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.check(false, std::string("threw: ") + e.what());
        }
        failed += !o.pass;
        std::printf("%s %2d %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k, c.name, seconds_since(t0));
        for (const auto& n : o.notes) std::printf("       %s\n", n.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria pass\n", k - failed, k);
    return failed;
}
