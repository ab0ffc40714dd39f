#include <doctest.h>

#include "problem.hpp"
#include "regvar.hpp"

#include <cmath>

using namespace wk;

namespace {

MonotoneMap numeric(std::function<double(double)> f, const char* label) {
    MonotoneMap g;
    g.eval = std::move(f);
    g.label = label;
    return g;
}

} // namespace

TEST_CASE("regular variation of power-log distributions") {
    // int_0^x c t^a log(e+t)^p dt has index a + 1 at both ends.
    struct Case {
        double c, a, p;
    };
    const Case cases[] = {{1, 0, 0},  {2, 1, 0},  {1, -0.5, 0}, {3, 2, 0}, {1, 0, 1},
                          {1, 1, -1}, {0.5, 0.25, 2}, {1, -0.9, 0}, {1, 3, 0.5}, {2, 0.5, -0.5}};
    for (const auto& k : cases) {
        const MonotoneMap g = distribution(Profile::power(k.c, k.a, k.p), kInf, "W");
        for (End end : {End::Zero, End::Infinity}) {
            CAPTURE(k.a);
            CAPTURE(k.p);
            CAPTURE(to_string(end));
            const VariationVerdict v = classify_variation(g, end);
            CHECK(v.kind == VariationVerdict::Kind::Regular);
            CHECK(v.alpha == doctest::Approx(k.a + 1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("numeric classification without symbolic data") {
    const VariationVerdict sq = classify_variation(numeric([](double x) { return x * x; }, "x^2"), End::Infinity);
    CHECK(sq.kind == VariationVerdict::Kind::Regular);
    CHECK(sq.alpha == doctest::Approx(2.0).epsilon(0.02));
    CHECK(sq.table.size() > 0);

    const VariationVerdict lg =
        classify_variation(numeric([](double x) { return std::log1p(x); }, "log(1+x)"), End::Infinity);
    CHECK(lg.kind == VariationVerdict::Kind::Slow);
    CHECK(lg.alpha == 0.0);

    // e^x overflows past 709, so the window ends at 500.
    VariationOptions near;
    near.reach_infinity = 500.0;
    near.decades = 4;
    const VariationVerdict ex = classify_variation(numeric([](double x) { return std::exp(x); }, "e^x"), End::Infinity, near);
    CHECK(ex.kind == VariationVerdict::Kind::Rapid);
}

TEST_CASE("slow variation of W = log(1+x)") {
    const MonotoneMap W = distribution(catalog("A_l-log").w, kInf, "W");
    CHECK(classify_variation(W, End::Infinity).kind == VariationVerdict::Kind::Slow);
}

TEST_CASE("positive increase") {
    const MonotoneMap id = distribution(Profile::constant(1.0), kInf, "x");
    CHECK(positively_increasing(id, End::Zero).verdict == Tri::Yes);
    CHECK(positively_increasing(id, End::Infinity).verdict == Tri::Yes);

    const MonotoneMap lg = distribution(catalog("A_l-log").w, kInf, "log(1+x)");
    CHECK(positively_increasing(lg, End::Infinity).verdict == Tri::No);
    // Sampled only, S(1/2) = 1 - log 2 / log x is still 0.025 away from 1 at x = 1e12: not decided.
    const MonotoneMap lgn = numeric([](double x) { return std::log1p(x); }, "log(1+x)");
    CHECK(positively_increasing(lgn, End::Infinity).verdict != Tri::Yes);

    const MonotoneMap W = distribution(Profile::factorial_weight(), kInf, "W");
    CHECK(positively_increasing(W, End::Infinity).verdict == Tri::No);
}

TEST_CASE("Karamata integral check") {
    const KaramataReport lin = karamata_integral_check(Profile::power(1.0, 1.0), 1.0, 1.0, End::Infinity);
    for (const auto& r : lin.rows) CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-9));

    // x log(e+x): the ratio tends to 1 like 1 - 1/(2 log x). Oracle: Simpson in log t.
    const KaramataReport xl = karamata_integral_check(Profile::power(1.0, 1.0, 1.0), 1.0, 1.0, End::Infinity);
    {
        const double X = xl.rows.back().x;
        const int n = 200000;
        const double a = std::log(1e-12), b = std::log(X), h = (b - a) / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = std::exp(a + i * h);
            s += t * t * std::log(std::exp(1.0) + t) * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
        }
        s *= h / 3.0;
        CHECK(xl.rows.back().ratio == doctest::Approx(s / (X * X * std::log(std::exp(1.0) + X) / 2.0)).epsilon(1e-8));
        CHECK(std::abs(xl.rows.back().ratio - 1.0) < std::abs(xl.rows[xl.rows.size() / 2].ratio - 1.0));
    }

    const KaramataReport cube = karamata_integral_check(Profile::power(2.0, 2.0), 1.0, 2.0, End::Infinity);
    CHECK(cube.final_decade_deviation < 0.02);

    const KaramataReport sq = karamata_integral_check(Profile::power(1.0, 0.5), 1.0, 0.5, End::Zero);
    CHECK(sq.final_decade_deviation < 0.02);

    // 1/x beyond 1: the integral grows like log x while x f(x) = 1.
    const Profile inv = Profile::from_segments({Segment{0.0, 1.0, 1.0, 0.0, 0.0, 0.0}, Segment{1.0, kInf, 1.0, -1.0, 0.0, 0.0}});
    const KaramataReport d = karamata_integral_check(inv, 1.0, -1.0, End::Infinity);
    CHECK(d.divergent);
    CHECK(d.rows.back().ratio > 10.0);
    CHECK(d.rows.back().ratio > d.rows[d.rows.size() / 2].ratio);
}

TEST_CASE("property: classification is invariant under scaling") {
    for (double c : {1e-3, 1.0, 1e3}) {
        const MonotoneMap g = numeric([c](double x) { return c * std::pow(x, 1.5); }, "c x^1.5");
        const VariationVerdict v = classify_variation(g, End::Infinity);
        CHECK(v.kind == VariationVerdict::Kind::Regular);
        CHECK(v.alpha == doctest::Approx(1.5).epsilon(0.02));
    }
}
