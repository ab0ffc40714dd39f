#include <doctest.h>

#include "monotone.hpp"
#include "problem.hpp"

#include <cmath>
#include <random>

using namespace wk;

namespace {

// Composite Simpson on a fine uniform grid, independent of the library's quadrature.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double bisect(const std::function<double(double)>& g, double y, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= y ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

TEST_CASE("cumulative of simple profiles") {
    CHECK(Profile::power(1.0, 1.0).cumulative(2.0) == doctest::Approx(2.0));
    CHECK(Profile::constant(1.0).cumulative(5.0) == doctest::Approx(5.0));
}

TEST_CASE("cumulative of a tabulated profile matches fine quadrature of the interpolant") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i <= 16; ++i) {
        const double x = i / 16.0;
        pts.emplace_back(x, std::sin(x) * std::sin(x) + 1.0);
    }
    const Profile t = Profile::table(pts);
    auto interp = [&](double x) {
        for (size_t i = 1; i < pts.size(); ++i)
            if (x <= pts[i].first) {
                const double s = (x - pts[i - 1].first) / (pts[i].first - pts[i - 1].first);
                return pts[i - 1].second + s * (pts[i].second - pts[i - 1].second);
            }
        return pts.back().second;
    };
    CHECK(t.cumulative(1.0) == doctest::Approx(simpson(interp, 0.0, 1.0)).epsilon(1e-9));
}

TEST_CASE("power-log cumulative matches quadrature") {
    const Profile p = Profile::power(2.0, 0.5, 1.0);
    const double ref = simpson([](double x) { return 2.0 * std::sqrt(x) * std::log(std::exp(1.0) + x); }, 0.0, 3.0, 200000);
    CHECK(p.cumulative(3.0) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("generalized inverse") {
    MonotoneMap id{[](double x) { return x; }};
    CHECK(generalized_inverse(id, 2.0) == doctest::Approx(2.0));

    MonotoneMap sq{[](double x) { return x * x; }};
    CHECK(generalized_inverse(sq, 9.0) == doctest::Approx(3.0));

    // Step map: 0 on (0,1], 1 beyond. inf{x : g(x) >= 0.5} = 1.
    MonotoneMap step{[](double x) { return x <= 1.0 ? 0.0 : 1.0; }};
    CHECK(generalized_inverse(step, 0.5) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("composition of distributions") {
    // W = x^2/2, R = x: R o W^-1 (u) = sqrt(2u).
    const MonotoneMap g = compose_distributions(Profile::constant(1.0), Profile::power(1.0, 1.0), kInf);
    CHECK(g(2.0) == doctest::Approx(2.0).epsilon(1e-9));

    const MonotoneMap id = compose_distributions(Profile::constant(1.0), Profile::constant(1.0), kInf);
    for (double u : {1e-3, 0.5, 7.0, 1e4}) CHECK(id(u) == doctest::Approx(u).epsilon(1e-10));
}

TEST_CASE("composition of tabulated distributions matches a bisection oracle") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.5, 2.0);
    std::vector<std::pair<double, double>> pw, pr;
    for (int i = 0; i <= 20; ++i) {
        pw.emplace_back(0.2 * i, U(rng));
        pr.emplace_back(0.2 * i, U(rng));
    }
    const Profile w = Profile::table(pw), r = Profile::table(pr);
    const MonotoneMap g = compose_distributions(r, w, 4.0);
    for (double u : {0.3, 1.0, 2.5}) {
        const double x = bisect([&](double t) { return w.cumulative(t); }, u, 0.0, 4.0);
        CHECK(g(u) == doctest::Approx(r.cumulative(x)).epsilon(1e-8));
    }
}

TEST_CASE("profile JSON round trip and parse errors") {
    const Profile p = Profile::from_segments({Segment{0.0, 1.0, 2.0, 0.0, 0.0, 0.0}, Segment{1.0, kInf, 1.0, -1.0, 1.0, 0.0}});
    const Profile q = Profile::from_json(p.to_json());
    CHECK(q.to_json() == p.to_json());
    for (double x : {0.5, 1.0, 3.0, 100.0}) CHECK(q.cumulative(x) == doctest::Approx(p.cumulative(x)));

    CHECK_THROWS_AS(Profile::from_json(nlohmann::json{{"family", "bogus"}}), Error);
    CHECK_THROWS_AS(Profile::from_json(nlohmann::json::array()), Error);
}

TEST_CASE("catalog entries round-trip through JSON") {
    for (std::string name : catalog_names()) {
        if (name == "power-weight:<alpha>") name = "power-weight:1.5";
        CAPTURE(name);
        const Problem p = catalog(name);
        const Problem q = Problem::from_json(p.to_json());
        CHECK(q.to_json() == p.to_json());
    }
    CHECK_THROWS_AS(catalog("no-such-problem"), Error);
}

TEST_CASE("catalog contents") {
    const Problem hl = catalog("hardy-littlewood");
    double c = 0.0;
    CHECK(hl.w.is_constant(&c));
    CHECK(c == 1.0);
    CHECK(hl.r.is_constant(&c));
    CHECK(hl.b == kInf);
    CHECK(catalog("factorial-weight").w.named() == Profile::Named::FactorialWeight);
    // 1/(1+x): W = log(1+x).
    CHECK(catalog("A_l-log").w.cumulative(3.0) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("property: cumulative is additive and nondecreasing") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.0, 10.0);
    for (const char* name : {"hardy-littlewood", "A_l-log", "power-r2x", "r-inverse-tail", "factorial-weight"}) {
        const Problem p = catalog(name);
        for (int k = 0; k < 20; ++k) {
            double a = U(rng), b = U(rng);
            if (a > b) std::swap(a, b);
            CHECK(p.w.cumulative(b) >= p.w.cumulative(a));
            CHECK(p.w.cumulative(a) + p.w.integral(a, b) == doctest::Approx(p.w.cumulative(b)).epsilon(1e-9));
        }
    }
}
