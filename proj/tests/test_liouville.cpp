#include <doctest.h>

#include "liouville.hpp"

#include <cmath>

using namespace wk;

namespace {

const C0Sample& at(const C0Solution& s, double x) {
    for (const auto& v : s.samples)
        if (std::abs(v.x - x) <= 1e-12 * x) return v;
    FAIL("grid point missing");
    return s.samples.front();
}

} // namespace

TEST_CASE("zero-energy solution for q = 0 is 1") {
    const C0Solution s = solve_c0(catalog("hardy-littlewood"));
    for (const auto& v : s.samples) CHECK(v.c0 == doctest::Approx(1.0));
}

TEST_CASE("zero-energy solution for q = 1 is cosh") {
    const C0Solution s = solve_c0(catalog("potential-one"));
    for (double x : {1e-3, 0.1, 1.0, 10.0}) {
        const C0Sample& v = at(s, x);
        CHECK(v.c0 == doctest::Approx(std::cosh(x)).epsilon(1e-9));
        CHECK(v.xi == doctest::Approx(std::tanh(x)).epsilon(1e-9));
    }
    CHECK(s.tail.kind == C0Tail::Kind::Exponential);
}

TEST_CASE("zero-energy solution for q = chi[0,1] has a linear tail") {
    const C0Solution s = solve_c0(catalog("potential-step"));
    const C0Sample& one = at(s, 1.0);
    CHECK(one.c0 == doctest::Approx(std::cosh(1.0)).epsilon(1e-9));
    CHECK(one.c0p == doctest::Approx(std::sinh(1.0)).epsilon(1e-9));
    // Volterra form: c0' (x) = int_0^1 c0 = sinh 1 beyond the support.
    REQUIRE(s.tail.kind == C0Tail::Kind::Linear);
    CHECK(s.tail.slope == doctest::Approx(std::sinh(1.0)).epsilon(1e-9));
    CHECK(s.tail.intercept == doctest::Approx(std::cosh(1.0) - std::sinh(1.0)).epsilon(1e-9));
    const C0Sample& ten = at(s, 10.0);
    CHECK(ten.c0 == doctest::Approx(std::sinh(1.0) * 10.0 + std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("negative potential well makes c0 vanish") {
    CHECK_THROWS_AS(solve_c0(catalog("negative-well")), Error);
}

TEST_CASE("transform: identity for q = 0") {
    const TransformResult t = transform(catalog("hardy-littlewood"));
    CHECK(t.B == kInf);
    CHECK(t.W_tilde(3.0) == doctest::Approx(3.0));
}

TEST_CASE("transform: q = 1 maps to (0, 1) with w~ = cosh^4") {
    const TransformResult t = transform(catalog("potential-one"));
    CHECK(t.B == doctest::Approx(1.0).epsilon(1e-8));
    // xi = tanh x, w~(xi) = cosh(x)^4 and W~(xi) = x/2 + sinh(2x)/4. Exact at the c0 grid,
    // interpolated (20 points per decade) in between.
    for (const auto& v : t.c0.samples) {
        if (v.x > 3.0) break;
        CHECK(t.w_tilde.value(v.xi) == doctest::Approx(std::pow(std::cosh(v.x), 4)).epsilon(1e-8));
        CHECK(t.W_tilde(v.xi) == doctest::Approx(v.x / 2 + std::sinh(2 * v.x) / 4).epsilon(1e-8));
    }
    const double xi = 0.5, x = std::atanh(xi);
    CHECK(t.w_tilde.value(xi) == doctest::Approx(std::pow(std::cosh(x), 4)).epsilon(5e-3));
    CHECK(t.W_tilde(xi) == doctest::Approx(x / 2 + std::sinh(2 * x) / 4).epsilon(5e-3));
}

TEST_CASE("transform: q = chi[0,1] has finite B") {
    const TransformResult t = transform(catalog("potential-step"));
    // B = tanh 1 + int_1^inf (C x + C0)^-2 dx = tanh 1 + 1 / (C (C + C0)).
    const double C = std::sinh(1.0), C0 = std::exp(-1.0);
    CHECK(t.B == doctest::Approx(std::tanh(1.0) + 1.0 / (C * (C + C0))).epsilon(1e-6));
    CHECK(t.inv_c0_in_L2 == Tri::Yes);
    CHECK(t.c0_in_L2w == Tri::No);
}

TEST_CASE("inverse-square tail with l = 1") {
    const TransformResult t = transform(catalog("inverse-square-l1"));
    CHECK(t.c0.tail.kind == C0Tail::Kind::InverseSquare);
    CHECK(t.c0.tail.l == doctest::Approx(1.0));
    CHECK(t.c0.tail.A == 0.0);
    CHECK(t.c0_in_L2w == Tri::Yes);
}

TEST_CASE("property: W~(xi(x)) = int_0^x c0^2 w at every grid point") {
    const TransformResult t = transform(catalog("weight-x-l0"));
    for (const auto& v : t.c0.samples) {
        if (v.x > 1e3) break;
        CHECK(t.W_tilde(v.xi) == doctest::Approx(v.Wt).epsilon(1e-6));
    }
}

TEST_CASE("m is invariant under the transform") {
    const InvarianceReport id = verify_m_invariance(catalog("hardy-littlewood"), {cplx(0, 1)});
    CHECK(id.max_residual == 0.0);
    const InvarianceReport step = verify_m_invariance(catalog("potential-step"), {cplx(0, 1)});
    CHECK(step.max_residual <= 1e-4);
    CHECK(step.ok);
    const InvarianceReport one = verify_m_invariance(catalog("potential-one"), {cplx(0, 2)});
    CHECK(one.max_residual <= 1e-4);
    // q = 1, w = 1: m = (1 - lambda)^(-1/2).
    CHECK(std::abs(one.rows[0].original.m - std::pow(cplx(1.0, -2.0), -0.5)) < 1e-5);
}
