#include <doctest.h>

#include "help.hpp"

#include <cmath>

using namespace wk;

TEST_CASE("sector scan for w = r = 1: theta0 = pi/3, K = 2") {
    const EverittReport e = everitt_scan(catalog("hardy-littlewood"));
    CHECK(e.valid);
    CHECK(e.verdict == Validity::Valid);
    CHECK(e.theta0 == doctest::Approx(M_PI / 3).epsilon(0.01));
    CHECK(e.K == doctest::Approx(2.0).epsilon(0.025));
    CHECK(e.K == doctest::Approx(1.0 / std::cos(e.theta0)));
}

TEST_CASE("sector scan for r = 2x: theta0 = pi/4") {
    const EverittReport e = everitt_scan(catalog("power-r2x"));
    CHECK(e.verdict == Validity::Valid);
    CHECK(e.theta0 == doctest::Approx(M_PI / 4).epsilon(0.01));
    CHECK(e.K == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));
}

TEST_CASE("HELP validity from the imaginary axis") {
    const HelpVerdict hl = help_check(catalog("hardy-littlewood"));
    CHECK(hl.validity == Validity::Valid);
    CHECK(hl.sup_ratio == doctest::Approx(1.0).epsilon(1e-5));
    CHECK_FALSE(hl.disagreement);

    CHECK(help_check(catalog("hardy-littlewood-unit")).validity == Validity::Valid);

    const HelpVerdict rt = help_check(catalog("r-inverse-tail"));
    CHECK(rt.validity == Validity::Invalid);
    CHECK_FALSE(rt.disagreement);

    CHECK(help_check(catalog("potential-step")).validity == Validity::Invalid);
}

TEST_CASE("HELP validity from the coefficients") {
    const CoefficientVerdict hl = help_coefficient_check(catalog("hardy-littlewood"));
    CHECK(hl.verdict == Validity::Valid);
    CHECK_FALSE(hl.pi.empty());
    CHECK(help_coefficient_check(catalog("r-inverse-tail")).verdict == Validity::Invalid);
}

TEST_CASE("HELP validity with a potential") {
    const CoefficientVerdict step = help_with_potential(catalog("potential-step"));
    CHECK(step.route == "1/c0 in L2, c0 not in L2(w)");
    CHECK(step.verdict == Validity::Invalid);

    // w = x with the same step: c0 grows linearly, so again 1/c0 in L2 and c0 not in L2(w).
    const CoefficientVerdict wx = help_with_potential(catalog("weight-x-l0"));
    CHECK(wx.route == "1/c0 in L2, c0 not in L2(w)");
    CHECK(wx.verdict == Validity::Invalid);

    // Both have a negative part of q.
    for (const char* name : {"inverse-square-l1", "negative-well"}) {
        try {
            help_with_potential(catalog(name));
            FAIL("expected Unsupported");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Unsupported);
        }
    }
    CHECK_THROWS_AS(help_with_potential(catalog("power-r2x")), Error);
}

TEST_CASE("factorial sequence") {
    const auto s = factorial_sequence(3);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == std::pair<double, double>{2.0, 6.0});
    CHECK(s[1] == std::pair<double, double>{24.0, 120.0});
    CHECK(s[2] == std::pair<double, double>{720.0, 5040.0});
}

TEST_CASE("test-function lower bounds") {
    // R o W^-1 = identity with a = b/2: 1 / (1 + 1/4).
    const LowerBoundReport id = help_lower_bound(catalog("hardy-littlewood"), {{1.0, 2.0}, {5.0, 10.0}});
    for (const auto& row : id.rows) CHECK(row.K == doctest::Approx(0.8));

    // The bound stays bounded along a_n = 1/n, b = 1.
    std::vector<std::pair<double, double>> inv;
    for (int n = 2; n <= 50; ++n) inv.emplace_back(1.0 / n, 1.0);
    const LowerBoundReport tail = help_lower_bound(catalog("hardy-littlewood"), inv);
    CHECK(tail.max_K <= 1.0 + 1e-12);

    // Factorial R: the bound grows along the factorial sequence.
    const LowerBoundReport f = help_lower_bound(catalog("factorial-r"), factorial_sequence(6));
    REQUIRE(f.rows.size() == 6);
    CHECK(f.rows.back().K > f.rows.front().K);
    CHECK(f.max_K > 1.0);
}

TEST_CASE("property: lower bound is at most 1 / (B/A - 1)^2") {
    const LowerBoundReport f = help_lower_bound(catalog("power-r2x"), factorial_sequence(5));
    for (const auto& row : f.rows) {
        CAPTURE(row.n);
        CHECK(row.K <= 1.0 / std::pow(row.B / row.A - 1.0, 2) * (1.0 + 1e-12));
        CHECK(row.K > 0.0);
    }
}
