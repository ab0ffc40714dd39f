#include <doctest.h>

#include "asymptotics.hpp"

#include <cmath>

using namespace wk;

namespace {

const cplx I(0.0, 1.0);

std::vector<double> decades(double from, double to, int per) {
    std::vector<double> out;
    const int n = static_cast<int>(std::lround(std::abs(std::log10(to / from)) * per));
    for (int k = 0; k <= n; ++k) out.push_back(from * std::pow(to / from, static_cast<double>(k) / n));
    return out;
}

} // namespace

TEST_CASE("Kasahara constant") {
    CHECK(kasahara_constant(0.5) == doctest::Approx(1.0).epsilon(1e-14));
    // (1/3)^(2/3) Gamma(1/3) / ((2/3)^(1/3) Gamma(2/3)), frozen after first evaluation (mpmath agrees).
    CHECK(kasahara_constant(1.0 / 3.0) == doctest::Approx(1.0887358095278301).epsilon(1e-14));
    CHECK(kasahara_constant(2.0 / 3.0) == doctest::Approx(0.91849647200792118).epsilon(1e-14));
    // Independent evaluation through std::tgamma.
    const double nu = 0.3;
    CHECK(kasahara_constant(nu) ==
          doctest::Approx(std::pow(nu, 1 - nu) * std::tgamma(nu) / (std::pow(1 - nu, nu) * std::tgamma(1 - nu))));
}

TEST_CASE("model for w = r = 1 is exact") {
    const Problem p = catalog("hardy-littlewood");
    for (End end : {End::Zero, End::Infinity}) {
        const AsymptoteModel m = kasahara_model(p, end);
        CHECK(m.nu == doctest::Approx(0.5));
        CHECK(m.K == doctest::Approx(1.0));
        CHECK(m.f(4.0) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(std::abs(m.predict(I, 1.0) - std::pow(-I, -0.5)) < 1e-9);
        const AsymptoteReport r = verify_asymptote(p, m, end == End::Zero ? decades(1.0, 1e-4, 2) : decades(1.0, 1e4, 2));
        for (const auto& row : r.rows) CHECK(row.deviation < 1e-5);
    }
}

TEST_CASE("model for r = 2x: deviation stays at the enclosure floor") {
    const Problem p = catalog("power-r2x");
    const AsymptoteModel m = kasahara_model(p, End::Infinity);
    CHECK(m.nu == doctest::Approx(2.0 / 3.0));
    const AsymptoteReport r = verify_asymptote(p, m, decades(1.0, 1e4, 2));
    CHECK(r.final_deviation < 1e-4);
    const AsymptoteModel z = kasahara_model(p, End::Zero);
    const AsymptoteReport rz = verify_asymptote(p, z, decades(1.0, 1e-4, 2));
    CHECK(rz.final_deviation < 1e-4);
}

TEST_CASE("model for r = 1 + x: deviation shrinks toward the zero-energy end") {
    Problem p = catalog("hardy-littlewood");
    p.r = Profile::power(1.0, 1.0, 0.0, -1.0);
    const AsymptoteModel m = kasahara_model(p, End::Zero);
    CHECK(m.validity != AsymptoteModel::Validity::Unavailable);
    const AsymptoteReport r = verify_asymptote(p, m, decades(1.0, 1e-6, 4));
    CHECK(r.shrinking);
    CHECK(r.per_decade.back().second < r.per_decade.front().second);
}

TEST_CASE("ratio criterion verdicts") {
    const Problem hl = catalog("hardy-littlewood");
    for (End end : {End::Zero, End::Infinity})
        for (RatioKind k : {RatioKind::ReIm, RatioKind::ImRe}) {
            const RatioReport r = ratio_criterion(hl, end, k);
            CHECK(r.resolved == Bound::Bounded);
            CHECK(r.sup == doctest::Approx(1.0).epsilon(1e-5));
            CHECK_FALSE(r.disagreement);
        }

    // W(b) finite: Re m / Im m -> 0 as y -> 0.
    const RatioReport unit = ratio_criterion(catalog("hardy-littlewood-unit"), End::Zero, RatioKind::ReIm);
    CHECK(unit.resolved == Bound::Bounded);
    CHECK(unit.samples.back().ratio < 1e-3);

    // R(b) finite and W(b) infinite: Re m / Im m -> infinity as y -> 0.
    const RatioReport be = ratio_criterion(catalog("bounded-endpoint-w"), End::Zero, RatioKind::ReIm);
    CHECK(be.resolved == Bound::Unbounded);

    // Slowly varying W: Im/Re grows like log(1/y); the coefficient side decides.
    const RatioReport al = ratio_criterion(catalog("A_l-log"), End::Zero, RatioKind::ImRe);
    CHECK(al.resolved == Bound::Unbounded);
    CHECK(al.slope > 0.05);
}

TEST_CASE("bounded-endpoint shortcut") {
    CHECK(bounded_endpoint_shortcut(catalog("hardy-littlewood-unit")).which == EndpointShortcut::Case::WIntegrable);
    CHECK(bounded_endpoint_shortcut(catalog("bounded-endpoint-w")).which == EndpointShortcut::Case::RIntegrable);
    CHECK(bounded_endpoint_shortcut(catalog("hardy-littlewood")).which == EndpointShortcut::Case::Defer);
}

TEST_CASE("model needs q = 0") {
    CHECK_THROWS_AS(kasahara_model(catalog("potential-step"), End::Infinity), Error);
}
