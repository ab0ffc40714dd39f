#pragma once

#include "asymptotics.hpp"
#include "liouville.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wk {

enum class Validity { Valid, Invalid, Inconclusive };
const char* to_string(Validity v);

/// Yes -> valid, No -> invalid.
Validity from_tri(Tri t);

struct CoefficientVerdict {
    Validity verdict = Validity::Inconclusive;
    std::string route;
    std::vector<PIVerdict> pi;
    Trail trail;
};

/// Distribution of the HELP inequality's coefficients: PI of R o W^-1 at 0 (and at infinity).
CoefficientVerdict help_coefficient_check(const Problem& p, const VariationOptions& vopt = {});

struct SectorSample {
    double theta;
    double rho;
    cplx lambda;
    cplx m;
    double arg;          // arg of lambda
    double im_lambda2_m; // Im(lambda^2 m) / (|lambda|^2 |m|)
    double tolerance;
    bool violation;
};

struct EverittOptions {
    double rho_lo = 1e-6;
    double rho_hi = 1e6;
    int per_decade = 8;
    double theta_tol = 0.01;
};

struct EverittReport {
    double theta0 = NAN;
    double K = NAN;
    bool valid = false; // theta0 stays away from pi/2 and does not drift with the window
    Validity verdict = Validity::Inconclusive;
    bool edge_pinned = false; // worst violation sits in the outer decade of the rho grid
    std::vector<std::pair<double, double>> window_theta0; // (decades each side, theta0) when edge-pinned
    std::vector<std::pair<double, bool>> bisection; // (theta, passes)
    std::vector<SectorSample> samples;              // rays of the accepted theta0 and the last failing theta
    std::optional<SectorSample> violation;          // worst sample of the last failing theta
    Trail trail;
};

/// Best constant K = 1/cos theta0 from the sector where -Im(lambda^2 m) >= 0.
EverittReport everitt_scan(const Problem& p, const EverittOptions& eo = {}, const WeylOptions& opt = {});

struct LowerBoundRow {
    int n;
    double a, b;
    double A, B; // R o W^-1 at a and b
    double K;
};

struct LowerBoundReport {
    std::vector<LowerBoundRow> rows;
    double max_K = 0.0;
    Trail trail;
};

/// a_n = (2n)!, b_n = (2n+1)!.
std::vector<std::pair<double, double>> factorial_sequence(int n_max);

/// Test-function lower bounds K_n = 1 / [(B/A - 1)^2 + a/(b - a) (A/B)^2].
LowerBoundReport help_lower_bound(const Problem& p, const std::vector<std::pair<double, double>>& seq);

struct HelpVerdict {
    Validity validity = Validity::Inconclusive;
    double sup_ratio = NAN;
    RatioReport at_infinity;
    RatioReport at_zero;
    CoefficientVerdict coefficient;
    bool disagreement = false;
    std::optional<EverittReport> everitt;
    std::optional<LowerBoundReport> lower;
    double K_lo = NAN, K_hi = NAN;
    Trail trail;
};

struct HelpOptions {
    bool everitt = false;
    EverittOptions everitt_opt;
    std::vector<std::pair<double, double>> bound_sequence;
    RatioOptions ratio;
    WeylOptions weyl;
    VariationOptions variation;
};

/// sup_y Re m(iy) / Im m(iy) < infinity, from both windows, plus the coefficient route.
HelpVerdict help_check(const Problem& p, const HelpOptions& ho = {});

/// q >= 0, r = 1, b = infinity: routes on c0 in L2(w) and 1/c0 in L2.
CoefficientVerdict help_with_potential(const Problem& p, const VariationOptions& vopt = {},
                                       const C0Options& copt = {});

} // namespace wk
