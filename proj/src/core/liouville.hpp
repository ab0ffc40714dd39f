#pragma once

#include "regvar.hpp"
#include "weyl.hpp"

#include <string>
#include <vector>

namespace wk {

/// Zero-energy solution c0 = c(x, 0) with c0(0) = 1, c0'(0) = 0, and its running integrals.
struct C0Sample {
    double x;
    double c0;
    double c0p; // quasi-derivative c0' / r
    double xi;  // int_0^x r / c0^2
    double Wt;  // int_0^x w c0^2
};

/// Behaviour of c0 toward b = infinity.
struct C0Tail {
    enum class Kind { Linear, Exponential, InverseSquare, Fitted, Unknown };
    Kind kind = Kind::Unknown;
    double kappa = NAN;  // c0 ~ x^kappa (power kinds)
    bool exact = false;  // kappa follows from the potential's tail formula
    double slope = NAN;  // Linear: c0 = slope x + intercept beyond the last breakpoint
    double intercept = NAN;
    double l = NAN;      // InverseSquare: q = l(l+1) (x - center)^-2
    double A = NAN;      // InverseSquare: c0 = A u^(l+1) + B u^-l, u = x - center
    double B = NAN;
    double center = NAN;
    bool slowly_varying = false; // fitted local exponent still drifts over the outer decades
    std::string evidence;
};

const char* to_string(C0Tail::Kind k);

struct C0Solution {
    std::vector<C0Sample> samples;
    double x_end = 0.0;   // last sampled point
    bool stopped_on_growth = false;
    C0Tail tail;
};

struct C0Options {
    double x_min = 1e-6;
    double x_max = 1e12;
    int per_decade = 20;
    double rtol = 1e-11;
    double atol = 1e-14;
    double growth_limit = 1e100;
};

/// Solves (c0'/r)' = q c0; Domain error when c0 vanishes (the spectrum is not nonnegative).
C0Solution solve_c0(const Problem& p, const C0Options& opt = {});

struct TransformResult {
    C0Solution c0;
    double B = kInf;       // xi(b-)
    Profile w_tilde;       // table of (xi, w c0^4 / r)
    MonotoneMap W_tilde;   // W~ as a function of xi
    Tri c0_in_L2w = Tri::Unknown;
    Tri inv_c0_in_L2 = Tri::Unknown;
    Trail trail;
};

/// Liouville change of variable xi = int r / c0^2 (q is absorbed into the weight).
TransformResult transform(const Problem& p, const C0Options& opt = {});

/// Transformed problem as an ODE model in the original variable: r / c0^2, w c0^2, q = 0.
OdeModel liouville_model(const Problem& p);

struct InvarianceRow {
    cplx lambda;
    MSample original;
    MSample transformed;
    double residual;
    double bound;
    bool ok;
};

struct InvarianceReport {
    std::vector<InvarianceRow> rows;
    double max_residual = 0.0;
    bool ok = true;
    Trail trail;
};

InvarianceReport verify_m_invariance(const Problem& p, const std::vector<cplx>& lambdas, const WeylOptions& opt = {});

} // namespace wk
