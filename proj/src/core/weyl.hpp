#pragma once

#include "problem.hpp"

#include <functional>
#include <string>
#include <vector>

namespace wk {

struct WeylOptions {
    double ode_rtol = 1e-10;
    double ode_atol = 1e-14;
    double disk_rtol = 1e-6;
    double disk_atol = 1e-12;
    double drift_tol = 1e-9; // m_eval reruns once at ode_rtol / 10 above this Wronskian drift
    double x_cap = 1e12;      // truncation cap toward infinity
    double rescale_at = 1e10; // renormalise the fundamental matrix above this max-norm
    long max_steps = 20'000'000;
};

/// Coefficients of u1' = r u2, u2' = (q - lambda w) u1, optionally driven by an auxiliary real ODE.
struct OdeModel {
    double b = kInf;
    std::function<void(double x, const double* aux, double& r, double& w, double& q)> coeffs;
    std::vector<double> aux0;
    std::function<void(double x, const double* aux, double* daux)> aux_rhs;
    std::function<std::vector<double>(double lo, double hi)> breakpoints;
    // Integrable singularities at 0 and at a finite b are crossed with a first-order Picard step.
    bool singular_at_zero = false;
    bool singular_at_b = false;
    std::function<void(double x0, double x1, double& dR, double& dW, double& dQ)> increments;
    double atom_r = 0.0; // point mass of dR at 0
    double atom_w = 0.0; // point mass of dW at 0
};

OdeModel make_model(const Problem& p);
/// Same problem in tau = -log(1 - x/b) on (0, inf); used for a limit-point end at finite b.
OdeModel make_log_model(const Problem& p);

/// Values at x of c = (c, c1) and s = (s, s1), stored divided by exp(log_scale).
struct SolutionPair {
    double x = 0.0;
    cplx c, c1, s, s1;
    double log_scale = 0.0;
    double drift = 0.0; // max normalised Wronskian drift over accepted steps
    long steps = 0;
};

struct WeylDisk {
    cplx center;
    double radius = kInf;
    double x = 0.0;
};

struct MSample {
    cplx lambda;
    cplx m;
    double enclosure = kInf;
    std::string method; // disk-contraction, limit-circle-boundary, closed-form
    double x_trunc = 0.0;
    double drift = 0.0;
    long steps = 0;
};

/// Steps the fundamental system along x. Shared by m-function evaluation and the Liouville check.
class Shooter {
public:
    Shooter(const OdeModel& model, cplx lambda, const WeylOptions& opt);

    /// Advance toward x_target; `on_step` runs after each accepted step and may stop early by returning true.
    void advance(double x_target, const std::function<bool()>& on_step = {});
    /// Cross [x, b] with a Picard step (finite b with an integrable singularity there).
    void close_at_b();

    double x() const { return x_; }
    SolutionPair solution() const;
    WeylDisk disk() const;
    double log_radius() const;
    const std::vector<double>& aux() const { return aux_; }

private:
    void picard(double x0, double x1);
    void renormalise();
    void track_drift();

    const OdeModel& model_;
    cplx lambda_;
    WeylOptions opt_;
    double x_ = 0.0;
    std::vector<double> y_; // Re/Im of c, c1, s, s1, then aux
    std::vector<double> aux_;
    double log_scale_ = 0.0;
    double drift_ = 0.0;
    long steps_ = 0;
    double dt_ = 1e-3;
};

SolutionPair integrate_fundamental(const Problem& p, cplx lambda, double x, const WeylOptions& opt = {});

struct Classification {
    EndpointClass cls = EndpointClass::LimitPoint;
    Trail trail;
};
Classification limit_point_classify(const Problem& p);

WeylDisk weyl_disk(const Problem& p, cplx lambda, double x, const WeylOptions& opt = {});

MSample m_eval(const Problem& p, cplx lambda, const WeylOptions& opt = {});

/// m-function of an arbitrary model with a fixed endpoint class (used for transformed problems).
MSample m_eval_model(const OdeModel& model, EndpointClass cls, Boundary boundary, cplx lambda,
                     const WeylOptions& opt = {});

struct DualResidual {
    cplx lambda;
    MSample m;
    MSample m_dual; // Dirichlet variant of the (w, r)-swapped problem
    double residual = 0.0;
    double bound = 0.0; // combined enclosure
    bool ok = false;
};
DualResidual m_dual_identity(const Problem& p, cplx lambda, const WeylOptions& opt = {});

struct StieltjesReport {
    bool pass = true;
    std::vector<std::pair<double, double>> samples; // (lambda, m)
    std::vector<double> enclosures;
    std::string violation;
    int unresolved = 0; // samples where m_eval failed numerically
};
StieltjesReport stieltjes_check(const Problem& p, std::vector<double> grid, const WeylOptions& opt = {});

/// Closed form of the atomic example when p matches it (r atomic, w = 1, q = 0).
bool atomic_closed_form(const Problem& p, cplx lambda, cplx* m);

} // namespace wk
