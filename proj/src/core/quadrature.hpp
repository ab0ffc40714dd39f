#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wk {

/// Adaptive 61-point Gauss-Kronrod on [a, b], evaluated on [0, 1] after an affine change of variable.
/// Boost compares the error of the [-1, 1] rule against a tolerance scaled by (b - a), so short
/// intervals otherwise never meet a relative tolerance below about 4 eps / (b - a) and recurse to max_depth.
template <class F>
double integrate_gk(F&& f, double a, double b, unsigned max_depth, double tol, double* err = nullptr) {
    const double h = b - a;
    auto g = [&](double s) { return h * f(a + h * s); };
    double e = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, max_depth, tol, &e);
    if (err) *err += e;
    return v;
}

} // namespace wk
