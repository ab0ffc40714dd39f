#pragma once

#include "profile.hpp"

#include <functional>
#include <optional>
#include <string>

namespace wk {

/// Nondecreasing map g on (lo, hi) with optional symbolic growth data at both ends.
struct MonotoneMap {
    std::function<double(double)> eval;
    double lo = 0.0;
    double hi = kInf;
    Growth at_zero;     // behaviour as the argument tends to 0 (or to lo)
    Growth at_infinity; // behaviour as the argument tends to hi = infinity
    std::optional<Leading> exact_power; // g(x) = c x^a exactly when set
    std::string label;
    /// Arguments outside [data_lo, data_hi] are extrapolated rather than measured.
    double data_lo = 0.0;
    double data_hi = kInf;

    double operator()(double x) const { return eval(x); }
};

/// inf{x in (lo, hi) : g(x) >= y}; left-continuous in y.
double generalized_inverse(const MonotoneMap& g, double y);

/// For a nonincreasing F on (0, inf): inf{x : F(x) <= y}.
double generalized_inverse_decreasing(const std::function<double(double)>& F, double y);

/// The distribution x -> int_0^x p on (0, b).
MonotoneMap distribution(const Profile& p, double b, const std::string& label = "");

/// numerator o denominator^{-1}, for two distributions on the same (0, b).
MonotoneMap compose_distributions(const Profile& numerator, const Profile& denominator, double b,
                                  const std::string& label = "");

/// Map g^{-1} built from g (its growth index inverts).
MonotoneMap inverse_map(const MonotoneMap& g);

/// Growth class of num o den^{-1} from the classes of num and den at the same end.
Growth compose_growth(const Growth& num, const Growth& den);

} // namespace wk
