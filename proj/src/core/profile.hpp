#pragma once

#include "common.hpp"

#include <json.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace wk {

/// Growth class of a nondecreasing function near one end of its argument.
/// At a finite singular endpoint b the exponent refers to the variable 1/(b-x).
struct Growth {
    enum class Kind { Unknown, Power, Slow, Rapid, Bounded };
    Kind kind = Kind::Unknown;
    double index = 0.0; // regular-variation index when kind == Power
};

const char* to_string(Growth::Kind k);

/// One power-log piece: c * |x - center|^a * log(e + |x - center|)^p on [from, to).
struct Segment {
    double from = 0.0;
    double to = kInf;
    double c = 1.0;
    double a = 0.0;
    double p = 0.0;
    double center = 0.0;
};

/// Leading behaviour of a profile's value near an end: c * s^a * log(e+s)^p, where
/// s = x at 0 and at infinity and s = b - x at a finite endpoint.
struct Leading {
    double c = 0.0;
    double a = 0.0;
    double p = 0.0;
};

class Profile {
public:
    enum class Family { PowerLog, Piecewise, Table, Named };
    enum class Named { None, FactorialWeight, Atomic };

    Profile() = default; // the zero profile

    static Profile zero();
    static Profile constant(double c);
    static Profile power(double c, double a, double p = 0.0, double center = 0.0);
    static Profile from_segments(std::vector<Segment> segs, Family family = Family::PowerLog);
    static Profile table(std::vector<std::pair<double, double>> points);
    static Profile factorial_weight();
    static Profile atomic(double mass);

    static Profile from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    Family family() const { return family_; }
    Named named() const { return named_; }
    bool is_zero() const;
    bool is_atomic() const { return named_ == Named::Atomic; }
    double atomic_mass() const { return atomic_mass_; }
    const std::vector<Segment>& segments() const { return segs_; }
    const std::vector<std::pair<double, double>>& points() const { return pts_; }

    /// True when the profile is one constant on its whole support; the constant goes to *c.
    bool is_constant(double* c = nullptr) const;
    /// True when the profile is the single power c*x^a with p = 0 and center 0.
    bool is_pure_power(double* c = nullptr, double* a = nullptr) const;
    bool nonnegative() const;

    /// Value at x, taking the piece that contains x in [from, to).
    double value(double x) const;
    /// Left limit at x (the piece with from < x <= to).
    double value_left(double x) const;

    /// Integral over (0, x) with an absolute error estimate.
    double cumulative(double x, double* err = nullptr) const;
    /// Integral over (x0, x1), x0 <= x1.
    double integral(double x0, double x1, double* err = nullptr) const;

    /// Points in (lo, hi) where the value jumps or the formula changes.
    std::vector<double> breakpoints(double lo, double hi) const;

    /// Whether the profile is integrable near the endpoint b (finite or infinite).
    Tri integrable_at(double b) const;
    /// Whether the value blows up at 0 (integrably or not).
    bool singular_at_zero() const;
    /// Whether the value blows up at finite b.
    bool singular_at(double b) const;

    std::optional<Leading> leading(End end, double b) const;
    /// Growth class of the cumulative integral near 0 or near b.
    Growth cumulative_growth(End end, double b) const;

    /// Largest x of the last finite piece or table point, used to clip sampling.
    double last_breakpoint() const;

    /// Profile with values c * value(x) (c > 0 keeps the sign class).
    Profile scaled(double c) const;

private:
    double seg_value(const Segment& s, double x) const;
    double seg_integral(const Segment& s, double x0, double x1, double* err) const;
    double table_cumulative(double x) const;
    double factorial_cumulative(double x) const;
    void validate() const;

    Family family_ = Family::PowerLog;
    Named named_ = Named::None;
    std::vector<Segment> segs_;
    std::vector<std::pair<double, double>> pts_;
    std::vector<double> table_prefix_;
    double atomic_mass_ = 0.0;
    bool zero_ = true;
};

} // namespace wk
