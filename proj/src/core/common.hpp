#pragma once

#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wk {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorKind {
    Parse,          // malformed input
    Domain,         // argument outside the operation's domain
    Divergent,      // integral diverges where a finite value is required
    Numeric,        // step collapse, truncation stall, quadrature failure
    Classification, // endpoint or variation class could not be decided
    Unsupported     // valid input outside what the library handles
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

/// Three-valued answer used for integrability and endpoint questions.
enum class Tri { No, Yes, Unknown };

inline const char* to_string(Tri t) {
    switch (t) {
    case Tri::No: return "no";
    case Tri::Yes: return "yes";
    default: return "unknown";
    }
}

/// Which end of a half-line (or of a monotone map's argument) a question refers to.
enum class End { Zero, Infinity };

inline const char* to_string(End e) { return e == End::Zero ? "zero" : "infinity"; }

using Trail = std::vector<std::string>;

/// Short decimal rendering for messages and trails.
inline std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace wk
