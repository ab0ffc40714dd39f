#pragma once

#include "profile.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace wk {

/// Which m-function a problem asks for. Dirichlet is the variant of the duality identity:
/// same normalisation at 0, but u1(b) = 0 instead of u2(b) = 0 in the limit-circle or regular case.
enum class Boundary { Neumann, Dirichlet };
enum class EndpointClass { Auto, Regular, LimitCircle, LimitPoint };

const char* to_string(Boundary b);
const char* to_string(EndpointClass c);

/// -(y'/r)' + q y = lambda w y on (0, b) with y'(0) = 0.
struct Problem {
    std::string name;
    Profile w = Profile::constant(1.0);
    Profile r = Profile::constant(1.0);
    Profile q; // zero unless set
    double b = kInf;
    Boundary boundary = Boundary::Neumann;
    EndpointClass endpoint = EndpointClass::Auto;

    static Problem from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    /// The (w, r)-swapped problem with the Dirichlet-variant boundary. Requires q = 0.
    Problem swapped_dirichlet() const;

    /// Throws a Domain error when the w or r roles are not positive.
    void validate() const;
};

/// Named problems from the literature, for self-contained tests.
std::vector<std::string> catalog_names();
Problem catalog(const std::string& name);

} // namespace wk
