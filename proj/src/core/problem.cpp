#include "problem.hpp"

#include <cmath>

namespace wk {

const char* to_string(Boundary b) { return b == Boundary::Neumann ? "neumann" : "dirichlet"; }

const char* to_string(EndpointClass c) {
    switch (c) {
    case EndpointClass::Regular: return "regular";
    case EndpointClass::LimitCircle: return "limit-circle";
    case EndpointClass::LimitPoint: return "limit-point";
    default: return "auto";
    }
}

void Problem::validate() const {
    if (!(b > 0.0)) throw Error(ErrorKind::Domain, "right endpoint b must be positive");
    if (w.is_zero() || !w.nonnegative()) throw Error(ErrorKind::Domain, "w must be positive a.e.");
    if (r.is_zero() || !r.nonnegative()) throw Error(ErrorKind::Domain, "r must be positive a.e.");
    if (q.is_atomic()) throw Error(ErrorKind::Unsupported, "atomic potentials are not supported");
    if (w.is_atomic() && r.is_atomic()) throw Error(ErrorKind::Unsupported, "w and r cannot both be atomic");
    if (w.named() == Profile::Named::FactorialWeight || r.named() == Profile::Named::FactorialWeight)
        if (b < kInf) throw Error(ErrorKind::Unsupported, "the factorial weight is defined on (0, inf) only");
}

Problem Problem::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "problem must be a JSON object");
    Problem p;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw Error(ErrorKind::Parse, "\"name\" must be a string");
        p.name = j.at("name").get<std::string>();
    }
    if (!j.contains("w") || !j.contains("r")) throw Error(ErrorKind::Parse, "problem needs profiles \"w\" and \"r\"");
    p.w = Profile::from_json(j.at("w"));
    p.r = Profile::from_json(j.at("r"));
    if (j.contains("q")) p.q = Profile::from_json(j.at("q"));
    if (j.contains("b")) {
        const auto& bj = j.at("b");
        if (bj.is_string() && (bj.get<std::string>() == "inf" || bj.get<std::string>() == "infinity"))
            p.b = kInf;
        else if (bj.is_number())
            p.b = bj.get<double>();
        else
            throw Error(ErrorKind::Parse, "\"b\" must be a number or \"inf\"");
    }
    if (j.contains("boundary")) {
        const std::string s = j.at("boundary").is_string() ? j.at("boundary").get<std::string>() : "";
        if (s == "neumann")
            p.boundary = Boundary::Neumann;
        else if (s == "dirichlet")
            p.boundary = Boundary::Dirichlet;
        else
            throw Error(ErrorKind::Parse, "\"boundary\" must be \"neumann\" or \"dirichlet\"");
    }
    if (j.contains("endpoint")) {
        const std::string s = j.at("endpoint").is_string() ? j.at("endpoint").get<std::string>() : "";
        if (s == "auto")
            p.endpoint = EndpointClass::Auto;
        else if (s == "regular")
            p.endpoint = EndpointClass::Regular;
        else if (s == "limit-circle")
            p.endpoint = EndpointClass::LimitCircle;
        else if (s == "limit-point")
            p.endpoint = EndpointClass::LimitPoint;
        else
            throw Error(ErrorKind::Parse, "\"endpoint\" must be auto, regular, limit-circle or limit-point");
    }
    p.validate();
    return p;
}

nlohmann::json Problem::to_json() const {
    nlohmann::json j;
    if (!name.empty()) j["name"] = name;
    j["w"] = w.to_json();
    j["r"] = r.to_json();
    j["q"] = q.to_json();
    if (b == kInf)
        j["b"] = "inf";
    else
        j["b"] = b;
    j["boundary"] = to_string(boundary);
    j["endpoint"] = to_string(endpoint);
    return j;
}

Problem Problem::swapped_dirichlet() const {
    if (!q.is_zero()) throw Error(ErrorKind::Domain, "the duality identity needs q = 0");
    Problem s = *this;
    std::swap(s.w, s.r);
    s.boundary = boundary == Boundary::Neumann ? Boundary::Dirichlet : Boundary::Neumann;
    s.endpoint = EndpointClass::Auto;
    s.name = name.empty() ? "" : name + "/swapped";
    return s;
}

std::vector<std::string> catalog_names() {
    return {"hardy-littlewood",
            "hardy-littlewood-unit",
            "atomic-a",
            "power-r2x",
            "power-w2x",
            "r-inverse-tail",
            "A_l-log",
            "factorial-weight",
            "factorial-r",
            "bounded-endpoint-w",
            "power-weight:<alpha>",
            "potential-step",
            "potential-one",
            "inverse-square-l0",
            "inverse-square-l1",
            "weight-x-l0",
            "negative-well"};
}

namespace {

double parse_param(const std::string& name, const std::string& prefix) {
    const std::string tail = name.substr(prefix.size());
    try {
        size_t used = 0;
        const double v = std::stod(tail, &used);
        if (used != tail.size()) throw std::invalid_argument(tail);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, "bad catalog parameter in \"" + name + "\"");
    }
}

Profile step(double height, double width) {
    Segment a{0.0, width, height, 0.0, 0.0, 0.0};
    Segment z{width, kInf, 0.0, 0.0, 0.0, 0.0};
    return Profile::from_segments({a, z}, Profile::Family::Piecewise);
}

} // namespace

Problem catalog(const std::string& name) {
    Problem p;
    p.name = name;
    if (name == "hardy-littlewood") {
    } else if (name == "hardy-littlewood-unit") {
        p.b = 1.0;
    } else if (name == "atomic-a" || name.rfind("atomic-a:", 0) == 0) {
        const double a = name == "atomic-a" ? 1.0 : parse_param(name, "atomic-a:");
        p.r = Profile::atomic(a);
        p.b = 1.0;
    } else if (name == "power-r2x") {
        p.r = Profile::power(2.0, 1.0);
    } else if (name == "power-w2x") {
        p.w = Profile::power(2.0, 1.0);
    } else if (name == "r-inverse-tail") {
        p.r = Profile::from_segments({Segment{0.0, 1.0, 1.0, 0.0, 0.0, 0.0}, Segment{1.0, kInf, 1.0, -1.0, 0.0, 0.0}});
    } else if (name == "A_l-log") {
        p.w = Profile::power(1.0, -1.0, 0.0, -1.0); // 1/(1+x)
    } else if (name == "factorial-weight") {
        p.w = Profile::factorial_weight();
    } else if (name == "factorial-r") {
        p.r = Profile::factorial_weight();
    } else if (name == "bounded-endpoint-w") {
        p.w = Profile::from_segments({Segment{0.0, 1.0, 1.0, -2.0, 0.0, 1.0}, Segment{1.0, kInf, 1.0, 0.0, 0.0, 0.0}});
        p.b = 1.0;
    } else if (name.rfind("power-weight:", 0) == 0) {
        const double alpha = parse_param(name, "power-weight:");
        if (!(alpha > -1.0)) throw Error(ErrorKind::Domain, "power weight needs alpha > -1");
        p.w = Profile::power(1.0, alpha);
    } else if (name == "potential-step" || name == "inverse-square-l0") {
        p.q = step(1.0, 1.0);
    } else if (name == "potential-one") {
        p.q = Profile::constant(1.0);
    } else if (name == "inverse-square-l1") {
        // -chi_[0,pi/4] + 2/(1+x-pi/4)^2 beyond pi/4
        const double x0 = kPi / 4.0;
        p.q = Profile::from_segments({Segment{0.0, x0, -1.0, 0.0, 0.0, 0.0},
                                      Segment{x0, kInf, 2.0, -2.0, 0.0, x0 - 1.0}});
    } else if (name == "weight-x-l0") {
        p.w = Profile::power(1.0, 1.0);
        p.q = step(1.0, 1.0);
    } else if (name == "negative-well") {
        p.q = step(-1.0, 1.0);
    } else {
        throw Error(ErrorKind::Parse, "unknown catalog entry \"" + name + "\"");
    }
    p.validate();
    return p;
}

} // namespace wk
