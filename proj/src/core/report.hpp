#pragma once

#include "indefinite.hpp"

#include <json.hpp>
#include <string>
#include <vector>

namespace wk {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit classes shared by the C API and the CLI.
enum class VerdictClass { Positive = 0, Negative = 1, Inconclusive = 2 };

struct Report {
    nlohmann::json body;
    VerdictClass verdict = VerdictClass::Positive;
};

std::string format_complex(cplx z);
/// Accepts "a+bi", "a-bi", "bi", "i", "-i" and plain reals.
cplx parse_complex(const std::string& s);

std::vector<std::string> command_names();

/// Runs one analysis. `options` holds the command's flags; unknown keys are a Parse error.
Report run_command(const std::string& command, const Problem& p, const nlohmann::json& options);

/// CSV rendering of body["table"].
std::string table_csv(const nlohmann::json& body);

} // namespace wk
