#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qes::cli {

inline constexpr const char* version = "0.1.0";

/// Runs the command line (without the program name) and returns the exit
/// code: 0 when solutions were emitted, 1 for a valid run with an empty
/// result, 2 for a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Canonical text of a JSON document: insertion-ordered keys, two-space
/// indentation, floating-point numbers as %.12e.
std::string canonical_dump(const nlohmann::ordered_json& doc);

}  // namespace qes::cli
