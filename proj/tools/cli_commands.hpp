#pragma once

#include <string>
#include <vector>

#include "cli_config.hpp"

namespace unihub::cli {

enum class Command { verify, spectrum, bae, perturb, fock };

Command parse_command(const std::string& name);
std::string to_string(Command c);
// Suites a command accepts; "all" is always first.
const std::vector<std::string>& suites(Command c);

// One report per model; `pass` is the conjunction of all checks.
nlohmann::json run(Command cmd, const ModelConfig& config, const std::string& suite);
// verify without a model file: R-matrix property suite over the built-in XX zoo.
nlohmann::json run_zoo(const Overrides& ov);

}  // namespace unihub::cli
