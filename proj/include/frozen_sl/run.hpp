#pragma once

#include <exception>
#include <string>

#include "frozen_sl/config.hpp"

namespace frozen_sl {

/// Process exit codes of the command-line tool.
namespace exit_status {
inline constexpr int ok = 0;
inline constexpr int checks_failed = 1;  // verify: at least one check failed
inline constexpr int bad_input = 2;      // config, usage or domain error
inline constexpr int degenerate = 3;     // Δ ≡ 0
inline constexpr int solver_failure = 4;
}  // namespace exit_status

struct RunResult {
    int exit_code = exit_status::ok;
    std::string output;  // complete document in the requested format
};

/// Dispatches a validated config. Solver and input failures are caught and
/// turned into an error document.
RunResult run(const RunConfig& cfg);

/// {"error": {"kind", "field", "message"}} with the matching exit code.
RunResult error_result(const std::exception& e);

}  // namespace frozen_sl
