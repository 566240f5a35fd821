#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "frozen_sl/matrix_form.hpp"
#include "frozen_sl/problem.hpp"

namespace frozen_sl {

enum class Command { Eigs, Count, Matrix, Charfn, Asymptotics, Verify };
enum class OutputFormat { Json, Csv, Text };

std::string_view to_string(Command c);
std::string_view to_string(OutputFormat f);
/// Throws SpecError("command" / "output") for unknown names.
Command parse_command(std::string_view name);
OutputFormat parse_output_format(std::string_view name);

/// Real λ grid for `charfn`: `samples` evenly spaced points on [from, to].
struct CharfnGrid {
    double from = -10.0;
    double to = 100.0;
    int samples = 111;
};

struct RunConfig {
    explicit RunConfig(ProblemSpec s) : spec(std::move(s)) {}

    ProblemSpec spec;
    /// Set when the boundary block was given as {"separated": {h, H}}.
    std::optional<SeparatedBC> separated;
    Command command = Command::Eigs;
    double tol = 1e-10;
    double lambda_min = -100.0;
    /// Absent: command default (1000 for eigs, derived from n_max for
    /// asymptotics).
    std::optional<double> lambda_max;
    int n_max = 40;
    OutputFormat output = OutputFormat::Json;
    bool rational_mode = false;
    CharfnGrid grid;
};

/// Parses and validates a config document. Numbers may be JSON numbers or
/// strings holding a decimal or an exact fraction "p/q". Every failure is a
/// SpecError whose field is the dotted path of the offending entry.
RunConfig parse_config(std::string_view text);
RunConfig config_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const RunConfig& cfg);
std::string serialize_config(const RunConfig& cfg);

/// Command-specific requirements (matrix: unit-step finite scale with
/// separated conditions; asymptotics: two-interval scale; count: finite).
void validate_for_command(const RunConfig& cfg);

/// The separated conditions a config's boundary rows encode, if any: either
/// given directly or general rows of the exact form (h, 1, 0, 0), (0, 0, −H, 1).
std::optional<SeparatedBC> separated_form(const RunConfig& cfg);

}  // namespace frozen_sl
