// frozen-sl <command> --config <path> [--tol X] [--lambda-max X] [--n-max N]
//           [--output json|csv|text] [--rational]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "frozen_sl/config.hpp"
#include "frozen_sl/errors.hpp"
#include "frozen_sl/run.hpp"

using namespace frozen_sl;

int main(int argc, char** argv) {
    CLI::App app{"Eigenvalues of Sturm-Liouville problems with a frozen argument on time scales"};
    app.require_subcommand(1);

    std::string config_path, output;
    std::optional<double> tol, lambda_max;
    std::optional<int> n_max;
    bool rational = false;

    const std::pair<const char*, const char*> commands[]{
        {"eigs", "eigenvalues with multiplicities"},
        {"count", "eigenvalue count predicted from the boundary coefficients"},
        {"matrix", "reduced matrix Q and its eigenvalues (unit-step finite scales)"},
        {"charfn", "characteristic function on a real lambda grid"},
        {"asymptotics", "square roots of eigenvalues against the predicted grid"},
        {"verify", "property checks for the configured problem"},
    };
    for (const auto& [name, about] : commands) {
        auto* sub = app.add_subcommand(name, about);
        sub->add_option("--config", config_path, "problem description (JSON)")->required();
        sub->add_option("--tol", tol, "root and scan tolerance");
        sub->add_option("--lambda-max", lambda_max, "upper end of the real scan");
        sub->add_option("--n-max", n_max, "largest asymptotic index");
        sub->add_option("--output", output, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_flag("--rational", rational, "exact rational arithmetic on finite scales");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_status::bad_input;
    }

    RunResult result;
    try {
        std::ifstream in(config_path);
        if (!in) throw SpecError("config", "cannot read " + config_path);
        std::stringstream text;
        text << in.rdbuf();
        RunConfig cfg = parse_config(text.str());
        cfg.command = parse_command(app.get_subcommands().front()->get_name());
        if (tol) cfg.tol = *tol;
        if (lambda_max) cfg.lambda_max = *lambda_max;
        if (n_max) cfg.n_max = *n_max;
        if (!output.empty()) cfg.output = parse_output_format(output);
        if (rational) cfg.rational_mode = true;
        if (!(cfg.tol > 0)) throw SpecError("tol", "must be positive");
        if (cfg.n_max < 1) throw SpecError("n_max", "must be at least 1");
        if (cfg.lambda_max && !(*cfg.lambda_max >= cfg.lambda_min))
            throw SpecError("lambda_max", "must not be below lambda_min");
        result = run(cfg);
    } catch (const std::exception& e) {
        result = error_result(e);
    }
    std::cout << result.output << std::flush;
    return result.exit_code;
}
