#include "frozen_sl/config.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "frozen_sl/errors.hpp"
#include "frozen_sl/field.hpp"

namespace frozen_sl {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw SpecError(join(path, key), "missing");
    return *it;
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw SpecError(path.empty() ? "config" : path, "expected an object");
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
        if (!keys.count(key)) throw SpecError(join(path, key), "unknown key");
}

double number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) throw SpecError(path, "expected a number or a string \"p/q\"");
    const auto s = j.get<std::string>();
    if (s.find('/') != std::string::npos) {
        Rational r;
        if (r.set_str(s, 10) != 0) throw SpecError(path, "malformed fraction \"" + s + "\"");
        if (r.get_den() == 0) throw SpecError(path, "zero denominator");
        r.canonicalize();
        return r.get_d();
    }
    double x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw SpecError(path, "malformed number \"" + s + "\"");
    return x;
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) throw SpecError(path, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], indexed(path, i)));
    return out;
}

TimeScale parse_timescale(const json& j) {
    const std::string path = "timescale";
    require_object(j, path);
    const auto type = require(j, path, "type");
    if (type == "finite") {
        reject_unknown(j, path, {"type", "points"});
        return TimeScale::finite(numbers(require(j, path, "points"), "timescale.points"));
    }
    if (type == "two_interval") {
        reject_unknown(j, path, {"type", "alpha", "delta1", "delta2", "beta"});
        auto get = [&](const char* k) { return number(require(j, path, k), join(path, k)); };
        return TimeScale::two_interval(get("alpha"), get("delta1"), get("delta2"), get("beta"));
    }
    throw SpecError("timescale.type", "expected \"finite\" or \"two_interval\"");
}

Potential parse_potential(const json& j) {
    const std::string path = "potential";
    require_object(j, path);
    const auto type = require(j, path, "type");
    if (type == "const") {
        reject_unknown(j, path, {"type", "value"});
        return Potential(potential::Constant{number(require(j, path, "value"), "potential.value")});
    }
    if (type == "poly") {
        reject_unknown(j, path, {"type", "coeffs"});
        auto c = numbers(require(j, path, "coeffs"), "potential.coeffs");
        if (c.empty()) throw SpecError("potential.coeffs", "needs at least one coefficient");
        return Potential(potential::PolynomialInT{std::move(c)});
    }
    if (type == "table") {
        reject_unknown(j, path, {"type", "values"});
        return Potential(potential::Table{numbers(require(j, path, "values"), "potential.values")});
    }
    if (type == "sampled") {
        reject_unknown(j, path, {"type", "grid", "values"});
        return Potential(potential::Sampled{numbers(require(j, path, "grid"), "potential.grid"),
                                            numbers(require(j, path, "values"), "potential.values")});
    }
    throw SpecError("potential.type", "expected \"const\", \"poly\", \"table\" or \"sampled\"");
}

void parse_boundary(const json& j, RunConfig& cfg) {
    const std::string path = "boundary";
    require_object(j, path);
    reject_unknown(j, path, {"general", "separated"});
    const bool g = j.contains("general"), s = j.contains("separated");
    if (g == s) throw SpecError(path, "give exactly one of \"general\" or \"separated\"");
    if (s) {
        const auto& sep = j["separated"];
        require_object(sep, "boundary.separated");
        reject_unknown(sep, "boundary.separated", {"h", "H"});
        SeparatedBC bc{number(require(sep, "boundary.separated", "h"), "boundary.separated.h"),
                       number(require(sep, "boundary.separated", "H"), "boundary.separated.H")};
        cfg.separated = bc;
        cfg.spec.bc = bc_to_general(bc);
        return;
    }
    const auto& gen = j["general"];
    require_object(gen, "boundary.general");
    reject_unknown(gen, "boundary.general", {"a", "b"});
    auto row = [&](const char* key) {
        const std::string p = join("boundary.general", key);
        const auto v = numbers(require(gen, "boundary.general", key), p);
        if (v.size() != 4) throw SpecError(p, "expected 4 coefficients (y(α), y^Δ(α), y(β), y^Δ(β))");
        return v;
    };
    const auto a = row("a"), b = row("b");
    auto& bc = cfg.spec.bc;
    bc.a11 = a[0], bc.a12 = a[1], bc.a21 = a[2], bc.a22 = a[3];
    bc.b11 = b[0], bc.b12 = b[1], bc.b21 = b[2], bc.b22 = b[3];
}

void parse_solver(const json& j, RunConfig& cfg) {
    const std::string path = "solver";
    require_object(j, path);
    reject_unknown(j, path, {"tol", "lambda_min", "lambda_max", "n_max", "rational", "charfn", "command", "output"});
    if (j.contains("tol")) cfg.tol = number(j["tol"], "solver.tol");
    if (j.contains("lambda_min")) cfg.lambda_min = number(j["lambda_min"], "solver.lambda_min");
    if (j.contains("lambda_max")) cfg.lambda_max = number(j["lambda_max"], "solver.lambda_max");
    if (j.contains("n_max")) {
        if (!j["n_max"].is_number_integer()) throw SpecError("solver.n_max", "expected an integer");
        cfg.n_max = j["n_max"].get<int>();
    }
    if (j.contains("rational")) {
        if (!j["rational"].is_boolean()) throw SpecError("solver.rational", "expected true or false");
        cfg.rational_mode = j["rational"].get<bool>();
    }
    if (j.contains("command")) {
        if (!j["command"].is_string()) throw SpecError("solver.command", "expected a string");
        cfg.command = parse_command(j["command"].get<std::string>());
    }
    if (j.contains("output")) {
        if (!j["output"].is_string()) throw SpecError("solver.output", "expected a string");
        cfg.output = parse_output_format(j["output"].get<std::string>());
    }
    if (j.contains("charfn")) {
        const auto& g = j["charfn"];
        require_object(g, "solver.charfn");
        reject_unknown(g, "solver.charfn", {"from", "to", "samples"});
        if (g.contains("from")) cfg.grid.from = number(g["from"], "solver.charfn.from");
        if (g.contains("to")) cfg.grid.to = number(g["to"], "solver.charfn.to");
        if (g.contains("samples")) {
            if (!g["samples"].is_number_integer()) throw SpecError("solver.charfn.samples", "expected an integer");
            cfg.grid.samples = g["samples"].get<int>();
        }
    }
}

void check_settings(const RunConfig& cfg) {
    if (!(cfg.tol > 0) || !std::isfinite(cfg.tol)) throw SpecError("solver.tol", "must be a positive real");
    if (!std::isfinite(cfg.lambda_min)) throw SpecError("solver.lambda_min", "must be finite");
    if (cfg.lambda_max) {
        if (!std::isfinite(*cfg.lambda_max)) throw SpecError("solver.lambda_max", "must be finite");
        if (*cfg.lambda_max < cfg.lambda_min) throw SpecError("solver.lambda_max", "must not be below lambda_min");
    }
    if (cfg.n_max < 1) throw SpecError("solver.n_max", "must be at least 1");
    if (cfg.grid.samples < 0) throw SpecError("solver.charfn.samples", "must not be negative");
    if (!std::isfinite(cfg.grid.from) || !std::isfinite(cfg.grid.to))
        throw SpecError("solver.charfn", "grid ends must be finite");
}

json potential_to_json(const Potential& q) {
    return std::visit(
        [](const auto& p) -> json {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, potential::Constant>) return {{"type", "const"}, {"value", p.value}};
            else if constexpr (std::is_same_v<P, potential::PolynomialInT>) return {{"type", "poly"}, {"coeffs", p.coeffs}};
            else if constexpr (std::is_same_v<P, potential::Table>) return {{"type", "table"}, {"values", p.values}};
            else return {{"type", "sampled"}, {"grid", p.grid}, {"values", p.values}};
        },
        q.rep());
}

}  // namespace

std::string_view to_string(Command c) {
    switch (c) {
        case Command::Eigs: return "eigs";
        case Command::Count: return "count";
        case Command::Matrix: return "matrix";
        case Command::Charfn: return "charfn";
        case Command::Asymptotics: return "asymptotics";
        case Command::Verify: return "verify";
    }
    return "?";
}

std::string_view to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Json: return "json";
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Text: return "text";
    }
    return "?";
}

Command parse_command(std::string_view name) {
    for (Command c : {Command::Eigs, Command::Count, Command::Matrix, Command::Charfn, Command::Asymptotics,
                      Command::Verify})
        if (to_string(c) == name) return c;
    throw SpecError("command", "unknown command \"" + std::string(name) +
                                   "\" (eigs, count, matrix, charfn, asymptotics, verify)");
}

OutputFormat parse_output_format(std::string_view name) {
    for (OutputFormat f : {OutputFormat::Json, OutputFormat::Csv, OutputFormat::Text})
        if (to_string(f) == name) return f;
    throw SpecError("output", "unknown format \"" + std::string(name) + "\" (json, csv, text)");
}

RunConfig config_from_json(const json& doc) {
    require_object(doc, "");
    reject_unknown(doc, "", {"timescale", "frozen_argument", "potential", "boundary", "solver"});
    RunConfig cfg(ProblemSpec{parse_timescale(require(doc, "", "timescale")),
                              number(require(doc, "", "frozen_argument"), "frozen_argument"),
                              parse_potential(require(doc, "", "potential")), BoundaryCoefficients{}});
    parse_boundary(require(doc, "", "boundary"), cfg);
    if (doc.contains("solver")) parse_solver(doc["solver"], cfg);
    cfg.spec.validate();
    check_settings(cfg);
    return cfg;
}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError("config", std::string("not valid JSON: ") + e.what());
    }
    return config_from_json(doc);
}

json config_to_json(const RunConfig& cfg) {
    json doc;
    const auto& ts = cfg.spec.ts;
    if (ts.is_finite()) {
        doc["timescale"] = {{"type", "finite"}, {"points", ts.as_finite().points}};
    } else {
        const auto& s = ts.as_two_interval();
        doc["timescale"] = {
            {"type", "two_interval"}, {"alpha", s.alpha}, {"delta1", s.delta1}, {"delta2", s.delta2}, {"beta", s.beta}};
    }
    doc["frozen_argument"] = cfg.spec.a;
    doc["potential"] = potential_to_json(cfg.spec.q);
    if (cfg.separated) {
        doc["boundary"] = {{"separated", {{"h", cfg.separated->h}, {"H", cfg.separated->H}}}};
    } else {
        const auto a = cfg.spec.bc.a_row(), b = cfg.spec.bc.b_row();
        doc["boundary"] = {{"general", {{"a", a}, {"b", b}}}};
    }
    json solver{{"tol", cfg.tol},
                {"lambda_min", cfg.lambda_min},
                {"n_max", cfg.n_max},
                {"rational", cfg.rational_mode},
                {"command", std::string(to_string(cfg.command))},
                {"output", std::string(to_string(cfg.output))},
                {"charfn", {{"from", cfg.grid.from}, {"to", cfg.grid.to}, {"samples", cfg.grid.samples}}}};
    if (cfg.lambda_max) solver["lambda_max"] = *cfg.lambda_max;
    doc["solver"] = solver;
    return doc;
}

std::string serialize_config(const RunConfig& cfg) { return config_to_json(cfg).dump(2); }

std::optional<SeparatedBC> separated_form(const RunConfig& cfg) {
    if (cfg.separated) return cfg.separated;
    const auto& bc = cfg.spec.bc;
    if (bc.a12 == 1 && bc.a21 == 0 && bc.a22 == 0 && bc.b11 == 0 && bc.b12 == 0 && bc.b22 == 1)
        return SeparatedBC{bc.a11, -bc.b21};
    return std::nullopt;
}

void validate_for_command(const RunConfig& cfg) {
    const auto& ts = cfg.spec.ts;
    switch (cfg.command) {
        case Command::Count:
            if (!ts.is_finite()) throw SpecError("timescale.type", "count needs a finite time scale");
            break;
        case Command::Asymptotics:
            if (ts.is_finite()) throw SpecError("timescale.type", "asymptotics needs a two-interval time scale");
            break;
        case Command::Matrix: {
            if (!ts.is_finite()) throw SpecError("timescale.type", "matrix needs a finite time scale");
            const auto pts = ts.points();
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                if (pts[i + 1] - pts[i] != 1.0)
                    throw SpecError("timescale.points", "matrix needs consecutive points spaced by exactly 1");
            if (!separated_form(cfg))
                throw SpecError("boundary", "matrix needs separated conditions y^Δ(α) + h y(α) = 0, y^Δ(β) − H y(β) = 0");
            break;
        }
        case Command::Eigs:
        case Command::Charfn:
        case Command::Verify:
            break;
    }
}

}  // namespace frozen_sl
