#include "frozen_sl/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "frozen_sl/continuum.hpp"
#include "frozen_sl/errors.hpp"
#include "frozen_sl/finite_spectrum.hpp"
#include "frozen_sl/matrix_form.hpp"
#include "frozen_sl/verify.hpp"

namespace frozen_sl {

using nlohmann::json;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// One command's result in all three renderings: the JSON document, plus a
/// table (CSV rows, or the body of the text form) and summary lines for text.
struct Report {
    json doc;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> summary;
    int exit_code = exit_status::ok;
};

std::string render(const Report& r, OutputFormat f) {
    std::ostringstream os;
    switch (f) {
        case OutputFormat::Json:
            os << r.doc.dump(2) << '\n';
            break;
        case OutputFormat::Csv: {
            auto line = [&](const std::vector<std::string>& cells) {
                for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
                os << '\n';
            };
            line(r.header);
            for (const auto& row : r.rows) line(row);
            break;
        }
        case OutputFormat::Text: {
            for (const auto& [k, v] : r.summary) os << k << ": " << v << '\n';
            if (r.header.empty()) break;
            std::vector<std::size_t> width(r.header.size());
            for (std::size_t i = 0; i < width.size(); ++i) width[i] = r.header[i].size();
            for (const auto& row : r.rows)
                for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
            if (!r.summary.empty()) os << '\n';
            auto line = [&](const std::vector<std::string>& cells) {
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    os << cells[i];
                    if (i + 1 < cells.size()) os << std::string(width[i] - cells[i].size() + 2, ' ');
                }
                os << '\n';
            };
            line(r.header);
            for (const auto& row : r.rows) line(row);
            break;
        }
    }
    return os.str();
}

void add_spectrum(Report& r, const Spectrum& sp) {
    json list = json::array();
    r.header = {"re", "im", "multiplicity", "residual"};
    for (const auto& e : sp.eigenvalues) {
        list.push_back({{"re", e.value.real()}, {"im", e.value.imag()}, {"multiplicity", e.multiplicity},
                        {"residual", e.residual}});
        r.rows.push_back({num(e.value.real()), num(e.value.imag()), std::to_string(e.multiplicity), num(e.residual)});
    }
    r.doc["eigenvalues"] = list;
    r.doc["count"] = sp.count();
    r.doc["degenerate"] = false;
    r.doc["notes"] = sp.notes;
    r.summary.push_back({"count", std::to_string(sp.count())});
    for (const auto& n : sp.notes) r.summary.push_back({"note", n});
}

json exact_coeffs(const RationalPoly& p) {
    json out = json::array();
    for (const auto& c : p.coeffs()) out.push_back(to_exact_string(c));
    return out;
}

Report degenerate_report() {
    Report r;
    r.doc = {{"eigenvalues", json::array()}, {"count", nullptr}, {"degenerate", true}};
    r.header = {"re", "im", "multiplicity", "residual"};
    r.summary = {{"degenerate", "true (Δ vanishes identically; every λ satisfies the boundary system)"}};
    r.exit_code = exit_status::degenerate;
    return r;
}

double lambda_max_or(const RunConfig& cfg, double fallback) { return cfg.lambda_max.value_or(fallback); }

Report run_eigs(const RunConfig& cfg) {
    const auto& spec = cfg.spec;
    Spectrum sp;
    try {
        if (spec.ts.is_finite()) sp = eigs_finite(spec, {cfg.tol, cfg.rational_mode});
        else sp = eigs_two_interval(spec, cfg.lambda_min, lambda_max_or(cfg, 1000.0), cfg.tol);
    } catch (const DegenerateProblem&) {
        return degenerate_report();
    }
    sp.sort();
    Report r;
    add_spectrum(r, sp);
    if (spec.ts.is_finite() && cfg.rational_mode) r.doc["char_poly_exact"] = exact_coeffs(char_poly<Rational>(spec));
    return r;
}

Report run_count(const RunConfig& cfg) {
    const auto& spec = cfg.spec;
    const auto p = predicted_count(spec, cfg.rational_mode);
    const int degree = cfg.rational_mode ? char_poly<Rational>(spec).degree().value_or(-1)
                                         : char_poly<Complex>(spec).degree().value_or(-1);
    Report r;
    const int n = static_cast<int>(spec.ts.size());
    r.doc = {{"n", n}, {"detA", p.det_a}, {"predicted", p.count}, {"exact", p.exact}, {"degree", degree}};
    if (cfg.rational_mode) r.doc["detA_exact"] = to_exact_string(det_A<Rational>(spec));
    r.header = {"n", "detA", "predicted", "exact", "degree"};
    r.rows = {{std::to_string(n), num(p.det_a), std::to_string(p.count), p.exact ? "true" : "false",
               std::to_string(degree)}};
    r.summary = {{"n", std::to_string(n)},
                 {"detA", num(p.det_a)},
                 {"predicted", p.exact ? "exactly " + std::to_string(p.count) : "fewer than " + std::to_string(p.count)},
                 {"degree of Δ", std::to_string(degree)}};
    if (cfg.rational_mode) r.summary.push_back({"detA (exact)", to_exact_string(det_A<Rational>(spec))});
    return r;
}

Report run_matrix(const RunConfig& cfg) {
    const auto& spec = cfg.spec;
    const auto bc = *separated_form(cfg);
    const int n = static_cast<int>(spec.ts.size());
    const int a = static_cast<int>(spec.frozen_index());
    std::vector<double> q;
    for (int i = 0; i + 2 < n; ++i) q.push_back(spec.q_at_index(static_cast<std::size_t>(i)));
    const auto m = build_Q(n, bc, q, a);

    DenseEigOptions opts{cfg.tol, cfg.rational_mode ? DenseMethod::ExactCharPoly : DenseMethod::Auto};
    auto sp = eigs_dense(m, opts);
    sp.sort();

    Report r;
    add_spectrum(r, sp);
    json rows = json::array();
    std::string qtext;
    for (std::size_t i = 0; i < m.dim; ++i) {
        std::vector<double> row;
        for (std::size_t j = 0; j < m.dim; ++j) {
            row.push_back(m(i, j));
            qtext += (j ? " " : "") + num(m(i, j));
        }
        rows.push_back(row);
        qtext += i + 1 < m.dim ? "\n   " : "";
    }
    r.doc["n"] = n;
    r.doc["h"] = bc.h;
    r.doc["H"] = bc.H;
    r.doc["a"] = a;
    r.doc["Q"] = rows;
    if (cfg.rational_mode) {
        const auto exact = build_Q_exact(n, bc, q, a);
        json ex = json::array();
        for (std::size_t i = 0; i < exact.dim; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < exact.dim; ++j) row.push_back(to_exact_string(exact(i, j)));
            ex.push_back(row);
        }
        r.doc["Q_exact"] = ex;
    }
    try {
        const auto poly = eigs_finite(spec, {cfg.tol, cfg.rational_mode});
        const double d = match_distance(sp.expanded(), poly.expanded());
        r.doc["polynomial_distance"] = d;
        r.summary.push_back({"distance to polynomial-path eigenvalues", num(d)});
    } catch (const DegenerateProblem&) {
        r.doc["polynomial_distance"] = nullptr;
    }
    r.summary.insert(r.summary.begin(), {"Q", qtext});
    return r;
}

Report run_charfn(const RunConfig& cfg) {
    const auto& spec = cfg.spec;
    const auto& g = cfg.grid;
    Report r;
    r.header = {"lambda", "re_delta", "im_delta"};
    json samples = json::array();
    for (int k = 0; k < g.samples; ++k) {
        const double lam = g.samples == 1 ? g.from : g.from + (g.to - g.from) * k / (g.samples - 1);
        const Complex d = spec.ts.is_finite() ? char_value(spec, lam) : char_fn(spec, lam);
        samples.push_back({{"lambda", lam}, {"re", d.real()}, {"im", d.imag()}});
        r.rows.push_back({num(lam), num(d.real()), num(d.imag())});
    }
    r.doc["samples"] = samples;
    return r;
}

Report run_asymptotics(const RunConfig& cfg) {
    const auto& spec = cfg.spec;
    const auto& s = spec.ts.as_two_interval();
    const double spacing = std::numbers::pi / (2 * (s.beta - s.delta2));
    const double hi = lambda_max_or(cfg, std::pow((cfg.n_max + 1.5) * spacing, 2));
    const auto computed = find_real_eigs(spec, std::min(cfg.lambda_min, 0.0), hi, {cfg.tol});
    const auto rep = asymptotic_table(spec, computed, cfg.n_max);

    Report r;
    r.header = {"n", "predicted_sqrt", "computed_sqrt", "residual", "n_residual"};
    json rows = json::array();
    for (const auto& row : rep.rows) {
        rows.push_back({{"n", row.n},
                        {"predicted_sqrt", row.predicted_sqrt},
                        {"computed_sqrt", row.computed_sqrt},
                        {"residual", row.residual},
                        {"n_residual", row.n * row.residual}});
        r.rows.push_back({std::to_string(row.n), num(row.predicted_sqrt), num(row.computed_sqrt), num(row.residual),
                          num(row.n * row.residual)});
    }
    r.doc = {{"hypotheses_ok", rep.hypotheses_ok}, {"banner", rep.banner}, {"spacing", rep.spacing},
             {"truncated", rep.truncated},         {"rows", rows}};
    r.summary = {{"spacing", num(rep.spacing)}, {"hypotheses", rep.hypotheses_ok ? "satisfied" : rep.banner}};
    if (rep.truncated) r.summary.push_back({"truncated", "fewer eigenvalues than n_max were matched"});
    if (rep.hypotheses_ok && cfg.n_max >= 12) {
        const int lo = std::min(10, cfg.n_max - 2);
        const double dev = max_spacing_deviation(rep, lo, cfg.n_max);
        const double slope = residual_decay_slope(rep, lo, cfg.n_max);
        r.doc["window"] = {lo, cfg.n_max};
        r.doc["max_spacing_deviation"] = dev;
        r.doc["decay_slope"] = slope;
        r.summary.push_back({"window", std::to_string(lo) + ".." + std::to_string(cfg.n_max)});
        r.summary.push_back({"max spacing deviation", num(dev)});
        r.summary.push_back({"log-log residual slope", num(slope)});
    }
    return r;
}

Report run_verify(const RunConfig& cfg) {
    VerifyOptions opts;
    opts.tol = cfg.tol;
    if (const auto sep = separated_form(cfg)) {
        opts.have_separated = true;
        opts.h = sep->h;
        opts.H = sep->H;
    }
    const auto checks = verify_problem(cfg.spec, opts);
    Report r;
    r.header = {"name", "passed", "detail"};
    json list = json::array();
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed;
        list.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        std::string detail = c.detail;
        if (detail.find(',') != std::string::npos) detail = "\"" + detail + "\"";
        r.rows.push_back({c.name, c.passed ? "true" : "false", detail});
    }
    r.doc = {{"checks", list}, {"passed", all}};
    r.summary = {{"passed", all ? "all" : "some checks failed"}};
    r.exit_code = all ? exit_status::ok : exit_status::checks_failed;
    return r;
}

}  // namespace

RunResult error_result(const std::exception& e) {
    json err{{"message", e.what()}};
    int code = exit_status::solver_failure;
    if (const auto* s = dynamic_cast<const SpecError*>(&e)) {
        err["kind"] = "input";
        err["field"] = s->field();
        // The field is already part of what(); keep the bare message separate.
        const std::string w = s->what();
        err["message"] = w.substr(std::min(w.size(), s->field().size() + 2));
        code = exit_status::bad_input;
    } else if (dynamic_cast<const DomainError*>(&e)) {
        err["kind"] = "domain";
        code = exit_status::bad_input;
    } else if (dynamic_cast<const SolverError*>(&e)) {
        err["kind"] = "solver";
    } else if (dynamic_cast<const DegenerateProblem*>(&e)) {
        err["kind"] = "degenerate";
        code = exit_status::degenerate;
    } else {
        err["kind"] = "internal";
    }
    return {code, json{{"error", err}}.dump(2) + "\n"};
}

RunResult run(const RunConfig& cfg) {
    try {
        validate_for_command(cfg);
        Report r;
        switch (cfg.command) {
            case Command::Eigs: r = run_eigs(cfg); break;
            case Command::Count: r = run_count(cfg); break;
            case Command::Matrix: r = run_matrix(cfg); break;
            case Command::Charfn: r = run_charfn(cfg); break;
            case Command::Asymptotics: r = run_asymptotics(cfg); break;
            case Command::Verify: r = run_verify(cfg); break;
        }
        r.doc["command"] = std::string(to_string(cfg.command));
        return {r.exit_code, render(r, cfg.output)};
    } catch (const std::exception& e) {
        return error_result(e);
    }
}

}  // namespace frozen_sl
