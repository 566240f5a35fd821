#include "frozen_sl/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "frozen_sl/continuum.hpp"
#include "frozen_sl/errors.hpp"
#include "frozen_sl/finite_spectrum.hpp"
#include "frozen_sl/matrix_form.hpp"

namespace frozen_sl {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

std::vector<Complex> conjugated(const std::vector<Complex>& v) {
    std::vector<Complex> out;
    for (Complex z : v) out.push_back(std::conj(z));
    return out;
}

void degree_law(const ProblemSpec& spec, std::vector<CheckResult>& out) {
    const auto pred = predicted_count(spec, true);
    const int deg = char_poly<Rational>(spec).degree().value_or(-1);
    const bool ok = pred.exact ? deg == pred.count : deg < pred.count;
    out.push_back({"degree_law", ok,
                   "deg Δ = " + std::to_string(deg) + (pred.exact ? ", expected " : ", expected below ") +
                       std::to_string(pred.count)});
}

void wronskian_recurrence(const ProblemSpec& spec, std::vector<CheckResult>& out) {
    const auto phi = wronskian_table<Rational>(spec);
    const auto t = build_basis<Rational>(spec);
    const auto pts = spec.ts.points();
    bool ok = phi[spec.frozen_index()] == RationalPoly::constant(Rational(1));
    std::size_t bad = 0;
    for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
        const Rational mu = Rational(pts[i + 1]) - Rational(pts[i]);
        const Rational q(spec.q_at_index(i));
        if (!(phi[i + 1] == phi[i] - t.S[i + 1] * Rational(mu * q))) ++bad;
    }
    ok = ok && bad == 0;
    out.push_back({"wronskian_recurrence", ok,
                   ok ? "φ(a) = 1 and φ^σ = φ − μ q S^σ at every point (exact)"
                      : std::to_string(bad) + " points violate φ^σ = φ − μ q S^σ"});
}

void leading_terms(const ProblemSpec& spec, std::vector<CheckResult>& out) {
    const auto table = build_basis<Rational>(spec);
    int checked = 0, bad = 0;
    for (auto target : kAllLeadingTargets) {
        const auto pred = predict_leading<Rational>(spec, target);
        if (!pred.in_regime) continue;
        ++checked;
        if (!matches_prediction(leading_target_value(table, target), pred)) ++bad;
    }
    if (checked == 0) {
        out.push_back({"leading_terms", true, "no target in its regime (needs r >= 3, m >= 2)"});
        return;
    }
    out.push_back({"leading_terms", bad == 0,
                   std::to_string(checked - bad) + " of " + std::to_string(checked) + " targets match (exact)"});
}

void finite_spectrum_checks(const ProblemSpec& spec, const VerifyOptions& opts, std::vector<CheckResult>& out) {
    Spectrum sp;
    try {
        sp = eigs_finite(spec, {opts.tol, false});
    } catch (const DegenerateProblem&) {
        out.push_back({"eigenpair_residuals", true, "Δ ≡ 0: no discrete spectrum"});
        return;
    }
    double worst = 0.0;
    for (const auto& e : sp.eigenvalues) {
        const auto chk = check_eigenpair(spec, e.value);
        worst = std::max({worst, chk.equation_residual / chk.scale, chk.boundary_residual / chk.boundary_scale,
                          chk.sigma_min / chk.matrix_norm});
    }
    out.push_back({"eigenpair_residuals", worst <= 1e-6, "worst relative residual " + fmt(worst)});
    const auto ev = sp.expanded();
    const double d = match_distance(ev, conjugated(ev));
    out.push_back({"conjugate_closure", d <= 1e-7, "distance to conjugate multiset " + fmt(d)});

    if (!opts.have_separated) return;
    const auto pts = spec.ts.points();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i + 1] - pts[i] != 1.0) return;
    const int n = static_cast<int>(pts.size());
    std::vector<double> q;
    for (std::size_t i = 0; i + 2 < pts.size(); ++i) q.push_back(spec.q_at_index(i));
    RealMatrix m;
    try {
        m = build_Q(n, {opts.h, opts.H}, q, static_cast<int>(spec.frozen_index()));
    } catch (const SpecError&) {
        return;
    }
    const auto dense = eigs_dense(m, {opts.tol});
    const double dist = match_distance(dense.expanded(), ev);
    out.push_back({"matrix_equivalence", dist <= 1e-6, "matched distance to the eigenvalues of Q " + fmt(dist)});
}

void continuum_checks(const ProblemSpec& spec, const VerifyOptions&, std::vector<CheckResult>& out) {
    const auto& s = spec.ts.as_two_interval();
    const std::vector<Complex> probes{{3.0, 0.0}, {-7.5, 2.0}, {40.0, -6.0}, {150.0, 1.0}, {0.25, 0.25}};

    double jump = 0.0;
    for (Complex lam : probes) {
        const Complex phi1 = wronskian(spec, lam, s.delta1), phi2 = wronskian(spec, lam, s.delta2);
        const Complex s2 = shoot(spec, Branch::S, lam, s.delta2).y;
        const Complex expected = phi1 - s.gap() * spec.q.at(s.delta1) * s2;
        jump = std::max(jump, std::abs(phi2 - expected) / std::max({1.0, std::abs(phi1), std::abs(expected)}));
    }
    out.push_back({"wronskian_gap_jump", jump <= 1e-8, "worst relative defect " + fmt(jump)});

    double path = 0.0;
    const IntegrationOptions rk{IntegrationPath::RungeKutta, 2000};
    for (Complex lam : probes) {
        const Complex a = char_fn(spec, lam), b = char_fn(spec, lam, rk);
        path = std::max(path, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    out.push_back({"closed_form_vs_rk4", path <= 1e-8, "worst relative difference " + fmt(path)});

    double sym = 0.0;
    for (Complex lam : probes) {
        const Complex a = char_fn(spec, lam), b = char_fn(spec, std::conj(lam));
        sym = std::max(sym, std::abs(b - std::conj(a)) / std::max(1.0, std::abs(a)));
    }
    out.push_back({"conjugate_symmetry", sym <= 1e-12, "worst relative defect " + fmt(sym)});

    if (asymptotic_hypothesis_violation(spec)) return;
    const double spacing = std::numbers::pi / (2 * (s.beta - s.delta2));
    const double hi = std::pow(41.5 * spacing, 2);
    const auto rep = asymptotic_table(spec, find_real_eigs(spec, 0.0, hi), 40);
    if (rep.truncated) {
        out.push_back({"asymptotic_spacing", false, "fewer than 40 eigenvalues matched"});
        return;
    }
    const double dev = max_spacing_deviation(rep, 10, 40);
    const double slope = residual_decay_slope(rep, 10, 40);
    out.push_back({"asymptotic_spacing", dev <= 0.02, "max deviation over n = 10..40: " + fmt(dev)});
    out.push_back({"asymptotic_decay", slope <= -0.8, "log-log residual slope " + fmt(slope)});
}

}  // namespace

std::vector<CheckResult> verify_problem(const ProblemSpec& spec, const VerifyOptions& opts) {
    std::vector<CheckResult> out;
    if (spec.ts.is_finite()) {
        degree_law(spec, out);
        wronskian_recurrence(spec, out);
        leading_terms(spec, out);
        finite_spectrum_checks(spec, opts, out);
    } else {
        continuum_checks(spec, opts, out);
    }
    return out;
}

}  // namespace frozen_sl
