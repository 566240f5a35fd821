#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frozen_sl/errors.hpp"
#include "frozen_sl/field.hpp"
#include "frozen_sl/problem.hpp"

namespace frozen_sl {

// Entire functions of z used on the dense intervals. With w = √z:
//   cos_sqrt(z, x) = cos(w x)
//   sinc_sqrt(z, x) = sin(w x)/w
//   vers_sqrt(z, x) = (1 − cos(w x))/z = ∫_0^x sinc_sqrt(z, u) du
// All three are even in w, so no branch of √z is ever selected. Power series
// are used when |z x²| < 0.25.
Complex cos_sqrt(Complex z, double x);
Complex sinc_sqrt(Complex z, double x);
Complex vers_sqrt(Complex z, double x);

/// Value and derivative of a solution at a point, plus the frozen value
/// y(a) that drives the forcing term q(t)·y(a). S has frozen = 0, C has 1.
struct ShootState {
    Complex y;
    Complex dy;
    Complex frozen;
};

enum class IntegrationPath { ClosedForm, RungeKutta };

struct IntegrationOptions {
    IntegrationPath path = IntegrationPath::ClosedForm;
    /// RK4 steps per unit length (scaled up with |√λ|).
    int rk4_steps_per_unit = 400;
    /// Panels beyond this count raise SolverError.
    long max_panels = 2'000'000;
};

/// Solves y'' = −λ y + q(t)·frozen on [from, to] (either direction) inside one
/// dense interval.
ShootState integrate_dense(const ShootState& start, double from, double to, Complex lambda, const Potential& q,
                           const IntegrationOptions& opts = {});

/// Crosses the gap from δ1 to δ2 = δ1 + gap. `at_delta1` holds y(δ1) and the
/// left derivative y'(δ1−), which equals y^Δ(δ1) by continuity of y^Δ.
///   y(δ2)   = y(δ1) + gap·y'(δ1)
///   y'(δ2+) = y'(δ1) + gap·(q(δ1)·frozen − λ·y(δ2))
ShootState cross_gap(const ShootState& at_delta1, Complex lambda, double q_delta1, double gap);

enum class Branch { S, C };

/// The S or C solution at any t in T: value and Δ-derivative (at δ1 the
/// Δ-derivative is the left derivative).
ShootState shoot(const ProblemSpec& spec, Branch branch, Complex lambda, double t,
                 const IntegrationOptions& opts = {});

struct EndpointValues {
    BoundaryValues<Complex> S;
    BoundaryValues<Complex> C;
};

EndpointValues endpoint_values(const ProblemSpec& spec, Complex lambda, const IntegrationOptions& opts = {});

/// Δ(λ) = U(C)V(S) − V(C)U(S) on the two-interval scale.
Complex char_fn(const ProblemSpec& spec, Complex lambda, const IntegrationOptions& opts = {});

/// φ(t) = S^Δ(t)C(t) − S(t)C^Δ(t); equals 1 at a.
Complex wronskian(const ProblemSpec& spec, Complex lambda, double t, const IntegrationOptions& opts = {});

struct RealScanOptions {
    double tol = 1e-10;
    /// Grid points per π/L of √|λ|, L = total length of the dense pieces.
    int samples_per_halfwave = 24;
    IntegrationOptions integration{};
};

/// Real zeros of Δ in [lambda_min, lambda_max]: sign changes on a grid that
/// is uniform in √|λ|, refined by TOMS 748. Dips of |Δ| without a sign change
/// are resolved with an argument-principle count on a small box: a count of
/// 2 yields a double real root or a near-real conjugate pair.
Spectrum find_real_eigs(const ProblemSpec& spec, double lambda_min, double lambda_max,
                        const RealScanOptions& opts = {});

struct Box {
    double re_lo, re_hi, im_lo, im_hi;
};

struct ContourOptions {
    /// |Δ| at a contour sample relative to its neighbours, below which a zero
    /// is considered too close to the boundary.
    double boundary_floor = 1e-9;
    double max_defect = 0.25;
    /// Point doublings allowed while the estimate is unstable.
    int max_refinements = 4;
    IntegrationOptions integration{};
};

/// A zero sits too close to the contour, or the winding estimate is not
/// close to an integer.
class ContourError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Number of zeros (with multiplicity) inside `box` by the argument
/// principle: trapezoid rule for ∮ Δ'/Δ dλ / (2πi) with Δ' by central
/// differences, `quad_points` samples spread over the perimeter. Throws
/// ContourError when a zero is near the contour or the result is not close
/// to an integer.
int count_eigs_in_box(const ProblemSpec& spec, const Box& box, int quad_points, const ContourOptions& opts = {});

/// All zeros inside a box: recursive subdivision by count, Newton refinement
/// once a sub-box holds a single zero.
std::vector<Complex> find_zeros_in_box(const ProblemSpec& spec, const Box& box, int quad_points,
                                       double tol = 1e-10, const ContourOptions& opts = {});

/// Real zeros on [lambda_min, lambda_max] plus non-real zeros within
/// |Im λ| <= imag_extent over the low part of the range (below the fifth
/// predicted asymptotic eigenvalue).
Spectrum eigs_two_interval(const ProblemSpec& spec, double lambda_min, double lambda_max, double tol,
                           double imag_extent = 5.0);

// ---------------------------------------------------------------------------
// Asymptotics of √λ_n on symmetric two-interval scales
// ---------------------------------------------------------------------------

struct EigAsymptote {
    int n;
    double predicted_sqrt;  // (n−1)π / (2(β−δ2))
    double computed_sqrt;
    double residual;        // computed − predicted
};

struct AsymptoticReport {
    bool hypotheses_ok = false;
    std::string banner;  // reason when hypotheses fail
    double spacing = 0.0;  // π / (2(β−δ2))
    std::vector<EigAsymptote> rows;
    bool truncated = false;
};

/// Checks a22·b12 − a12·b22 ≠ 0 and β − δ2 = δ1 − α.
std::optional<std::string> asymptotic_hypothesis_violation(const ProblemSpec& spec);

/// Matches each computed real eigenvalue λ >= 0 to the nearest predicted
/// grid point and reports the residuals for n <= n_max.
AsymptoticReport asymptotic_table(const ProblemSpec& spec, const Spectrum& computed, int n_max);

/// Largest relative deviation of consecutive √λ spacings from report.spacing
/// for indices in [n_lo, n_hi].
double max_spacing_deviation(const AsymptoticReport& report, int n_lo, int n_hi);

/// Least-squares slope of log|residual| against log n over [n_lo, n_hi].
double residual_decay_slope(const AsymptoticReport& report, int n_lo, int n_hi);

/// A finite scale approximating the two-interval scale: the dense pieces are
/// sampled with about `cells_per_unit` cells per unit length (a is kept as a
/// grid point) and the gap stays a single scattered step.
ProblemSpec bridge_discretization(const ProblemSpec& spec, int cells_per_unit);

}  // namespace frozen_sl
