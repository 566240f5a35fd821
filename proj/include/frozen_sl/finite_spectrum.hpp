#pragma once

#include <array>
#include <cmath>
#include <type_traits>
#include <string_view>
#include <vector>

#include "frozen_sl/polynomial.hpp"
#include "frozen_sl/problem.hpp"

namespace frozen_sl {

// ---------------------------------------------------------------------------
// Three-term recurrence
//
// On a finite scale every point of T^{κ²} is right-scattered, and
//     -y^{ΔΔ}(t) + q(t) y(a) = λ y(σ(t))
// with the quotient-of-differences definition of y^{ΔΔ} becomes
//     y(σ²t) = y(σt)·(1 + μσ/μ − λ μ μσ) − (μσ/μ)·y(t) + μ μσ q(t) y(a),
// μ = μ(t), μσ = μ(σ(t)). The frozen value y(a) is 0 for S and 1 for C.
// ---------------------------------------------------------------------------

/// y(σ²t) from y(t) = prev and y(σt) = cur.
template <class F>
Polynomial<F> step_forward(const Polynomial<F>& prev, const Polynomial<F>& cur, const F& mu,
                           const F& mu_sigma, const F& q_t, const F& frozen_val);

/// y(t) from y(σt) = next and y(σ²t) = next2 (the forward relation solved
/// for y(t); its coefficient −μσ/μ never vanishes).
template <class F>
Polynomial<F> step_backward(const Polynomial<F>& next2, const Polynomial<F>& next, const F& mu,
                            const F& mu_sigma, const F& q_t, const F& frozen_val);

/// S, C and their Δ-derivatives at every grid point. Indexing follows the
/// grid: S[i] = S(p_i, ·); dS[i] = S^Δ(p_i, ·) for i < n − 1.
template <class V>
struct BasisTable {
    std::vector<V> S, C;
    std::vector<V> dS, dC;

    BoundaryValues<V> boundary_S() const { return boundary(S, dS); }
    BoundaryValues<V> boundary_C() const { return boundary(C, dC); }

private:
    static BoundaryValues<V> boundary(const std::vector<V>& y, const std::vector<V>& dy) {
        const auto n = y.size();
        // β = p_{n-2}; y^Δ(β) is the forward quotient towards sup T.
        return {y[0], dy[0], y[n - 2], dy[n - 2]};
    }
};

/// Polynomial tables in λ (exact when F = Rational).
template <class F>
BasisTable<Polynomial<F>> build_basis(const ProblemSpec& spec);

/// The same tables evaluated at one complex λ by running the recurrence on
/// numbers (stable for long grids, unlike expanding the polynomials).
BasisTable<Complex> evaluate_basis(const ProblemSpec& spec, Complex lambda);

/// Δ(λ) = U(C)V(S) − V(C)U(S).
template <class F>
Polynomial<F> char_poly(const ProblemSpec& spec);

/// Δ at a single λ via evaluate_basis.
Complex char_value(const ProblemSpec& spec, Complex lambda);

/// det [[a11 μ(α) − a12, b11 μ(α) − b12], [a22, b22]]
template <class F>
F det_A(const ProblemSpec& spec);

struct CountPrediction {
    int count;   // n − 2
    bool exact;  // true: exactly count eigenvalues; false: strictly fewer
    double det_a;
};

/// Eigenvalue count from det A. In rational mode the zero test is exact;
/// otherwise |det A| <= 1e-12·(product of the row norms of A) counts as zero.
CountPrediction predicted_count(const ProblemSpec& spec, bool rational);

struct FiniteSolveOptions {
    double tol = 1e-10;
    bool rational = false;
};

/// Eigenvalues = roots of Δ. Each residual is the smallest singular value of
/// [[U(C), U(S)], [V(C), V(S)]] at the eigenvalue.
/// Throws DegenerateProblem when Δ ≡ 0.
Spectrum eigs_finite(const ProblemSpec& spec, FiniteSolveOptions opts = {});

// ---------------------------------------------------------------------------
// Leading-term predictors
// ---------------------------------------------------------------------------

enum class LeadingTarget {
    SAlpha,
    SSigmaAlpha,
    SBeta,
    SSigmaBeta,
    CAlpha,
    CSigmaAlpha,
    CBeta,
    CSigmaBeta,
    WronskianAlpha,  // S^σ(α)C(α) − S(α)C^σ(α)
    WronskianBeta,   // S^σ(β)C(β) − S(β)C^σ(β)
};

inline constexpr std::array<LeadingTarget, 10> kAllLeadingTargets{
    LeadingTarget::SAlpha,      LeadingTarget::SSigmaAlpha, LeadingTarget::SBeta,
    LeadingTarget::SSigmaBeta,  LeadingTarget::CAlpha,      LeadingTarget::CSigmaAlpha,
    LeadingTarget::CBeta,       LeadingTarget::CSigmaBeta,  LeadingTarget::WronskianAlpha,
    LeadingTarget::WronskianBeta};

std::string_view to_string(LeadingTarget t);

template <class F>
struct LeadingTermPrediction {
    LeadingTarget target;
    bool in_regime = false;  // false: closed form not applicable, fields unset
    int degree = 0;
    F coefficient{};
};

/// Closed-form (degree, leading coefficient) of a basis quantity in terms of
/// the graininess around a. Regimes: the eight basis targets need r >= 3 and
/// m >= 2 (C at β additionally m >= 3); the Wronskian at α needs r >= 3 and at
/// β needs m >= 3. Outside its regime a target is returned with in_regime
/// unset; the formulas are never extrapolated.
template <class F>
LeadingTermPrediction<F> predict_leading(const ProblemSpec& spec, LeadingTarget target);

/// The polynomial has no term above pred.degree and its λ^degree coefficient
/// equals pred.coefficient (exactly for rationals, to `rel_tol` otherwise).
/// A zero predicted coefficient (q vanishing where the formula samples it)
/// thus asks for a strictly lower degree.
template <class F>
bool matches_prediction(const Polynomial<F>& p, const LeadingTermPrediction<F>& pred, double rel_tol = 0.0) {
    if (!pred.in_regime) return false;
    if (p.degree().value_or(-1) > pred.degree) return false;
    const F c = p.coeff(static_cast<std::size_t>(pred.degree));
    if constexpr (std::is_same_v<F, Rational>) {
        return c == pred.coefficient;
    } else {
        return std::abs(c - pred.coefficient) <= rel_tol * std::abs(pred.coefficient);
    }
}

/// The polynomial a target refers to, read off a basis table.
template <class F>
Polynomial<F> leading_target_value(const BasisTable<Polynomial<F>>& table, LeadingTarget target);

/// φ(t) = [S^σ(t)C(t) − S(t)C^σ(t)] / μ(t) for every t in T^κ (from the
/// definition, not from the φ recurrences).
template <class F>
std::vector<Polynomial<F>> wronskian_table(const ProblemSpec& spec);

// ---------------------------------------------------------------------------
// Eigenpair diagnostics
// ---------------------------------------------------------------------------

struct Matrix2 {
    std::array<Complex, 4> m;  // row-major
};

/// [[U(C), U(S)], [V(C), V(S)]] at λ.
Matrix2 system_matrix(const ProblemSpec& spec, Complex lambda);

struct SmallestSingular {
    double sigma_min;
    double norm;  // spectral norm
    std::array<Complex, 2> null_vector;
};

SmallestSingular smallest_singular(const Matrix2& m);

struct EigenpairCheck {
    double sigma_min;
    double matrix_norm;
    double equation_residual;  // max over T^{κ²} of |−y^{ΔΔ} + q y(a) − λ y^σ|
    double boundary_residual;  // max(|U(y)|, |V(y)|)
    double scale;              // reference magnitude for the equation residual
    double boundary_scale;     // row size · max(|y|, |y^Δ|), at least the 2×2 norm
    std::vector<Complex> y;    // eigenfunction at every grid point
};

/// Builds y = δ1·C + δ2·S from the null vector of the system matrix and
/// measures how well it solves the equation and both boundary conditions.
EigenpairCheck check_eigenpair(const ProblemSpec& spec, Complex lambda);

}  // namespace frozen_sl
