#pragma once

// Random instance generators and independent oracles shared by the test
// binaries. Nothing here calls the recurrence or root-finding code it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "frozen_sl/continuum.hpp"
#include "frozen_sl/matrix_form.hpp"
#include "frozen_sl/problem.hpp"
#include "frozen_sl/timescale.hpp"

namespace test_support {

using frozen_sl::BoundaryCoefficients;
using frozen_sl::Complex;
using frozen_sl::Potential;
using frozen_sl::ProblemSpec;
using frozen_sl::TimeScale;

inline double sqrt3() { return std::sqrt(3.0); }

/// Worked example with a double zero and a complex pair: T = {0..5}, a = 3.
inline ProblemSpec example_double_zero() {
    const std::vector<double> q{-3, 10, -5, 1};
    return frozen_sl::uniform_problem(6, {0.5, 1.0}, q, 3);
}

/// Worked example with four simple real eigenvalues: q(t) = t, a = 4.
inline ProblemSpec example_real_simple() {
    const std::vector<double> q{0, 1, 2, 3};
    return frozen_sl::uniform_problem(6, {0.0, 0.0}, q, 4);
}

/// Symmetric two-interval problem used throughout: [0,1] ∪ [2,3], a = 0.4,
/// q ≡ c, rows U = y'(α), V = y'(β).
inline ProblemSpec symmetric_two_interval(double c = 1.0) {
    BoundaryCoefficients bc;
    bc.a12 = 1;
    bc.b22 = 1;
    ProblemSpec spec{TimeScale::two_interval(0, 1, 2, 3), 0.4, Potential(frozen_sl::potential::Constant{c}), bc};
    spec.validate();
    return spec;
}

/// Dyadic numbers k/8 are exact in binary, so rational-mode checks see the
/// same data as the floating path.
inline double dyadic(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng) / 8.0;
}

inline double nonzero_dyadic(std::mt19937_64& rng, int lo, int hi) {
    double x = 0;
    while (x == 0) x = dyadic(rng, lo, hi);
    return x;
}

/// Random finite scale with n points and positive dyadic graininess.
inline std::vector<double> random_points(std::mt19937_64& rng, int n) {
    std::vector<double> pts{dyadic(rng, -16, 16)};
    for (int i = 1; i < n; ++i) pts.push_back(pts.back() + dyadic(rng, 1, 20));
    return pts;
}

inline BoundaryCoefficients random_bc(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(-3, 3);
    BoundaryCoefficients bc;
    bc.a11 = d(rng), bc.a12 = d(rng), bc.a21 = d(rng), bc.a22 = d(rng);
    bc.b11 = d(rng), bc.b12 = d(rng), bc.b21 = d(rng), bc.b22 = d(rng);
    if (bc.a11 == 0 && bc.a12 == 0 && bc.a21 == 0 && bc.a22 == 0) bc.a12 = 1;
    return bc;
}

/// Random finite problem with the frozen point at index `a_index`
/// (-1: random index in [0, n-2]).
inline ProblemSpec random_finite_problem(std::mt19937_64& rng, int n, int a_index = -1) {
    auto pts = random_points(rng, n);
    if (a_index < 0) a_index = std::uniform_int_distribution<int>(0, n - 2)(rng);
    std::vector<double> q(static_cast<std::size_t>(n - 2));
    for (auto& x : q) x = dyadic(rng, -40, 40);
    ProblemSpec spec{TimeScale::finite(pts), pts[static_cast<std::size_t>(a_index)],
                     Potential(frozen_sl::potential::Table{q}), random_bc(rng)};
    spec.validate();
    return spec;
}

/// Rewrites the b-row so that det A = 0: (b11 μα − b12, b22) = k·(a11 μα − a12, a22).
inline void force_singular_A(ProblemSpec& spec, std::mt19937_64& rng) {
    const double mu_alpha = spec.ts.mu(spec.ts.inf());
    auto& bc = spec.bc;
    const double x = bc.a11 * mu_alpha - bc.a12;
    const int k = std::uniform_int_distribution<int>(-3, 3)(rng);
    bc.b11 = std::uniform_int_distribution<int>(-3, 3)(rng);
    bc.b12 = bc.b11 * mu_alpha - k * x;
    bc.b22 = k * bc.a22;
}

// ---------------------------------------------------------------------------
// Dense complex linear algebra
// ---------------------------------------------------------------------------

using CMatrix = std::vector<std::vector<Complex>>;

/// Determinant by Gaussian elimination with partial pivoting.
inline Complex determinant(CMatrix m) {
    const std::size_t n = m.size();
    Complex det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (m[piv][c] == Complex(0.0)) return 0.0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const Complex f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

/// The full n×n linear system of a finite problem in the unknowns y(p_0..p_{n-1}):
/// n−2 rows −y^ΔΔ(t) + q(t)y(a) − λy(σt) = 0 on T^{κ²}, then the rows U and V.
/// Its determinant is a λ-independent multiple of the characteristic function.
inline CMatrix direct_system(const ProblemSpec& spec, Complex lambda) {
    const auto pts = spec.ts.points();
    const std::size_t n = pts.size();
    const std::size_t ia = spec.frozen_index();
    CMatrix m(n, std::vector<Complex>(n, 0.0));
    auto mu = [&](std::size_t i) { return pts[i + 1] - pts[i]; };
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double m0 = mu(i), m1 = mu(i + 1);
        // −y^ΔΔ = −[(y2 − y1)/m1 − (y1 − y0)/m0]/m0
        m[i][i + 2] += -1.0 / (m1 * m0);
        m[i][i + 1] += 1.0 / (m1 * m0) + 1.0 / (m0 * m0);
        m[i][i] += -1.0 / (m0 * m0);
        m[i][ia] += spec.q_at_index(i);
        m[i][i + 1] -= lambda;
    }
    auto row = [&](std::size_t r, std::array<double, 4> c) {
        const double ma = mu(0), mb = mu(n - 2);
        m[r][0] += c[0] - c[1] / ma;
        m[r][1] += c[1] / ma;
        m[r][n - 2] += c[2] - c[3] / mb;
        m[r][n - 1] += c[3] / mb;
    };
    row(n - 2, spec.bc.a_row());
    row(n - 1, spec.bc.b_row());
    return m;
}

// ---------------------------------------------------------------------------
// Continuum: plain RK4 shooting through the gap (separate from the library)
// ---------------------------------------------------------------------------

struct Rk4State {
    Complex y, dy;
};

inline Rk4State rk4(Rk4State s, double from, double to, Complex lambda, double q_const, Complex frozen,
                    int steps) {
    const double h = (to - from) / steps;
    auto f = [&](Complex y) { return -lambda * y + q_const * frozen; };
    for (int k = 0; k < steps; ++k) {
        const Complex k1y = s.dy, k1d = f(s.y);
        const Complex k2y = s.dy + 0.5 * h * k1d, k2d = f(s.y + 0.5 * h * k1y);
        const Complex k3y = s.dy + 0.5 * h * k2d, k3d = f(s.y + 0.5 * h * k2y);
        const Complex k4y = s.dy + h * k3d, k4d = f(s.y + h * k3y);
        s.y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        s.dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    return s;
}

/// Closed-form S and C for q ≡ c on a dense piece starting at a:
///   S = sin(w(t−a))/w,  C = cos(w(t−a)) + c(1 − cos(w(t−a)))/λ.
inline Rk4State closed_S(Complex lambda, double x) {
    const Complex w = std::sqrt(lambda);
    return {std::sin(w * x) / w, std::cos(w * x)};
}
inline Rk4State closed_C(Complex lambda, double x, double c) {
    const Complex w = std::sqrt(lambda);
    return {std::cos(w * x) + c * (1.0 - std::cos(w * x)) / lambda, -w * std::sin(w * x) + c * std::sin(w * x) / w};
}

// ---------------------------------------------------------------------------
// Multiset matching by brute force (small sizes)
// ---------------------------------------------------------------------------

/// Max pair distance of the min-sum assignment, by enumerating permutations.
inline double brute_force_match(const std::vector<Complex>& x, const std::vector<Complex>& y) {
    if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
    std::vector<std::size_t> perm(x.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best_sum = std::numeric_limits<double>::infinity();
    double best_max = 0.0;
    do {
        double sum = 0, mx = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = std::abs(x[i] - y[perm[i]]);
            sum += d;
            mx = std::max(mx, d);
        }
        if (sum < best_sum) best_sum = sum, best_max = mx;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best_max;
}

inline std::vector<Complex> sorted(std::vector<Complex> v) {
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

}  // namespace test_support
