#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frozen_sl/field.hpp"
#include "frozen_sl/polynomial.hpp"
#include "frozen_sl/problem.hpp"

namespace frozen_sl {

/// Separated conditions on T = {0, 1, ..., n−1}:
///   y^Δ(0) + h·y(0) = 0,   y^Δ(n−2) − H·y(n−2) = 0.
/// The sign of H is the one under which eliminating y(n−1) leaves 1 − H in
/// the bottom-right corner of the reduced matrix.
struct SeparatedBC {
    double h = 0.0;
    double H = 0.0;
};

/// Square row-major matrix.
template <class T>
struct DenseMatrix {
    std::size_t dim = 0;
    std::vector<T> data;

    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t d) : dim(d), data(d * d, T(0)) {}

    T& operator()(std::size_t i, std::size_t j) { return data[i * dim + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data[i * dim + j]; }

    T trace() const {
        T s(0);
        for (std::size_t i = 0; i < dim; ++i) s += (*this)(i, i);
        return s;
    }
};

using RealMatrix = DenseMatrix<double>;
using RationalMatrix = DenseMatrix<Rational>;

struct BuildQOptions {
    /// Admit a = 0 by folding the q-column through y(0) = y(1)/(1 − h).
    /// This goes beyond the printed Q2, whose columns address y(1..n−2).
    bool allow_a_zero = false;
};

/// Q = Q1 + Q2 of size (n−2)×(n−2): Q1 tridiagonal (−1, 2, −1) with corners
/// 2 − 1/(1−h) and 1 − H; Q2 zero except column a, which holds q(0..n−3).
/// `q` has n − 2 entries. Throws SpecError for h = 1 or a outside [1, n−2].
RealMatrix build_Q(int n, SeparatedBC bc, std::span<const double> q, int a, BuildQOptions opts = {});
/// Same matrix with exact entries (inputs converted exactly from double).
RationalMatrix build_Q_exact(int n, SeparatedBC bc, std::span<const double> q, int a,
                             BuildQOptions opts = {});

BoundaryCoefficients bc_to_general(SeparatedBC bc);

/// The finite-scale problem that Q represents: T = {0..n−1}, table potential.
ProblemSpec uniform_problem(int n, SeparatedBC bc, std::span<const double> q, int a);

/// det(λI − M) by Faddeev–LeVerrier in exact arithmetic.
RationalPoly faddeev_leverrier(const RationalMatrix& m);

enum class DenseMethod { Auto, ExactCharPoly, HessenbergQR };

struct DenseEigOptions {
    double tol = 1e-10;
    DenseMethod method = DenseMethod::Auto;  // Auto: exact route for dim <= 12
};

/// All eigenvalues with algebraic multiplicities (clustered as in
/// find_roots). Residual: ‖(M − λI)v‖ for an inverse-iteration vector v.
/// Throws SolverError when the QR iteration exceeds 30·dim sweeps for one
/// eigenvalue.
Spectrum eigs_dense(const RealMatrix& m, DenseEigOptions opts = {});

/// Raw eigenvalues (no clustering) by balancing, Householder reduction to
/// upper Hessenberg form and Francis double-shift QR.
std::vector<Complex> hessenberg_qr_eigenvalues(const RealMatrix& m);

/// Unit vector v with (M − λI)v ≈ 0 by inverse iteration.
std::vector<Complex> eigenvector(const RealMatrix& m, Complex lambda);

/// y(0..n−1) from the interior values y(1..n−2) using the boundary relations
/// y(0) = y(1)/(1−h) and y(n−1) = (1+H)·y(n−2).
std::vector<Complex> reconstruct_sequence(SeparatedBC bc, std::span<const Complex> interior);

}  // namespace frozen_sl
