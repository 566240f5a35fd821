#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "frozen_sl/field.hpp"
#include "frozen_sl/timescale.hpp"

namespace frozen_sl {

/// Coefficients of the two boundary functionals
///   U(y) = a11 y(α) + a12 y^Δ(α) + a21 y(β) + a22 y^Δ(β)
///   V(y) = b11 y(α) + b12 y^Δ(α) + b21 y(β) + b22 y^Δ(β)
struct BoundaryCoefficients {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
    double b11 = 0, b12 = 0, b21 = 0, b22 = 0;

    std::array<double, 4> a_row() const { return {a11, a12, a21, a22}; }
    std::array<double, 4> b_row() const { return {b11, b12, b21, b22}; }

    bool rows_dependent() const;
    /// a22·b12 − a12·b22, the coefficient of the leading term of Δ on the
    /// two-interval scale (equal to det A there because μ(α) = 0).
    double dense_leading_combination() const { return a22 * b12 - a12 * b22; }
};

/// The boundary data a row of values and Δ-derivatives feeds into U or V.
template <class V>
struct BoundaryValues {
    V y_alpha, dy_alpha, y_beta, dy_beta;
};

template <class V, class F = double>
V apply_row(const std::array<F, 4>& row, const BoundaryValues<V>& b) {
    return b.y_alpha * row[0] + b.dy_alpha * row[1] + b.y_beta * row[2] + b.dy_beta * row[3];
}

namespace potential {
struct Constant {
    double value;
};
/// q(t) = Σ coeffs[k] t^k
struct PolynomialInT {
    std::vector<double> coeffs;
};
/// Values at the points of T^{κ²} of a finite scale, in increasing order.
struct Table {
    std::vector<double> values;
};
/// Piecewise-linear interpolation through (grid[i], values[i]).
struct Sampled {
    std::vector<double> grid;
    std::vector<double> values;
};
}  // namespace potential

class Potential {
public:
    using Rep = std::variant<potential::Constant, potential::PolynomialInT, potential::Table,
                             potential::Sampled>;

    Potential() : rep_(potential::Constant{0.0}) {}
    Potential(Rep rep) : rep_(std::move(rep)) {}

    const Rep& rep() const noexcept { return rep_; }

    /// Value at a point. Table potentials are indexed by grid position, so
    /// callers on finite scales use at_index(); at() throws for tables.
    double at(double t) const;
    double at_index(std::size_t index, double t) const;

    bool is_constant() const noexcept { return std::holds_alternative<potential::Constant>(rep_); }
    /// Breakpoints of a sampled potential (empty otherwise).
    std::vector<double> kinks() const;

private:
    Rep rep_;
};

/// A validated frozen-argument Sturm–Liouville problem.
struct ProblemSpec {
    TimeScale ts;
    double a;  // frozen argument
    Potential q;
    BoundaryCoefficients bc;

    /// Throws SpecError naming the offending field.
    void validate() const;

    // Finite-scale helpers (valid after validate()).
    std::size_t frozen_index() const;
    /// r: points below a; m: points above a (n = m + r + 1).
    std::size_t points_below() const { return frozen_index(); }
    std::size_t points_above() const { return ts.size() - 1 - frozen_index(); }
    double q_at_index(std::size_t i) const { return q.at_index(i, ts.points()[i]); }
};

struct Eigenvalue {
    Complex value;
    int multiplicity = 1;
    double residual = 0.0;
};

/// Multiset of eigenvalues sorted by (Re, Im).
struct Spectrum {
    std::vector<Eigenvalue> eigenvalues;
    /// Flags raised while assembling (e.g. "possible double root at ...").
    std::vector<std::string> notes;

    int count() const {
        int s = 0;
        for (const auto& e : eigenvalues) s += e.multiplicity;
        return s;
    }
    std::vector<Complex> expanded() const;
    void sort();
};

/// Largest pairwise distance after an optimal (minimum total distance)
/// matching between two multisets of equal size; +inf for unequal sizes.
double match_distance(const std::vector<Complex>& x, const std::vector<Complex>& y);

}  // namespace frozen_sl
