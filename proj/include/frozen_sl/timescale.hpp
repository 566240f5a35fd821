#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace frozen_sl {

/// A point of a finite time scale together with its position in the grid.
struct GridPoint {
    std::size_t index;
    double value;
};

struct FiniteScale {
    std::vector<double> points;  // strictly increasing, size >= 3
};

/// T = [alpha, delta1] ∪ [delta2, beta]. The supremum beta is left-dense, so
/// it is also the right boundary point rho(sup T) of the boundary conditions.
struct TwoIntervalScale {
    double alpha;
    double delta1;
    double delta2;
    double beta;

    double gap() const noexcept { return delta2 - delta1; }
};

/// Truncated domains and boundary points of a scale.
///
/// For finite scales `kappa` / `kappa2` list the grid points of T^κ and T^{κ²}.
/// For the two-interval scale both truncations equal T itself and the point
/// lists stay empty (`dense_kappa` is set).
struct Domains {
    std::vector<GridPoint> kappa;
    std::vector<GridPoint> kappa2;
    bool dense_kappa = false;
    double alpha = 0.0;
    double beta = 0.0;
};

/// A bounded time scale: either a finite point set or a union of two closed
/// intervals. Immutable after construction.
class TimeScale {
public:
    /// Sorts `points`; throws SpecError on duplicates or fewer than 3 points.
    static TimeScale finite(std::vector<double> points);
    /// Throws SpecError unless alpha < delta1 < delta2 < beta.
    static TimeScale two_interval(double alpha, double delta1, double delta2, double beta);

    bool is_finite() const noexcept { return std::holds_alternative<FiniteScale>(rep_); }
    const FiniteScale& as_finite() const;
    const TwoIntervalScale& as_two_interval() const;

    bool contains(double t) const noexcept;

    double sigma(double t) const;
    double rho(double t) const;
    double mu(double t) const;

    Domains domains() const;

    double inf() const noexcept;
    double sup() const noexcept;

    // Finite-scale helpers.
    std::size_t size() const;
    std::span<const double> points() const;
    std::optional<std::size_t> index_of(double t) const;

private:
    explicit TimeScale(FiniteScale f) : rep_(std::move(f)) {}
    explicit TimeScale(TwoIntervalScale s) : rep_(s) {}

    void require_member(double t) const;

    std::variant<FiniteScale, TwoIntervalScale> rep_;
};

}  // namespace frozen_sl
