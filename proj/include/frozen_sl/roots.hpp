#pragma once

#include <vector>

#include "frozen_sl/errors.hpp"
#include "frozen_sl/polynomial.hpp"

namespace frozen_sl {

struct Root {
    Complex value;
    int multiplicity = 1;
    double residual = 0.0;  // |p(value)|
};

struct RootSet {
    std::vector<Root> roots;

    int total_multiplicity() const {
        int s = 0;
        for (const auto& r : roots) s += r.multiplicity;
        return s;
    }
    /// Every root repeated by its multiplicity.
    std::vector<Complex> expanded() const;
};

/// Raised when the simultaneous iteration does not settle within the sweep
/// cap. Carries the iterates reached so far as a (possibly inaccurate) set.
class RootFindingError : public SolverError {
public:
    RootFindingError(const std::string& what, RootSet partial)
        : SolverError(what), partial_(std::move(partial)) {}
    const RootSet& partial() const noexcept { return partial_; }

private:
    RootSet partial_;
};

struct RootFinderOptions {
    int max_sweeps = 200;
};

/// All complex roots of p with multiplicities.
///
/// Aberth–Ehrlich simultaneous iteration from a Cauchy-bound circle, then
/// clustering: roots whose separation is below max(1,|z|)·tol^{1/k} merge
/// into a k-fold root, which is re-located by Newton's method on p^{(k-1)}.
/// Exact zero roots (vanishing low-order coefficients) are split off first.
///
/// Throws std::invalid_argument for degree < 1 and RootFindingError on
/// non-convergence.
RootSet find_roots(const ComplexPoly& p, double tol, RootFinderOptions opts = {});

/// Groups a flat list of approximate roots into clusters using the same
/// radius rule as find_roots. Returned values are cluster centroids.
std::vector<Root> cluster_roots(const std::vector<Complex>& values, double tol);

}  // namespace frozen_sl
