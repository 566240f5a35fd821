#pragma once

#include <string>
#include <vector>

#include "frozen_sl/problem.hpp"

namespace frozen_sl {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    double tol = 1e-10;
    /// Used by the matrix cross-check when the problem has that form.
    bool have_separated = false;
    double h = 0.0, H = 0.0;
};

/// Property checks for one problem. Finite scales: degree law, Wronskian
/// recurrence (exact), leading terms, eigenpair residuals, conjugate closure
/// and, for unit-step separated problems, the matrix cross-check.
/// Two-interval scales: gap jump of the Wronskian, closed form against RK4,
/// conjugate symmetry of Δ and, under the asymptotic hypotheses, the √λ
/// spacing and residual decay for indices 10..40.
std::vector<CheckResult> verify_problem(const ProblemSpec& spec, const VerifyOptions& opts = {});

}  // namespace frozen_sl
