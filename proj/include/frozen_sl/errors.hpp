#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace frozen_sl {

/// A point was passed to a time-scale operation that is not in the scale.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid problem or configuration data. `field` is a dotted path into the
/// config document ("timescale.points", "frozen_argument", ...).
class SpecError : public std::invalid_argument {
public:
    SpecError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// An iterative solver ran out of budget or could not meet its tolerance.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The characteristic function vanishes identically: every λ solves the
/// boundary system, so there is no discrete spectrum to report.
class DegenerateProblem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace frozen_sl
