#include "frozen_sl/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frozen_sl/errors.hpp"

namespace frozen_sl {

TimeScale TimeScale::finite(std::vector<double> points) {
    if (points.size() < 3) {
        throw SpecError("timescale.points", "a finite time scale needs at least 3 points");
    }
    for (double p : points) {
        if (!std::isfinite(p)) throw SpecError("timescale.points", "points must be finite reals");
    }
    std::sort(points.begin(), points.end());
    auto dup = std::adjacent_find(points.begin(), points.end());
    if (dup != points.end()) {
        std::ostringstream msg;
        msg << "duplicate point " << *dup;
        throw SpecError("timescale.points", msg.str());
    }
    return TimeScale(FiniteScale{std::move(points)});
}

TimeScale TimeScale::two_interval(double alpha, double delta1, double delta2, double beta) {
    if (!(std::isfinite(alpha) && std::isfinite(beta))) {
        throw SpecError("timescale", "interval endpoints must be finite");
    }
    if (!(alpha < delta1 && delta1 < delta2 && delta2 < beta)) {
        throw SpecError("timescale", "two-interval scale requires alpha < delta1 < delta2 < beta");
    }
    return TimeScale(TwoIntervalScale{alpha, delta1, delta2, beta});
}

const FiniteScale& TimeScale::as_finite() const {
    if (auto* f = std::get_if<FiniteScale>(&rep_)) return *f;
    throw std::logic_error("time scale is not finite");
}

const TwoIntervalScale& TimeScale::as_two_interval() const {
    if (auto* s = std::get_if<TwoIntervalScale>(&rep_)) return *s;
    throw std::logic_error("time scale is not a two-interval scale");
}

bool TimeScale::contains(double t) const noexcept {
    if (auto* f = std::get_if<FiniteScale>(&rep_)) {
        return std::binary_search(f->points.begin(), f->points.end(), t);
    }
    const auto& s = std::get<TwoIntervalScale>(rep_);
    return (s.alpha <= t && t <= s.delta1) || (s.delta2 <= t && t <= s.beta);
}

void TimeScale::require_member(double t) const {
    if (!contains(t)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "point " << t << " is not in the time scale";
        throw DomainError(msg.str());
    }
}

std::optional<std::size_t> TimeScale::index_of(double t) const {
    const auto& pts = as_finite().points;
    auto it = std::lower_bound(pts.begin(), pts.end(), t);
    if (it == pts.end() || *it != t) return std::nullopt;
    return static_cast<std::size_t>(it - pts.begin());
}

double TimeScale::sigma(double t) const {
    require_member(t);
    if (auto* f = std::get_if<FiniteScale>(&rep_)) {
        auto i = *index_of(t);
        return i + 1 < f->points.size() ? f->points[i + 1] : t;
    }
    const auto& s = std::get<TwoIntervalScale>(rep_);
    return t == s.delta1 ? s.delta2 : t;
}

double TimeScale::rho(double t) const {
    require_member(t);
    if (auto* f = std::get_if<FiniteScale>(&rep_)) {
        auto i = *index_of(t);
        return i > 0 ? f->points[i - 1] : t;
    }
    const auto& s = std::get<TwoIntervalScale>(rep_);
    return t == s.delta2 ? s.delta1 : t;
}

double TimeScale::mu(double t) const { return sigma(t) - t; }

Domains TimeScale::domains() const {
    Domains d;
    if (auto* f = std::get_if<FiniteScale>(&rep_)) {
        const auto n = f->points.size();
        for (std::size_t i = 0; i + 1 < n; ++i) d.kappa.push_back({i, f->points[i]});
        for (std::size_t i = 0; i + 2 < n; ++i) d.kappa2.push_back({i, f->points[i]});
        d.alpha = f->points.front();
        d.beta = f->points[n - 2];
        return d;
    }
    const auto& s = std::get<TwoIntervalScale>(rep_);
    d.dense_kappa = true;
    d.alpha = s.alpha;
    d.beta = s.beta;
    return d;
}

double TimeScale::inf() const noexcept {
    if (auto* f = std::get_if<FiniteScale>(&rep_)) return f->points.front();
    return std::get<TwoIntervalScale>(rep_).alpha;
}

double TimeScale::sup() const noexcept {
    if (auto* f = std::get_if<FiniteScale>(&rep_)) return f->points.back();
    return std::get<TwoIntervalScale>(rep_).beta;
}

std::size_t TimeScale::size() const { return as_finite().points.size(); }

std::span<const double> TimeScale::points() const { return as_finite().points; }

}  // namespace frozen_sl
