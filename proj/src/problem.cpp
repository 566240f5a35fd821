#include "frozen_sl/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "frozen_sl/errors.hpp"

namespace frozen_sl {

bool BoundaryCoefficients::rows_dependent() const {
    const auto a = a_row();
    const auto b = b_row();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (a[i] * b[j] - a[j] * b[i] != 0.0) return false;
    return true;
}

double Potential::at(double t) const {
    return std::visit(
        [t](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, potential::Constant>) {
                return p.value;
            } else if constexpr (std::is_same_v<P, potential::PolynomialInT>) {
                double acc = 0.0;
                for (std::size_t k = p.coeffs.size(); k-- > 0;) acc = acc * t + p.coeffs[k];
                return acc;
            } else if constexpr (std::is_same_v<P, potential::Table>) {
                throw std::logic_error("table potentials are indexed by grid position");
            } else {
                const auto& g = p.grid;
                if (t <= g.front()) return p.values.front();
                if (t >= g.back()) return p.values.back();
                const auto hi = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), t) - g.begin());
                const auto lo = hi - 1;
                const double w = (t - g[lo]) / (g[hi] - g[lo]);
                return (1.0 - w) * p.values[lo] + w * p.values[hi];
            }
        },
        rep_);
}

double Potential::at_index(std::size_t index, double t) const {
    if (auto* tab = std::get_if<potential::Table>(&rep_)) return tab->values.at(index);
    return at(t);
}

std::vector<double> Potential::kinks() const {
    if (auto* s = std::get_if<potential::Sampled>(&rep_)) return s->grid;
    return {};
}

namespace {

void require_finite(const std::vector<double>& v, const char* field) {
    for (double x : v)
        if (!std::isfinite(x)) throw SpecError(field, "values must be finite reals");
}

}  // namespace

std::size_t ProblemSpec::frozen_index() const {
    auto idx = ts.index_of(a);
    if (!idx) throw SpecError("frozen_argument", "a must be a point of the time scale");
    return *idx;
}

void ProblemSpec::validate() const {
    if (!std::isfinite(a)) throw SpecError("frozen_argument", "must be a finite real");

    const auto a_row = bc.a_row();
    const auto b_row = bc.b_row();
    for (double x : a_row)
        if (!std::isfinite(x)) throw SpecError("boundary", "coefficients must be finite reals");
    for (double x : b_row)
        if (!std::isfinite(x)) throw SpecError("boundary", "coefficients must be finite reals");
    const bool a_zero = std::all_of(a_row.begin(), a_row.end(), [](double x) { return x == 0.0; });
    const bool b_zero = std::all_of(b_row.begin(), b_row.end(), [](double x) { return x == 0.0; });
    if (a_zero && b_zero) throw SpecError("boundary", "both boundary rows vanish identically");

    std::visit(
        [](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, potential::Constant>) {
                if (!std::isfinite(p.value)) throw SpecError("potential.value", "must be a finite real");
            } else if constexpr (std::is_same_v<P, potential::PolynomialInT>) {
                require_finite(p.coeffs, "potential.coeffs");
            } else if constexpr (std::is_same_v<P, potential::Table>) {
                require_finite(p.values, "potential.values");
            } else {
                require_finite(p.grid, "potential.grid");
                require_finite(p.values, "potential.values");
                if (p.grid.size() < 2 || p.grid.size() != p.values.size())
                    throw SpecError("potential", "sampled potential needs >= 2 grid points and one value per point");
                if (!std::is_sorted(p.grid.begin(), p.grid.end()) ||
                    std::adjacent_find(p.grid.begin(), p.grid.end()) != p.grid.end())
                    throw SpecError("potential.grid", "must be strictly increasing");
            }
        },
        q.rep());

    if (ts.is_finite()) {
        const auto idx = ts.index_of(a);
        if (!idx || *idx + 1 >= ts.size()) {
            throw SpecError("frozen_argument", "a must lie in T^kappa (a point of T other than max T)");
        }
        if (auto* tab = std::get_if<potential::Table>(&q.rep())) {
            if (tab->values.size() != ts.size() - 2) {
                std::ostringstream msg;
                msg << "table potential needs one value per point of T^kappa^2 (" << ts.size() - 2
                    << " values), got " << tab->values.size();
                throw SpecError("potential.values", msg.str());
            }
        }
        return;
    }

    const auto& s = ts.as_two_interval();
    if (std::holds_alternative<potential::Table>(q.rep())) {
        throw SpecError("potential", "table potentials are only defined on finite time scales");
    }
    if (auto* smp = std::get_if<potential::Sampled>(&q.rep())) {
        if (smp->grid.front() > s.alpha || smp->grid.back() < s.beta)
            throw SpecError("potential.grid", "sampled potential must cover [alpha, beta]");
    }
    if (s.delta2 <= a && a <= s.beta) {
        throw SpecError("frozen_argument",
                        "a in the right interval [delta2, beta] is not supported; place a in (alpha, delta1)");
    }
    if (!(s.alpha < a && a < s.delta1)) {
        throw SpecError("frozen_argument", "a must lie in the open interval (alpha, delta1)");
    }
}

std::vector<Complex> Spectrum::expanded() const {
    std::vector<Complex> out;
    for (const auto& e : eigenvalues)
        for (int k = 0; k < e.multiplicity; ++k) out.push_back(e.value);
    return out;
}

void Spectrum::sort() {
    std::sort(eigenvalues.begin(), eigenvalues.end(), [](const Eigenvalue& x, const Eigenvalue& y) {
        if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
        return x.value.imag() < y.value.imag();
    });
}

double match_distance(const std::vector<Complex>& x, const std::vector<Complex>& y) {
    if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
    const std::size_t n = x.size();
    if (n == 0) return 0.0;

    // Hungarian algorithm (potentials form), 1-based internally.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    auto cost = [&](std::size_t i, std::size_t j) { return std::abs(x[i - 1] - y[j - 1]); };
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double worst = 0.0;
    for (std::size_t j = 1; j <= n; ++j) worst = std::max(worst, cost(p[j], j));
    return worst;
}

}  // namespace frozen_sl
