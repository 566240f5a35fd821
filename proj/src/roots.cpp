#include "frozen_sl/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace frozen_sl {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct HornerResult {
    Complex p;
    Complex dp;
    double bound;  // rounding-error bound for p
};

HornerResult horner(const std::vector<Complex>& c, Complex z) {
    Complex p{}, dp{};
    double absz = std::abs(z);
    double bound = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[k];
        bound = bound * absz + std::abs(c[k]);
    }
    return {p, dp, bound * kEps * 4.0 * static_cast<double>(c.size())};
}

struct NewtonStep {
    Complex ratio;  // p(z)/p'(z)
    bool at_noise;  // |p(z)| is below its rounding-error bound
    double backward_error;  // |p(z)| / Σ|c_k||z|^k
};

/// Newton ratio without overflow: for |z| > 1 the reversed polynomial
/// r(w) = w^d p(1/w) is evaluated at w = 1/z and p/p' = z / (d − w r'(w)/r(w)).
NewtonStep newton_step(const std::vector<Complex>& c, const std::vector<Complex>& reversed, Complex z) {
    if (std::abs(z) <= 1.0) {
        const auto h = horner(c, z);
        const double mag = h.bound / (kEps * 4.0 * static_cast<double>(c.size()));
        return {h.p / h.dp, std::abs(h.p) <= h.bound, mag > 0 ? std::abs(h.p) / mag : 0.0};
    }
    const Complex w = 1.0 / z;
    const auto h = horner(reversed, w);
    const double d = static_cast<double>(c.size() - 1);
    const double mag = h.bound / (kEps * 4.0 * static_cast<double>(c.size()));
    const Complex ratio = h.p == Complex{} ? Complex{} : z / (d - w * h.dp / h.p);
    return {ratio, std::abs(h.p) <= h.bound, mag > 0 ? std::abs(h.p) / mag : 0.0};
}

Complex eval_derivative(const std::vector<Complex>& c, int order, Complex z) {
    // order-th derivative via repeated synthetic differentiation
    std::vector<Complex> d = c;
    for (int o = 0; o < order; ++o) {
        if (d.size() <= 1) return {};
        for (std::size_t k = 1; k < d.size(); ++k) d[k - 1] = d[k] * static_cast<double>(k);
        d.pop_back();
    }
    Complex acc{};
    for (std::size_t k = d.size(); k-- > 0;) acc = acc * z + d[k];
    return acc;
}

double cluster_radius(Complex center, int k, double tol) {
    return std::max(1.0, std::abs(center)) * std::pow(tol, 1.0 / k);
}

}  // namespace

std::vector<Complex> RootSet::expanded() const {
    std::vector<Complex> out;
    for (const auto& r : roots)
        for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.value);
    return out;
}

std::vector<Root> cluster_roots(const std::vector<Complex>& values, double tol) {
    struct Cluster {
        Complex sum;
        int size;
        Complex center() const { return sum / static_cast<double>(size); }
    };
    std::vector<Cluster> cl;
    cl.reserve(values.size());
    for (auto v : values) cl.push_back({v, 1});

    // Grow each cluster by absorbing its nearest neighbours as long as every
    // member stays within the radius for the enlarged multiplicity. A k-fold
    // root splits into k points about |z|·eps^{1/k} apart, which a pairwise
    // test with the 2-fold radius would miss.
    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t i = 0; i < cl.size() && !merged; ++i) {
            std::vector<std::size_t> order;
            for (std::size_t j = 0; j < cl.size(); ++j)
                if (j != i) order.push_back(j);
            std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return std::abs(cl[x].center() - cl[i].center()) < std::abs(cl[y].center() - cl[i].center());
            });
            std::size_t best_take = 0;
            Complex sum = cl[i].sum;
            int size = cl[i].size;
            for (std::size_t take = 1; take <= order.size(); ++take) {
                sum += cl[order[take - 1]].sum;
                size += cl[order[take - 1]].size;
                const Complex center = sum / static_cast<double>(size);
                const double radius = cluster_radius(center, size, tol);
                bool fits = std::abs(cl[i].center() - center) <= radius;
                for (std::size_t t = 0; t < take && fits; ++t)
                    fits = std::abs(cl[order[t]].center() - center) <= radius;
                if (fits) best_take = take;
            }
            if (best_take == 0) continue;
            std::vector<std::size_t> absorbed(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_take));
            for (std::size_t j : absorbed) {
                cl[i].sum += cl[j].sum;
                cl[i].size += cl[j].size;
            }
            std::sort(absorbed.rbegin(), absorbed.rend());
            for (std::size_t j : absorbed) cl.erase(cl.begin() + static_cast<std::ptrdiff_t>(j));
            merged = true;
        }
    }

    std::vector<Root> out;
    out.reserve(cl.size());
    for (const auto& c : cl) out.push_back({c.center(), c.size, 0.0});
    return out;
}

RootSet find_roots(const ComplexPoly& poly, double tol, RootFinderOptions opts) {
    const auto deg = poly.degree();
    if (!deg || *deg < 1) throw std::invalid_argument("find_roots: polynomial degree must be >= 1");

    const auto& full = poly.coeffs();
    std::size_t zero_roots = 0;
    while (full[zero_roots] == Complex{}) ++zero_roots;
    std::vector<Complex> c(full.begin() + static_cast<std::ptrdiff_t>(zero_roots), full.end());
    const int d = static_cast<int>(c.size()) - 1;

    std::vector<Complex> z(d);
    bool converged = true;
    if (d > 0) {
        double cauchy = 0.0;
        for (int k = 0; k < d; ++k) cauchy = std::max(cauchy, std::abs(c[k] / c[d]));
        const double r0 = 1.0 + cauchy;
        for (int k = 0; k < d; ++k) {
            const double theta = 2.0 * std::numbers::pi * k / d + 0.4;
            z[k] = std::polar(r0, theta);
        }

        const std::vector<Complex> reversed(c.rbegin(), c.rend());
        std::vector<bool> done(d, false);
        int sweep = 0;
        for (; sweep < opts.max_sweeps; ++sweep) {
            bool all_done = true;
            for (int i = 0; i < d; ++i) {
                if (done[i]) continue;
                const auto step = newton_step(c, reversed, z[i]);
                if (step.at_noise) {
                    done[i] = true;
                    continue;
                }
                all_done = false;
                const Complex ratio = step.ratio;
                Complex s{};
                for (int j = 0; j < d; ++j)
                    if (j != i) s += 1.0 / (z[i] - z[j]);
                const Complex w = ratio / (1.0 - ratio * s);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                    z[i] += Complex(kEps, kEps) * std::max(1.0, std::abs(z[i])) * 1e3;
                    continue;
                }
                z[i] -= w;
                if (std::abs(w) <= 2.0 * kEps * std::abs(z[i])) done[i] = true;
            }
            if (all_done) break;
        }
        converged = sweep < opts.max_sweeps;
    }

    RootSet out;
    auto clusters = cluster_roots(z, tol);
    for (auto& r : clusters) {
        const int order = r.multiplicity - 1;
        const double radius = cluster_radius(r.value, r.multiplicity, tol);
        Complex x = r.value;
        for (int it = 0; it < 20; ++it) {
            const Complex f = eval_derivative(c, order, x);
            const Complex df = eval_derivative(c, order + 1, x);
            if (df == Complex{}) break;
            const Complex step = f / df;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            x -= step;
            if (std::abs(step) <= 2.0 * kEps * std::max(1.0, std::abs(x))) break;
        }
        if (std::abs(x - r.value) <= radius) r.value = x;
        r.residual = std::abs(poly.eval(r.value));
        out.roots.push_back(r);
    }
    if (zero_roots > 0) out.roots.push_back({Complex{}, static_cast<int>(zero_roots), 0.0});

    // Real coefficients: roots within tol of the real axis are real.
    const bool real_coeffs =
        std::all_of(full.begin(), full.end(), [](Complex x) { return x.imag() == 0.0; });
    if (real_coeffs) {
        for (auto& r : out.roots) {
            if (std::abs(r.value.imag()) <= tol * std::max(1.0, std::abs(r.value))) {
                r.value = {r.value.real(), 0.0};
                r.residual = std::abs(poly.eval(r.value));
            }
        }
    }

    if (!converged) {
        // Accept slow-but-settled iterates whose backward error is small.
        const std::vector<Complex> reversed(c.rbegin(), c.rend());
        for (Complex x : z) {
            if (newton_step(c, reversed, x).backward_error > std::sqrt(kEps)) {
                throw RootFindingError("find_roots: no convergence after iteration cap", out);
            }
        }
    }
    return out;
}

ComplexPoly from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> c{Complex{1.0, 0.0}};
    for (auto r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex{});
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    return ComplexPoly(std::move(c));
}

}  // namespace frozen_sl
