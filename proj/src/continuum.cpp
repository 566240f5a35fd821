#include "frozen_sl/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "frozen_sl/parallel.hpp"

namespace frozen_sl {

namespace {

constexpr double kSeriesThreshold = 0.25;
constexpr int kSeriesTerms = 14;

// Σ_k (−u)^k / (2k + shift)! for |u| < 0.25.
Complex even_series(Complex u, int shift) {
    Complex term = 1.0;
    for (int j = 1; j <= shift; ++j) term /= static_cast<double>(j);
    Complex sum = term;
    for (int k = 1; k < kSeriesTerms; ++k) {
        const double d1 = 2.0 * k + shift - 1.0;
        const double d2 = 2.0 * k + shift;
        term *= -u / (d1 * d2);
        sum += term;
    }
    return sum;
}

const TwoIntervalScale& two_interval_of(const ProblemSpec& spec) {
    if (spec.ts.is_finite()) throw SpecError("timescale", "continuum solver needs a two-interval scale");
    return spec.ts.as_two_interval();
}

// Splits [lo, hi] at kinks of q strictly inside.
std::vector<double> breakpoints(double from, double to, const Potential& q) {
    const double lo = std::min(from, to);
    const double hi = std::max(from, to);
    std::vector<double> cuts{lo};
    for (double k : q.kinks())
        if (k > lo && k < hi) cuts.push_back(k);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    if (from > to) std::reverse(cuts.begin(), cuts.end());
    return cuts;
}

ShootState closed_form(const ShootState& s, double from, double to, Complex z, const Potential& q,
                       const IntegrationOptions& opts) {
    const double x = to - from;
    const Complex c = cos_sqrt(z, x);
    const Complex sn = sinc_sqrt(z, x);
    ShootState out{c * s.y + sn * s.dy, -z * sn * s.y + c * s.dy, s.frozen};
    if (s.frozen == Complex(0.0)) return out;

    Complex ip = 0.0;  // ∫ sinc_sqrt(to − ξ) q(ξ) dξ
    Complex id = 0.0;  // ∫ cos_sqrt(to − ξ) q(ξ) dξ
    if (q.is_constant()) {
        const double qc = q.at(from);
        ip = qc * vers_sqrt(z, x);
        id = qc * sn;
    } else {
        using Gauss = boost::math::quadrature::gauss<double, 10>;
        const double freq = std::abs(std::sqrt(z)) + 1.0;
        const auto cuts = breakpoints(from, to, q);
        long panels_used = 0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double a = cuts[k];
            const double b = cuts[k + 1];
            const long panels = std::max<long>(2, static_cast<long>(std::ceil(std::abs(b - a) * freq * 2.0)));
            panels_used += panels;
            if (panels_used > opts.max_panels)
                throw SolverError("quadrature panel budget exceeded at |lambda| = " + std::to_string(std::abs(z)));
            const double h = (b - a) / static_cast<double>(panels);
            for (long p = 0; p < panels; ++p) {
                const double mid = a + (static_cast<double>(p) + 0.5) * h;
                const double half = 0.5 * h;
                auto node = [&](double u, double w) {
                    const double xi = mid + half * u;
                    const double qv = q.at(xi) * w * half;
                    ip += sinc_sqrt(z, to - xi) * qv;
                    id += cos_sqrt(z, to - xi) * qv;
                };
                const auto& xs = Gauss::abscissa();
                const auto& ws = Gauss::weights();
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if (xs[i] == 0.0) {
                        node(0.0, ws[i]);
                    } else {
                        node(xs[i], ws[i]);
                        node(-xs[i], ws[i]);
                    }
                }
            }
        }
    }
    out.y += s.frozen * ip;
    out.dy += s.frozen * id;
    return out;
}

ShootState runge_kutta(const ShootState& s, double from, double to, Complex z, const Potential& q,
                       const IntegrationOptions& opts) {
    const double len = std::abs(to - from);
    const double freq = std::max(1.0, std::abs(std::sqrt(z)));
    const long steps = std::max<long>(4, static_cast<long>(std::ceil(len * opts.rk4_steps_per_unit * freq)));
    if (steps > opts.max_panels)
        throw SolverError("RK4 step budget exceeded at |lambda| = " + std::to_string(std::abs(z)));
    const double h = (to - from) / static_cast<double>(steps);
    Complex y = s.y;
    Complex dy = s.dy;
    const Complex f = s.frozen;
    auto acc = [&](double t, Complex yv) { return -z * yv + q.at(t) * f; };
    for (long k = 0; k < steps; ++k) {
        const double t = from + static_cast<double>(k) * h;
        const Complex k1y = dy;
        const Complex k1d = acc(t, y);
        const Complex k2y = dy + 0.5 * h * k1d;
        const Complex k2d = acc(t + 0.5 * h, y + 0.5 * h * k1y);
        const Complex k3y = dy + 0.5 * h * k2d;
        const Complex k3d = acc(t + 0.5 * h, y + 0.5 * h * k2y);
        const Complex k4y = dy + h * k3d;
        const Complex k4d = acc(t + h, y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    return {y, dy, f};
}

ShootState seed(Branch branch) {
    return branch == Branch::S ? ShootState{0.0, 1.0, 0.0} : ShootState{1.0, 0.0, 1.0};
}

double real_char(const ProblemSpec& spec, double lambda, const IntegrationOptions& opts) {
    return char_fn(spec, Complex(lambda, 0.0), opts).real();
}

Complex derivative(const ProblemSpec& spec, Complex lambda, const IntegrationOptions& opts, Complex* value) {
    const double h = 1e-5 * (1.0 + std::abs(lambda));
    if (value) *value = char_fn(spec, lambda, opts);
    return (char_fn(spec, lambda + h, opts) - char_fn(spec, lambda - h, opts)) / (2.0 * h);
}

Complex box_center(const Box& b) { return {0.5 * (b.re_lo + b.re_hi), 0.5 * (b.im_lo + b.im_hi)}; }

bool inside(const Box& b, Complex z, double slack) {
    return z.real() >= b.re_lo - slack && z.real() <= b.re_hi + slack && z.imag() >= b.im_lo - slack &&
           z.imag() <= b.im_hi + slack;
}

struct WindingEstimate {
    double value;
    double min_distance_ratio;  // min |Δ/Δ'| over contour, in node spacings
    double min_rel_abs;         // min |Δ| relative to nearby contour samples
};

WindingEstimate winding(const ProblemSpec& spec, const Box& box, int points, const IntegrationOptions& opts) {
    const Complex corners[4] = {{box.re_lo, box.im_lo}, {box.re_hi, box.im_lo}, {box.re_hi, box.im_hi},
                                {box.re_lo, box.im_hi}};
    const double w = box.re_hi - box.re_lo;
    const double hgt = box.im_hi - box.im_lo;
    const double perimeter = 2.0 * (w + hgt);
    const std::size_t n = static_cast<std::size_t>(std::max(points, 16));
    const double ds = perimeter / static_cast<double>(n);

    std::vector<Complex> nodes(n), tangents(n);
    for (std::size_t k = 0; k < n; ++k) {
        double s = (static_cast<double>(k) + 0.5) * ds;
        int side = 0;
        const double lens[4] = {w, hgt, w, hgt};
        while (side < 3 && s > lens[side]) s -= lens[side++];
        const Complex a = corners[side];
        const Complex b = corners[(side + 1) % 4];
        const Complex dir = (b - a) / lens[side];
        nodes[k] = a + dir * s;
        tangents[k] = dir;
    }
    std::vector<Complex> vals(n), ders(n);
    parallel_for(n, [&](std::size_t k) { ders[k] = derivative(spec, nodes[k], opts, &vals[k]); });

    Complex integral = 0.0;
    double min_rel = std::numeric_limits<double>::infinity();
    double min_ratio = std::numeric_limits<double>::infinity();
    constexpr std::ptrdiff_t kWindow = 8;
    const auto count = static_cast<std::ptrdiff_t>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double av = std::abs(vals[k]);
        if (av == 0.0) return {std::nan(""), 0.0, 0.0};
        // |Δ| relative to its neighbours along the contour; Δ itself can vary
        // by many orders of magnitude around a long box.
        double local = av;
        for (std::ptrdiff_t j = -kWindow; j <= kWindow; ++j) {
            const auto idx = static_cast<std::size_t>(((static_cast<std::ptrdiff_t>(k) + j) % count + count) % count);
            local = std::max(local, std::abs(vals[idx]));
        }
        min_rel = std::min(min_rel, av / local);
        integral += ders[k] / vals[k] * tangents[k] * ds;
        const double ad = std::abs(ders[k]);
        if (ad > 0.0) min_ratio = std::min(min_ratio, av / ad / ds);
    }
    const Complex turns = integral / Complex(0.0, 2.0 * std::numbers::pi);
    return {turns.real(), min_ratio, min_rel};
}

Spectrum cluster_into_spectrum(std::vector<Complex> values, const ProblemSpec& spec, const IntegrationOptions& opts) {
    std::sort(values.begin(), values.end(), [](Complex x, Complex y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    Spectrum out;
    for (Complex v : values) {
        const double tol = 1e-7 * std::max(1.0, std::abs(v));
        bool merged = false;
        for (auto& e : out.eigenvalues) {
            if (std::abs(e.value - v) <= tol) {
                e.value = (e.value * static_cast<double>(e.multiplicity) + v) / static_cast<double>(e.multiplicity + 1);
                ++e.multiplicity;
                merged = true;
                break;
            }
        }
        if (!merged) out.eigenvalues.push_back({v, 1, 0.0});
    }
    for (auto& e : out.eigenvalues) e.residual = std::abs(char_fn(spec, e.value, opts));
    return out;
}

}  // namespace

Complex cos_sqrt(Complex z, double x) {
    const Complex u = z * x * x;
    if (std::abs(u) < kSeriesThreshold) return even_series(u, 0);
    return std::cos(std::sqrt(z) * x);
}

Complex sinc_sqrt(Complex z, double x) {
    const Complex u = z * x * x;
    if (std::abs(u) < kSeriesThreshold) return x * even_series(u, 1);
    const Complex w = std::sqrt(z);
    return std::sin(w * x) / w;
}

Complex vers_sqrt(Complex z, double x) {
    const Complex u = z * x * x;
    if (std::abs(u) < kSeriesThreshold) return x * x * even_series(u, 2);
    const Complex half = std::sin(0.5 * std::sqrt(z) * x);
    return 2.0 * half * half / z;
}

ShootState integrate_dense(const ShootState& start, double from, double to, Complex lambda, const Potential& q,
                           const IntegrationOptions& opts) {
    if (from == to) return start;
    return opts.path == IntegrationPath::ClosedForm ? closed_form(start, from, to, lambda, q, opts)
                                                    : runge_kutta(start, from, to, lambda, q, opts);
}

ShootState cross_gap(const ShootState& at_delta1, Complex lambda, double q_delta1, double gap) {
    const Complex y2 = at_delta1.y + gap * at_delta1.dy;
    const Complex dy2 = at_delta1.dy + gap * (q_delta1 * at_delta1.frozen - lambda * y2);
    return {y2, dy2, at_delta1.frozen};
}

ShootState shoot(const ProblemSpec& spec, Branch branch, Complex lambda, double t, const IntegrationOptions& opts) {
    const auto& s = two_interval_of(spec);
    if (!spec.ts.contains(t)) throw DomainError("point " + std::to_string(t) + " is not in the time scale");
    const ShootState start = seed(branch);
    if (t <= s.delta1) return integrate_dense(start, spec.a, t, lambda, spec.q, opts);
    const ShootState left = integrate_dense(start, spec.a, s.delta1, lambda, spec.q, opts);
    const ShootState right = cross_gap(left, lambda, spec.q.at(s.delta1), s.gap());
    return integrate_dense(right, s.delta2, t, lambda, spec.q, opts);
}

EndpointValues endpoint_values(const ProblemSpec& spec, Complex lambda, const IntegrationOptions& opts) {
    const auto& s = two_interval_of(spec);
    EndpointValues out{};
    for (Branch b : {Branch::S, Branch::C}) {
        const ShootState start = seed(b);
        const ShootState at_alpha = integrate_dense(start, spec.a, s.alpha, lambda, spec.q, opts);
        const ShootState left = integrate_dense(start, spec.a, s.delta1, lambda, spec.q, opts);
        const ShootState right = cross_gap(left, lambda, spec.q.at(s.delta1), s.gap());
        const ShootState at_beta = integrate_dense(right, s.delta2, s.beta, lambda, spec.q, opts);
        BoundaryValues<Complex> bv{at_alpha.y, at_alpha.dy, at_beta.y, at_beta.dy};
        (b == Branch::S ? out.S : out.C) = bv;
    }
    return out;
}

Complex char_fn(const ProblemSpec& spec, Complex lambda, const IntegrationOptions& opts) {
    const auto ev = endpoint_values(spec, lambda, opts);
    const auto a = spec.bc.a_row();
    const auto b = spec.bc.b_row();
    return apply_row(a, ev.C) * apply_row(b, ev.S) - apply_row(b, ev.C) * apply_row(a, ev.S);
}

Complex wronskian(const ProblemSpec& spec, Complex lambda, double t, const IntegrationOptions& opts) {
    const ShootState s = shoot(spec, Branch::S, lambda, t, opts);
    const ShootState c = shoot(spec, Branch::C, lambda, t, opts);
    return s.dy * c.y - s.y * c.dy;
}

int count_eigs_in_box(const ProblemSpec& spec, const Box& box, int quad_points, const ContourOptions& opts) {
    if (!(box.re_hi > box.re_lo) || !(box.im_hi > box.im_lo))
        throw std::invalid_argument("box must have positive width and height");
    int points = std::max(quad_points, 16);
    std::optional<double> previous;
    for (int round = 0; round <= opts.max_refinements; ++round, points *= 2) {
        const WindingEstimate est = winding(spec, box, points, opts.integration);
        if (std::isnan(est.value) || est.min_rel_abs < opts.boundary_floor) {
            std::ostringstream msg;
            msg << "zero of the characteristic function on or near the contour of box [" << box.re_lo << ", "
                << box.re_hi << "] x [" << box.im_lo << ", " << box.im_hi << "]";
            throw ContourError(msg.str());
        }
        const double defect = std::abs(est.value - std::round(est.value));
        const bool resolved = est.min_distance_ratio > 2.0;
        if (resolved && defect <= opts.max_defect && previous &&
            std::abs(*previous - est.value) < opts.max_defect)
            return static_cast<int>(std::lround(est.value));
        previous = est.value;
    }
    std::ostringstream msg;
    msg << "argument-principle estimate did not settle near an integer (last " << *previous
        << "); a zero is likely close to the contour";
    throw ContourError(msg.str());
}

namespace {

constexpr int kMaxDepth = 48;

std::optional<Complex> newton(const ProblemSpec& spec, Complex z, int multiplicity, const Box& box, double tol,
                              const IntegrationOptions& opts) {
    const double scale = std::max({1.0, box.re_hi - box.re_lo, box.im_hi - box.im_lo});
    for (int it = 0; it < 60; ++it) {
        Complex f;
        const Complex df = derivative(spec, z, opts, &f);
        if (f == Complex(0.0)) return z;
        if (df == Complex(0.0)) return std::nullopt;
        const Complex step = static_cast<double>(multiplicity) * f / df;
        z -= step;
        if (!inside(box, z, 0.25 * scale)) return std::nullopt;
        if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) return z;
    }
    return std::nullopt;
}

void locate(const ProblemSpec& spec, const Box& box, int count, int quad_points, double tol,
            const ContourOptions& opts, int depth, std::vector<Complex>& out) {
    if (count == 0) return;
    const Complex c = box_center(box);
    const double diam = std::hypot(box.re_hi - box.re_lo, box.im_hi - box.im_lo);

    if (auto z = newton(spec, c, count, box, tol, opts.integration); z && inside(box, *z, 0.0)) {
        if (count == 1) {
            out.push_back(*z);
            return;
        }
        // Confirm a k-fold zero with a tight box around it.
        const double r = std::max(1e-6 * std::max(1.0, std::abs(*z)), 1e-3 * diam);
        try {
            const Box tight{z->real() - r, z->real() + r, z->imag() - r, z->imag() + r};
            if (count_eigs_in_box(spec, tight, quad_points, opts) == count) {
                for (int k = 0; k < count; ++k) out.push_back(*z);
                return;
            }
        } catch (const ContourError&) {
        }
    }
    if (depth >= kMaxDepth || diam < 1e-9 * std::max(1.0, std::abs(c))) {
        for (int k = 0; k < count; ++k) out.push_back(c);
        return;
    }

    // Split off-centre so that a split line rarely runs along a symmetry axis.
    for (double frac : {0.4871, 0.5314, 0.4423, 0.5709}) {
        const double xm = box.re_lo + frac * (box.re_hi - box.re_lo);
        const double ym = box.im_lo + (1.0 - frac) * (box.im_hi - box.im_lo);
        const Box parts[4] = {{box.re_lo, xm, box.im_lo, ym},
                              {xm, box.re_hi, box.im_lo, ym},
                              {box.re_lo, xm, ym, box.im_hi},
                              {xm, box.re_hi, ym, box.im_hi}};
        int counts[4];
        bool ok = true;
        int total = 0;
        for (int p = 0; p < 4 && ok; ++p) {
            try {
                counts[p] = count_eigs_in_box(spec, parts[p], quad_points, opts);
                total += counts[p];
            } catch (const ContourError&) {
                ok = false;
            }
        }
        if (!ok || total != count) continue;
        for (int p = 0; p < 4; ++p) locate(spec, parts[p], counts[p], quad_points, tol, opts, depth + 1, out);
        return;
    }
    throw ContourError("could not subdivide a box without a zero near a split line");
}

}  // namespace

std::vector<Complex> find_zeros_in_box(const ProblemSpec& spec, const Box& box, int quad_points, double tol,
                                       const ContourOptions& opts) {
    const int count = count_eigs_in_box(spec, box, quad_points, opts);
    std::vector<Complex> out;
    locate(spec, box, count, quad_points, tol, opts, 0, out);
    return out;
}

Spectrum find_real_eigs(const ProblemSpec& spec, double lambda_min, double lambda_max, const RealScanOptions& opts) {
    const auto& s = two_interval_of(spec);
    if (lambda_max == lambda_min) return {};
    if (!(lambda_max > lambda_min)) throw SpecError("solver.lambda_max", "must not be below lambda_min");
    const double length = (s.delta1 - s.alpha) + (s.beta - s.delta2);
    const double ds = std::numbers::pi / (length * std::max(4, opts.samples_per_halfwave));

    // Grid uniform in √|λ| on each side of 0.
    std::vector<double> grid;
    if (lambda_min < 0.0) {
        const double top = std::sqrt(-lambda_min);
        const long steps = std::max<long>(1, static_cast<long>(std::ceil(top / ds)));
        for (long k = steps; k >= 1; --k) {
            const double r = top * static_cast<double>(k) / static_cast<double>(steps);
            grid.push_back(-r * r);
        }
    }
    if (lambda_max > 0.0) {
        const double lo = std::sqrt(std::max(lambda_min, 0.0));
        const double hi = std::sqrt(lambda_max);
        const long steps = std::max<long>(1, static_cast<long>(std::ceil((hi - lo) / ds)));
        for (long k = 0; k <= steps; ++k) {
            const double r = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps);
            grid.push_back(r * r);
        }
    } else {
        grid.push_back(lambda_max);
    }
    grid.front() = lambda_min;
    grid.back() = lambda_max;

    std::vector<double> f(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { f[i] = real_char(spec, grid[i], opts.integration); });

    std::vector<Complex> zeros;
    Spectrum notes_holder;
    std::vector<double> residuals;
    auto g = [&](double x) { return real_char(spec, x, opts.integration); };
    auto close_enough = [](double a, double b) {
        return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a));
    };

    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (f[i] == 0.0) {
            zeros.emplace_back(grid[i], 0.0);
            continue;
        }
        if (i + 1 < grid.size() && f[i + 1] != 0.0 && std::signbit(f[i]) != std::signbit(f[i + 1])) {
            std::uintmax_t iters = 200;
            const auto bracket = boost::math::tools::toms748_solve(g, grid[i], grid[i + 1], f[i], f[i + 1],
                                                                   close_enough, iters);
            zeros.emplace_back(0.5 * (bracket.first + bracket.second), 0.0);
            continue;
        }
        // Sharp dip of |Δ| without a sign change: two zeros may hide here.
        if (i == 0 || i + 1 >= grid.size()) continue;
        const double here = std::abs(f[i]);
        const double left = std::abs(f[i - 1]);
        const double right = std::abs(f[i + 1]);
        if (std::signbit(f[i - 1]) != std::signbit(f[i]) || std::signbit(f[i + 1]) != std::signbit(f[i])) continue;
        if (!(here <= left && here <= right && here <= 0.5 * std::max(left, right))) continue;
        const double half_w = 0.5 * (grid[i + 1] - grid[i - 1]);
        const Box box{grid[i - 1], grid[i + 1], -half_w, half_w};
        try {
            for (Complex z : find_zeros_in_box(spec, box, 256, opts.tol)) {
                if (std::abs(z.imag()) <= 1e-6 * std::max(1.0, std::abs(z))) z = Complex(z.real(), 0.0);
                zeros.push_back(z);
            }
        } catch (const ContourError& e) {
            std::ostringstream msg;
            msg << "unresolved dip of |Delta| near lambda = " << grid[i] << ": " << e.what();
            notes_holder.notes.push_back(msg.str());
        }
    }

    Spectrum out = cluster_into_spectrum(std::move(zeros), spec, opts.integration);
    // Residual relative to the local size of Δ on the scan grid.
    for (auto& e : out.eigenvalues) {
        const auto it = std::lower_bound(grid.begin(), grid.end(), e.value.real());
        const std::size_t j = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - grid.begin(), 1,
                                                                                 static_cast<std::ptrdiff_t>(grid.size()) - 1));
        const double local = std::max({std::abs(f[j - 1]), std::abs(f[j]), 1e-300});
        e.residual /= local;
        if (e.multiplicity > 1 || e.value.imag() != 0.0) {
            std::ostringstream msg;
            msg << "resolved near-tangency at lambda = " << e.value.real() << " (multiplicity " << e.multiplicity
                << (e.value.imag() != 0.0 ? ", non-real" : "") << ")";
            out.notes.push_back(msg.str());
        }
    }
    out.notes.insert(out.notes.end(), notes_holder.notes.begin(), notes_holder.notes.end());
    out.sort();
    return out;
}

Spectrum eigs_two_interval(const ProblemSpec& spec, double lambda_min, double lambda_max, double tol,
                           double imag_extent) {
    const auto& s = two_interval_of(spec);
    RealScanOptions ro;
    ro.tol = tol;
    Spectrum out = find_real_eigs(spec, lambda_min, lambda_max, ro);

    const double omega = std::numbers::pi / (2.0 * (s.beta - s.delta2));
    const double low_top = std::min(lambda_max, std::pow(4.5 * omega, 2));
    if (imag_extent <= 0.0 || low_top <= lambda_min) return out;

    const double length = (s.delta1 - s.alpha) + (s.beta - s.delta2);
    const double nudge = 1e-3 * std::max(1.0, low_top - lambda_min);
    const int quad = std::max(512, static_cast<int>(4.0 * (low_top - lambda_min + 2.0 * imag_extent) * length));
    bool searched = false;
    for (int attempt = 0; attempt < 5 && !searched; ++attempt) {
        const double shift = nudge * (0.37 + attempt);
        const Box box{lambda_min - shift, low_top + shift, -imag_extent, imag_extent};
        try {
            for (Complex z : find_zeros_in_box(spec, box, quad, tol)) {
                if (std::abs(z.imag()) <= 1e-6 * std::max(1.0, std::abs(z))) continue;
                out.eigenvalues.push_back({z, 1, std::abs(char_fn(spec, z))});
            }
            searched = true;
        } catch (const ContourError&) {
        }
    }
    if (!searched) out.notes.push_back("complex search in the low region failed: zero near every trial contour");
    out.sort();
    return out;
}

std::optional<std::string> asymptotic_hypothesis_violation(const ProblemSpec& spec) {
    const auto& s = two_interval_of(spec);
    const auto& bc = spec.bc;
    const double lead = bc.dense_leading_combination();
    const double norm = std::max({std::abs(bc.a22 * bc.b12), std::abs(bc.a12 * bc.b22), 1e-300});
    if (std::abs(lead) <= 1e-12 * norm || lead == 0.0)
        return std::string("a22*b12 - a12*b22 = 0: the leading asymptotic term vanishes");
    const double left = s.delta1 - s.alpha;
    const double right = s.beta - s.delta2;
    if (std::abs(left - right) > 1e-12 * (s.beta - s.alpha))
        return std::string("dense pieces have different lengths (") + std::to_string(left) + " vs " +
               std::to_string(right) + ")";
    return std::nullopt;
}

AsymptoticReport asymptotic_table(const ProblemSpec& spec, const Spectrum& computed, int n_max) {
    const auto& s = two_interval_of(spec);
    AsymptoticReport rep;
    const auto violation = asymptotic_hypothesis_violation(spec);
    rep.hypotheses_ok = !violation;
    if (violation) rep.banner = "asymptotic hypotheses not met: " + *violation;
    rep.spacing = std::numbers::pi / (2.0 * (s.beta - s.delta2));

    std::vector<std::optional<EigAsymptote>> best(static_cast<std::size_t>(std::max(n_max, 0)) + 1);
    for (const auto& e : computed.eigenvalues) {
        if (e.value.imag() != 0.0 || e.value.real() < 0.0) continue;
        const double root = std::sqrt(e.value.real());
        const long n = std::lround(root / rep.spacing) + 1;
        if (n < 1 || n > n_max) continue;
        const double predicted = static_cast<double>(n - 1) * rep.spacing;
        EigAsymptote row{static_cast<int>(n), predicted, root, root - predicted};
        auto& slot = best[static_cast<std::size_t>(n)];
        if (!slot || std::abs(row.residual) < std::abs(slot->residual)) slot = row;
    }
    int highest = 0;
    for (const auto& slot : best)
        if (slot) {
            rep.rows.push_back(*slot);
            highest = slot->n;
        }
    rep.truncated = highest < n_max;
    return rep;
}

double max_spacing_deviation(const AsymptoticReport& report, int n_lo, int n_hi) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
        const auto& a = report.rows[i];
        const auto& b = report.rows[i + 1];
        if (a.n < n_lo || b.n > n_hi || b.n != a.n + 1) continue;
        worst = std::max(worst, std::abs((b.computed_sqrt - a.computed_sqrt) - report.spacing) / report.spacing);
    }
    return worst;
}

double residual_decay_slope(const AsymptoticReport& report, int n_lo, int n_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& r : report.rows) {
        if (r.n < n_lo || r.n > n_hi || r.residual == 0.0) continue;
        const double x = std::log(static_cast<double>(r.n));
        const double y = std::log(std::abs(r.residual));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return std::nan("");
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

ProblemSpec bridge_discretization(const ProblemSpec& spec, int cells_per_unit) {
    const auto& s = two_interval_of(spec);
    auto cells = [&](double len) {
        return std::max(2, static_cast<int>(std::ceil(len * static_cast<double>(cells_per_unit))));
    };
    std::vector<double> pts;
    auto fill = [&](double lo, double hi, bool include_lo) {
        const int c = cells(hi - lo);
        for (int k = include_lo ? 0 : 1; k < c; ++k) pts.push_back(lo + (hi - lo) * k / c);
        pts.push_back(hi);
    };
    fill(s.alpha, spec.a, true);
    fill(spec.a, s.delta1, false);
    pts.push_back(s.delta2);
    fill(s.delta2, s.beta, false);
    const double h = (s.beta - s.delta2) / cells(s.beta - s.delta2);
    pts.push_back(s.beta + h);
    return ProblemSpec{TimeScale::finite(std::move(pts)), spec.a, spec.q, spec.bc};
}

}  // namespace frozen_sl
