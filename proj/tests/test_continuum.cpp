#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <numbers>
#include <random>

#include "frozen_sl/continuum.hpp"
#include "frozen_sl/errors.hpp"
#include "frozen_sl/finite_spectrum.hpp"
#include "support.hpp"

using namespace frozen_sl;
using namespace test_support;

namespace {

constexpr double pi = std::numbers::pi;

double rel(Complex x, Complex ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

/// Plain RK4 for y'' = −λy + q(t)·frozen with a general q (test-local oracle).
ShootState rk4_general(ShootState s, double from, double to, Complex lambda, const std::function<double(double)>& q,
                       int steps) {
    const double h = (to - from) / steps;
    auto f = [&](double t, Complex y) { return -lambda * y + q(t) * s.frozen; };
    double t = from;
    for (int k = 0; k < steps; ++k) {
        const Complex k1y = s.dy, k1d = f(t, s.y);
        const Complex k2y = s.dy + 0.5 * h * k1d, k2d = f(t + 0.5 * h, s.y + 0.5 * h * k1y);
        const Complex k3y = s.dy + 0.5 * h * k2d, k3d = f(t + 0.5 * h, s.y + 0.5 * h * k2y);
        const Complex k4y = s.dy + h * k3d, k4d = f(t + h, s.y + h * k3y);
        s.y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        s.dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        t = from + (k + 1) * h;
    }
    return s;
}

ProblemSpec neumann_two_interval(double alpha, double d1, double d2, double beta, double a, Potential q) {
    BoundaryCoefficients bc;
    bc.a12 = 1;
    bc.b22 = 1;
    ProblemSpec spec{TimeScale::two_interval(alpha, d1, d2, beta), a, std::move(q), bc};
    spec.validate();
    return spec;
}

const IntegrationOptions rk4_path{IntegrationPath::RungeKutta, 2000};

}  // namespace

TEST_CASE("entire functions against direct trigonometric forms") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-60, 60), ux(0.1, 2.0);
    for (int k = 0; k < 200; ++k) {
        const Complex z(u(rng), u(rng));
        const double x = ux(rng);
        const Complex w = std::sqrt(z);
        CHECK(rel(cos_sqrt(z, x), std::cos(w * x)) <= 1e-12);
        CHECK(rel(sinc_sqrt(z, x), std::sin(w * x) / w) <= 1e-12);
        CHECK(rel(vers_sqrt(z, x), (1.0 - std::cos(w * x)) / z) <= 1e-11);
    }
    // Small arguments: series against the leading Taylor terms.
    for (double s : {1e-3, 1e-6, 0.0}) {
        const Complex z(s, -s);
        CHECK(rel(cos_sqrt(z, 1.0), 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0) <= 1e-12);
        CHECK(rel(sinc_sqrt(z, 1.0), 1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0) <= 1e-12);
        CHECK(rel(vers_sqrt(z, 1.0), 0.5 - z / 24.0 + z * z / 720.0 - z * z * z / 40320.0) <= 1e-12);
    }
    // Continuity across the switch between series and closed form.
    for (double arg : {-0.25, 0.25}) {
        const Complex lo(arg * (1 - 1e-12)), hi(arg * (1 + 1e-12));
        CHECK(std::abs(cos_sqrt(lo, 1.0) - cos_sqrt(hi, 1.0)) <= 1e-12);
        CHECK(std::abs(sinc_sqrt(lo, 1.0) - sinc_sqrt(hi, 1.0)) <= 1e-12);
        CHECK(std::abs(vers_sqrt(lo, 1.0) - vers_sqrt(hi, 1.0)) <= 1e-12);
    }
    // No branch cut on the negative axis.
    for (double x : {0.5, 1.0, 3.0}) {
        const Complex above(-7.0, 1e-13), below(-7.0, -1e-13);
        CHECK(std::abs(cos_sqrt(above, x) - cos_sqrt(below, x)) <= 1e-9);
        CHECK(std::abs(sinc_sqrt(above, x) - sinc_sqrt(below, x)) <= 1e-9);
        CHECK(cos_sqrt(-4.0, x).real() == doctest::Approx(std::cosh(2 * x)).epsilon(1e-13));
    }
}

TEST_CASE("dense integration examples") {
    const Potential zero(potential::Constant{0.0});
    SUBCASE("S at lambda = 0 is t - a") {
        for (double t : {0.7, 1.0, 0.0}) {
            const auto s = integrate_dense({0.0, 1.0, 0.0}, 0.4, t, 0.0, zero);
            CHECK(std::abs(s.y - (t - 0.4)) <= 1e-15);
            CHECK(std::abs(s.dy - 1.0) <= 1e-15);
        }
    }
    SUBCASE("S with zero potential is sin/cos") {
        for (Complex lam : {Complex(9.0), Complex(-4.0), Complex(3.0, 2.0), Complex(150.0, -20.0)}) {
            for (double t : {0.0, 0.25, 1.0}) {
                const auto s = integrate_dense({0.0, 1.0, 0.0}, 0.4, t, lam, zero);
                const auto ref = closed_S(lam, t - 0.4);
                CHECK(rel(s.y, ref.y) <= 1e-13);
                CHECK(rel(s.dy, ref.dy) <= 1e-13);
            }
        }
    }
    SUBCASE("C with q = 1 at lambda = 1 matches refined RK4") {
        const Potential one(potential::Constant{1.0});
        const auto c = integrate_dense({1.0, 0.0, 1.0}, 0.4, 1.0, 1.0, one);
        const auto coarse = rk4({1.0, 0.0}, 0.4, 1.0, 1.0, 1.0, 1.0, 200);
        const auto fine = rk4({1.0, 0.0}, 0.4, 1.0, 1.0, 1.0, 1.0, 400);
        CHECK(std::abs(coarse.y - fine.y) <= 1e-9);
        CHECK(std::abs(c.y - fine.y) <= 1e-9);
        CHECK(std::abs(c.dy - fine.dy) <= 1e-9);
        const auto ref = closed_C(1.0, 0.6, 1.0);
        CHECK(std::abs(c.y - ref.y) <= 1e-13);
        CHECK(std::abs(c.dy - ref.dy) <= 1e-13);
    }
}

TEST_CASE("closed form and RK4 agree for constant potentials") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ang(0, 2 * pi), rad(0, 100), uq(-5, 5), ut(0, 1);
    for (int k = 0; k < 60; ++k) {
        const Complex lam = std::polar(rad(rng), ang(rng));
        const Potential q(potential::Constant{uq(rng)});
        const double to = ut(rng);
        for (Complex frozen : {Complex(0.0), Complex(1.0)}) {
            const ShootState start{frozen, 1.0 - frozen, frozen};
            const auto a = integrate_dense(start, 0.4, to, lam, q);
            const auto b = integrate_dense(start, 0.4, to, lam, q, rk4_path);
            CHECK(rel(a.y, b.y) <= 1e-8);
            CHECK(rel(a.dy, b.dy) <= 1e-8);
        }
    }
}

TEST_CASE("quadrature handles varying potentials") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-30, 30);
    const Potential poly(potential::PolynomialInT{{1.0, -2.0, 3.0}});
    const Potential sampled(potential::Sampled{{0.0, 0.3, 0.55, 1.0}, {1.0, -2.0, 4.0, 0.5}});
    for (const Potential* q : {&poly, &sampled}) {
        for (int k = 0; k < 10; ++k) {
            const Complex lam(u(rng), u(rng) / 3);
            const auto got = integrate_dense({1.0, 0.0, 1.0}, 0.4, 0.0, lam, *q);
            // Oracle: fine RK4, split at the kink at 0.3 so the steps see a
            // smooth integrand.
            ShootState ref{1.0, 0.0, 1.0};
            for (auto [from, to] : {std::pair{0.4, 0.3}, std::pair{0.3, 0.0}})
                ref = rk4_general(ref, from, to, lam, [&](double t) { return q->at(t); }, 4000);
            CHECK(rel(got.y, ref.y) <= 1e-8);
            CHECK(rel(got.dy, ref.dy) <= 1e-8);
        }
    }
}

TEST_CASE("gap crossing") {
    SUBCASE("S at lambda = 0 passes straight through") {
        const auto s = cross_gap({1.0 - 0.4, 1.0, 0.0}, 0.0, 123.0, 1.0);
        CHECK(s.y == Complex(2.0 - 0.4));
        CHECK(s.dy == Complex(1.0));
    }
    SUBCASE("C at lambda = 0 picks up delta times q") {
        const auto s = cross_gap({1.0, 0.0, 1.0}, 0.0, 3.0, 1.0);
        CHECK(s.y == Complex(1.0));
        CHECK(s.dy == Complex(3.0));
        const auto wide = cross_gap({1.0, 0.5, 1.0}, 0.0, 3.0, 2.5);
        CHECK(wide.dy == Complex(0.5 + 2.5 * 3.0));
    }
    SUBCASE("post-gap S against the hand formula and its large-lambda form") {
        const auto spec = neumann_two_interval(0, 1, 2, 3, 0.4, Potential(potential::Constant{0.0}));
        const double gap = 1.0;
        double prev_err = std::numeric_limits<double>::infinity();
        for (double w : {20.0, 80.0, 320.0}) {
            const Complex lam = w * w;
            double worst = 0.0;
            for (double t : {2.0, 2.3, 2.71, 3.0}) {
                const double s1 = std::sin(w * 0.6) / w, c1 = std::cos(w * 0.6);
                const double y2 = s1 + gap * c1;
                const double dy2 = c1 - gap * w * w * y2;
                const double exact = y2 * std::cos(w * (t - 2)) + dy2 * std::sin(w * (t - 2)) / w;
                const auto got = shoot(spec, Branch::S, lam, t);
                CHECK(std::abs(got.y - exact) <= 1e-9 * gap * gap * w);
                const double lead = -gap * gap * w * c1 * std::sin(w * (t - 2));
                worst = std::max(worst, std::abs(got.y.real() - lead) / (gap * gap * w));
            }
            CHECK(worst <= 3.0 / w);
            CHECK(worst < prev_err);
            prev_err = worst;
        }
    }
}

TEST_CASE("characteristic function examples") {
    const auto flat = neumann_two_interval(0, 1, 2, 3, 0.4, Potential(potential::Constant{0.0}));
    CHECK(std::abs(char_fn(flat, 0.0)) <= 1e-15);

    SUBCASE("conjugate symmetry") {
        std::mt19937_64 rng(44);
        std::uniform_real_distribution<double> u(-50, 50);
        const auto spec = neumann_two_interval(-0.5, 1, 1.75, 3, 0.1, Potential(potential::PolynomialInT{{0.5, 1.0}}));
        for (int k = 0; k < 20; ++k) {
            const Complex lam(u(rng), u(rng));
            const Complex d = char_fn(spec, lam), dc = char_fn(spec, std::conj(lam));
            CHECK(std::abs(dc - std::conj(d)) <= 1e-12 * std::max(1.0, std::abs(d)));
        }
    }

    SUBCASE("large real lambda follows the leading form") {
        const auto spec = symmetric_two_interval(1.0);
        const double k = spec.bc.dense_leading_combination();
        REQUIRE(k != 0.0);
        double prev = std::numeric_limits<double>::infinity();
        for (int j : {10, 40, 160}) {
            const double w = pi / 8 + j * pi;
            const double lam = w * w;
            const double lead = k * lam * w * std::sin(w * 1.0) * std::cos(w * 1.0);
            const double err = std::abs(char_fn(spec, lam) - lead) / std::abs(lead);
            CHECK(err <= 4.0 / w);
            CHECK(err < prev);
            prev = err;
        }
    }
}

TEST_CASE("shooting outside the scale is a domain error") {
    const auto spec = symmetric_two_interval();
    CHECK_THROWS_AS(shoot(spec, Branch::S, 1.0, 1.5), DomainError);
    CHECK_THROWS_AS(shoot(spec, Branch::C, 1.0, 3.5), DomainError);
    CHECK_THROWS_AS(shoot(spec, Branch::C, 1.0, -0.1), DomainError);
}

TEST_CASE("Wronskian along the shoot") {
    SUBCASE("identically one for zero potential") {
        const auto spec = neumann_two_interval(0, 1, 2, 3, 0.4, Potential(potential::Constant{0.0}));
        for (Complex lam : {Complex(0.0), Complex(7.0, 3.0), Complex(-20.0), Complex(400.0)})
            for (double t : {0.0, 0.2, 0.4, 0.9, 1.0, 2.0, 2.5, 3.0}) {
                // Both products grow like e^{2 Im√λ |t−a|}; their difference is 1.
                const auto s = shoot(spec, Branch::S, lam, t), c = shoot(spec, Branch::C, lam, t);
                const double size = std::abs(s.dy * c.y) + std::abs(s.y * c.dy);
                CHECK(std::abs(wronskian(spec, lam, t) - 1.0) <= 1e-13 * std::max(1.0, size));
            }
    }
    SUBCASE("derivative and jump for constant potential") {
        std::mt19937_64 rng(45);
        std::uniform_real_distribution<double> u(-40, 40), uq(-3, 3);
        for (int k = 0; k < 20; ++k) {
            const double c = uq(rng);
            const auto spec = neumann_two_interval(0, 1, 2, 3, 0.4, Potential(potential::Constant{c}));
            const Complex lam(u(rng), u(rng) / 4);
            CHECK(std::abs(wronskian(spec, lam, 0.4) - 1.0) <= 1e-14);
            // S'C − SC' loses exactly δ·q(δ1)·S(δ2) across the gap; C'S − CS'
            // gains it.
            const Complex phi1 = wronskian(spec, lam, 1.0), phi2 = wronskian(spec, lam, 2.0);
            const Complex s2 = shoot(spec, Branch::S, lam, 2.0).y;
            const double scale = std::max({1.0, std::abs(phi1), std::abs(c * s2)});
            CHECK(std::abs(-phi2 - (-phi1 + 1.0 * c * s2)) <= 1e-8 * scale);
            // Between jumps φ' = −q S.
            for (double t : {0.2, 0.7, 2.5}) {
                const double h = 1e-5;
                const Complex d = (wronskian(spec, lam, t + h) - wronskian(spec, lam, t - h)) / (2 * h);
                const Complex s = shoot(spec, Branch::S, lam, t).y;
                CHECK(std::abs(d + c * s) <= 1e-5 * std::max(1.0, std::abs(wronskian(spec, lam, t))));
            }
        }
    }
}

TEST_CASE("a fine discrete bridge converges to the continuum at first order") {
    const auto spec = neumann_two_interval(0, 1, 2, 3, 0.5, Potential(potential::PolynomialInT{{1.0, 0.5}}));
    for (Complex lam : {Complex(3.0), Complex(-2.0, 1.5), Complex(12.0, -4.0)}) {
        const Complex exact = char_fn(spec, lam);
        std::vector<double> errs;
        for (int cells : {64, 128, 256, 512}) {
            const auto bridge = bridge_discretization(spec, cells);
            errs.push_back(std::abs(char_value(bridge, lam) - exact));
        }
        for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
            CHECK(errs[i + 1] < errs[i]);
            const double order = std::log2(errs[i] / errs[i + 1]);
            CHECK(order == doctest::Approx(1.0).epsilon(0.2));
        }
        CHECK(errs.back() <= 0.05 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("characteristic function is smooth around the origin") {
    const auto spec = symmetric_two_interval(2.0);
    for (double r : {0.1, 1.0, 5.0}) {
        const int n = 128;
        Complex integral = 0.0;
        double peak = 0.0;
        for (int k = 0; k < n; ++k) {
            const Complex z = std::polar(r, 2 * pi * k / n);
            const Complex d = char_fn(spec, z);
            integral += d * z;  // dλ = i z dθ
            peak = std::max(peak, std::abs(d));
        }
        CHECK(std::abs(integral) / n <= 1e-12 * peak * r);
    }
}

TEST_CASE("argument-principle counts") {
    const auto spec = symmetric_two_interval(1.0);
    const auto real = find_real_eigs(spec, -50.0, 200.0);
    REQUIRE(real.count() >= 3);
    SUBCASE("zero-free box") {
        CHECK(count_eigs_in_box(spec, {-40.0, -30.0, 1.0, 3.0}, 64) == 0);
    }
    SUBCASE("boxes around isolated real zeros") {
        const auto ev = real.expanded();
        for (std::size_t i = 0; i < ev.size(); ++i) {
            const double x = ev[i].real();
            double half = 1.0;
            if (i > 0) half = std::min(half, 0.4 * (x - ev[i - 1].real()));
            if (i + 1 < ev.size()) half = std::min(half, 0.4 * (ev[i + 1].real() - x));
            if (half < 1e-3) continue;
            CHECK(count_eigs_in_box(spec, {x - half, x + half, -half, half}, 128) == 1);
        }
    }
    SUBCASE("zeros found inside a box") {
        const auto ev = real.expanded();
        const Box box{ev[0].real() - 0.5, ev[2].real() + 0.37, -1.0, 1.0};
        const auto zs = find_zeros_in_box(spec, box, 128);
        std::vector<Complex> want(ev.begin(), ev.begin() + 3);
        for (std::size_t i = 3; i < ev.size() && ev[i].real() < box.re_hi; ++i) want.push_back(ev[i]);
        CHECK(match_distance(zs, want) <= 1e-8);
    }
    SUBCASE("near-contour zeros are rejected") {
        const double x = real.expanded()[1].real();
        CHECK_THROWS_AS(count_eigs_in_box(spec, {x, x + 1.0, -1.0, 1.0}, 64), ContourError);
    }
}

TEST_CASE("real scan") {
    const auto flat = neumann_two_interval(0, 1, 2, 3, 0.4, Potential(potential::Constant{0.0}));
    const auto sp = find_real_eigs(flat, -10.0, 30.0);
    bool has_zero = false;
    for (const auto& e : sp.eigenvalues) has_zero |= std::abs(e.value) <= 1e-9;
    CHECK(has_zero);
    for (const auto& e : sp.eigenvalues) CHECK(std::abs(char_fn(flat, e.value)) <= 1e-8 * std::max(1.0, std::norm(e.value)));
    CHECK(find_real_eigs(flat, 30.0, 30.0).count() == 0);
    CHECK_THROWS_AS(find_real_eigs(flat, 31.0, 30.0), SpecError);

    SUBCASE("closed form and RK4 give the same zeros") {
        const auto spec = symmetric_two_interval(1.0);
        const auto a = find_real_eigs(spec, -20.0, 150.0);
        RealScanOptions opts;
        opts.integration = rk4_path;
        const auto b = find_real_eigs(spec, -20.0, 150.0, opts);
        CHECK(match_distance(a.expanded(), b.expanded()) <= 1e-7);
    }
}

TEST_CASE("computed two-interval spectrum is closed under conjugation") {
    const auto spec = neumann_two_interval(0, 1, 2, 3, 0.7, Potential(potential::Constant{-6.0}));
    const auto sp = eigs_two_interval(spec, -60.0, 300.0, 1e-10);
    REQUIRE(sp.count() > 0);
    std::vector<Complex> conj;
    for (Complex z : sp.expanded()) conj.push_back(std::conj(z));
    CHECK(match_distance(sp.expanded(), conj) <= 1e-7);
    for (const auto& e : sp.eigenvalues)
        CHECK(std::abs(char_fn(spec, e.value)) <= 1e-7 * std::max(1.0, std::pow(std::abs(e.value), 1.5)));
}

TEST_CASE("asymptotics of the square roots") {
    const auto spec = symmetric_two_interval(1.0);
    const double spacing = pi / 2;
    const double hi = std::pow(41.5 * spacing, 2);
    const auto sp = find_real_eigs(spec, 0.0, hi);
    const auto rep = asymptotic_table(spec, sp, 40);
    CHECK(rep.hypotheses_ok);
    CHECK(rep.banner.empty());
    CHECK(rep.spacing == doctest::Approx(spacing));
    CHECK(!rep.truncated);
    CHECK(max_spacing_deviation(rep, 10, 40) <= 0.02);
    CHECK(residual_decay_slope(rep, 10, 40) <= -0.8);
    for (const auto& row : rep.rows)
        CHECK(row.predicted_sqrt == doctest::Approx((row.n - 1) * spacing));

    SUBCASE("unequal outer pieces raise the banner") {
        BoundaryCoefficients bc = spec.bc;
        const ProblemSpec lopsided{TimeScale::two_interval(0, 1, 2, 3.5), 0.4, spec.q, bc};
        CHECK(asymptotic_hypothesis_violation(lopsided));
        const auto r = asymptotic_table(lopsided, find_real_eigs(lopsided, 0.0, 400.0), 10);
        CHECK(!r.hypotheses_ok);
        CHECK(!r.banner.empty());
    }
    SUBCASE("vanishing leading combination raises the banner") {
        BoundaryCoefficients bc;
        bc.a11 = 1;
        bc.b21 = 1;
        const ProblemSpec dirichlet{spec.ts, 0.4, spec.q, bc};
        CHECK(asymptotic_hypothesis_violation(dirichlet));
    }
    SUBCASE("too few eigenvalues truncate the table") {
        const auto r = asymptotic_table(spec, find_real_eigs(spec, 0.0, 100.0), 40);
        CHECK(r.truncated);
    }
}
