#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "frozen_sl/errors.hpp"
#include "frozen_sl/finite_spectrum.hpp"
#include "frozen_sl/matrix_form.hpp"
#include "support.hpp"

using namespace frozen_sl;
using namespace test_support;

namespace {

void check_matrix(const RealMatrix& m, const std::vector<std::vector<double>>& expected) {
    REQUIRE(m.dim == expected.size());
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t j = 0; j < m.dim; ++j) CHECK(m(i, j) == expected[i][j]);
}

RealMatrix random_matrix(std::mt19937_64& rng, std::size_t d) {
    std::uniform_int_distribution<int> u(-9, 9);
    RealMatrix m(d);
    for (auto& x : m.data) x = u(rng);
    return m;
}

}  // namespace

TEST_CASE("reduced matrices of the worked examples") {
    const std::vector<double> q2{-3, 10, -5, 1};
    check_matrix(build_Q(6, {0.5, 1.0}, q2, 3), {{0, -1, -3, 0}, {-1, 2, 9, 0}, {0, -1, -3, -1}, {0, 0, 0, 0}});
    const std::vector<double> q3{0, 1, 2, 3};
    check_matrix(build_Q(6, {0, 0}, q3, 4), {{1, -1, 0, 0}, {-1, 2, -1, 1}, {0, -1, 2, 1}, {0, 0, -1, 4}});
    const std::vector<double> zero{0, 0};
    check_matrix(build_Q(4, {0, 0}, zero, 1), {{1, -1}, {-1, 1}});

    const auto exact = build_Q_exact(6, {0.5, 1.0}, q2, 3);
    CHECK(exact(0, 0) == 0);
    CHECK(exact(1, 2) == 9);
}

TEST_CASE("exact entries for non-integer data") {
    const std::vector<double> q{0.25, -0.5, 1.5};
    const auto m = build_Q_exact(5, {0.75, 0.5}, q, 2);
    CHECK(m(0, 0) == Rational(-2));  // 2 − 1/(1 − 3/4)
    CHECK(m(2, 2) == Rational(1, 2));            // 1 − H
    CHECK(m(2, 1) == Rational(-1) + Rational(3, 2));  // column of y(2)
    CHECK(m(0, 1) == Rational(-1) + Rational(1, 4));
}

TEST_CASE("matrix eigenvalues of the worked examples") {
    const std::vector<double> q2{-3, 10, -5, 1};
    const double s7 = std::sqrt(7.0) / 2;
    for (auto method : {DenseMethod::ExactCharPoly, DenseMethod::HessenbergQR}) {
        const auto sp = eigs_dense(build_Q(6, {0.5, 1.0}, q2, 3), {1e-10, method});
        CHECK(sp.count() == 4);
        CHECK(match_distance(sp.expanded(), {0.0, 0.0, {-0.5, s7}, {-0.5, -s7}}) <= 1e-7);
    }
    const std::vector<double> q3{0, 1, 2, 3};
    const auto m3 = build_Q(6, {0, 0}, q3, 4);
    const double s3 = sqrt3();
    for (auto method : {DenseMethod::ExactCharPoly, DenseMethod::HessenbergQR}) {
        const auto sp = eigs_dense(m3, {1e-10, method});
        CHECK(match_distance(sp.expanded(), {2 + s3, 2 - s3, 3.0, 2.0}) <= 1e-8);
        for (const auto& e : sp.eigenvalues) CHECK(e.multiplicity == 1);
        Complex sum = 0.0;
        for (Complex z : sp.expanded()) sum += z;
        CHECK(std::abs(sum - m3.trace()) <= 1e-10);
    }
    const std::vector<double> zero{0, 0};
    CHECK(match_distance(eigs_dense(build_Q(4, {0, 0}, zero, 1)).expanded(), {0.0, 2.0}) <= 1e-12);
}

TEST_CASE("rejections") {
    const std::vector<double> q{1, 2, 3, 4};
    try {
        build_Q(6, {1.0, 0.0}, q, 2);
        FAIL("h = 1 accepted");
    } catch (const SpecError& e) {
        CHECK(std::string(e.what()).find("polynomial path") != std::string::npos);
    }
    CHECK_THROWS_AS(build_Q(6, {0, 0}, q, 0), SpecError);
    CHECK_THROWS_AS(build_Q(6, {0, 0}, q, 5), SpecError);
    CHECK_THROWS_AS(build_Q(3, {0, 0}, std::vector<double>{1}, 1), SpecError);
    CHECK_THROWS_AS(build_Q(6, {0, 0}, std::vector<double>{1, 2}, 1), SpecError);
    CHECK_NOTHROW(build_Q(6, {0, 0}, q, 0, {true}));
}

TEST_CASE("separated conditions in general form") {
    const auto bc = bc_to_general({0.5, 1.0});
    CHECK(bc.a11 == 0.5);
    CHECK(bc.a12 == 1);
    CHECK(bc.a21 == 0);
    CHECK(bc.a22 == 0);
    CHECK(bc.b11 == 0);
    CHECK(bc.b12 == 0);
    CHECK(bc.b21 == -1);
    CHECK(bc.b22 == 1);
    const auto neumann = bc_to_general({0, 0});
    CHECK(neumann.a12 == 1);
    CHECK(neumann.b22 == 1);
    CHECK(neumann.a11 == 0);
    CHECK(neumann.b21 == 0);
    for (double h : {-1.0, 0.0, 0.5, 2.0}) {
        const std::vector<double> q{0, 0, 0};
        CHECK(det_A<Rational>(uniform_problem(5, {h, 0.75}, q, 2)) == Rational(h) - 1);
    }
}

TEST_CASE("Faddeev-LeVerrier matches the direct determinant") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 1 + trial % 6;
        const auto m = random_matrix(rng, d);
        RationalMatrix r(d);
        for (std::size_t i = 0; i < m.data.size(); ++i) r.data[i] = Rational(m.data[i]);
        const auto p = faddeev_leverrier(r);
        CHECK(p.degree() == static_cast<int>(d));
        CHECK(p.coeff(d) == 1);
        CHECK(p.coeff(d - 1) == -r.trace());
        for (double lam : {-2.0, 0.5, 3.0}) {
            CMatrix a(d, std::vector<Complex>(d, 0.0));
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) a[i][j] = (i == j ? lam : 0.0) - m(i, j);
            const Complex det = determinant(a);
            CHECK(std::abs(p(Rational(lam)).get_d() - det.real()) <= 1e-8 * (1 + std::abs(det)));
        }
    }
}

TEST_CASE("QR route agrees with the exact route on random matrices") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const auto m = random_matrix(rng, 2 + trial % 11);
        const auto qr = eigs_dense(m, {1e-10, DenseMethod::HessenbergQR});
        const auto ex = eigs_dense(m, {1e-10, DenseMethod::ExactCharPoly});
        CHECK(match_distance(qr.expanded(), ex.expanded()) <= 1e-6);
        Complex sum = 0.0;
        for (Complex z : qr.expanded()) sum += z;
        CHECK(std::abs(sum - m.trace()) <= 1e-8 * (1 + std::abs(m.trace())));
        for (const auto& e : qr.eigenvalues)
            if (e.multiplicity == 1) CHECK(e.residual <= 1e-6);
    }
}

TEST_CASE("QR route on larger matrices") {
    std::mt19937_64 rng(43);
    for (std::size_t d : {20u, 40u, 60u}) {
        const auto m = random_matrix(rng, d);
        const auto ev = hessenberg_qr_eigenvalues(m);
        CHECK(ev.size() == d);
        Complex sum = 0.0;
        for (Complex z : ev) sum += z;
        CHECK(std::abs(sum - m.trace()) <= 1e-8 * d * 10);
        for (Complex z : ev) {
            const auto v = eigenvector(m, z);
            double res = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                Complex s = -z * v[i];
                for (std::size_t j = 0; j < d; ++j) s += m(i, j) * v[j];
                res = std::max(res, std::abs(s));
            }
            CHECK(res <= 1e-8 * 10 * d);
        }
    }
}

TEST_CASE("matrix and polynomial spectra coincide on random uniform problems") {
    std::mt19937_64 rng(44);
    std::uniform_int_distribution<int> qd(-9, 9);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + trial % 7;
        double h = std::uniform_int_distribution<int>(-8, 8)(rng) / 4.0;
        if (h == 1.0) h = 0.5;
        const double H = std::uniform_int_distribution<int>(-8, 8)(rng) / 4.0;
        std::vector<double> q(static_cast<std::size_t>(n - 2));
        for (auto& x : q) x = qd(rng);
        const int a = std::uniform_int_distribution<int>(1, n - 2)(rng);
        const auto mat = eigs_dense(build_Q(n, {h, H}, q, a));
        const auto poly = eigs_finite(uniform_problem(n, {h, H}, q, a));
        CHECK(mat.count() == n - 2);
        CHECK(match_distance(mat.expanded(), poly.expanded()) <= 1e-6);
    }
}

TEST_CASE("eigenvectors rebuild solutions of the difference equation") {
    std::mt19937_64 rng(45);
    std::uniform_int_distribution<int> qd(-9, 9);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + trial % 7;
        const SeparatedBC bc{std::uniform_int_distribution<int>(-4, 3)(rng) / 4.0 - 0.125,
                             std::uniform_int_distribution<int>(-4, 4)(rng) / 4.0};
        std::vector<double> q(static_cast<std::size_t>(n - 2));
        for (auto& x : q) x = qd(rng);
        const int a = std::uniform_int_distribution<int>(1, n - 2)(rng);
        const auto m = build_Q(n, bc, q, a);
        for (const auto& e : eigs_dense(m).eigenvalues) {
            if (e.multiplicity > 1) continue;
            const auto v = eigenvector(m, e.value);
            const auto y = reconstruct_sequence(bc, v);
            double norm = 0.0;
            for (auto z : y) norm = std::max(norm, std::abs(z));
            for (int t = 0; t + 2 < n; ++t) {
                const Complex lhs = y[t + 2] - 2.0 * y[t + 1] + y[t];
                const Complex rhs = q[t] * y[a] - e.value * y[t + 1];
                CHECK(std::abs(lhs - rhs) <= 1e-8 * norm * (1 + std::abs(e.value)));
            }
            // Boundary conditions in the documented sign convention.
            CHECK(std::abs((y[1] - y[0]) + bc.h * y[0]) <= 1e-10 * norm);
            CHECK(std::abs((y[n - 1] - y[n - 2]) - bc.H * y[n - 2]) <= 1e-10 * norm);
        }
    }
}

TEST_CASE("a = 0 behind the extension flag matches the polynomial path") {
    const std::vector<double> q{2, -1, 3, 1};
    const SeparatedBC bc{0.25, 0.5};
    const auto mat = eigs_dense(build_Q(6, bc, q, 0, {true}));
    const auto poly = eigs_finite(uniform_problem(6, bc, q, 0));
    CHECK(match_distance(mat.expanded(), poly.expanded()) <= 1e-8);
}

TEST_CASE("non-real and real-simple witnesses") {
    const std::vector<double> q2{-3, 10, -5, 1};
    bool non_real = false;
    for (auto z : eigs_dense(build_Q(6, {0.5, 1.0}, q2, 3)).expanded()) non_real |= z.imag() != 0.0;
    CHECK(non_real);
}
