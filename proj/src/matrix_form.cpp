#include "frozen_sl/matrix_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frozen_sl/errors.hpp"
#include "frozen_sl/roots.hpp"

namespace frozen_sl {

namespace {

template <class T, class Lift>
DenseMatrix<T> assemble_Q(int n, SeparatedBC bc, std::span<const double> q, int a, BuildQOptions opts,
                          Lift lift) {
    if (n < 4) throw SpecError("timescale.points", "matrix form needs n >= 4 points");
    if (bc.h == 1.0) {
        throw SpecError("boundary.separated.h",
                        "h = 1 makes the (1,1) entry 2 - 1/(1-h) undefined; use the polynomial path "
                        "(eigs), which handles h = 1");
    }
    const int d = n - 2;
    if (static_cast<int>(q.size()) != d) {
        std::ostringstream msg;
        msg << "need " << d << " potential values q(0..n-3), got " << q.size();
        throw SpecError("potential.values", msg.str());
    }
    const bool a_zero = a == 0 && opts.allow_a_zero;
    if (!a_zero && (a < 1 || a > d)) {
        throw SpecError("frozen_argument",
                        "matrix form addresses y(1..n-2), so a must lie in [1, n-2]; use the polynomial "
                        "path (eigs) for other frozen arguments");
    }

    DenseMatrix<T> Q(static_cast<std::size_t>(d));
    const T one(1), two(2);
    for (int i = 0; i < d; ++i) {
        Q(i, i) = two;
        if (i > 0) Q(i, i - 1) = T(-1);
        if (i + 1 < d) Q(i, i + 1) = T(-1);
    }
    const T one_minus_h = T(one - lift(bc.h));
    Q(0, 0) = T(two - one / one_minus_h);
    Q(d - 1, d - 1) = T(one - lift(bc.H));

    if (a_zero) {
        // y(0) = y(1)/(1 − h) feeds the y(1) column.
        for (int i = 0; i < d; ++i) Q(i, 0) += T(lift(q[i]) / one_minus_h);
    } else {
        for (int i = 0; i < d; ++i) Q(i, a - 1) += lift(q[i]);
    }
    return Q;
}

using CMatrix = std::vector<std::vector<Complex>>;

/// Solves A x = b (complex, partial pivoting). Singular pivots are nudged.
std::vector<Complex> lu_solve(CMatrix A, std::vector<Complex> b) {
    const std::size_t n = b.size();
    double scale = 0.0;
    for (auto& row : A)
        for (auto v : row) scale = std::max(scale, std::abs(v));
    const double tiny = std::max(scale, 1.0) * std::numeric_limits<double>::epsilon();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        if (std::abs(A[k][k]) < tiny) A[k][k] = tiny;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = A[i][k] / A[k][k];
            for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        Complex s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A[k][j] * b[j];
        b[k] = s / A[k][k];
    }
    return b;
}

double vec_norm(const std::vector<Complex>& v) {
    double s = 0.0;
    for (auto x : v) s += std::norm(x);
    return std::sqrt(s);
}

CMatrix shifted(const RealMatrix& m, Complex lambda) {
    CMatrix A(m.dim, std::vector<Complex>(m.dim));
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t j = 0; j < m.dim; ++j) A[i][j] = m(i, j) - (i == j ? lambda : Complex{});
    return A;
}

double eigen_residual(const RealMatrix& m, Complex lambda) {
    const auto v = eigenvector(m, lambda);
    double worst = 0.0;
    for (std::size_t i = 0; i < m.dim; ++i) {
        Complex s = -lambda * v[i];
        for (std::size_t j = 0; j < m.dim; ++j) s += m(i, j) * v[j];
        worst += std::norm(s);
    }
    return std::sqrt(worst);
}

// Parlett–Reinsch balancing with radix 2 (similarity, eigenvalues unchanged).
void balance(std::vector<std::vector<double>>& a) {
    const std::size_t n = a.size();
    const double radix = 2.0, sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a[j][i]);
                r += std::abs(a[i][j]);
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) a[i][j] *= g;
                for (std::size_t j = 0; j < n; ++j) a[j][i] *= f;
            }
        }
    }
}

// Householder reduction to upper Hessenberg form.
void to_hessenberg(std::vector<std::vector<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) alpha += a[i][k] * a[i][k];
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        if (a[k + 1][k] > 0) alpha = -alpha;
        std::vector<double> v(n, 0.0);
        v[k + 1] = a[k + 1][k] - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = a[i][k];
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        // A <- (I - 2vv^T/|v|^2) A (I - 2vv^T/|v|^2)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a[i][j];
            s = 2.0 * s / vnorm2;
            for (std::size_t i = k + 1; i < n; ++i) a[i][j] -= s * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += a[i][j] * v[j];
            s = 2.0 * s / vnorm2;
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= s * v[j];
        }
        for (std::size_t i = k + 2; i < n; ++i) a[i][k] = 0.0;
    }
}

double copy_sign(double mag, double sgn) { return sgn >= 0.0 ? std::abs(mag) : -std::abs(mag); }

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr layout).
std::vector<Complex> hqr(std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<Complex> w(n);
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a[i][j]);

    const int max_its = 30 * n;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(a[l - 1][l - 1]) + std::abs(a[l][l]);
                if (s == 0.0) s = anorm;
                if (std::abs(a[l][l - 1]) + s == s) {
                    a[l][l - 1] = 0.0;
                    break;
                }
            }
            double x = a[nn][nn];
            if (l == nn) {
                w[nn--] = {x + t, 0.0};
            } else {
                double y = a[nn - 1][nn - 1];
                double ww = a[nn][nn - 1] * a[nn - 1][nn];
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + ww;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + copy_sign(z, p);
                        w[nn - 1] = w[nn] = {x + z, 0.0};
                        if (z != 0.0) w[nn] = {x - ww / z, 0.0};
                    } else {
                        w[nn - 1] = {x + p, z};
                        w[nn] = {x + p, -z};
                    }
                    nn -= 2;
                } else {
                    if (its == max_its) {
                        throw SolverError("Hessenberg QR: no convergence within 30*dim iterations");
                    }
                    if (its > 0 && its % 10 == 0) {
                        // exceptional shift
                        t += x;
                        for (int i = 0; i <= nn; ++i) a[i][i] -= x;
                        const double s = std::abs(a[nn][nn - 1]) + std::abs(a[nn - 1][nn - 2]);
                        y = x = 0.75 * s;
                        ww = -0.4375 * s * s;
                    }
                    ++its;
                    int m;
                    double p = 0, q = 0, r = 0, z;
                    for (m = nn - 2; m >= l; --m) {
                        z = a[m][m];
                        r = x - z;
                        double s = y - z;
                        p = (r * s - ww) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a[m][m - 1]) * (std::abs(q) + std::abs(r));
                        const double v = std::abs(p) * (std::abs(a[m - 1][m - 1]) + std::abs(z) +
                                                        std::abs(a[m + 1][m + 1]));
                        if (u + v == v) break;
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        a[i + 2][i] = 0.0;
                        if (i != m) a[i + 2][i - 1] = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = 0.0;
                            if (k + 1 != nn) r = a[k + 2][k - 1];
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const double s = copy_sign(std::sqrt(p * p + q * q + r * r), p);
                        if (s != 0.0) {
                            if (k == m) {
                                if (l != m) a[k][k - 1] = -a[k][k - 1];
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = a[k][j] + q * a[k + 1][j];
                                if (k + 1 != nn) {
                                    p += r * a[k + 2][j];
                                    a[k + 2][j] -= p * z;
                                }
                                a[k + 1][j] -= p * y;
                                a[k][j] -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if (k + 1 != nn) {
                                    p += z * a[i][k + 2];
                                    a[i][k + 2] -= p * r;
                                }
                                a[i][k + 1] -= p * q;
                                a[i][k] -= p;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return w;
}

}  // namespace

RealMatrix build_Q(int n, SeparatedBC bc, std::span<const double> q, int a, BuildQOptions opts) {
    return assemble_Q<double>(n, bc, q, a, opts, [](double x) { return x; });
}

RationalMatrix build_Q_exact(int n, SeparatedBC bc, std::span<const double> q, int a, BuildQOptions opts) {
    return assemble_Q<Rational>(n, bc, q, a, opts, [](double x) { return Rational(x); });
}

BoundaryCoefficients bc_to_general(SeparatedBC bc) {
    BoundaryCoefficients g;
    g.a11 = bc.h;
    g.a12 = 1.0;
    g.b21 = -bc.H;
    g.b22 = 1.0;
    return g;
}

ProblemSpec uniform_problem(int n, SeparatedBC bc, std::span<const double> q, int a) {
    std::vector<double> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pts[i] = i;
    ProblemSpec spec{TimeScale::finite(std::move(pts)), static_cast<double>(a),
                     Potential{potential::Table{{q.begin(), q.end()}}}, bc_to_general(bc)};
    spec.validate();
    return spec;
}

RationalPoly faddeev_leverrier(const RationalMatrix& A) {
    const std::size_t d = A.dim;
    std::vector<Rational> c(d + 1, Rational(0));
    c[d] = 1;
    RationalMatrix M(d);  // M_0 = 0
    for (std::size_t k = 1; k <= d; ++k) {
        // M_k = A M_{k-1} + c_{d-k+1} I
        RationalMatrix next(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                Rational s(0);
                for (std::size_t l = 0; l < d; ++l) s += A(i, l) * M(l, j);
                next(i, j) = s;
            }
        for (std::size_t i = 0; i < d; ++i) next(i, i) += c[d - k + 1];
        M = std::move(next);
        // c_{d-k} = -tr(A M_k)/k
        Rational tr(0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t l = 0; l < d; ++l) tr += A(i, l) * M(l, i);
        c[d - k] = -tr / Rational(static_cast<long>(k));
    }
    return RationalPoly(std::move(c));
}

std::vector<Complex> hessenberg_qr_eigenvalues(const RealMatrix& m) {
    std::vector<std::vector<double>> a(m.dim, std::vector<double>(m.dim));
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t j = 0; j < m.dim; ++j) a[i][j] = m(i, j);
    balance(a);
    to_hessenberg(a);
    return hqr(a);
}

std::vector<Complex> eigenvector(const RealMatrix& m, Complex lambda) {
    const std::size_t n = m.dim;
    // Perturb the shift slightly so the solve stays well-posed.
    const double nudge = 1e-10 * std::max(1.0, std::abs(lambda));
    const auto A = shifted(m, lambda + Complex(nudge, nudge));
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Complex(1.0 + 0.1 * static_cast<double>(i), 0.3);
    for (int it = 0; it < 3; ++it) {
        v = lu_solve(A, v);
        const double len = vec_norm(v);
        for (auto& x : v) x /= len;
    }
    return v;
}

Spectrum eigs_dense(const RealMatrix& m, DenseEigOptions opts) {
    if (m.dim == 0) throw std::invalid_argument("eigs_dense: empty matrix");
    const bool exact =
        opts.method == DenseMethod::ExactCharPoly || (opts.method == DenseMethod::Auto && m.dim <= 12);

    Spectrum out;
    if (exact) {
        RationalMatrix q(m.dim);
        for (std::size_t i = 0; i < m.data.size(); ++i) q.data[i] = Rational(m.data[i]);
        const auto roots = find_roots(to_complex(faddeev_leverrier(q)), opts.tol);
        for (const auto& r : roots.roots) out.eigenvalues.push_back({r.value, r.multiplicity, 0.0});
    } else {
        for (const auto& r : cluster_roots(hessenberg_qr_eigenvalues(m), opts.tol))
            out.eigenvalues.push_back({r.value, r.multiplicity, 0.0});
    }
    for (auto& e : out.eigenvalues) e.residual = eigen_residual(m, e.value);
    out.sort();
    return out;
}

std::vector<Complex> reconstruct_sequence(SeparatedBC bc, std::span<const Complex> interior) {
    std::vector<Complex> y;
    y.reserve(interior.size() + 2);
    y.push_back(interior.front() / (1.0 - bc.h));
    y.insert(y.end(), interior.begin(), interior.end());
    y.push_back((1.0 + bc.H) * interior.back());
    return y;
}

}  // namespace frozen_sl
