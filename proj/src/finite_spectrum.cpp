#include "frozen_sl/finite_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frozen_sl/errors.hpp"
#include "frozen_sl/roots.hpp"

namespace frozen_sl {

namespace {

/// Values are polynomials in λ; multiplying by λ shifts coefficients.
template <class F>
struct PolyAlgebra {
    using Value = Polynomial<F>;
    using Scalar = F;
    Value times_lambda(const Value& v) const { return v.shifted(); }
    Value constant(const F& c) const { return Value::constant(c); }
    static F lift(double x) { return Field<F>::from_double(x); }
};

/// Values are numbers at one fixed λ.
struct PointAlgebra {
    using Value = Complex;
    using Scalar = Complex;
    Complex lambda;
    Value times_lambda(const Value& v) const { return lambda * v; }
    Value constant(const Complex& c) const { return c; }
    static Complex lift(double x) { return {x, 0.0}; }
};

template <class A>
typename A::Value forward(const A& alg, const typename A::Value& prev, const typename A::Value& cur,
                          const typename A::Scalar& mu, const typename A::Scalar& mu_s,
                          const typename A::Scalar& q_t, const typename A::Scalar& frozen) {
    using S = typename A::Scalar;
    const S ratio = mu_s / mu;
    const S one(1);
    const S mm = mu * mu_s;
    return cur * S(one + ratio) - alg.times_lambda(cur) * mm - prev * ratio +
           alg.constant(S(mm * q_t * frozen));
}

template <class A>
typename A::Value backward(const A& alg, const typename A::Value& next2, const typename A::Value& next,
                           const typename A::Scalar& mu, const typename A::Scalar& mu_s,
                           const typename A::Scalar& q_t, const typename A::Scalar& frozen) {
    using S = typename A::Scalar;
    const S ratio = mu_s / mu;
    const S one(1);
    const S mm = mu * mu_s;
    const S inv_ratio = mu / mu_s;
    return (next * S(one + ratio) - alg.times_lambda(next) * mm + alg.constant(S(mm * q_t * frozen)) -
            next2) *
           inv_ratio;
}

/// Graininess and potential lifted into the scalar type of an algebra.
template <class S, class Lift>
struct Grid {
    std::vector<S> mu;  // μ(p_i), i < n − 1
    std::vector<S> q;   // q(p_i), i < n − 2
    std::size_t ia;

    Grid(const ProblemSpec& spec, Lift lift) : ia(spec.frozen_index()) {
        const auto pts = spec.ts.points();
        const auto n = pts.size();
        for (std::size_t i = 0; i + 1 < n; ++i) mu.push_back(S(lift(pts[i + 1]) - lift(pts[i])));
        for (std::size_t i = 0; i + 2 < n; ++i) q.push_back(lift(spec.q_at_index(i)));
    }
};

template <class A>
BasisTable<typename A::Value> run_basis(const ProblemSpec& spec, const A& alg) {
    using V = typename A::Value;
    using S = typename A::Scalar;
    const auto lift = [](double x) { return A::lift(x); };
    const Grid<S, decltype(lift)> g(spec, lift);
    const auto n = spec.ts.size();
    const auto ia = g.ia;

    auto sweep = [&](std::vector<V>& y, const S& frozen) {
        for (std::size_t i = ia; i + 2 < n; ++i)
            y[i + 2] = forward(alg, y[i], y[i + 1], g.mu[i], g.mu[i + 1], g.q[i], frozen);
        for (std::size_t i = ia; i-- > 0;)
            y[i] = backward(alg, y[i + 2], y[i + 1], g.mu[i], g.mu[i + 1], g.q[i], frozen);
    };

    BasisTable<V> t;
    t.S.assign(n, V{});
    t.C.assign(n, V{});
    // S(a) = 0, S^σ(a) = μ(a); C(a) = C^σ(a) = 1.
    t.S[ia] = alg.constant(S(0));
    t.S[ia + 1] = alg.constant(g.mu[ia]);
    t.C[ia] = alg.constant(S(1));
    t.C[ia + 1] = alg.constant(S(1));
    sweep(t.S, S(0));
    sweep(t.C, S(1));

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const S inv = S(1) / g.mu[i];
        t.dS.push_back((t.S[i + 1] - t.S[i]) * inv);
        t.dC.push_back((t.C[i + 1] - t.C[i]) * inv);
    }
    return t;
}

template <class F>
std::array<F, 4> lift_row(const std::array<double, 4>& r) {
    return {Field<F>::from_double(r[0]), Field<F>::from_double(r[1]), Field<F>::from_double(r[2]),
            Field<F>::from_double(r[3])};
}

template <class V, class F>
V determinant(const BasisTable<V>& t, const std::array<F, 4>& a, const std::array<F, 4>& b) {
    const auto bc = t.boundary_C();
    const auto bs = t.boundary_S();
    return apply_row(a, bc) * apply_row(b, bs) - apply_row(b, bc) * apply_row(a, bs);
}

void require_finite(const ProblemSpec& spec) {
    if (!spec.ts.is_finite()) throw std::invalid_argument("operation requires a finite time scale");
    spec.validate();
}

template <class F>
F product(const std::vector<F>& v, std::size_t lo, std::size_t hi) {
    // Π v[k] for k in [lo, hi]; empty ranges give 1.
    F p(1);
    for (std::size_t k = lo; k <= hi && k < v.size(); ++k) p *= v[k];
    return p;
}

}  // namespace

template <class F>
Polynomial<F> step_forward(const Polynomial<F>& prev, const Polynomial<F>& cur, const F& mu,
                           const F& mu_sigma, const F& q_t, const F& frozen_val) {
    if (Field<F>::magnitude(mu) <= 0.0 || Field<F>::magnitude(mu_sigma) <= 0.0)
        throw std::invalid_argument("step_forward: both points must be right-scattered");
    return forward(PolyAlgebra<F>{}, prev, cur, mu, mu_sigma, q_t, frozen_val);
}

template <class F>
Polynomial<F> step_backward(const Polynomial<F>& next2, const Polynomial<F>& next, const F& mu,
                            const F& mu_sigma, const F& q_t, const F& frozen_val) {
    if (Field<F>::magnitude(mu) <= 0.0 || Field<F>::magnitude(mu_sigma) <= 0.0)
        throw std::invalid_argument("step_backward: both points must be right-scattered");
    return backward(PolyAlgebra<F>{}, next2, next, mu, mu_sigma, q_t, frozen_val);
}

template <class F>
BasisTable<Polynomial<F>> build_basis(const ProblemSpec& spec) {
    require_finite(spec);
    return run_basis(spec, PolyAlgebra<F>{});
}

BasisTable<Complex> evaluate_basis(const ProblemSpec& spec, Complex lambda) {
    require_finite(spec);
    return run_basis(spec, PointAlgebra{lambda});
}

template <class F>
Polynomial<F> char_poly(const ProblemSpec& spec) {
    const auto t = build_basis<F>(spec);
    return determinant(t, lift_row<F>(spec.bc.a_row()), lift_row<F>(spec.bc.b_row()));
}

Complex char_value(const ProblemSpec& spec, Complex lambda) {
    const auto t = evaluate_basis(spec, lambda);
    return determinant(t, lift_row<Complex>(spec.bc.a_row()), lift_row<Complex>(spec.bc.b_row()));
}

template <class F>
F det_A(const ProblemSpec& spec) {
    // Pure function of the scale and the coefficients: defined even for rows
    // that validate() would reject.
    if (!spec.ts.is_finite()) throw std::invalid_argument("operation requires a finite time scale");
    const auto pts = spec.ts.points();
    const F mu_alpha = F(Field<F>::from_double(pts[1]) - Field<F>::from_double(pts[0]));
    const auto& bc = spec.bc;
    const auto L = [](double x) { return Field<F>::from_double(x); };
    const F a_top = F(L(bc.a11) * mu_alpha - L(bc.a12));
    const F b_top = F(L(bc.b11) * mu_alpha - L(bc.b12));
    return F(a_top * L(bc.b22) - b_top * L(bc.a22));
}

CountPrediction predicted_count(const ProblemSpec& spec, bool rational) {
    require_finite(spec);
    const int count = static_cast<int>(spec.ts.size()) - 2;
    if (rational) {
        const Rational d = det_A<Rational>(spec);
        return {count, sgn(d) != 0, d.get_d()};
    }
    const double d = det_A<Complex>(spec).real();
    const auto pts = spec.ts.points();
    const double mu_alpha = pts[1] - pts[0];
    const auto& bc = spec.bc;
    const double top = std::hypot(bc.a11 * mu_alpha - bc.a12, bc.b11 * mu_alpha - bc.b12);
    const double bottom = std::hypot(bc.a22, bc.b22);
    const bool nonzero = std::abs(d) > 1e-12 * top * bottom && d != 0.0;
    return {count, nonzero, d};
}

Spectrum eigs_finite(const ProblemSpec& spec, FiniteSolveOptions opts) {
    const ComplexPoly delta =
        opts.rational ? to_complex(char_poly<Rational>(spec)) : char_poly<Complex>(spec);
    if (delta.is_zero()) {
        throw DegenerateProblem(
            "characteristic function vanishes identically; every lambda satisfies the boundary system");
    }
    Spectrum out;
    if (*delta.degree() == 0) return out;
    const auto roots = find_roots(delta, opts.tol);
    const ComplexPoly slope = delta.derivative();
    for (const auto& r : roots.roots) {
        Complex z = r.value;
        if (r.multiplicity == 1) {
            // Newton polish against Δ evaluated by the recurrence, which avoids
            // the rounding of the expanded coefficients.
            double best = std::abs(char_value(spec, z));
            for (int it = 0; it < 3 && best > 0.0; ++it) {
                const Complex d = slope.eval(z);
                if (d == Complex{}) break;
                const Complex trial = z - char_value(spec, z) / d;
                const double val = std::abs(char_value(spec, trial));
                if (!(val < best)) break;
                z = trial;
                best = val;
            }
            if (std::abs(z - r.value) > 1e-6 * std::max(1.0, std::abs(r.value))) z = r.value;
        }
        const auto sv = smallest_singular(system_matrix(spec, z));
        out.eigenvalues.push_back({z, r.multiplicity, sv.sigma_min});
    }
    out.sort();
    return out;
}

std::string_view to_string(LeadingTarget t) {
    switch (t) {
        case LeadingTarget::SAlpha: return "S_at_alpha";
        case LeadingTarget::SSigmaAlpha: return "Ssigma_at_alpha";
        case LeadingTarget::SBeta: return "S_at_beta";
        case LeadingTarget::SSigmaBeta: return "Ssigma_at_beta";
        case LeadingTarget::CAlpha: return "C_at_alpha";
        case LeadingTarget::CSigmaAlpha: return "Csigma_at_alpha";
        case LeadingTarget::CBeta: return "C_at_beta";
        case LeadingTarget::CSigmaBeta: return "Csigma_at_beta";
        case LeadingTarget::WronskianAlpha: return "Wronskian_at_alpha";
        case LeadingTarget::WronskianBeta: return "Wronskian_at_beta";
    }
    return "?";
}

template <class F>
LeadingTermPrediction<F> predict_leading(const ProblemSpec& spec, LeadingTarget target) {
    require_finite(spec);
    const auto pts = spec.ts.points();
    const auto n = pts.size();
    const std::size_t r = spec.points_below();
    const std::size_t m = spec.points_above();
    const auto L = [](double x) { return Field<F>::from_double(x); };

    std::vector<F> mu;
    for (std::size_t i = 0; i + 1 < n; ++i) mu.push_back(F(L(pts[i + 1]) - L(pts[i])));
    // μ^{ρ^k}(a) = μ(p_{r-k}) and μ^{σ^j}(a) = μ(p_{r+j}); collect them so
    // that back[k] = μ^{ρ^k}(a) (k >= 1) and fwd[j] = μ^{σ^j}(a) (j >= 0).
    std::vector<F> back(r + 1, F(0)), fwd(m, F(0));
    for (std::size_t k = 1; k <= r; ++k) back[k] = mu[r - k];
    for (std::size_t j = 0; j < m; ++j) fwd[j] = mu[r + j];

    auto sq = [](const F& x) { return F(x * x); };
    auto sign = [](long e) { return e % 2 == 0 ? F(1) : F(-1); };
    const long R = static_cast<long>(r), M = static_cast<long>(m);

    LeadingTermPrediction<F> p{target};
    const bool basis_regime = r >= 3 && m >= 2;
    switch (target) {
        case LeadingTarget::SAlpha:
            if (!basis_regime) return p;
            p.degree = static_cast<int>(r - 1);
            p.coefficient = F(sign(R) * back[1] * sq(product(back, 2, r)));
            break;
        case LeadingTarget::SSigmaAlpha:
            if (!basis_regime) return p;
            p.degree = static_cast<int>(r - 2);
            p.coefficient = F(sign(R - 1) * back[1] * sq(product(back, 2, r - 1)));
            break;
        case LeadingTarget::SBeta:
            if (!basis_regime) return p;
            p.degree = static_cast<int>(m - 2);
            p.coefficient = F(sign(M) * sq(m >= 3 ? product(fwd, 0, m - 3) : F(1)) * fwd[m - 2]);
            break;
        case LeadingTarget::SSigmaBeta:
            if (!basis_regime) return p;
            p.degree = static_cast<int>(m - 1);
            p.coefficient = F(sign(M + 1) * sq(product(fwd, 0, m - 2)) * fwd[m - 1]);
            break;
        case LeadingTarget::CAlpha:
            if (!basis_regime) return p;
            p.degree = static_cast<int>(r);
            p.coefficient = F(sign(R) * sq(product(back, 1, r)));
            break;
        case LeadingTarget::CSigmaAlpha:
            if (!basis_regime) return p;
            p.degree = static_cast<int>(r - 1);
            p.coefficient = F(sign(R - 1) * sq(product(back, 1, r - 1)));
            break;
        case LeadingTarget::CBeta:
            if (!basis_regime || m < 3) return p;
            p.degree = static_cast<int>(m - 2);
            p.coefficient = F(sign(M) * fwd[0] * sq(product(fwd, 1, m - 3)) * fwd[m - 2]);
            break;
        case LeadingTarget::CSigmaBeta:
            if (!basis_regime) return p;
            p.degree = static_cast<int>(m - 1);
            p.coefficient = F(sign(M + 1) * fwd[0] * sq(m >= 2 ? product(fwd, 1, m - 2) : F(1)) * fwd[m - 1]);
            break;
        case LeadingTarget::WronskianAlpha: {
            if (r < 3) return p;
            // The leading term comes from μ(α) q(α) S(σ(α)) through the
            // backward φ recurrence; its sign is (−1)^{r−1}.
            const F q_alpha = L(spec.q_at_index(0));
            p.degree = static_cast<int>(r - 2);
            p.coefficient = F(sign(R - 1) * mu[0] * back[1] * sq(product(back, 2, r - 1)) * back[r] * q_alpha);
            break;
        }
        case LeadingTarget::WronskianBeta: {
            if (m < 3) return p;
            const F q_rho_beta = L(spec.q_at_index(n - 3));
            p.degree = static_cast<int>(m - 2);
            p.coefficient = F(sign(M - 1) * mu[n - 2] * sq(product(fwd, 0, m - 2)) * q_rho_beta);
            break;
        }
    }
    p.in_regime = true;
    return p;
}

template <class F>
Polynomial<F> leading_target_value(const BasisTable<Polynomial<F>>& t, LeadingTarget target) {
    const auto n = t.S.size();
    switch (target) {
        case LeadingTarget::SAlpha: return t.S[0];
        case LeadingTarget::SSigmaAlpha: return t.S[1];
        case LeadingTarget::SBeta: return t.S[n - 2];
        case LeadingTarget::SSigmaBeta: return t.S[n - 1];
        case LeadingTarget::CAlpha: return t.C[0];
        case LeadingTarget::CSigmaAlpha: return t.C[1];
        case LeadingTarget::CBeta: return t.C[n - 2];
        case LeadingTarget::CSigmaBeta: return t.C[n - 1];
        case LeadingTarget::WronskianAlpha: return t.S[1] * t.C[0] - t.S[0] * t.C[1];
        case LeadingTarget::WronskianBeta: return t.S[n - 1] * t.C[n - 2] - t.S[n - 2] * t.C[n - 1];
    }
    throw std::logic_error("unknown target");
}

template <class F>
std::vector<Polynomial<F>> wronskian_table(const ProblemSpec& spec) {
    const auto t = build_basis<F>(spec);
    const auto pts = spec.ts.points();
    std::vector<Polynomial<F>> phi;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const F inv_mu = F(F(1) / F(Field<F>::from_double(pts[i + 1]) - Field<F>::from_double(pts[i])));
        phi.push_back((t.S[i + 1] * t.C[i] - t.S[i] * t.C[i + 1]) * inv_mu);
    }
    return phi;
}

Matrix2 system_matrix(const ProblemSpec& spec, Complex lambda) {
    const auto t = evaluate_basis(spec, lambda);
    const auto a = lift_row<Complex>(spec.bc.a_row());
    const auto b = lift_row<Complex>(spec.bc.b_row());
    const auto bc = t.boundary_C();
    const auto bs = t.boundary_S();
    return {{apply_row(a, bc), apply_row(a, bs), apply_row(b, bc), apply_row(b, bs)}};
}

SmallestSingular smallest_singular(const Matrix2& mat) {
    const auto& m = mat.m;
    // Gram matrix G = M^H M (Hermitian 2x2).
    const double g00 = std::norm(m[0]) + std::norm(m[2]);
    const double g11 = std::norm(m[1]) + std::norm(m[3]);
    const Complex g01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    const double tr = g00 + g11;
    const double diff = g00 - g11;
    const double disc = std::sqrt(diff * diff + 4.0 * std::norm(g01));
    const double lmax = 0.5 * (tr + disc);
    // lmin via the determinant for accuracy when lmax >> lmin.
    const double det = std::max(0.0, g00 * g11 - std::norm(g01));
    const double lmin = lmax > 0.0 ? det / lmax : 0.0;

    SmallestSingular out{std::sqrt(lmin), std::sqrt(lmax), {}};
    // Eigenvector of G for lmin: (g01, lmin - g00) or (lmin - g11, conj(g01)).
    Complex v0 = g01, v1 = lmin - g00;
    Complex w0 = lmin - g11, w1 = std::conj(g01);
    if (std::norm(w0) + std::norm(w1) > std::norm(v0) + std::norm(v1)) {
        v0 = w0;
        v1 = w1;
    }
    double len = std::sqrt(std::norm(v0) + std::norm(v1));
    if (len == 0.0) {
        // G is a multiple of the identity (or zero): any vector works; pick
        // the coordinate axis with the smaller column norm.
        if (g00 <= g11) {
            v0 = 1.0;
            v1 = 0.0;
        } else {
            v0 = 0.0;
            v1 = 1.0;
        }
        len = 1.0;
    }
    out.null_vector = {v0 / len, v1 / len};
    return out;
}

EigenpairCheck check_eigenpair(const ProblemSpec& spec, Complex lambda) {
    const auto t = evaluate_basis(spec, lambda);
    const auto a = lift_row<Complex>(spec.bc.a_row());
    const auto b = lift_row<Complex>(spec.bc.b_row());
    const Matrix2 sys{{apply_row(a, t.boundary_C()), apply_row(a, t.boundary_S()),
                       apply_row(b, t.boundary_C()), apply_row(b, t.boundary_S())}};
    const auto sv = smallest_singular(sys);
    const Complex d1 = sv.null_vector[0], d2 = sv.null_vector[1];

    const auto pts = spec.ts.points();
    const auto n = pts.size();
    EigenpairCheck out{sv.sigma_min, sv.norm, 0.0, 0.0, 0.0, 0.0, {}};
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.y[i] = d1 * t.C[i] + d2 * t.S[i];
    std::vector<Complex> dy(n - 1);
    double mu_min = pts[1] - pts[0];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double mu = pts[i + 1] - pts[i];
        mu_min = std::min(mu_min, mu);
        dy[i] = (out.y[i + 1] - out.y[i]) / mu;
    }
    const Complex y_a = out.y[spec.frozen_index()];
    double ymax = 0.0, qmax = 0.0;
    for (auto v : out.y) ymax = std::max(ymax, std::abs(v));
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double mu = pts[i + 1] - pts[i];
        const Complex ddy = (dy[i + 1] - dy[i]) / mu;
        const double q = spec.q_at_index(i);
        qmax = std::max(qmax, std::abs(q));
        out.equation_residual = std::max(out.equation_residual, std::abs(-ddy + q * y_a - lambda * out.y[i + 1]));
    }
    const BoundaryValues<Complex> by{out.y[0], dy[0], out.y[n - 2], dy[n - 2]};
    out.boundary_residual = std::max(std::abs(apply_row(a, by)), std::abs(apply_row(b, by)));
    double dymax = 0.0, row_norm = 0.0;
    for (auto v : dy) dymax = std::max(dymax, std::abs(v));
    for (auto v : spec.bc.a_row()) row_norm = std::max(row_norm, std::abs(v));
    for (auto v : spec.bc.b_row()) row_norm = std::max(row_norm, std::abs(v));
    // y is a combination of C and S, so its rounding follows their size, which
    // the 2×2 matrix norm measures.
    out.boundary_scale = std::max(4.0 * row_norm * std::max(ymax, dymax), sv.norm);
    out.scale = ymax * std::max({1.0, std::abs(lambda), qmax, 1.0 / (mu_min * mu_min)});
    return out;
}

// Explicit instantiations for the two coefficient backends.
template Polynomial<Complex> step_forward(const Polynomial<Complex>&, const Polynomial<Complex>&, const Complex&,
                                          const Complex&, const Complex&, const Complex&);
template Polynomial<Rational> step_forward(const Polynomial<Rational>&, const Polynomial<Rational>&,
                                           const Rational&, const Rational&, const Rational&, const Rational&);
template Polynomial<Complex> step_backward(const Polynomial<Complex>&, const Polynomial<Complex>&, const Complex&,
                                           const Complex&, const Complex&, const Complex&);
template Polynomial<Rational> step_backward(const Polynomial<Rational>&, const Polynomial<Rational>&,
                                            const Rational&, const Rational&, const Rational&, const Rational&);
template BasisTable<Polynomial<Complex>> build_basis<Complex>(const ProblemSpec&);
template BasisTable<Polynomial<Rational>> build_basis<Rational>(const ProblemSpec&);
template Polynomial<Complex> char_poly<Complex>(const ProblemSpec&);
template Polynomial<Rational> char_poly<Rational>(const ProblemSpec&);
template Complex det_A<Complex>(const ProblemSpec&);
template Rational det_A<Rational>(const ProblemSpec&);
template LeadingTermPrediction<Complex> predict_leading<Complex>(const ProblemSpec&, LeadingTarget);
template LeadingTermPrediction<Rational> predict_leading<Rational>(const ProblemSpec&, LeadingTarget);
template Polynomial<Complex> leading_target_value(const BasisTable<Polynomial<Complex>>&, LeadingTarget);
template Polynomial<Rational> leading_target_value(const BasisTable<Polynomial<Rational>>&, LeadingTarget);
template std::vector<Polynomial<Complex>> wronskian_table<Complex>(const ProblemSpec&);
template std::vector<Polynomial<Rational>> wronskian_table<Rational>(const ProblemSpec&);

}  // namespace frozen_sl
