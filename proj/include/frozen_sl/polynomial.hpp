#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "frozen_sl/field.hpp"

namespace frozen_sl {

template <class F>
struct DegreeLeading {
    int degree;
    F leading;
};

/// Dense univariate polynomial in λ with coefficients in F (ascending order).
///
/// Canonical form: the stored top coefficient is nonzero. Addition and
/// subtraction with floating coefficients also drop top coefficients that
/// cancelled down to Field<F>::floor times the operands' magnitude at that
/// power (rounding noise of an exact cancellation). Exact mode drops only
/// exact zeros. The zero polynomial stores no coefficients and has no degree.
template <class F>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<F> ascending) : c_(std::move(ascending)) { canonicalize(); }
    Polynomial(std::initializer_list<F> ascending) : c_(ascending) { canonicalize(); }

    static Polynomial constant(F value) { return Polynomial(std::vector<F>{std::move(value)}); }
    static Polynomial monomial(F coeff, std::size_t power) {
        std::vector<F> c(power + 1, F(0));
        c[power] = std::move(coeff);
        return Polynomial(std::move(c));
    }

    const std::vector<F>& coeffs() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }

    /// nullopt for the zero polynomial.
    std::optional<int> degree() const noexcept {
        if (c_.empty()) return std::nullopt;
        return static_cast<int>(c_.size()) - 1;
    }

    F coeff(std::size_t k) const { return k < c_.size() ? c_[k] : F(0); }

    Polynomial& operator+=(const Polynomial& o) { return accumulate(o, false); }
    Polynomial& operator-=(const Polynomial& o) { return accumulate(o, true); }
    Polynomial& operator*=(const F& s) {
        for (auto& x : c_) x *= s;
        canonicalize();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend Polynomial operator*(Polynomial a, const F& s) { return a *= s; }
    friend Polynomial operator*(const F& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }

    /// p(λ)·λ^k
    Polynomial shifted(std::size_t k = 1) const {
        if (is_zero()) return {};
        std::vector<F> r(k, F(0));
        r.insert(r.end(), c_.begin(), c_.end());
        return Polynomial(std::move(r));
    }

    /// λ ↦ p(scale·λ + offset)
    Polynomial compose_linear(const F& scale, const F& offset) const {
        Polynomial result;
        const Polynomial inner{offset, scale};
        for (std::size_t k = c_.size(); k-- > 0;) result = result * inner + constant(c_[k]);
        return result;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<F> r(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) r[k - 1] = c_[k] * F(static_cast<long>(k));
        return Polynomial(std::move(r));
    }

    /// Horner evaluation in the coefficient field.
    F operator()(const F& x) const {
        F acc(0);
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
        return acc;
    }

    /// Horner evaluation at a complex point (coefficients converted to double).
    Complex eval(Complex x) const {
        Complex acc{};
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + Field<F>::to_complex(c_[k]);
        return acc;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& x : c_) m = std::max(m, Field<F>::magnitude(x));
        return m;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

private:
    void canonicalize() {
        while (!c_.empty() && Field<F>::negligible(c_.back(), 0.0)) c_.pop_back();
    }

    Polynomial& accumulate(const Polynomial& o, bool subtract) {
        const std::size_t len = std::max(c_.size(), o.c_.size());
        std::vector<double> operand(len, 0.0);
        for (std::size_t k = 0; k < c_.size(); ++k) operand[k] = Field<F>::magnitude(c_[k]);
        for (std::size_t k = 0; k < o.c_.size(); ++k) operand[k] = std::max(operand[k], Field<F>::magnitude(o.c_[k]));
        c_.resize(len, F(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) {
            if (subtract) c_[k] -= o.c_[k];
            else c_[k] += o.c_[k];
        }
        while (!c_.empty() && Field<F>::negligible(c_.back(), operand[c_.size() - 1])) c_.pop_back();
        return *this;
    }

    std::vector<F> c_;
};

using ComplexPoly = Polynomial<Complex>;
using RationalPoly = Polynomial<Rational>;

template <class F>
std::optional<DegreeLeading<F>> degree_and_leading(const Polynomial<F>& p) {
    if (p.is_zero()) return std::nullopt;
    return DegreeLeading<F>{*p.degree(), p.coeffs().back()};
}

template <class F>
ComplexPoly to_complex(const Polynomial<F>& p) {
    std::vector<Complex> c;
    c.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) c.push_back(Field<F>::to_complex(x));
    return ComplexPoly(std::move(c));
}

/// Expands ∏ (λ - r_i).
ComplexPoly from_roots(const std::vector<Complex>& roots);

}  // namespace frozen_sl
