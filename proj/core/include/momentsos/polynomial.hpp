#pragma once

#include <boost/rational.hpp>
#include <cmath>
#include <map>
#include <vector>

#include "momentsos/monomial.hpp"

namespace momentsos {

using Rational = boost::rational<long long>;

namespace detail {
inline bool coeff_is_zero(double c) { return c == 0.0; }
inline bool coeff_is_zero(const Rational &c) { return c.numerator() == 0; }
inline double coeff_to_double(double c) { return c; }
inline double coeff_to_double(const Rational &c) {
    return static_cast<double>(c.numerator()) /
           static_cast<double>(c.denominator());
}
} // namespace detail

/// Sparse multivariate polynomial over coefficients C (double by default,
/// exact rationals for symbolic identity checks). Zero coefficients are
/// never stored.
template <typename C> class PolynomialT {
public:
    using TermMap = std::map<Monomial, C, GradedLexLess>;

    explicit PolynomialT(int n) : n_(n) {
        if (n < 1) {
            throw DimensionError("Polynomial: need at least one variable");
        }
    }

    static PolynomialT constant(int n, const C &c) {
        PolynomialT p(n);
        p.add_term(Monomial::one(n), c);
        return p;
    }

    static PolynomialT variable(int n, int i) {
        PolynomialT p(n);
        p.add_term(Monomial::variable(n, i), C(1));
        return p;
    }

    int num_vars() const { return n_; }
    const TermMap &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        // Term map is graded-lex ordered, so the last term has max degree.
        return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
    }

    C coefficient(const Monomial &mono) const {
        auto it = terms_.find(mono);
        return it == terms_.end() ? C(0) : it->second;
    }

    void add_term(const Monomial &mono, const C &coef) {
        if (mono.num_vars() != n_) {
            throw DimensionError("Polynomial::add_term: variable count mismatch");
        }
        auto it = terms_.find(mono);
        if (it == terms_.end()) {
            if (!detail::coeff_is_zero(coef)) {
                terms_.emplace(mono, coef);
            }
        } else {
            it->second += coef;
            if (detail::coeff_is_zero(it->second)) {
                terms_.erase(it);
            }
        }
    }

    PolynomialT operator+(const PolynomialT &other) const {
        check_compatible(other);
        PolynomialT r(*this);
        for (const auto &[mono, coef] : other.terms_) {
            r.add_term(mono, coef);
        }
        return r;
    }

    PolynomialT operator-() const {
        PolynomialT r(n_);
        for (const auto &[mono, coef] : terms_) {
            r.terms_.emplace(mono, -coef);
        }
        return r;
    }

    PolynomialT operator-(const PolynomialT &other) const {
        return *this + (-other);
    }

    PolynomialT operator*(const PolynomialT &other) const {
        check_compatible(other);
        PolynomialT r(n_);
        for (const auto &[ma, ca] : terms_) {
            for (const auto &[mb, cb] : other.terms_) {
                r.add_term(ma * mb, ca * cb);
            }
        }
        return r;
    }

    PolynomialT operator*(const C &scalar) const {
        PolynomialT r(n_);
        if (detail::coeff_is_zero(scalar)) {
            return r;
        }
        for (const auto &[mono, coef] : terms_) {
            r.terms_.emplace(mono, coef * scalar);
        }
        return r;
    }

    bool operator==(const PolynomialT &other) const {
        return n_ == other.n_ && terms_ == other.terms_;
    }

    /// Evaluate at a point (length n).
    double eval(const std::vector<double> &x) const {
        if (static_cast<int>(x.size()) != n_) {
            throw DimensionError("Polynomial::eval: point dimension mismatch");
        }
        double total = 0.0;
        for (const auto &[mono, coef] : terms_) {
            double t = detail::coeff_to_double(coef);
            for (int i = 0; i < n_; ++i) {
                for (int e = 0; e < mono.exponents[i]; ++e) {
                    t *= x[i];
                }
            }
            total += t;
        }
        return total;
    }

    /// Re-embed into a larger variable space: variable i of this polynomial
    /// becomes variable var_map[i] of the result.
    PolynomialT embed(int n_total, const std::vector<int> &var_map) const {
        if (static_cast<int>(var_map.size()) != n_) {
            throw DimensionError("Polynomial::embed: map size mismatch");
        }
        PolynomialT r(n_total);
        for (const auto &[mono, coef] : terms_) {
            std::vector<int> e(n_total, 0);
            for (int i = 0; i < n_; ++i) {
                if (var_map[i] < 0 || var_map[i] >= n_total) {
                    throw DimensionError("Polynomial::embed: target out of range");
                }
                e[var_map[i]] += mono.exponents[i];
            }
            r.add_term(Monomial(std::move(e)), coef);
        }
        return r;
    }

    /// Coefficient-wise conversion to double coefficients.
    PolynomialT<double> to_double() const {
        PolynomialT<double> r(n_);
        for (const auto &[mono, coef] : terms_) {
            r.add_term(mono, detail::coeff_to_double(coef));
        }
        return r;
    }

private:
    void check_compatible(const PolynomialT &other) const {
        if (n_ != other.n_) {
            throw DimensionError("Polynomial arithmetic: variable count mismatch");
        }
    }

    int n_;
    TermMap terms_;
};

using Polynomial = PolynomialT<double>;
using RationalPolynomial = PolynomialT<Rational>;

} // namespace momentsos
