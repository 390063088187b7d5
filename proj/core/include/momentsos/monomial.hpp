#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "momentsos/errors.hpp"

namespace momentsos {

/// A multivariate monomial x^alpha, stored as its exponent vector.
struct Monomial {
    std::vector<int> exponents;

    Monomial() = default;
    explicit Monomial(std::vector<int> exps) : exponents(std::move(exps)) {}

    /// Constant monomial in n variables.
    static Monomial one(int n) { return Monomial(std::vector<int>(n, 0)); }

    /// x_i (0-based) in n variables.
    static Monomial variable(int n, int i);

    int num_vars() const { return static_cast<int>(exponents.size()); }

    int degree() const {
        return std::accumulate(exponents.begin(), exponents.end(), 0);
    }

    bool is_constant() const { return degree() == 0; }

    Monomial operator*(const Monomial &other) const;

    bool operator==(const Monomial &other) const {
        return exponents == other.exponents;
    }
};

enum class Ordering { Less, Equal, Greater };

/// Graded lexicographic comparison: total degree first, ties broken
/// lexicographically with earlier variables weighted higher, so that the
/// degree-m monomials are listed x1^m, x1^{m-1}x2, ..., xn^m.
Ordering graded_lex_compare(const Monomial &a, const Monomial &b);

/// Strict-weak-order adapter for use with std::map / std::sort.
struct GradedLexLess {
    bool operator()(const Monomial &a, const Monomial &b) const {
        return graded_lex_compare(a, b) == Ordering::Less;
    }
};

/// All monomials in n variables of degree at most m, in graded lex order,
/// with a bidirectional index map.
class MonomialBasis {
public:
    MonomialBasis(int n, int m);

    int num_vars() const { return n_; }
    int max_degree() const { return m_; }
    int size() const { return static_cast<int>(entries_.size()); }

    const Monomial &operator[](int i) const { return entries_[i]; }
    const std::vector<Monomial> &entries() const { return entries_; }

    /// Index of a monomial; throws DimensionError when absent.
    int index_of(const Monomial &mono) const;

    /// Index lookup that returns -1 when the monomial is not in the basis.
    int find(const Monomial &mono) const;

private:
    int n_;
    int m_;
    std::vector<Monomial> entries_;
    std::map<Monomial, int, GradedLexLess> index_;
};

/// s(m) = C(n+m, m), the basis size.
std::int64_t basis_size(int n, int m);

/// Construct basis(n, m).
MonomialBasis basis(int n, int m);

} // namespace momentsos
