#include "momentsos/monomial.hpp"

#include <algorithm>

namespace momentsos {

Monomial Monomial::variable(int n, int i) {
    if (i < 0 || i >= n) {
        throw DimensionError("Monomial::variable: index out of range");
    }
    std::vector<int> e(n, 0);
    e[i] = 1;
    return Monomial(std::move(e));
}

Monomial Monomial::operator*(const Monomial &other) const {
    if (num_vars() != other.num_vars()) {
        throw DimensionError("Monomial product: variable count mismatch");
    }
    std::vector<int> e(exponents);
    for (size_t i = 0; i < e.size(); ++i) {
        e[i] += other.exponents[i];
    }
    return Monomial(std::move(e));
}

Ordering graded_lex_compare(const Monomial &a, const Monomial &b) {
    if (a.num_vars() != b.num_vars()) {
        throw DimensionError("graded_lex_compare: variable count mismatch");
    }
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) {
        return da < db ? Ordering::Less : Ordering::Greater;
    }
    // Same degree: the monomial putting more weight on earlier variables
    // comes first (x1^2 before x1*x2 before x2^2).
    for (int i = 0; i < a.num_vars(); ++i) {
        if (a.exponents[i] != b.exponents[i]) {
            return a.exponents[i] > b.exponents[i] ? Ordering::Less
                                                  : Ordering::Greater;
        }
    }
    return Ordering::Equal;
}

namespace {

void enumerate_degree(int n, int pos, int remaining, std::vector<int> &current,
                      std::vector<Monomial> &out) {
    if (pos == n - 1) {
        current[pos] = remaining;
        out.emplace_back(current);
        current[pos] = 0;
        return;
    }
    // Descending exponent on the earlier variable matches graded lex order.
    for (int e = remaining; e >= 0; --e) {
        current[pos] = e;
        enumerate_degree(n, pos + 1, remaining - e, current, out);
    }
    current[pos] = 0;
}

} // namespace

MonomialBasis::MonomialBasis(int n, int m) : n_(n), m_(m) {
    if (n < 1) {
        throw DimensionError("MonomialBasis: need at least one variable");
    }
    if (m < 0) {
        throw DimensionError("MonomialBasis: negative degree");
    }
    std::vector<int> current(n, 0);
    for (int d = 0; d <= m; ++d) {
        enumerate_degree(n, 0, d, current, entries_);
    }
    for (int i = 0; i < static_cast<int>(entries_.size()); ++i) {
        index_.emplace(entries_[i], i);
    }
}

int MonomialBasis::index_of(const Monomial &mono) const {
    const int i = find(mono);
    if (i < 0) {
        throw DimensionError("MonomialBasis::index_of: monomial not in basis");
    }
    return i;
}

int MonomialBasis::find(const Monomial &mono) const {
    if (mono.num_vars() != n_) {
        return -1;
    }
    auto it = index_.find(mono);
    return it == index_.end() ? -1 : it->second;
}

std::int64_t basis_size(int n, int m) {
    // C(n+m, m)
    std::int64_t r = 1;
    for (int i = 1; i <= m; ++i) {
        r = r * (n + i) / i;
    }
    return r;
}

MonomialBasis basis(int n, int m) { return MonomialBasis(n, m); }

} // namespace momentsos
