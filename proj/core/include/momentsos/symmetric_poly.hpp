#pragma once

#include <algorithm>
#include <vector>

#include "momentsos/polynomial.hpp"

namespace momentsos {

/// Number of independent entries of an n x n symmetric matrix.
inline int sym_entry_count(int n) { return n * (n + 1) / 2; }

/// Flat index of entry X_{ij} (0-based, any order of i, j) in the
/// upper-triangle row-major layout (X00, X01, ..., X0{n-1}, X11, ...).
inline int sym_entry_index(int n, int i, int j) {
    if (i > j) {
        std::swap(i, j);
    }
    if (i < 0 || j >= n) {
        throw DimensionError("sym_entry_index: indices out of range");
    }
    return i * n - i * (i - 1) / 2 + (j - i);
}

/// Determinant of the I x I principal submatrix of a symbolic symmetric
/// n x n matrix, as a polynomial of degree |I| in its n(n+1)/2 entries.
/// Indices in I are 0-based.
template <typename C = double>
PolynomialT<C> principal_minor(int n, const std::vector<int> &index_set);

/// k-th elementary symmetric function of the eigenvalues of a symbolic
/// symmetric n x n matrix: the sum of all k x k principal minors.
template <typename C = double> PolynomialT<C> sigma_k(int n, int k);

/// Evaluate a polynomial in the sym_entry_index layout at a numeric
/// symmetric matrix given by its upper-triangle row-major entries.
template <typename C>
double eval_at_sym_entries(const PolynomialT<C> &p,
                           const std::vector<double> &upper) {
    return p.eval(upper);
}

// --- implementation ---

namespace detail {

template <typename C>
void minor_permutations(int n, const std::vector<int> &idx,
                        std::vector<int> &perm, std::vector<bool> &used,
                        int row, int sign, PolynomialT<C> &out) {
    const int k = static_cast<int>(idx.size());
    if (row == k) {
        Monomial mono = Monomial::one(sym_entry_count(n));
        for (int r = 0; r < k; ++r) {
            mono.exponents[sym_entry_index(n, idx[r], idx[perm[r]])] += 1;
        }
        out.add_term(mono, C(sign));
        return;
    }
    for (int c = 0; c < k; ++c) {
        if (used[c]) {
            continue;
        }
        // Track permutation parity by counting the inversions introduced.
        int inversions = 0;
        for (int r = 0; r < row; ++r) {
            if (perm[r] > c) {
                ++inversions;
            }
        }
        used[c] = true;
        perm[row] = c;
        minor_permutations(n, idx, perm, used, row + 1,
                           (inversions % 2 == 0) ? sign : -sign, out);
        used[c] = false;
    }
}

} // namespace detail

template <typename C>
PolynomialT<C> principal_minor(int n, const std::vector<int> &index_set) {
    if (index_set.empty()) {
        throw DimensionError("principal_minor: empty index set");
    }
    std::vector<int> idx = index_set;
    std::sort(idx.begin(), idx.end());
    if (idx.front() < 0 || idx.back() >= n) {
        throw DimensionError("principal_minor: index out of range");
    }
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
        throw DimensionError("principal_minor: repeated index");
    }
    PolynomialT<C> out(sym_entry_count(n));
    std::vector<int> perm(idx.size(), 0);
    std::vector<bool> used(idx.size(), false);
    detail::minor_permutations(n, idx, perm, used, 0, 1, out);
    return out;
}

template <typename C> PolynomialT<C> sigma_k(int n, int k) {
    if (k < 1 || k > n) {
        throw DimensionError("sigma_k: k out of range");
    }
    PolynomialT<C> out(sym_entry_count(n));
    // Enumerate all size-k subsets of {0, ..., n-1}.
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) {
        subset[i] = i;
    }
    while (true) {
        out = out + principal_minor<C>(n, subset);
        int pos = k - 1;
        while (pos >= 0 && subset[pos] == n - k + pos) {
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++subset[pos];
        for (int i = pos + 1; i < k; ++i) {
            subset[i] = subset[i - 1] + 1;
        }
    }
    return out;
}

} // namespace momentsos
