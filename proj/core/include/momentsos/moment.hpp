#pragma once

#include <Eigen/Dense>
#include <vector>

#include "momentsos/polynomial.hpp"

namespace momentsos {

/// Truncated moment vector of a measure on R^n, indexed by basis(n, order).
struct MomentVector {
    int n = 0;
    int order = 0;
    Eigen::VectorXd values;

    int size() const { return static_cast<int>(values.size()); }
};

/// Precomputed index structure mapping (i, j) matrix entries to linear
/// functionals over a moment vector. Moment-matrix layouts have a single
/// unit-coefficient term per entry; localizing layouts carry the constraint
/// polynomial's coefficients. Indices are graded-lex positions, valid for
/// any moment vector of sufficient order (the basis for a smaller degree is
/// a prefix of the basis for a larger one).
class MatrixLayout {
public:
    struct Term {
        double coef;
        int moment_index;
    };

    int side() const { return side_; }
    int required_order() const { return required_order_; }
    const std::vector<Term> &entry(int i, int j) const;

private:
    MatrixLayout(int side, int required_order)
        : side_(side), required_order_(required_order) {}

    int side_;
    int required_order_;
    std::vector<std::vector<Term>> entries_; // upper triangle, row-major

    friend MatrixLayout moment_layout(int n, int d);
    friend MatrixLayout localizing_layout(const Polynomial &g, int n, int d);
};

/// Layout of the order-d moment matrix M_d(y): entry (i, j) reads the
/// moment of the product of the i-th and j-th basis monomials.
MatrixLayout moment_layout(int n, int d);

/// Layout of the localizing matrix M_d(g y): entry (i, j) is
/// sum_alpha g_alpha y_{beta(i)+beta(j)+alpha}.
MatrixLayout localizing_layout(const Polynomial &g, int n, int d);

/// Gather a numeric symmetric matrix from a moment vector. Throws
/// DegreeOverflowError when the vector's order is insufficient.
Eigen::MatrixXd assemble(const MomentVector &y, const MatrixLayout &layout);

/// Moments of the atomic measure sum_k w_k delta_{points[k]} up to the
/// given order. With require_probability, the weights must sum to 1.
MomentVector moments_of_atoms(const std::vector<std::vector<double>> &points,
                              const std::vector<double> &weights, int order,
                              bool require_probability = true);

} // namespace momentsos
