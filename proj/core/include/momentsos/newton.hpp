#pragma once

#include <vector>

#include "momentsos/polynomial.hpp"

namespace momentsos {

/// Newton polytope C(p): convex hull of the exponent vectors of p's
/// support. Membership queries are answered by LP feasibility.
class NewtonPolytope {
public:
    explicit NewtonPolytope(const Polynomial &p);

    int num_vars() const { return n_; }
    const std::vector<std::vector<double>> &generators() const {
        return generators_;
    }

    /// Is `point` in the convex hull of the generators (within LP tolerance)?
    bool contains(const std::vector<double> &point) const;

    /// Is `point` in the polytope scaled by `factor` about the origin?
    bool contains_scaled(const std::vector<double> &point, double factor) const;

private:
    int n_;
    std::vector<std::vector<double>> generators_;
};

/// Does the monomial beta lie in (1/2) C(p)? Candidate Gram-basis monomials
/// for an SOS decomposition of p can be restricted to this set.
bool half_newton_membership(const Polynomial &p, const Monomial &beta);

} // namespace momentsos
