#include "momentsos/newton.hpp"

#include <cmath>

#include "momentsos/sdp.hpp"

namespace momentsos {

NewtonPolytope::NewtonPolytope(const Polynomial &p) : n_(p.num_vars()) {
    if (p.is_zero()) {
        throw DimensionError("NewtonPolytope: zero polynomial");
    }
    for (const auto &[mono, coef] : p.terms()) {
        (void)coef;
        std::vector<double> g(n_);
        for (int i = 0; i < n_; ++i) {
            g[i] = static_cast<double>(mono.exponents[i]);
        }
        generators_.push_back(std::move(g));
    }
}

bool NewtonPolytope::contains(const std::vector<double> &point) const {
    return contains_scaled(point, 1.0);
}

bool NewtonPolytope::contains_scaled(const std::vector<double> &point,
                                     double factor) const {
    if (static_cast<int>(point.size()) != n_) {
        throw DimensionError("NewtonPolytope::contains: dimension mismatch");
    }
    const int t = static_cast<int>(generators_.size());
    // Phase-1 LP: theta >= 0, sum theta = 1, sum theta * factor * gen = point,
    // with signed artificials; feasible iff the artificial mass vanishes.
    const int rows = n_ + 1;
    const int vars = t + 2 * rows;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, vars);
    Eigen::VectorXd b(rows), c = Eigen::VectorXd::Zero(vars);
    for (int r = 0; r < n_; ++r) {
        for (int k = 0; k < t; ++k) {
            A(r, k) = factor * generators_[k][r];
        }
        b(r) = point[r];
    }
    for (int k = 0; k < t; ++k) {
        A(n_, k) = 1.0;
    }
    b(n_) = 1.0;
    for (int r = 0; r < rows; ++r) {
        A(r, t + 2 * r) = 1.0;
        A(r, t + 2 * r + 1) = -1.0;
        c(t + 2 * r) = 1.0;
        c(t + 2 * r + 1) = 1.0;
    }
    std::vector<std::pair<double, double>> bounds(vars, {0.0, kInf});

    LpResult res = solve_lp(c, A, b, bounds);
    if (res.status != SolveStatus::Optimal) {
        throw SolverError("NewtonPolytope::contains: LP solve failed (" +
                          to_string(res.status) + ")");
    }
    return res.objective <= 1e-7;
}

bool half_newton_membership(const Polynomial &p, const Monomial &beta) {
    NewtonPolytope poly(p);
    if (beta.num_vars() != p.num_vars()) {
        throw DimensionError("half_newton_membership: dimension mismatch");
    }
    std::vector<double> pt(beta.num_vars());
    for (int i = 0; i < beta.num_vars(); ++i) {
        pt[i] = static_cast<double>(beta.exponents[i]);
    }
    return poly.contains_scaled(pt, 0.5);
}

} // namespace momentsos
