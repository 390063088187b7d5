#pragma once

#include <Eigen/Dense>
#include <vector>

#include "momentsos/sdp.hpp"

namespace momentsos {

/// Result of the brute-force MinCard search.
struct OracleReport {
    int optimum = 0;
    std::vector<double> witness;
    int lps_solved = 0;
    double wall_time = 0.0; // seconds
};

/// Exact MinCard by support enumeration: supports S are visited by
/// increasing cardinality (lexicographic within a size), each probed with an
/// LP feasibility check of {Ax >= b, x_i = 0 for i not in S}. Hard cap
/// n <= 14. Throws InfeasibleError when even the full support fails.
OracleReport brute_force_card(const Eigen::MatrixXd &A,
                              const Eigen::VectorXd &b);

struct HeuristicResult {
    double value = 0.0;
    std::vector<double> point;
};

/// l1 relaxation of MinCard: minimize ||x||_1 subject to Ax >= b, via
/// variable splitting. Throws InfeasibleError on empty feasible regions.
HeuristicResult l1_heuristic(const Eigen::MatrixXd &A, const Eigen::VectorXd &b);

struct NuclearResult {
    double value = 0.0;
    Eigen::MatrixXd X;
};

/// Nuclear-norm (= trace, since X >= 0) relaxation of MinRank:
/// min Tr(X) s.t. Tr(A_i X) = b_i, X >= 0.
NuclearResult nuclear_heuristic(const std::vector<Eigen::MatrixXd> &A_list,
                                const Eigen::VectorXd &b);

/// Integer rounding of a hierarchy lower bound: ceil(l - 1e-4).
int rounded_bound(double l);

} // namespace momentsos
