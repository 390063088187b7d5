#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "momentsos/errors.hpp"

namespace momentsos {

enum class BlockKind { Psd, Diagonal };

struct BlockInfo {
    int dim = 0;
    BlockKind kind = BlockKind::Psd;
    std::string tag;
};

/// Coefficient of the upper-triangle entry (i, j), i <= j, of block `block`
/// in a linear functional. The functional contributes value * X[i][j]; the
/// implied symmetric matrix has value/2 on each of the two off-diagonal
/// positions.
struct MatCoeff {
    int block = 0;
    int i = 0;
    int j = 0;
    double value = 0.0;
};

struct LinearFunctional {
    std::vector<MatCoeff> mat;
    std::vector<std::pair<int, double>> free_terms;

    void add_mat(int block, int i, int j, double v) {
        if (i > j) {
            std::swap(i, j);
        }
        mat.push_back({block, i, j, v});
    }
    void add_free(int idx, double v) { free_terms.emplace_back(idx, v); }
};

struct EqualityConstraint {
    LinearFunctional lhs;
    double rhs = 0.0;
};

/// Block-diagonal SDP with linear equality constraints and unrestricted
/// scalar variables; objective sense is minimize.
struct SdpProblem {
    std::vector<BlockInfo> blocks;
    int num_free = 0;
    std::vector<EqualityConstraint> equalities;
    LinearFunctional objective;
    double objective_constant = 0.0;

    int add_block(int dim, BlockKind kind = BlockKind::Psd,
                  std::string tag = {}) {
        blocks.push_back({dim, kind, std::move(tag)});
        return static_cast<int>(blocks.size()) - 1;
    }
    int add_free_vars(int count) {
        const int first = num_free;
        num_free += count;
        return first;
    }
    void add_equality(LinearFunctional lhs, double rhs) {
        equalities.push_back({std::move(lhs), rhs});
    }

    /// Throws on structurally malformed problems (bad indices, off-diagonal
    /// coefficients on diagonal blocks).
    void validate() const;
};

enum class SolveStatus { Optimal, MaxIter, NumericalFailure, InfeasibleSuspected };

std::string to_string(SolveStatus s);

struct SolverConfig {
    double gap_tol = 1e-7;
    double feas_tol = 1e-7;
    int max_iter = 200;
    double step_fraction = 0.98;
    double init_scale = 100.0;
    bool verbose = false;
};

struct SdpSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    std::vector<Eigen::MatrixXd> block_values; // primal X, one per block
    std::vector<Eigen::MatrixXd> dual_slacks;  // dual S, one per block
    Eigen::VectorXd free_values;               // primal free variables
    Eigen::VectorXd dual_multipliers;          // one per equality
    double primal_obj = std::numeric_limits<double>::quiet_NaN();
    double dual_obj = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
};

/// Primal-dual path-following solve (HKM direction, Mehrotra
/// predictor-corrector). Free variables are first eliminated against
/// equality rows where possible; anything left is handled natively in the
/// KKT system.
SdpSolution solve(const SdpProblem &problem, const SolverConfig &cfg = {});

/// Linear program: minimize c'x subject to A_eq x = b_eq and
/// bounds[i].first <= x_i <= bounds[i].second (+-infinity allowed). Routed
/// through solve() with a single diagonal block.
struct LpResult {
    SolveStatus status = SolveStatus::NumericalFailure;
    Eigen::VectorXd x;
    double objective = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
};

LpResult solve_lp(const Eigen::VectorXd &c, const Eigen::MatrixXd &A_eq,
                  const Eigen::VectorXd &b_eq,
                  const std::vector<std::pair<double, double>> &bounds,
                  const SolverConfig &cfg = {});

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace momentsos
