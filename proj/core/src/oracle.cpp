#include "momentsos/oracle.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace momentsos {

namespace {

/// Feasibility probe for {Ax >= b, x_i = 0 outside support}: minimize t
/// over Ax + t*1 >= b with t in [-1, inf). Feasible iff t* <= tol; the
/// witness then satisfies Ax >= b - t* up to the LP's equality residual.
struct Probe {
    bool feasible = false;
    std::vector<double> x;
};

Probe probe_support(const Eigen::MatrixXd &A, const Eigen::VectorXd &b,
                    const std::vector<bool> &in_support) {
    const int rows = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    // Variables: x (n, fixed to 0 outside the support), t, slacks s (rows).
    const int vars = n + 1 + rows;
    Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(rows, vars);
    Eigen::VectorXd beq = b;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(vars);
    for (int r = 0; r < rows; ++r) {
        for (int i = 0; i < n; ++i) {
            Aeq(r, i) = A(r, i);
        }
        Aeq(r, n) = 1.0;     // + t
        Aeq(r, n + 1 + r) = -1.0; // - s_r
    }
    c(n) = 1.0;
    std::vector<std::pair<double, double>> bounds(vars, {0.0, kInf});
    for (int i = 0; i < n; ++i) {
        bounds[i] = in_support[i] ? std::make_pair(-kInf, kInf)
                                  : std::make_pair(0.0, 0.0);
    }
    bounds[n] = {-1.0, kInf};

    SolverConfig cfg;
    cfg.gap_tol = 1e-8;
    cfg.feas_tol = 1e-8;
    LpResult res = solve_lp(c, Aeq, beq, bounds, cfg);
    Probe p;
    if (res.status != SolveStatus::Optimal) {
        return p; // treat as infeasible support
    }
    if (res.objective > 1e-6) {
        return p;
    }
    p.feasible = true;
    p.x.resize(n);
    for (int i = 0; i < n; ++i) {
        p.x[i] = in_support[i] ? res.x(i) : 0.0;
    }
    return p;
}

} // namespace

OracleReport brute_force_card(const Eigen::MatrixXd &A,
                              const Eigen::VectorXd &b) {
    const int n = static_cast<int>(A.cols());
    if (n < 1) {
        throw DimensionError("brute_force_card: A must have at least one column");
    }
    if (n > 14) {
        throw DimensionError("brute_force_card: n exceeds the hard cap of 14");
    }
    if (b.size() != A.rows()) {
        throw DimensionError("brute_force_card: A and b sizes disagree");
    }

    const auto t0 = std::chrono::steady_clock::now();
    OracleReport report;

    if (A.rows() == 0) {
        report.witness.assign(n, 0.0);
        return report;
    }

    for (int k = 0; k <= n; ++k) {
        // Size-k subsets in lexicographic order (deterministic tie-break).
        std::vector<int> subset(k);
        for (int i = 0; i < k; ++i) {
            subset[i] = i;
        }
        while (true) {
            std::vector<bool> in_support(n, false);
            for (int i : subset) {
                in_support[i] = true;
            }
            Probe p = probe_support(A, b, in_support);
            ++report.lps_solved;
            if (p.feasible) {
                report.optimum = k;
                report.witness = std::move(p.x);
                report.wall_time =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  t0)
                        .count();
                return report;
            }
            if (k == 0) {
                break;
            }
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
    }
    throw InfeasibleError("brute_force_card: constraints are infeasible");
}

HeuristicResult l1_heuristic(const Eigen::MatrixXd &A, const Eigen::VectorXd &b) {
    const int rows = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (n < 1) {
        throw DimensionError("l1_heuristic: A must have at least one column");
    }
    if (b.size() != rows) {
        throw DimensionError("l1_heuristic: A and b sizes disagree");
    }
    // min sum(xp + xm) s.t. A(xp - xm) - s = b, xp, xm, s >= 0.
    const int vars = 2 * n + rows;
    Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(rows, vars);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(vars);
    for (int r = 0; r < rows; ++r) {
        for (int i = 0; i < n; ++i) {
            Aeq(r, i) = A(r, i);
            Aeq(r, n + i) = -A(r, i);
        }
        Aeq(r, 2 * n + r) = -1.0;
    }
    for (int i = 0; i < 2 * n; ++i) {
        c(i) = 1.0;
    }
    std::vector<std::pair<double, double>> bounds(vars, {0.0, kInf});

    LpResult res = solve_lp(c, Aeq, b, bounds);
    if (res.status == SolveStatus::InfeasibleSuspected) {
        throw InfeasibleError("l1_heuristic: constraints are infeasible");
    }
    if (res.status != SolveStatus::Optimal) {
        throw SolverError("l1_heuristic: LP solve failed (" +
                          to_string(res.status) + ")");
    }
    HeuristicResult out;
    out.value = res.objective;
    out.point.resize(n);
    for (int i = 0; i < n; ++i) {
        out.point[i] = res.x(i) - res.x(n + i);
    }
    return out;
}

NuclearResult nuclear_heuristic(const std::vector<Eigen::MatrixXd> &A_list,
                                const Eigen::VectorXd &b) {
    if (A_list.empty()) {
        throw DimensionError("nuclear_heuristic: need at least one constraint");
    }
    const int n = static_cast<int>(A_list[0].rows());
    if (b.size() != static_cast<Eigen::Index>(A_list.size())) {
        throw DimensionError("nuclear_heuristic: A_list and b sizes disagree");
    }

    SdpProblem p;
    p.add_block(n, BlockKind::Psd, "X");
    for (int i = 0; i < n; ++i) {
        p.objective.add_mat(0, i, i, 1.0); // Tr(X)
    }
    for (size_t j = 0; j < A_list.size(); ++j) {
        const Eigen::MatrixXd &Aj = A_list[j];
        if (Aj.rows() != n || Aj.cols() != n) {
            throw DimensionError("nuclear_heuristic: matrices must be square "
                                 "and of equal size");
        }
        LinearFunctional lhs;
        for (int a = 0; a < n; ++a) {
            for (int c = a; c < n; ++c) {
                const double sym = a == c ? 1.0 : 2.0;
                const double v = 0.5 * (Aj(a, c) + Aj(c, a));
                if (v != 0.0) {
                    lhs.add_mat(0, a, c, sym * v);
                }
            }
        }
        p.add_equality(std::move(lhs), b(static_cast<Eigen::Index>(j)));
    }

    SdpSolution sol = solve(p);
    if (sol.status == SolveStatus::InfeasibleSuspected) {
        throw InfeasibleError("nuclear_heuristic: constraints are infeasible");
    }
    if (sol.status != SolveStatus::Optimal) {
        throw SolverError("nuclear_heuristic: SDP solve failed (" +
                          to_string(sol.status) + ")");
    }
    NuclearResult out;
    out.value = sol.primal_obj;
    out.X = sol.block_values[0];

    // When the trace minimizer is not unique the interior-point method lands
    // in the middle of the optimal face (e.g. X = I/n under Tr X = 1), which
    // defeats the purpose of a rank heuristic. Re-solve over that face with a
    // generic linear objective: the minimizer is an extreme point, whose rank
    // r obeys r(r+1)/2 <= #equalities.
    {
        SdpProblem q;
        q.add_block(n, BlockKind::Psd, "X");
        std::mt19937 rng(7101);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int a = 0; a < n; ++a) {
            for (int c = a; c < n; ++c) {
                q.objective.add_mat(0, a, c, dist(rng));
            }
        }
        for (const auto &eq : p.equalities) {
            q.add_equality(eq.lhs, eq.rhs);
        }
        LinearFunctional tr;
        for (int i = 0; i < n; ++i) {
            tr.add_mat(0, i, i, 1.0);
        }
        q.add_equality(std::move(tr), out.value);
        SdpSolution ext = solve(q);
        if (ext.status == SolveStatus::Optimal) {
            out.X = ext.block_values[0];
        }
    }
    return out;
}

int rounded_bound(double l) {
    if (!std::isfinite(l)) {
        throw DimensionError("rounded_bound: bound must be finite");
    }
    return static_cast<int>(std::ceil(l - 1e-4));
}

} // namespace momentsos
