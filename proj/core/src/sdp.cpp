#include "momentsos/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

namespace momentsos {

std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Optimal:
        return "optimal";
    case SolveStatus::MaxIter:
        return "max_iter";
    case SolveStatus::NumericalFailure:
        return "numerical_failure";
    case SolveStatus::InfeasibleSuspected:
        return "infeasible_suspected";
    }
    return "unknown";
}

void SdpProblem::validate() const {
    auto check_functional = [&](const LinearFunctional &f, const char *where) {
        for (const auto &mc : f.mat) {
            if (mc.block < 0 || mc.block >= static_cast<int>(blocks.size())) {
                throw DimensionError(std::string(where) + ": block index out of range");
            }
            const BlockInfo &blk = blocks[mc.block];
            if (mc.i < 0 || mc.j < mc.i || mc.j >= blk.dim) {
                throw DimensionError(std::string(where) + ": entry index out of range");
            }
            if (blk.kind == BlockKind::Diagonal && mc.i != mc.j) {
                throw DimensionError(std::string(where) +
                                     ": off-diagonal coefficient on diagonal block");
            }
        }
        for (const auto &[idx, v] : f.free_terms) {
            (void)v;
            if (idx < 0 || idx >= num_free) {
                throw DimensionError(std::string(where) + ": free index out of range");
            }
        }
    };
    for (const auto &blk : blocks) {
        if (blk.dim <= 0) {
            throw DimensionError("SdpProblem: nonpositive block dimension");
        }
    }
    check_functional(objective, "objective");
    for (const auto &eq : equalities) {
        check_functional(eq.lhs, "equality");
    }
}

namespace {

struct MatKey {
    int block, i, j;
    auto operator<=>(const MatKey &) const = default;
};

// Sparse row used during free-variable elimination.
struct PRow {
    std::map<MatKey, double> mat;
    std::map<int, double> fre;
    double rhs = 0.0;
    bool alive = true;

    double max_abs() const {
        double m = 0.0;
        for (const auto &[k, v] : mat) {
            (void)k;
            m = std::max(m, std::abs(v));
        }
        for (const auto &[k, v] : fre) {
            (void)k;
            m = std::max(m, std::abs(v));
        }
        return m;
    }

    void prune() {
        const double tol = 1e-14 * std::max(1.0, max_abs());
        for (auto it = mat.begin(); it != mat.end();) {
            it = std::abs(it->second) <= tol ? mat.erase(it) : std::next(it);
        }
        for (auto it = fre.begin(); it != fre.end();) {
            it = std::abs(it->second) <= tol ? fre.erase(it) : std::next(it);
        }
    }

    // this += scale * other (matrix and free parts and rhs)
    void axpy(double scale, const PRow &other) {
        for (const auto &[k, v] : other.mat) {
            mat[k] += scale * v;
        }
        for (const auto &[k, v] : other.fre) {
            fre[k] += scale * v;
        }
        rhs += scale * other.rhs;
        prune();
    }
};

struct ElimRecord {
    int free_var = 0;
    int pivot_row = 0;
    double pivot_coef = 0.0;
    double obj_coef = 0.0; // objective coefficient of free_var at elimination
    std::vector<std::pair<int, double>> other_rows; // (row, coef at elimination)
    PRow snapshot; // pivot row content at elimination (free_var removed)
};

struct Presolved {
    std::vector<PRow> rows;          // original indexing; only alive used
    PRow objective;                  // rhs field holds the constant offset
    std::vector<ElimRecord> elims;
    std::vector<int> alive_rows;     // original indices of surviving rows
    std::vector<int> free_map;       // surviving free var -> original index
    bool infeasible = false;
};

Presolved run_presolve(const SdpProblem &p) {
    Presolved out;
    const int m = static_cast<int>(p.equalities.size());
    out.rows.resize(m);
    for (int r = 0; r < m; ++r) {
        PRow &row = out.rows[r];
        for (const auto &mc : p.equalities[r].lhs.mat) {
            row.mat[{mc.block, mc.i, mc.j}] += mc.value;
        }
        for (const auto &[idx, v] : p.equalities[r].lhs.free_terms) {
            row.fre[idx] += v;
        }
        row.rhs = p.equalities[r].rhs;
        row.prune();
    }
    for (const auto &mc : p.objective.mat) {
        out.objective.mat[{mc.block, mc.i, mc.j}] += mc.value;
    }
    for (const auto &[idx, v] : p.objective.free_terms) {
        out.objective.fre[idx] += v;
    }
    out.objective.rhs = 0.0; // accumulates -const offset; see below

    // Rows containing each free variable.
    std::vector<std::vector<int>> rows_of(p.num_free);
    for (int r = 0; r < m; ++r) {
        for (const auto &[f, v] : out.rows[r].fre) {
            (void)v;
            rows_of[f].push_back(r);
        }
    }

    std::vector<bool> eliminated(p.num_free, false);
    // Repeatedly eliminate the free variable whose best pivot row has the
    // largest index; for hierarchy problems this keeps fill low (high-degree
    // moment rows get folded first).
    while (true) {
        int best_f = -1, best_row = -1;
        double best_coef = 0.0;
        for (int f = 0; f < p.num_free; ++f) {
            if (eliminated[f]) {
                continue;
            }
            // Find candidate pivot for f: among rows with a coefficient at
            // least half the largest magnitude, take the largest row index.
            double maxc = 0.0;
            for (int r : rows_of[f]) {
                if (!out.rows[r].alive) {
                    continue;
                }
                auto it = out.rows[r].fre.find(f);
                if (it != out.rows[r].fre.end()) {
                    maxc = std::max(maxc, std::abs(it->second));
                }
            }
            if (maxc <= 0.0) {
                continue;
            }
            int cand = -1;
            double cand_coef = 0.0;
            for (int r : rows_of[f]) {
                if (!out.rows[r].alive) {
                    continue;
                }
                auto it = out.rows[r].fre.find(f);
                if (it == out.rows[r].fre.end() ||
                    std::abs(it->second) < 0.5 * maxc) {
                    continue;
                }
                if (r > cand) {
                    cand = r;
                    cand_coef = it->second;
                }
            }
            if (cand > best_row) {
                best_row = cand;
                best_f = f;
                best_coef = cand_coef;
            }
        }
        if (best_f < 0) {
            break;
        }

        ElimRecord rec;
        rec.free_var = best_f;
        rec.pivot_row = best_row;
        rec.pivot_coef = best_coef;
        PRow pivot = out.rows[best_row];
        pivot.fre.erase(best_f);
        rec.snapshot = pivot;

        auto obj_it = out.objective.fre.find(best_f);
        rec.obj_coef = obj_it == out.objective.fre.end() ? 0.0 : obj_it->second;

        // Substitute into every other alive row containing the variable.
        for (int r : rows_of[best_f]) {
            if (!out.rows[r].alive || r == best_row) {
                continue;
            }
            auto it = out.rows[r].fre.find(best_f);
            if (it == out.rows[r].fre.end()) {
                continue;
            }
            const double c = it->second;
            rec.other_rows.emplace_back(r, c);
            out.rows[r].fre.erase(it);
            out.rows[r].axpy(-c / best_coef, pivot);
            // Track new free-variable memberships created by the merge.
            for (const auto &[f2, v2] : pivot.fre) {
                (void)v2;
                rows_of[f2].push_back(r);
            }
        }
        // Objective substitution: obj += obj_coef * w_f with
        // w_f = (rhs - rest) / coef. The rhs part flows into the constant,
        // carried with opposite sign in objective.rhs (objective.rhs holds
        // minus the accumulated constant so axpy applies uniformly).
        if (rec.obj_coef != 0.0) {
            out.objective.fre.erase(best_f);
            out.objective.axpy(-rec.obj_coef / best_coef, pivot);
            // axpy also did rhs -= (obj_coef/coef)*pivot.rhs; that is exactly
            // -constant contribution, consistent with the convention above.
        }
        out.rows[best_row].alive = false;
        eliminated[best_f] = true;
        out.elims.push_back(std::move(rec));
    }

    // Surviving rows; empty rows must have (near) zero rhs.
    double scale = 0.0;
    for (const auto &eq : p.equalities) {
        scale = std::max(scale, std::abs(eq.rhs));
    }
    for (int r = 0; r < m; ++r) {
        PRow &row = out.rows[r];
        if (!row.alive) {
            continue;
        }
        if (row.mat.empty() && row.fre.empty()) {
            if (std::abs(row.rhs) > 1e-9 * (1.0 + scale)) {
                out.infeasible = true;
            }
            row.alive = false;
            continue;
        }
        out.alive_rows.push_back(r);
    }
    // Free variables not eliminated and not present in any surviving row are
    // unconstrained; they stay at zero and are excluded from the core solve.
    std::vector<bool> present(p.num_free, false);
    for (int r : out.alive_rows) {
        for (const auto &[f, v] : out.rows[r].fre) {
            (void)v;
            present[f] = true;
        }
    }
    for (int f = 0; f < p.num_free; ++f) {
        if (!eliminated[f] && present[f]) {
            out.free_map.push_back(f);
        }
    }
    return out;
}

struct Entry {
    int i, j;
    double v;
};

struct Compiled {
    int m = 0;                 // surviving equality rows
    int p = 0;                 // surviving free variables
    std::vector<int> dims;
    // cons[b][r]: coefficients of row r in block b
    std::vector<std::vector<std::vector<Entry>>> cons;
    std::vector<Eigen::MatrixXd> C;
    Eigen::VectorXd b;
    Eigen::MatrixXd F;         // m x p free-variable coefficients
    Eigen::VectorXd c_free;
    double data_scale = 1.0;
};

double dot_entries(const std::vector<Entry> &entries, const Eigen::MatrixXd &M) {
    double total = 0.0;
    for (const auto &e : entries) {
        total += e.i == e.j ? e.v * M(e.i, e.i)
                            : 0.5 * e.v * (M(e.i, e.j) + M(e.j, e.i));
    }
    return total;
}

// acc += P * A * X for the implied symmetric A of `entries`.
void accumulate_pax(const std::vector<Entry> &entries, const Eigen::MatrixXd &P,
                    const Eigen::MatrixXd &X, Eigen::MatrixXd &acc) {
    for (const auto &e : entries) {
        if (e.i == e.j) {
            acc.noalias() += e.v * (P.col(e.i) * X.row(e.i));
        } else {
            acc.noalias() += 0.5 * e.v * (P.col(e.i) * X.row(e.j));
            acc.noalias() += 0.5 * e.v * (P.col(e.j) * X.row(e.i));
        }
    }
}

// Largest step alpha with X + alpha*D still PSD, given the Cholesky factor
// of X; returns +inf when D admits a full step.
double max_psd_step(const Eigen::LLT<Eigen::MatrixXd> &lltX,
                    const Eigen::MatrixXd &D) {
    const Eigen::MatrixXd L = lltX.matrixL();
    Eigen::MatrixXd W =
        L.triangularView<Eigen::Lower>().solve(D.transpose()).transpose();
    W = L.triangularView<Eigen::Lower>().solve(W);
    W = 0.5 * (W + W.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W,
                                                     Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().minCoeff();
    if (lam >= -1e-14) {
        return kInf;
    }
    return -1.0 / lam;
}

struct IpmState {
    std::vector<Eigen::MatrixXd> X, S;
    Eigen::VectorXd w;   // surviving free vars
    Eigen::VectorXd lam; // surviving row multipliers
};

struct IpmOutcome {
    SolveStatus status = SolveStatus::MaxIter;
    int iterations = 0;
};

IpmOutcome run_ipm(const Compiled &cp, const SolverConfig &cfg, IpmState &st) {
    const int nb = static_cast<int>(cp.dims.size());
    const int m = cp.m;
    const int p = cp.p;

    double total_dim = 0.0;
    for (int b = 0; b < nb; ++b) {
        total_dim += cp.dims[b];
    }

    const double init = cfg.init_scale * std::max(1.0, cp.data_scale);
    st.X.resize(nb);
    st.S.resize(nb);
    for (int b = 0; b < nb; ++b) {
        st.X[b] = init * Eigen::MatrixXd::Identity(cp.dims[b], cp.dims[b]);
        st.S[b] = init * Eigen::MatrixXd::Identity(cp.dims[b], cp.dims[b]);
    }
    st.w = Eigen::VectorXd::Zero(p);
    st.lam = Eigen::VectorXd::Zero(m);

    const double b_scale = 1.0 + (m > 0 ? cp.b.cwiseAbs().maxCoeff() : 0.0);
    double c_scale = 1.0 + (p > 0 ? cp.c_free.cwiseAbs().maxCoeff() : 0.0);
    for (int b = 0; b < nb; ++b) {
        c_scale = std::max(c_scale, cp.C[b].cwiseAbs().maxCoeff());
    }

    IpmOutcome out;
    double prev_pres = kInf;
    int stall_count = 0;
    int no_improve = 0;
    double best_merit = kInf;
    double best_gap = kInf;
    IpmState best;
    IpmState best_by_gap;
    // Min-norm projection of the primal iterate back onto the affine
    // constraints. The plain constraint Gram stays well conditioned even when
    // the IPM Schur complement does not, so this can recover the last digits
    // of primal feasibility lost near a degenerate optimum. Returns true when
    // the corrected iterate meets the configured tolerances.
    auto primal_cleanup = [&]() {
        if (m == 0 || m > 3000) {
            return false;
        }
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
        if (p > 0) {
            gram = cp.F * cp.F.transpose();
        }
        for (int b = 0; b < nb; ++b) {
            const int d = cp.dims[b];
            Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, d * (d + 1) / 2);
            for (int r = 0; r < m; ++r) {
                for (const auto &e : cp.cons[b][r]) {
                    const int idx = e.i * d - e.i * (e.i - 1) / 2 + (e.j - e.i);
                    D(r, idx) = e.i == e.j ? e.v : e.v * M_SQRT1_2;
                }
            }
            gram.noalias() += D * D.transpose();
        }
        Eigen::LLT<Eigen::MatrixXd> lltG(gram);
        if (lltG.info() != Eigen::Success) {
            return false;
        }
        auto rp_of = [&]() {
            Eigen::VectorXd r(m);
            for (int row = 0; row < m; ++row) {
                double v = cp.b(row);
                for (int b = 0; b < nb; ++b) {
                    v -= dot_entries(cp.cons[b][row], st.X[b]);
                }
                r(row) = v;
            }
            if (p > 0) {
                r -= cp.F * st.w;
            }
            return r;
        };
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd u = lltG.solve(rp_of());
            for (int b = 0; b < nb; ++b) {
                for (int r = 0; r < m; ++r) {
                    const double ur = u(r);
                    if (ur == 0.0) {
                        continue;
                    }
                    for (const auto &e : cp.cons[b][r]) {
                        if (e.i == e.j) {
                            st.X[b](e.i, e.i) += ur * e.v;
                        } else {
                            st.X[b](e.i, e.j) += 0.5 * ur * e.v;
                            st.X[b](e.j, e.i) += 0.5 * ur * e.v;
                        }
                    }
                }
            }
            if (p > 0) {
                st.w += cp.F.transpose() * u;
            }
        }
        const double pres2 = rp_of().cwiseAbs().maxCoeff() / b_scale;
        double dres2 = 0.0;
        for (int b = 0; b < nb; ++b) {
            Eigen::MatrixXd R = cp.C[b] - st.S[b];
            for (int r = 0; r < m; ++r) {
                for (const auto &e : cp.cons[b][r]) {
                    const double v = st.lam(r) * e.v;
                    if (e.i == e.j) {
                        R(e.i, e.i) -= v;
                    } else {
                        R(e.i, e.j) -= 0.5 * v;
                        R(e.j, e.i) -= 0.5 * v;
                    }
                }
            }
            dres2 = std::max(dres2, R.cwiseAbs().maxCoeff() / c_scale);
        }
        if (p > 0) {
            dres2 = std::max(dres2, (cp.c_free - cp.F.transpose() * st.lam)
                                        .cwiseAbs()
                                        .maxCoeff() /
                                        c_scale);
        }
        double pobj2 = 0.0;
        for (int b = 0; b < nb; ++b) {
            pobj2 += (cp.C[b].array() * st.X[b].array()).sum();
        }
        if (p > 0) {
            pobj2 += cp.c_free.dot(st.w);
        }
        const double dobj2 = cp.b.dot(st.lam);
        const double relgap2 = std::abs(pobj2 - dobj2) /
                               (1.0 + std::abs(pobj2) + std::abs(dobj2));
        double mineig = 0.0;
        for (int b = 0; b < nb; ++b) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                st.X[b], Eigen::EigenvaluesOnly);
            mineig = std::min(mineig, es.eigenvalues().minCoeff() /
                                          (1.0 + st.X[b].cwiseAbs().maxCoeff()));
        }
        if (cfg.verbose) {
            std::fprintf(stderr,
                         "cleanup  pres %.2e  dres %.2e  gap %.2e  mineig "
                         "%.2e\n",
                         pres2, dres2, relgap2, mineig);
        }
        // The projection must not leave residual tolerances unmet or push a
        // block outside the cone by more than the feasibility tolerance.
        return pres2 <= cfg.feas_tol && dres2 <= cfg.feas_tol &&
               relgap2 <= cfg.gap_tol && mineig >= -cfg.feas_tol;
    };
    auto finish = [&](SolveStatus status, int iter) {
        if (std::isfinite(best_merit)) {
            st = best; // report the best iterate seen, not the blown-up one
        }
        if (status == SolveStatus::NumericalFailure ||
            status == SolveStatus::MaxIter) {
            if (primal_cleanup()) {
                status = SolveStatus::Optimal;
            } else if (std::isfinite(best_gap)) {
                st = best_by_gap;
                if (primal_cleanup()) {
                    status = SolveStatus::Optimal;
                } else if (std::isfinite(best_merit)) {
                    st = best;
                }
            }
        }
        out.status = status;
        out.iterations = iter;
        return out;
    };

    std::vector<Eigen::MatrixXd> P(nb), Rd(nb), dSa(nb), dXa(nb), dS(nb), dX(nb),
        G(nb);
    Eigen::MatrixXd M(m, m);
    Eigen::VectorXd rp(m), ax(m), h(m);

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        out.iterations = iter;

        // Residuals.
        for (int r = 0; r < m; ++r) {
            double v = 0.0;
            for (int b = 0; b < nb; ++b) {
                v += dot_entries(cp.cons[b][r], st.X[b]);
            }
            ax(r) = v;
            rp(r) = cp.b(r) - v;
        }
        if (p > 0) {
            rp -= cp.F * st.w;
        }
        double dres = 0.0;
        for (int b = 0; b < nb; ++b) {
            Rd[b] = cp.C[b] - st.S[b];
            for (int r = 0; r < m; ++r) {
                for (const auto &e : cp.cons[b][r]) {
                    const double v = st.lam(r) * e.v;
                    if (e.i == e.j) {
                        Rd[b](e.i, e.i) -= v;
                    } else {
                        Rd[b](e.i, e.j) -= 0.5 * v;
                        Rd[b](e.j, e.i) -= 0.5 * v;
                    }
                }
            }
            dres = std::max(dres, Rd[b].cwiseAbs().maxCoeff() / c_scale);
        }
        Eigen::VectorXd rf(p);
        if (p > 0) {
            rf = cp.c_free - cp.F.transpose() * st.lam;
            dres = std::max(dres, rf.cwiseAbs().maxCoeff() / c_scale);
        }
        const double pres = m > 0 ? rp.cwiseAbs().maxCoeff() / b_scale : 0.0;

        double gap = 0.0;
        double pobj = 0.0;
        for (int b = 0; b < nb; ++b) {
            gap += (st.X[b].array() * st.S[b].array()).sum();
            pobj += (cp.C[b].array() * st.X[b].array()).sum();
        }
        if (p > 0) {
            pobj += cp.c_free.dot(st.w);
        }
        const double dobj = m > 0 ? cp.b.dot(st.lam) : 0.0;
        const double relgap =
            std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        const double mu = gap / total_dim;

        if (cfg.verbose) {
            std::fprintf(stderr,
                         "it %3d  pres %.2e  dres %.2e  gap %.2e  mu %.2e  "
                         "pobj % .8e  dobj % .8e\n",
                         iter, pres, dres, relgap, mu, pobj, dobj);
        }
        const double merit = std::max({pres, dres, relgap});
        if (merit < 0.9 * best_merit) {
            no_improve = 0;
        } else {
            ++no_improve;
        }
        if (merit < best_merit) {
            best_merit = merit;
            best = st;
        }
        if (dres <= cfg.feas_tol && relgap < best_gap) {
            best_gap = relgap;
            best_by_gap = st;
        }
        if (no_improve >= 15 && best_merit < 1e-4) {
            // Near the optimum the iteration has hit its accuracy floor;
            // grinding further only drives S toward singularity. (Mid-phase
            // slow progress is left to the iteration cap and the
            // infeasibility heuristic below.)
            return finish(SolveStatus::NumericalFailure, iter);
        }
        if (pres <= cfg.feas_tol && dres <= cfg.feas_tol &&
            relgap <= cfg.gap_tol) {
            // Polish primal feasibility before reporting: the projected
            // iterate carries the last digits of the objective values, and
            // downstream consumers read the bound off (pobj + dobj) / 2.
            const IpmState raw = st;
            if (!primal_cleanup()) {
                st = raw;
            }
            out.status = SolveStatus::Optimal;
            out.iterations = iter;
            return out;
        }
        // A near-converged iterate whose only defect is primal infeasibility
        // (or a gap inflated by it) can often be projected back onto the
        // affine constraints; accept the projected iterate as optimal when it
        // meets every tolerance.
        if (dres <= cfg.feas_tol && pres <= 1e3 * cfg.feas_tol &&
            relgap <= 1e2 * cfg.gap_tol) {
            const IpmState raw = st;
            if (primal_cleanup()) {
                out.status = SolveStatus::Optimal;
                out.iterations = iter;
                return out;
            }
            st = raw;
        }

        // Infeasibility heuristic: diverging multipliers while the primal
        // residual has stopped improving.
        const double lam_norm = m > 0 ? st.lam.cwiseAbs().maxCoeff() : 0.0;
        if (pres > prev_pres * 0.95) {
            ++stall_count;
        } else {
            stall_count = 0;
        }
        prev_pres = pres;
        if (lam_norm > 1e8 * b_scale && pres > 10.0 * cfg.feas_tol &&
            stall_count >= 5) {
            out.status = SolveStatus::InfeasibleSuspected;
            return out;
        }

        // Factorizations.
        std::vector<Eigen::LLT<Eigen::MatrixXd>> lltS(nb), lltX(nb);
        bool fact_ok = true;
        for (int b = 0; b < nb; ++b) {
            lltS[b].compute(st.S[b]);
            lltX[b].compute(st.X[b]);
            if (lltS[b].info() != Eigen::Success ||
                lltX[b].info() != Eigen::Success) {
                fact_ok = false;
            }
            if (fact_ok) {
                P[b] = lltS[b].solve(
                    Eigen::MatrixXd::Identity(cp.dims[b], cp.dims[b]));
            }
        }
        if (!fact_ok) {
            return finish(SolveStatus::NumericalFailure, iter);
        }

        // Schur complement M_{rq} = sum_b tr(A_r S^-1 A_q X).
        M.setZero();
        {
            Eigen::MatrixXd U;
            for (int b = 0; b < nb; ++b) {
                U.resize(cp.dims[b], cp.dims[b]);
                for (int q = 0; q < m; ++q) {
                    if (cp.cons[b][q].empty()) {
                        continue;
                    }
                    U.setZero();
                    accumulate_pax(cp.cons[b][q], P[b], st.X[b], U);
                    for (int r = 0; r < m; ++r) {
                        if (!cp.cons[b][r].empty()) {
                            M(r, q) += dot_entries(cp.cons[b][r], U);
                        }
                    }
                }
            }
        }
        M = 0.5 * (M + M.transpose()).eval();

        // The Schur matrix goes singular at degenerate optima. Plain
        // Cholesky while it holds (best accuracy); once it breaks, fall back
        // to LDLT with a small ridge, plus one round of iterative refinement
        // either way.
        Eigen::LLT<Eigen::MatrixXd> lltM;
        Eigen::LDLT<Eigen::MatrixXd> ldltM;
        bool ridged = false;
        if (m > 0) {
            lltM.compute(M);
            if (lltM.info() != Eigen::Success) {
                const double ridge =
                    1e-13 * (1.0 + M.trace() / std::max(1, m));
                M.diagonal().array() += ridge;
                ldltM.compute(M);
                ridged = true;
                if (ldltM.info() != Eigen::Success) {
                    return finish(SolveStatus::NumericalFailure, iter);
                }
            }
        }
        auto solveM = [&](const Eigen::MatrixXd &v) {
            Eigen::MatrixXd x =
                ridged ? Eigen::MatrixXd(ldltM.solve(v)) : Eigen::MatrixXd(lltM.solve(v));
            // The Schur complement turns badly conditioned near degenerate
            // optima; iterate refinement until the residual bottoms out.
            double prev_res = kInf;
            for (int pass = 0; pass < 4; ++pass) {
                const Eigen::MatrixXd r = v - M * x;
                const double res = r.cwiseAbs().maxCoeff();
                if (!(res < prev_res) || res <= 1e-14 * (1.0 + v.cwiseAbs().maxCoeff())) {
                    break;
                }
                prev_res = res;
                x += ridged ? Eigen::MatrixXd(ldltM.solve(r)) : Eigen::MatrixXd(lltM.solve(r));
            }
            return x;
        };

        Eigen::MatrixXd MinvF;
        Eigen::LDLT<Eigen::MatrixXd> ldltFF;
        if (p > 0) {
            MinvF = solveM(cp.F);
            Eigen::MatrixXd FF = cp.F.transpose() * MinvF;
            FF = 0.5 * (FF + FF.transpose()).eval();
            ldltFF.compute(FF);
            if (ldltFF.info() != Eigen::Success) {
                return finish(SolveStatus::NumericalFailure, iter);
            }
        }

        auto solve_direction = [&](double sigma_mu, bool corrector,
                                   std::vector<Eigen::MatrixXd> &dXo,
                                   std::vector<Eigen::MatrixXd> &dSo,
                                   Eigen::VectorXd &dlam,
                                   Eigen::VectorXd &dw) {
            // rhs: rp + A(X Rd S^-1) - sigma_mu A(S^-1) (+ corrector term).
            for (int b = 0; b < nb; ++b) {
                G[b] = st.X[b] * Rd[b] * P[b];
                if (corrector) {
                    G[b].noalias() += dXa[b] * dSa[b] * P[b];
                }
            }
            // h = rp + A(X) + A(X Rd S^-1) - sigma_mu A(S^-1); the A(X) term
            // comes from substituting dX = sigma_mu S^-1 - X - X dS S^-1
            // into A(dX) = rp - F dw.
            for (int r = 0; r < m; ++r) {
                double val = rp(r) + ax(r);
                for (int b = 0; b < nb; ++b) {
                    val += dot_entries(cp.cons[b][r], G[b]) -
                           sigma_mu * dot_entries(cp.cons[b][r], P[b]);
                }
                h(r) = val;
            }
            if (p > 0) {
                dw = ldltFF.solve(MinvF.transpose() * h - rf);
                dlam = solveM(h - cp.F * dw);
            } else {
                dw.resize(0);
                dlam = m > 0 ? Eigen::VectorXd(solveM(h)) : Eigen::VectorXd();
            }
            // The assembled Schur matrix carries formation error of order
            // kappa * eps, which caps direction accuracy exactly where the
            // endgame needs it. Measure the residual through the exact
            // operator lam -> A(S^-1 (A* lam) X) and correct through the
            // factored M, keeping the best iterate seen.
            if (m > 0) {
                Eigen::MatrixXd W;
                Eigen::VectorXd best_lam = dlam, best_w = dw;
                double best_res = kInf;
                for (int pass = 0; pass < 4; ++pass) {
                    Eigen::VectorXd r1 = h;
                    for (int b = 0; b < nb; ++b) {
                        W.setZero(cp.dims[b], cp.dims[b]);
                        for (int r = 0; r < m; ++r) {
                            for (const auto &e : cp.cons[b][r]) {
                                const double v = dlam(r) * e.v;
                                if (e.i == e.j) {
                                    W(e.i, e.i) += v;
                                } else {
                                    W(e.i, e.j) += 0.5 * v;
                                    W(e.j, e.i) += 0.5 * v;
                                }
                            }
                        }
                        const Eigen::MatrixXd U = lltS[b].solve(W) * st.X[b];
                        for (int r = 0; r < m; ++r) {
                            if (!cp.cons[b][r].empty()) {
                                r1(r) -= dot_entries(cp.cons[b][r], U);
                            }
                        }
                    }
                    Eigen::VectorXd r2;
                    if (p > 0) {
                        r1 -= cp.F * dw;
                        r2 = rf - cp.F.transpose() * dlam;
                    }
                    double res = r1.cwiseAbs().maxCoeff();
                    if (p > 0) {
                        res = std::max(res, r2.cwiseAbs().maxCoeff());
                    }
                    if (res < best_res) {
                        best_res = res;
                        best_lam = dlam;
                        best_w = dw;
                    } else {
                        break;
                    }
                    if (res <= 1e-13 * (1.0 + h.cwiseAbs().maxCoeff())) {
                        break;
                    }
                    if (p > 0) {
                        const Eigen::VectorXd ddw =
                            ldltFF.solve(MinvF.transpose() * r1 - r2);
                        dlam += solveM(r1 - cp.F * ddw);
                        dw += ddw;
                    } else {
                        dlam += solveM(r1);
                    }
                }
                dlam = best_lam;
                dw = best_w;
            }
            for (int b = 0; b < nb; ++b) {
                dSo[b] = Rd[b];
                for (int r = 0; r < m; ++r) {
                    for (const auto &e : cp.cons[b][r]) {
                        const double v = dlam(r) * e.v;
                        if (e.i == e.j) {
                            dSo[b](e.i, e.i) -= v;
                        } else {
                            dSo[b](e.i, e.j) -= 0.5 * v;
                            dSo[b](e.j, e.i) -= 0.5 * v;
                        }
                    }
                }
                Eigen::MatrixXd raw = sigma_mu * P[b] - st.X[b] -
                                      st.X[b] * dSo[b] * P[b];
                if (corrector) {
                    raw.noalias() -= dXa[b] * dSa[b] * P[b];
                }
                dXo[b] = 0.5 * (raw + raw.transpose());
            }
        };

        // G[b] recomputed inside solve_direction; hoisting X*Rd*S^-1 per call
        // keeps the corrector path simple at these problem sizes.

        Eigen::VectorXd dlam_a, dw_a, dlam, dw;
        solve_direction(0.0, false, dXa, dSa, dlam_a, dw_a);

        double ap_aff = 1.0, ad_aff = 1.0;
        for (int b = 0; b < nb; ++b) {
            ap_aff = std::min(ap_aff, max_psd_step(lltX[b], dXa[b]));
            ad_aff = std::min(ad_aff, max_psd_step(lltS[b], dSa[b]));
        }
        ap_aff = std::min(1.0, cfg.step_fraction * ap_aff);
        ad_aff = std::min(1.0, cfg.step_fraction * ad_aff);

        double gap_aff = 0.0;
        for (int b = 0; b < nb; ++b) {
            gap_aff += ((st.X[b] + ap_aff * dXa[b]).array() *
                        (st.S[b] + ad_aff * dSa[b]).array())
                           .sum();
        }
        const double mu_aff = std::max(gap_aff, 0.0) / total_dim;
        double sigma = std::pow(mu_aff / mu, 3.0);
        sigma = std::clamp(sigma, 1e-10, 1.0);

        solve_direction(sigma * mu, true, dX, dS, dlam, dw);

        double ap = 1.0, ad = 1.0;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, max_psd_step(lltX[b], dX[b]));
            ad = std::min(ad, max_psd_step(lltS[b], dS[b]));
        }
        ap = std::min(1.0, cfg.step_fraction * ap);
        ad = std::min(1.0, cfg.step_fraction * ad);

        if (!std::isfinite(ap) || !std::isfinite(ad)) {
            return finish(SolveStatus::NumericalFailure, iter);
        }

        // While either residual is material, move primal and dual in
        // lockstep. Letting one side take near-unit steps while the other is
        // blocked drives mu to zero against a still-infeasible iterate, after
        // which no useful step exists; equal lengths keep complementarity and
        // feasibility shrinking at the same rate.
        if (pres > cfg.feas_tol || dres > cfg.feas_tol) {
            ap = ad = std::min(ap, ad);
        }

        const IpmState saved = st;
        auto apply_step = [&](double scale) {
            st = saved;
            for (int b = 0; b < nb; ++b) {
                st.X[b] += scale * ap * dX[b];
                st.S[b] += scale * ad * dS[b];
                st.X[b] = 0.5 * (st.X[b] + st.X[b].transpose()).eval();
                st.S[b] = 0.5 * (st.S[b] + st.S[b].transpose()).eval();
            }
            if (p > 0) {
                st.w += scale * ap * dw;
            }
            st.lam += scale * ad * dlam;
        };
        auto primal_res = [&]() {
            double worst = 0.0;
            for (int r = 0; r < m; ++r) {
                double v = -cp.b(r);
                for (int b = 0; b < nb; ++b) {
                    v += dot_entries(cp.cons[b][r], st.X[b]);
                }
                if (p > 0) {
                    v += cp.F.row(r).dot(st.w);
                }
                worst = std::max(worst, std::abs(v));
            }
            return worst / b_scale;
        };
        // A step computed from an ill-conditioned Schur system can wreck
        // primal feasibility outright; shorten it until the residual stays
        // within an order of magnitude of where it was.
        apply_step(1.0);
        double scale = 1.0;
        if (m > 0) {
            for (int tries = 0;
                 tries < 3 &&
                 primal_res() > std::max(2.0 * pres, cfg.feas_tol);
                 ++tries) {
                scale *= 0.25;
                apply_step(scale);
            }
        }
        if (cfg.verbose) {
            std::fprintf(stderr,
                         "        ap %.2e  ad %.2e  sigma %.2e  scale %.2e\n",
                         ap, ad, sigma, scale);
        }
    }

    return finish(SolveStatus::MaxIter, cfg.max_iter);
}

} // namespace

SdpSolution solve(const SdpProblem &problem, const SolverConfig &cfg) {
    problem.validate();
    SdpSolution sol;

    Presolved ps = run_presolve(problem);
    if (ps.infeasible) {
        sol.status = SolveStatus::InfeasibleSuspected;
        sol.iterations = 0;
        return sol;
    }

    const int nb = static_cast<int>(problem.blocks.size());
    Compiled cp;
    cp.m = static_cast<int>(ps.alive_rows.size());
    cp.p = static_cast<int>(ps.free_map.size());
    cp.dims.resize(nb);
    for (int b = 0; b < nb; ++b) {
        cp.dims[b] = problem.blocks[b].dim;
    }
    cp.cons.assign(nb, std::vector<std::vector<Entry>>(cp.m));
    cp.b.resize(cp.m);
    cp.F = Eigen::MatrixXd::Zero(cp.m, cp.p);
    std::map<int, int> free_pos;
    for (int k = 0; k < cp.p; ++k) {
        free_pos[ps.free_map[k]] = k;
    }
    for (int r = 0; r < cp.m; ++r) {
        const PRow &row = ps.rows[ps.alive_rows[r]];
        for (const auto &[key, v] : row.mat) {
            cp.cons[key.block][r].push_back({key.i, key.j, v});
        }
        for (const auto &[f, v] : row.fre) {
            cp.F(r, free_pos.at(f)) = v;
        }
        cp.b(r) = row.rhs;
    }
    cp.C.resize(nb);
    for (int b = 0; b < nb; ++b) {
        cp.C[b] = Eigen::MatrixXd::Zero(cp.dims[b], cp.dims[b]);
    }
    for (const auto &[key, v] : ps.objective.mat) {
        if (key.i == key.j) {
            cp.C[key.block](key.i, key.i) += v;
        } else {
            cp.C[key.block](key.i, key.j) += 0.5 * v;
            cp.C[key.block](key.j, key.i) += 0.5 * v;
        }
    }
    cp.c_free = Eigen::VectorXd::Zero(cp.p);
    for (const auto &[f, v] : ps.objective.fre) {
        auto pos = free_pos.find(f);
        if (pos != free_pos.end()) {
            cp.c_free(pos->second) += v;
        }
    }

    cp.data_scale = 0.0;
    for (int r = 0; r < cp.m; ++r) {
        cp.data_scale = std::max(cp.data_scale, std::abs(cp.b(r)));
    }
    for (int b = 0; b < nb; ++b) {
        if (cp.C[b].size() > 0) {
            cp.data_scale = std::max(cp.data_scale, cp.C[b].cwiseAbs().maxCoeff());
        }
    }

    IpmState st;
    IpmOutcome oc;
    if (nb == 0) {
        // Pure linear system in the free variables.
        if (cp.p > 0 && cp.m > 0) {
            Eigen::VectorXd w =
                cp.F.colPivHouseholderQr().solve(cp.b);
            const double res = (cp.F * w - cp.b).cwiseAbs().maxCoeff();
            st.w = w;
            st.lam = Eigen::VectorXd::Zero(cp.m);
            oc.status = res <= 1e-8 * (1.0 + cp.data_scale)
                            ? SolveStatus::Optimal
                            : SolveStatus::InfeasibleSuspected;
        } else {
            st.w = Eigen::VectorXd::Zero(cp.p);
            st.lam = Eigen::VectorXd::Zero(cp.m);
            oc.status = cp.m == 0 ? SolveStatus::Optimal
                                  : SolveStatus::InfeasibleSuspected;
        }
        oc.iterations = 0;
    } else {
        oc = run_ipm(cp, cfg, st);
    }

    sol.status = oc.status;
    sol.iterations = oc.iterations;
    sol.block_values = st.X;
    sol.dual_slacks = st.S;

    // Scatter surviving values back to original indexing.
    sol.free_values = Eigen::VectorXd::Zero(problem.num_free);
    for (int k = 0; k < cp.p; ++k) {
        sol.free_values(ps.free_map[k]) = st.w(k);
    }
    sol.dual_multipliers =
        Eigen::VectorXd::Zero(static_cast<int>(problem.equalities.size()));
    for (int r = 0; r < cp.m; ++r) {
        sol.dual_multipliers(ps.alive_rows[r]) = st.lam(r);
    }

    // Undo eliminations in reverse: recover primal free values and the
    // multipliers of pivoted rows.
    for (auto it = ps.elims.rbegin(); it != ps.elims.rend(); ++it) {
        const ElimRecord &rec = *it;
        double val = rec.snapshot.rhs;
        for (const auto &[key, v] : rec.snapshot.mat) {
            const Eigen::MatrixXd &X = sol.block_values[key.block];
            val -= key.i == key.j
                       ? v * X(key.i, key.i)
                       : 0.5 * v * (X(key.i, key.j) + X(key.j, key.i));
        }
        for (const auto &[f, v] : rec.snapshot.fre) {
            val -= v * sol.free_values(f);
        }
        sol.free_values(rec.free_var) = val / rec.pivot_coef;

        double lam_p = rec.obj_coef;
        for (const auto &[r, c] : rec.other_rows) {
            lam_p -= sol.dual_multipliers(r) * c;
        }
        sol.dual_multipliers(rec.pivot_row) = lam_p / rec.pivot_coef;
    }

    // Objective values from the original data.
    double pobj = problem.objective_constant;
    for (const auto &mc : problem.objective.mat) {
        const Eigen::MatrixXd &X = sol.block_values[mc.block];
        pobj += mc.i == mc.j
                    ? mc.value * X(mc.i, mc.i)
                    : 0.5 * mc.value * (X(mc.i, mc.j) + X(mc.j, mc.i));
    }
    for (const auto &[f, v] : problem.objective.free_terms) {
        pobj += v * sol.free_values(f);
    }
    double dobj = problem.objective_constant;
    for (size_t r = 0; r < problem.equalities.size(); ++r) {
        dobj += problem.equalities[r].rhs *
                sol.dual_multipliers(static_cast<int>(r));
    }
    sol.primal_obj = pobj;
    sol.dual_obj = dobj;
    return sol;
}

LpResult solve_lp(const Eigen::VectorXd &c, const Eigen::MatrixXd &A_eq,
                  const Eigen::VectorXd &b_eq,
                  const std::vector<std::pair<double, double>> &bounds,
                  const SolverConfig &cfg) {
    const int n = static_cast<int>(c.size());
    if (static_cast<int>(bounds.size()) != n ||
        (A_eq.size() > 0 && A_eq.cols() != n) ||
        A_eq.rows() != b_eq.size()) {
        throw DimensionError("solve_lp: inconsistent dimensions");
    }

    SdpProblem p;
    // Representation per variable: shift index into the diagonal block (or
    // free-variable pool) plus an optional upper-bound slack row.
    struct VarEnc {
        bool free = false;
        int idx = -1;       // diagonal entry or free index
        double shift = 0.0; // x = shift + sign * d
        double sign = 1.0;
    };
    std::vector<VarEnc> enc(n);
    int diag_count = 0;
    int extra_rows = 0;
    for (int i = 0; i < n; ++i) {
        const auto [lo, hi] = bounds[i];
        if (lo == -kInf && hi == kInf) {
            enc[i].free = true;
        } else if (lo != -kInf) {
            enc[i] = {false, diag_count++, lo, 1.0};
            if (hi != kInf) {
                ++extra_rows; // d + slack = hi - lo
            }
        } else {
            enc[i] = {false, diag_count++, hi, -1.0};
        }
    }
    const int slack_base = diag_count;
    if (diag_count + extra_rows > 0) {
        p.add_block(diag_count + extra_rows, BlockKind::Diagonal, "lp");
    }
    for (int i = 0; i < n; ++i) {
        if (enc[i].free) {
            enc[i].idx = p.add_free_vars(1);
        }
    }

    auto var_term = [&](LinearFunctional &f, int i, double coef) {
        if (enc[i].free) {
            f.add_free(enc[i].idx, coef);
        } else {
            f.add_mat(0, enc[i].idx, enc[i].idx, coef * enc[i].sign);
        }
    };

    double obj_const = 0.0;
    for (int i = 0; i < n; ++i) {
        if (c(i) != 0.0) {
            var_term(p.objective, i, c(i));
            if (!enc[i].free) {
                obj_const += c(i) * enc[i].shift;
            }
        }
    }
    p.objective_constant = obj_const;

    for (int r = 0; r < A_eq.rows(); ++r) {
        LinearFunctional lhs;
        double rhs = b_eq(r);
        for (int i = 0; i < n; ++i) {
            if (A_eq(r, i) != 0.0) {
                var_term(lhs, i, A_eq(r, i));
                if (!enc[i].free) {
                    rhs -= A_eq(r, i) * enc[i].shift;
                }
            }
        }
        p.add_equality(std::move(lhs), rhs);
    }
    int slack = slack_base;
    for (int i = 0; i < n; ++i) {
        const auto [lo, hi] = bounds[i];
        if (lo != -kInf && hi != kInf) {
            LinearFunctional lhs;
            lhs.add_mat(0, enc[i].idx, enc[i].idx, 1.0);
            lhs.add_mat(0, slack, slack, 1.0);
            p.add_equality(std::move(lhs), hi - lo);
            ++slack;
        }
    }

    SdpSolution s = solve(p, cfg);
    LpResult out;
    out.status = s.status;
    out.iterations = s.iterations;
    out.objective = s.primal_obj;
    out.x.resize(n);
    for (int i = 0; i < n; ++i) {
        if (enc[i].free) {
            out.x(i) = s.free_values(enc[i].idx);
        } else {
            out.x(i) =
                enc[i].shift + enc[i].sign * s.block_values[0](enc[i].idx, enc[i].idx);
        }
    }
    return out;
}

} // namespace momentsos
