#include "momentsos/certify.hpp"

#include <cmath>

namespace momentsos {

int numerical_rank(const Eigen::MatrixXd &M, double tol) {
    if (M.rows() != M.cols()) {
        throw DimensionError("numerical_rank: matrix must be square");
    }
    if (M.rows() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const Eigen::VectorXd &sv = svd.singularValues();
    const double cutoff = tol * std::max(1.0, sv(0));
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) {
            ++rank;
        }
    }
    return rank;
}

RelaxationResult analyze_relaxation(const RelaxationSdp &rel,
                                    const SdpSolution &sol,
                                    const CertifyConfig &cfg) {
    RelaxationResult res;
    res.order = rel.order;
    res.n = rel.n;
    res.status = sol.status;
    res.lower_bound = rel.bound(sol);
    res.y = rel.moment_vector(sol);
    res.variables = rel.variables;
    res.objective = rel.objective;
    res.inequalities = rel.program_inequalities;
    res.equalities = rel.program_equalities;

    const Eigen::MatrixXd M = assemble(res.y, moment_layout(rel.n, rel.order));
    res.moment_rank = numerical_rank(M, cfg.rank_tol);
    const Eigen::MatrixXd Mt =
        assemble(res.y, moment_layout(rel.n, rel.order - 1));
    res.truncated_rank = numerical_rank(Mt, cfg.rank_tol);
    for (const auto &loc : rel.localizing) {
        const Eigen::MatrixXd L =
            assemble(res.y, localizing_layout(loc.g, rel.n, loc.degree));
        res.localizing_ranks.emplace_back(loc.tag, numerical_rank(L, cfg.rank_tol));
    }

    if (res.moment_rank == 1) {
        try {
            ExtractionCheck ec = extract_point(res, cfg.extract_tol);
            if (ec.verified) {
                res.extracted_point = std::move(ec.point);
            }
        } catch (const ExtractionUnavailableError &) {
            // leave extracted_point empty
        }
    }
    return res;
}

bool stabilization_check(const RelaxationResult &prev,
                         const RelaxationResult &cur, double bound_tol) {
    if (cur.order != prev.order + 1 || cur.n != prev.n) {
        throw DimensionError("stabilization_check: results must be consecutive "
                             "orders of the same program");
    }
    const bool flat = cur.truncated_rank == cur.moment_rank;
    const bool stable = std::abs(cur.lower_bound - prev.lower_bound) < bound_tol;
    return flat && stable;
}

ExtractionCheck extract_point(const RelaxationResult &result, double tol) {
    if (result.moment_rank != 1) {
        throw ExtractionUnavailableError(
            "extract_point: moment matrix rank is " +
            std::to_string(result.moment_rank) +
            "; only rank-1 extraction is supported");
    }
    const int n = result.n;
    if (result.y.size() < n + 1) {
        throw DimensionError("extract_point: moment vector too short");
    }
    // Moments are normalized (y_0 = 1), so the point is the degree-1 slice.
    const double y0 = result.y.values(0);
    if (std::abs(y0 - 1.0) > 1e-6) {
        throw ExtractionUnavailableError("extract_point: y_0 not normalized");
    }
    ExtractionCheck ec;
    ec.point.resize(n);
    for (int i = 0; i < n; ++i) {
        ec.point[i] = result.y.values(1 + i) / y0;
    }

    double viol = 0.0;
    for (const auto &h : result.equalities) {
        viol = std::max(viol, std::abs(h.eval(ec.point)));
    }
    for (const auto &g : result.inequalities) {
        viol = std::max(viol, -g.eval(ec.point));
    }
    viol = std::max(viol,
                    std::abs(result.objective.eval(ec.point) - result.lower_bound));
    ec.max_violation = viol;
    ec.verified = viol <= tol;
    return ec;
}

std::vector<Polynomial> sos_decompose(const Eigen::MatrixXd &gram,
                                      const MonomialBasis &basis,
                                      double tol) {
    if (gram.rows() != gram.cols() || gram.rows() != basis.size()) {
        throw DimensionError("sos_decompose: gram/basis size mismatch");
    }
    const Eigen::MatrixXd sym = 0.5 * (gram + gram.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
        throw DecompositionError("sos_decompose: eigendecomposition failed");
    }
    const Eigen::VectorXd &ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.size() > 0 ? ev.maxCoeff() : 0.0);
    std::vector<Polynomial> out;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        if (ev(k) < -tol * scale) {
            throw DecompositionError("sos_decompose: gram matrix is indefinite");
        }
        if (ev(k) <= 0.0) {
            continue; // clipped
        }
        const double s = std::sqrt(ev(k));
        Polynomial h(basis.num_vars());
        for (int i = 0; i < basis.size(); ++i) {
            const double c = s * es.eigenvectors()(i, k);
            if (c != 0.0) {
                h.add_term(basis[i], c);
            }
        }
        if (!h.is_zero()) {
            out.push_back(std::move(h));
        }
    }
    return out;
}

bool duality_check(double moment_value, double sos_value, double tol) {
    return sos_value <= moment_value + tol;
}

} // namespace momentsos
