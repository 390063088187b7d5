#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momentsos/moment.hpp"
#include "momentsos/relaxation.hpp"

namespace momentsos {

/// Count of singular values exceeding tol * max(1, sigma_max).
int numerical_rank(const Eigen::MatrixXd &M, double tol);

struct CertifyConfig {
    double rank_tol = 1e-6;    // relative rank tolerance (fragile knob)
    double bound_tol = 1e-6;   // max bound change between orders
    double extract_tol = 1e-5; // re-substitution tolerance
};

/// Digest of one solved relaxation order: bound, moment vector, ranks of
/// the moment matrix (and of its degree-(N-1) truncation) and of each
/// localizing matrix, plus an extracted point when the moment matrix has
/// numerical rank 1 and the point re-verifies.
struct RelaxationResult {
    int order = 0;
    int n = 0;
    SolveStatus status = SolveStatus::NumericalFailure;
    double lower_bound = 0.0;
    MomentVector y;
    int moment_rank = 0;
    int truncated_rank = 0;
    std::vector<std::pair<std::string, int>> localizing_ranks;
    bool certified = false;
    std::optional<std::vector<double>> extracted_point;

    // Program data carried along so extraction can re-verify.
    std::vector<std::string> variables;
    Polynomial objective{1};
    std::vector<Polynomial> inequalities;
    std::vector<Polynomial> equalities;
};

RelaxationResult analyze_relaxation(const RelaxationSdp &rel,
                                    const SdpSolution &sol,
                                    const CertifyConfig &cfg = {});

/// Flatness test between consecutive orders: true iff the rank of the
/// degree-(N-1) truncation of M_N(y) equals the rank of M_N(y) and the
/// bound moved by less than bound_tol. Throws DimensionError unless
/// cur.order == prev.order + 1 on the same program.
bool stabilization_check(const RelaxationResult &prev,
                         const RelaxationResult &cur, double bound_tol = 1e-6);

struct ExtractionCheck {
    std::vector<double> point;
    bool verified = false;
    double max_violation = 0.0;
};

/// Rank-1 extraction: read the point off the degree-1 moments and
/// re-substitute into the original program. Throws
/// ExtractionUnavailableError when the moment matrix rank is not 1.
ExtractionCheck extract_point(const RelaxationResult &result, double tol = 1e-5);

/// Split a PSD Gram matrix G on a monomial basis into polynomials h_i with
/// sum h_i^2 = b(x)' G b(x) (eigendecomposition; eigenvalues in
/// [-tol*max(1,lambda_max), 0) are clipped to zero). Throws
/// DecompositionError when G is indefinite beyond tolerance.
std::vector<Polynomial> sos_decompose(const Eigen::MatrixXd &gram,
                                      const MonomialBasis &basis,
                                      double tol = 1e-8);

/// Weak-duality sanity check: sos_value <= moment_value + tol.
bool duality_check(double moment_value, double sos_value, double tol);

} // namespace momentsos
