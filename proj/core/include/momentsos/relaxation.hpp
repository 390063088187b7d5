#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "momentsos/moment.hpp"
#include "momentsos/polynomial.hpp"
#include "momentsos/sdp.hpp"

namespace momentsos {

/// Polynomial program: minimize `objective` over
/// { x : g(x) >= 0 for g in inequalities, h(x) = 0 for h in equalities }.
/// A compactness ball constraint is always part of the inequality list
/// (appended by the factory / builders), with alpha > 1.
struct SemialgebraicProgram {
    std::vector<std::string> variables;
    Polynomial objective{1};
    std::vector<Polynomial> inequalities;
    std::vector<Polynomial> equalities;
    std::vector<std::string> inequality_names; // parallel, used in diagnostics
    std::vector<std::string> equality_names;
    double ball_radius = 0.0;
    int min_order = 1;

    int num_vars() const { return static_cast<int>(variables.size()); }

    /// Assemble a program, appending the ball constraint
    /// alpha - sum_i x_i^2 >= 0 (or a caller-supplied ball polynomial).
    static SemialgebraicProgram
    create(std::vector<std::string> variables, Polynomial objective,
           std::vector<Polynomial> inequalities,
           std::vector<std::string> inequality_names,
           std::vector<Polynomial> equalities,
           std::vector<std::string> equality_names, double alpha,
           std::optional<Polynomial> custom_ball = std::nullopt);
};

/// MinCard: minimize Card(x) subject to A x >= b, via the lifted program
/// in variables (x, v) with objective sum v_i and equalities (v_i-1)x_i = 0.
SemialgebraicProgram min_card_program(const Eigen::MatrixXd &A,
                                      const Eigen::VectorXd &b, double alpha);

/// MinRank on PSD matrices: minimize Rank(X) subject to Tr(A_i X) = b_i,
/// X >= 0, via variables (u, X upper-triangle row-major, v), equalities
/// (v_i-1) sigma_i(X) = 0 and Tr(A_i X) = b_i, and inequality u'Xu >= 0.
SemialgebraicProgram min_rank_program(const std::vector<Eigen::MatrixXd> &A_list,
                                      const Eigen::VectorXd &b, double alpha);

/// Metadata for one localizing block of a relaxation.
struct LocalizingInfo {
    std::string tag;
    Polynomial g{1};
    int degree = 0; // localizing order d
};

/// Order-N moment relaxation lowered to an SdpProblem. The SDP's equality
/// rows are indexed by basis(n, 2N); the moment vector y is read off the
/// dual multipliers, and the bound l_N is the optimal value.
struct RelaxationSdp {
    int order = 0;
    int n = 0;     // underlying variable count
    int y_dim = 0; // s(2N)
    SdpProblem sdp;
    std::vector<std::string> block_tags; // parallel to sdp.blocks
    LocalizingInfo moment_info;          // tag "moment", g = 1, degree N
    std::vector<LocalizingInfo> localizing; // one per inequality block
    std::vector<std::string> variables;
    Polynomial objective{1};
    std::vector<Polynomial> program_inequalities;
    std::vector<Polynomial> program_equalities;

    /// Moment vector recovered from a solve of `sdp`.
    MomentVector moment_vector(const SdpSolution &sol) const;

    /// Relaxation bound l_N from a solve of `sdp`. The midpoint of the two
    /// objectives is accurate to half the duality gap of the returned
    /// iterate, where either side alone can be off by the full gap.
    double bound(const SdpSolution &sol) const {
        return -0.5 * (sol.primal_obj + sol.dual_obj);
    }
};

/// Lower a semialgebraic program to its order-N moment relaxation.
/// Inequalities get PSD localizing blocks at degree N - ceil(deg g / 2);
/// equalities become scalar linear equations on y (every entry of the
/// corresponding localizing layout set to zero); y_0 = 1 is an explicit
/// equality. Throws DegreeOverflowError when N is too small, naming the
/// offending constraint.
RelaxationSdp build_moment_relaxation(const SemialgebraicProgram &sap, int N);

/// Putinar/SOS dual of the order-N relaxation: maximize t such that
/// objective - t = q_0 + sum_k g_k q_k + sum_j h_j lambda_j with q_k SOS
/// (deg q_k <= 2N - deg g_k rounded down to even) and lambda_j free
/// polynomial multipliers. The optimum t* is -primal_obj of the solve.
struct SosDualProgram {
    int order = 0;
    SdpProblem sdp;
    int t_index = 0;                 // free-variable index of t
    std::vector<int> gram_blocks;    // block ids: q_0 first, then one per g_k
    std::vector<std::string> block_tags;

    /// Certified value t. The SDP minimizes -t, so the midpoint of the two
    /// objectives recovers t to half the duality gap.
    double bound(const SdpSolution &sol) const {
        return -0.5 * (sol.primal_obj + sol.dual_obj);
    }
};

SosDualProgram build_sos_dual(const SemialgebraicProgram &sap, int N);

/// Convex-envelope design program: maximize the unit-box integral of a
/// degree-d polynomial p constrained to underestimate Card on the lifted
/// MinCard feasible set (Putinar certificate at order N) and to have a PSD
/// Hessian quadratic form on the box (certificate over (x, z) with
/// ||z||^2 = 1 split into two inequalities).
struct EnvelopeOptions {
    bool include_A = true;   // keep the Ax >= b rows in K
    bool unit_box = true;    // add x <= 1 box faces to K
    std::optional<double> card_upper_bound; // optional t - p(x) >= 0 on K
    double alpha = 0.0;      // ball radius; 0 means 2n + 1 default
};

struct EnvelopeProgram {
    int degree = 0;
    int order = 0;
    int n = 0;
    SdpProblem sdp;
    std::vector<Monomial> p_monomials; // basis(n, degree) entries
    std::vector<int> p_indices;        // free-variable index per monomial

    Polynomial fitted(const SdpSolution &sol) const;
};

EnvelopeProgram envelope_program(const Eigen::MatrixXd &A,
                                 const Eigen::VectorXd &b, int d, int N,
                                 const EnvelopeOptions &opts = {});

/// Integral of x^alpha over the unit box: prod_i 1/(alpha_i + 1).
double box_monomial_integral(const Monomial &mono);

} // namespace momentsos
