#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "momentsos/certify.hpp"
#include "momentsos/oracle.hpp"
#include "momentsos/relaxation.hpp"

using namespace momentsos;

namespace {

Monomial mono(std::vector<int> e) { return Monomial(std::move(e)); }

// Moment-relaxation optima are typically degenerate (rank-deficient moment
// matrix), which caps the attainable KKT accuracy; solve them to 1e-6.
SolverConfig hier_cfg() {
    SolverConfig cfg;
    cfg.gap_tol = cfg.feas_tol = 1e-6;
    return cfg;
}

double objective_at(const Polynomial &obj, const MomentVector &y, int n) {
    MonomialBasis b = basis(n, y.order);
    double total = 0.0;
    for (const auto &[m, c] : obj.terms()) {
        total += c * y.values(b.index_of(m));
    }
    return total;
}

// Check a moment vector against every constraint of a relaxation: PSD
// blocks within eig_tol, scalar equality constraints of the program within
// eq_tol (each localizing-layout entry of an equality polynomial is zero).
void check_moment_feasibility(const RelaxationSdp &rel, const MomentVector &y,
                              double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.compute(assemble(y, moment_layout(rel.n, rel.order)),
               Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -tol);
    for (const auto &loc : rel.localizing) {
        es.compute(assemble(y, localizing_layout(loc.g, rel.n, loc.degree)),
                   Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -tol);
    }
    for (const auto &h : rel.program_equalities) {
        const int d = rel.order - (h.degree() + 1) / 2;
        MatrixLayout L = localizing_layout(h, rel.n, d);
        Eigen::MatrixXd M = assemble(y, L);
        CHECK(M.cwiseAbs().maxCoeff() <= tol);
    }
    CHECK(y.values(0) == doctest::Approx(1.0).epsilon(tol));
}

} // namespace

TEST_CASE("min_card_program structure") {
    Eigen::MatrixXd A(1, 1);
    A << 1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    SemialgebraicProgram sap = min_card_program(A, b, 3.0);

    REQUIRE(sap.num_vars() == 2); // (x1, v1)
    CHECK(sap.variables[0] == "x1");
    CHECK(sap.variables[1] == "v1");
    // Objective v1.
    CHECK(sap.objective.coefficient(mono({0, 1})) == doctest::Approx(1.0));
    CHECK(sap.objective.terms().size() == 1);
    // Equality (v1 - 1) x1 = v1 x1 - x1.
    REQUIRE(sap.equalities.size() == 1);
    CHECK(sap.equalities[0].coefficient(mono({1, 1})) == doctest::Approx(1.0));
    CHECK(sap.equalities[0].coefficient(mono({1, 0})) == doctest::Approx(-1.0));
    // Inequalities: row (x1 - 1 >= 0), vpos, ball.
    REQUIRE(sap.inequalities.size() == 3);
    CHECK(sap.inequality_names[0] == "row1");
    CHECK(sap.inequality_names[1] == "vpos1");
    CHECK(sap.inequality_names[2] == "ball");
    // Ball alpha - x1^2 - v1^2.
    const Polynomial &ball = sap.inequalities[2];
    CHECK(ball.coefficient(mono({0, 0})) == doctest::Approx(3.0));
    CHECK(ball.coefficient(mono({2, 0})) == doctest::Approx(-1.0));
    CHECK(ball.coefficient(mono({0, 2})) == doctest::Approx(-1.0));

    CHECK_THROWS_AS(min_card_program(A, b, 0.5), DimensionError);
}

TEST_CASE("min_rank_program structure") {
    // n=2: variables (u1, u2, X11, X12, X22, v1, v2).
    std::vector<Eigen::MatrixXd> A_list = {Eigen::MatrixXd::Identity(2, 2)};
    Eigen::VectorXd b(1);
    b << 1.0;
    SemialgebraicProgram sap = min_rank_program(A_list, b, 10.0);
    REQUIRE(sap.num_vars() == 7);
    CHECK(sap.min_order == 2); // ceil((n+1)/2) for n=2
    // Objective sum v_i.
    CHECK(sap.objective.terms().size() == 2);
    // Equalities: (v_i - 1) sigma_i(X) for i=1,2, plus Tr(X) = 1.
    CHECK(sap.equalities.size() == 3);
    // Inequalities: vpos x2, u'Xu, ball.
    CHECK(sap.inequalities.size() == 4);
    // Trace equality: X11 + X22 - 1 over the lifted variables.
    bool found_trace = false;
    for (const auto &h : sap.equalities) {
        if (h.coefficient(mono({0, 0, 1, 0, 0, 0, 0})) == 1.0 &&
            h.coefficient(mono({0, 0, 0, 0, 1, 0, 0})) == 1.0 &&
            h.coefficient(mono({0, 0, 0, 0, 0, 0, 0})) == -1.0) {
            found_trace = true;
        }
    }
    CHECK(found_trace);

    // Desk-scale cap.
    std::vector<Eigen::MatrixXd> big = {Eigen::MatrixXd::Identity(5, 5)};
    Eigen::VectorXd b5(1);
    b5 << 1.0;
    CHECK_THROWS_AS(min_rank_program(big, b5, 10.0), DimensionError);
}

TEST_CASE("moment relaxation: min x1 on the ball is -sqrt(alpha)") {
    const double alpha = 4.0;
    SemialgebraicProgram sap = SemialgebraicProgram::create(
        {"x"}, Polynomial::variable(1, 0), {}, {}, {}, {}, alpha);
    RelaxationSdp rel = build_moment_relaxation(sap, 1);
    SdpSolution sol = solve(rel.sdp, hier_cfg());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(rel.bound(sol) == doctest::Approx(-std::sqrt(alpha)).epsilon(1e-5));
}

TEST_CASE("moment relaxation equality-row accounting") {
    Eigen::MatrixXd A(1, 1);
    A << 1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    SemialgebraicProgram sap = min_card_program(A, b, 3.0);
    const int N = 2;
    RelaxationSdp rel = build_moment_relaxation(sap, N);

    // Dual embedding: one SDP equality row per basis(n, 2N) monomial.
    CHECK(static_cast<int>(rel.sdp.equalities.size()) ==
          basis_size(2, 2 * N));
    CHECK(rel.y_dim == basis_size(2, 2 * N));
    // Scalar y-equations enter as free variables: y_0 = 1 plus one per
    // localizing-layout entry of each program equality, minus duplicates.
    const int entries_per_eq = [&] {
        int total = 0;
        for (const auto &h : sap.equalities) {
            const int d = N - (h.degree() + 1) / 2;
            const int side = static_cast<int>(basis_size(2, d));
            total += side * (side + 1) / 2;
        }
        return total;
    }();
    CHECK(rel.sdp.num_free <= 1 + entries_per_eq);
    CHECK(rel.sdp.num_free >= 2);
    // PSD blocks: moment matrix plus one per inequality.
    CHECK(rel.sdp.blocks.size() == 1 + sap.inequalities.size());
    CHECK(rel.block_tags[0] == "moment");

    // Order too small for the degree-2 equality names the constraint.
    SemialgebraicProgram sap2 = sap;
    CHECK_THROWS_AS(build_moment_relaxation(sap2, 0), DegreeOverflowError);
}

TEST_CASE("mincard hierarchy: bounds and monotonicity on x >= 1") {
    Eigen::MatrixXd A(1, 1);
    A << 1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    SemialgebraicProgram sap = min_card_program(A, b, 3.0);

    std::vector<double> bounds;
    for (int N = 1; N <= 3; ++N) {
        RelaxationSdp rel = build_moment_relaxation(sap, N);
        SdpSolution sol = solve(rel.sdp, hier_cfg());
        REQUIRE(sol.status == SolveStatus::Optimal);
        bounds.push_back(rel.bound(sol));
    }
    for (size_t i = 1; i < bounds.size(); ++i) {
        CHECK(bounds[i] >= bounds[i - 1] - 1e-6);
    }
    // l_N in [0, 1] and rounds to the true optimum 1 at N >= 2.
    for (double l : bounds) {
        CHECK(l >= -1e-6);
        CHECK(l <= 1.0 + 1e-6);
    }
    CHECK(rounded_bound(bounds[1]) == 1);
    CHECK(rounded_bound(bounds[2]) == 1);
}

TEST_CASE("feasibility transfer: lifted feasible points satisfy the relaxation") {
    // x1 + x2 >= 1 with box; feasible point (1, 0.4) -> v = (1, 1).
    Eigen::MatrixXd A(3, 2);
    A << 1.0, 1.0, -1.0, 0.0, 0.0, -1.0;
    Eigen::VectorXd b(3);
    b << 1.0, -1.0, -1.0;
    SemialgebraicProgram sap = min_card_program(A, b, 6.0);
    const int N = 2;
    RelaxationSdp rel = build_moment_relaxation(sap, N);

    const std::vector<std::vector<double>> points = {
        {1.0, 0.4, 1.0, 1.0}, {0.5, 0.5, 1.0, 1.0}, {1.0, 0.0, 1.0, 0.0}};
    for (const auto &pt : points) {
        MomentVector y = moments_of_atoms({pt}, {1.0}, 2 * N);
        check_moment_feasibility(rel, y, 1e-9);
        const double card = (pt[0] != 0.0 ? 1 : 0) + (pt[1] != 0.0 ? 1 : 0);
        CHECK(objective_at(rel.objective, y, rel.n) ==
              doctest::Approx(card).epsilon(1e-9));
    }
}

TEST_CASE("sos dual: analytic examples") {
    // p = x^2 with only the ball: t* = 0.
    SemialgebraicProgram sq = SemialgebraicProgram::create(
        {"x"}, Polynomial::variable(1, 0) * Polynomial::variable(1, 0), {}, {},
        {}, {}, 100.0);
    SosDualProgram d1 = build_sos_dual(sq, 1);
    SdpSolution s1 = solve(d1.sdp, hier_cfg());
    REQUIRE(s1.status == SolveStatus::Optimal);
    CHECK(d1.bound(s1) == doctest::Approx(0.0).epsilon(1e-5));

    // p = 1 - x^2 on K = {1 - x^2 >= 0}: t* = 0 via q_1 = 1.
    Polynomial g(1);
    g.add_term(mono({0}), 1.0);
    g.add_term(mono({2}), -1.0);
    SemialgebraicProgram kp = SemialgebraicProgram::create(
        {"x"}, g, {g}, {"disc"}, {}, {}, 2.0);
    SosDualProgram d2 = build_sos_dual(kp, 1);
    SdpSolution s2 = solve(d2.sdp, hier_cfg());
    REQUIRE(s2.status == SolveStatus::Optimal);
    CHECK(d2.bound(s2) == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("weak duality between sos dual and moment relaxation") {
    Eigen::MatrixXd A(1, 1);
    A << 1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    SemialgebraicProgram sap = min_card_program(A, b, 3.0);
    for (int N = 1; N <= 2; ++N) {
        RelaxationSdp rel = build_moment_relaxation(sap, N);
        SdpSolution msol = solve(rel.sdp, hier_cfg());
        SosDualProgram dual = build_sos_dual(sap, N);
        SdpSolution dsol = solve(dual.sdp, hier_cfg());
        REQUIRE(msol.status == SolveStatus::Optimal);
        const double moment_val = rel.bound(msol);
        const double sos_val = dual.bound(dsol);
        CHECK(sos_val <= moment_val + 1e-5);
        if (dsol.status == SolveStatus::Optimal) {
            CHECK(sos_val == doctest::Approx(moment_val).epsilon(1e-4));
        }
    }
}

TEST_CASE("box monomial integral") {
    CHECK(box_monomial_integral(mono({1, 1})) == doctest::Approx(0.25));
    CHECK(box_monomial_integral(mono({0, 0, 0})) == doctest::Approx(1.0));
    CHECK(box_monomial_integral(mono({2, 3})) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("envelope recovers the l1 bound with A dropped (n=2, d=1)") {
    Eigen::MatrixXd A(0, 2);
    Eigen::VectorXd b(0);
    EnvelopeOptions opts;
    opts.include_A = false;
    EnvelopeProgram env = envelope_program(A, b, 1, 2, opts);
    SdpSolution sol = solve(env.sdp, hier_cfg());
    REQUIRE(sol.status == SolveStatus::Optimal);
    Polynomial p = env.fitted(sol);
    // p(x) ~ x1 + x2: the l1 envelope of Card on the unit box.
    CHECK(p.coefficient(mono({1, 0})) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(p.coefficient(mono({0, 1})) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(p.coefficient(mono({0, 0}))) <= 1e-3);
}

TEST_CASE("envelope underestimates Card at sampled feasible points") {
    Eigen::MatrixXd A(1, 2);
    A << 1.0, 1.0;
    Eigen::VectorXd b(1);
    b << 0.5;
    EnvelopeProgram env = envelope_program(A, b, 2, 2);
    SdpSolution sol = solve(env.sdp, hier_cfg());
    REQUIRE(sol.status == SolveStatus::Optimal);
    Polynomial p = env.fitted(sol);

    std::mt19937 rng(9);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    int checked = 0;
    while (checked < 200) {
        const double x1 = dist(rng), x2 = dist(rng);
        if (x1 + x2 < 0.5) {
            continue;
        }
        const double card = (x1 != 0.0 ? 1 : 0) + (x2 != 0.0 ? 1 : 0);
        CHECK(p.eval({x1, x2}) <= card + 1e-6);
        ++checked;
    }
}
