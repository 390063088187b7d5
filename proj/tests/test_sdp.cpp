#include "doctest.h"

#include <Eigen/Dense>
#include <fstream>
#include <random>
#include <sstream>

#include "momentsos/sdp.hpp"
#include "momentsos/sdpa.hpp"

using namespace momentsos;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// min Tr(X) s.t. X11 = 1, X psd 2x2. Optimum 1 at X = e1 e1'.
SdpProblem trace_example() {
    SdpProblem p;
    p.add_block(2);
    p.objective.add_mat(0, 0, 0, 1.0);
    p.objective.add_mat(0, 1, 1, 1.0);
    LinearFunctional lhs;
    lhs.add_mat(0, 0, 0, 1.0);
    p.add_equality(std::move(lhs), 1.0);
    return p;
}

SdpProblem random_feasible_sdp(std::mt19937 &rng, int dim, int m) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto rand_sym = [&]() {
        Eigen::MatrixXd A(dim, dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = i; j < dim; ++j) {
                A(i, j) = A(j, i) = dist(rng);
            }
        }
        return A;
    };
    // Known optimal pair: X* and S* share an eigenbasis with complementary
    // supports, C = sum_r y_r A_r + S*, b_r = <A_r, X*>.
    Eigen::MatrixXd B = rand_sym();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    Eigen::MatrixXd Q = es.eigenvectors();
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(dim), ds = Eigen::VectorXd::Zero(dim);
    const int split = 1 + static_cast<int>(rng() % static_cast<unsigned>(dim - 1));
    for (int i = 0; i < dim; ++i) {
        if (i < split) {
            dx(i) = 0.5 + 0.5 * std::abs(dist(rng));
        } else {
            ds(i) = 0.5 + 0.5 * std::abs(dist(rng));
        }
    }
    Eigen::MatrixXd Xstar = Q * dx.asDiagonal() * Q.transpose();
    Eigen::MatrixXd Sstar = Q * ds.asDiagonal() * Q.transpose();

    SdpProblem p;
    p.add_block(dim);
    Eigen::MatrixXd C = Sstar;
    for (int r = 0; r < m; ++r) {
        Eigen::MatrixXd A = rand_sym();
        const double y = dist(rng);
        C += y * A;
        LinearFunctional lhs;
        double rhs = 0.0;
        for (int i = 0; i < dim; ++i) {
            for (int j = i; j < dim; ++j) {
                const double w = i == j ? 1.0 : 2.0;
                lhs.add_mat(0, i, j, w * A(i, j));
                rhs += w * A(i, j) * Xstar(i, j);
            }
        }
        p.add_equality(std::move(lhs), rhs);
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            p.objective.add_mat(0, i, j, (i == j ? 1.0 : 2.0) * C(i, j));
        }
    }
    p.objective_constant = -(C.array() * Xstar.array()).sum(); // optimum 0
    return p;
}

SdpProblem random_structural_sdp(std::mt19937 &rng) {
    std::uniform_int_distribution<int> dimd(1, 3), blkd(1, 3), md(1, 4);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    SdpProblem p;
    const int nb = blkd(rng);
    for (int b = 0; b < nb; ++b) {
        p.add_block(dimd(rng), rng() % 2 ? BlockKind::Psd : BlockKind::Diagonal);
    }
    const int m = md(rng);
    for (int r = 0; r < m; ++r) {
        LinearFunctional lhs;
        for (int b = 0; b < nb; ++b) {
            const int d = p.blocks[b].dim;
            const int i = static_cast<int>(rng() % static_cast<unsigned>(d));
            const int j = p.blocks[b].kind == BlockKind::Diagonal
                              ? i
                              : static_cast<int>(rng() % static_cast<unsigned>(d));
            lhs.add_mat(b, std::min(i, j), std::max(i, j), dist(rng));
        }
        p.add_equality(std::move(lhs), dist(rng));
    }
    p.objective.add_mat(0, 0, 0, dist(rng));
    return p;
}

} // namespace

TEST_CASE("solve: analytic examples") {
    SolverConfig cfg;

    SdpSolution s1 = solve(trace_example(), cfg);
    REQUIRE(s1.status == SolveStatus::Optimal);
    CHECK(s1.primal_obj == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s1.block_values[0](0, 0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(s1.block_values[0](1, 1) == doctest::Approx(0.0).epsilon(1e-5));

    // min t s.t. [[1, t], [t, 1]] psd -> t = -1.
    SdpProblem p2;
    p2.add_block(2);
    const int t = p2.add_free_vars(1);
    p2.objective.add_free(t, 1.0);
    LinearFunctional d0, d1, off;
    d0.add_mat(0, 0, 0, 1.0);
    p2.add_equality(std::move(d0), 1.0);
    d1.add_mat(0, 1, 1, 1.0);
    p2.add_equality(std::move(d1), 1.0);
    off.add_mat(0, 0, 1, 1.0);
    off.add_free(t, -1.0); // X01 - t = 0
    p2.add_equality(std::move(off), 0.0);
    SdpSolution s2 = solve(p2, cfg);
    REQUIRE(s2.status == SolveStatus::Optimal);
    CHECK(s2.free_values(t) == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("solve_lp: examples") {
    SolverConfig cfg;

    // min x s.t. x >= 1.
    Eigen::VectorXd c(1);
    c << 1.0;
    LpResult r1 = solve_lp(c, Eigen::MatrixXd(0, 1), Eigen::VectorXd(0),
                           {{1.0, kInf}}, cfg);
    REQUIRE(r1.status == SolveStatus::Optimal);
    CHECK(r1.objective == doctest::Approx(1.0).epsilon(1e-6));

    // {x >= 1, x <= 0} infeasible.
    LpResult r2 = solve_lp(c, Eigen::MatrixXd(0, 1), Eigen::VectorXd(0),
                           {{1.0, 0.0}}, cfg);
    CHECK(r2.status == SolveStatus::InfeasibleSuspected);

    // min ||x||_1 on x1 + x2 >= 1, x >= 0 via a slack variable.
    Eigen::VectorXd c3(3);
    c3 << 1.0, 1.0, 0.0;
    Eigen::MatrixXd A(1, 3);
    A << 1.0, 1.0, -1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    LpResult r3 = solve_lp(c3, A, b,
                           {{0.0, kInf}, {0.0, kInf}, {0.0, kInf}}, cfg);
    REQUIRE(r3.status == SolveStatus::Optimal);
    CHECK(r3.objective == doctest::Approx(1.0).epsilon(1e-6));

    // Empty objective with consistent equalities: any feasible point.
    Eigen::VectorXd c4 = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd A4(1, 2);
    A4 << 1.0, 1.0;
    Eigen::VectorXd b4(1);
    b4 << 2.0;
    LpResult r4 = solve_lp(c4, A4, b4, {{0.0, kInf}, {0.0, kInf}}, cfg);
    REQUIRE(r4.status == SolveStatus::Optimal);
    CHECK(r4.x(0) + r4.x(1) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("solver invariants on 50 constructed-feasible SDPs") {
    std::mt19937 rng(2024);
    int solved = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const int dim = 2 + rep % 3;
        const int m = 1 + rep % 3;
        SdpProblem p = random_feasible_sdp(rng, dim, m);
        SdpSolution s = solve(p);
        REQUIRE(s.status == SolveStatus::Optimal);
        ++solved;
        // Known optimum 0 by construction.
        CHECK(std::abs(s.primal_obj) < 1e-5);
        // KKT residuals at the reported solution.
        double pres = 0.0;
        for (size_t r = 0; r < p.equalities.size(); ++r) {
            double v = -p.equalities[r].rhs;
            for (const auto &mc : p.equalities[r].lhs.mat) {
                const Eigen::MatrixXd &X = s.block_values[mc.block];
                v += mc.i == mc.j
                         ? mc.value * X(mc.i, mc.i)
                         : 0.5 * mc.value * (X(mc.i, mc.j) + X(mc.j, mc.i));
            }
            pres = std::max(pres, std::abs(v));
        }
        CHECK(pres <= 1e-6);
        const double relgap = std::abs(s.primal_obj - s.dual_obj) /
                              (1.0 + std::abs(s.primal_obj) + std::abs(s.dual_obj));
        CHECK(relgap <= 1e-6);
        // Weak duality.
        CHECK(s.dual_obj <= s.primal_obj + 1e-6);
    }
    CHECK(solved == 50);
}

TEST_CASE("determinism: identical runs produce identical output") {
    std::mt19937 rng(77);
    SdpProblem p = random_feasible_sdp(rng, 3, 2);
    SdpSolution a = solve(p);
    SdpSolution b = solve(p);
    CHECK(a.status == b.status);
    CHECK(a.iterations == b.iterations);
    CHECK(a.primal_obj == b.primal_obj); // bitwise
    CHECK(a.dual_obj == b.dual_obj);
    CHECK((a.block_values[0] - b.block_values[0]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("validate rejects malformed problems") {
    SdpProblem p;
    p.add_block(2, BlockKind::Diagonal);
    LinearFunctional lhs;
    lhs.add_mat(0, 0, 1, 1.0); // off-diagonal on a diagonal block
    p.add_equality(std::move(lhs), 0.0);
    CHECK_THROWS_AS(p.validate(), DimensionError);

    SdpProblem q;
    q.add_block(2);
    q.objective.add_mat(1, 0, 0, 1.0); // block out of range
    CHECK_THROWS_AS(q.validate(), DimensionError);
}

TEST_CASE("sdpa golden file") {
    const std::string expected = read_file(std::string(TEST_DATA_DIR) +
                                           "/golden_2x2.dat-s");
    CHECK(export_sdpa(trace_example()) == expected);
}

TEST_CASE("sdpa export/import round trip") {
    std::mt19937 rng(31337);
    for (int rep = 0; rep < 20; ++rep) {
        SdpProblem p = random_structural_sdp(rng);
        const std::string text = export_sdpa(p);
        SdpProblem q = import_sdpa(text);
        REQUIRE(q.blocks.size() == p.blocks.size());
        for (size_t b = 0; b < p.blocks.size(); ++b) {
            CHECK(q.blocks[b].dim == p.blocks[b].dim);
            CHECK(q.blocks[b].kind == p.blocks[b].kind);
        }
        CHECK(q.equalities.size() == p.equalities.size());
        // Canonical comparison: re-export must be byte-identical.
        CHECK(export_sdpa(q) == text);
    }
}

TEST_CASE("sdpa rejects free variables; split makes them exportable") {
    SdpProblem p;
    p.add_block(2);
    const int t = p.add_free_vars(1);
    p.objective.add_free(t, 1.0);
    LinearFunctional off;
    off.add_mat(0, 0, 1, 1.0);
    off.add_free(t, -2.0);
    p.add_equality(std::move(off), 0.0);
    LinearFunctional d0, d1;
    d0.add_mat(0, 0, 0, 1.0);
    p.add_equality(std::move(d0), 1.0);
    d1.add_mat(0, 1, 1, 1.0);
    p.add_equality(std::move(d1), 1.0);

    CHECK_THROWS_AS(export_sdpa(p), ExportError);

    SdpProblem q = split_free_variables(p);
    CHECK(q.num_free == 0);
    CHECK_NOTHROW(export_sdpa(q));
    // Same optimum through the split encoding.
    SdpSolution sp = solve(p);
    SdpSolution sq = solve(q);
    REQUIRE(sp.status == SolveStatus::Optimal);
    REQUIRE(sq.status == SolveStatus::Optimal);
    CHECK(sp.primal_obj == doctest::Approx(sq.primal_obj).epsilon(1e-5));
}

TEST_CASE("sdpa empty problem exports header only") {
    SdpProblem p;
    const std::string text = export_sdpa(p);
    CHECK_FALSE(text.empty());
    // No entry lines: every line belongs to the header/rhs section.
    std::istringstream in(text);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        ++lines;
    }
    CHECK(lines <= 4);
}
