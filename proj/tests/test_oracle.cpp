#include "doctest.h"

#include <Eigen/Dense>

#include "momentsos/oracle.hpp"

using namespace momentsos;

TEST_CASE("brute force: single variable") {
    Eigen::MatrixXd A(1, 1);
    A << 1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    OracleReport r = brute_force_card(A, b);
    CHECK(r.optimum == 1);
    REQUIRE(r.witness.size() == 1);
    CHECK(r.witness[0] >= 1.0 - 1e-8);
    CHECK(r.lps_solved >= 1);
}

TEST_CASE("brute force: origin feasible") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
    OracleReport r = brute_force_card(A, b);
    CHECK(r.optimum == 0);
    for (double w : r.witness) {
        CHECK(w == doctest::Approx(0.0));
    }
}

TEST_CASE("brute force: simplex face") {
    Eigen::MatrixXd A(3, 2);
    A << 1.0, 1.0, 1.0, 0.0, 0.0, 1.0; // x1+x2 >= 1, x >= 0
    Eigen::VectorXd b(3);
    b << 1.0, 0.0, 0.0;
    OracleReport r = brute_force_card(A, b);
    CHECK(r.optimum == 1);
    // Witness feasibility re-verified against A, b.
    Eigen::VectorXd x(2);
    x << r.witness[0], r.witness[1];
    Eigen::VectorXd resid = A * x - b;
    CHECK(resid.minCoeff() >= -1e-8);
    // Witness achieves the reported cardinality.
    int card = 0;
    for (double w : r.witness) {
        if (std::abs(w) > 1e-8) {
            ++card;
        }
    }
    CHECK(card == r.optimum);
}

TEST_CASE("brute force: guard rails") {
    // Wholly infeasible: x >= 1 and -x >= 0.
    Eigen::MatrixXd A(2, 1);
    A << 1.0, -1.0;
    Eigen::VectorXd b(2);
    b << 1.0, 0.0;
    CHECK_THROWS_AS(brute_force_card(A, b), InfeasibleError);

    // Cap at n = 14.
    Eigen::MatrixXd big = Eigen::MatrixXd::Identity(15, 15);
    Eigen::VectorXd bb = Eigen::VectorXd::Zero(15);
    CHECK_THROWS_AS(brute_force_card(big, bb), DimensionError);
}

TEST_CASE("l1 heuristic") {
    // {x >= 1}: value 1 at x = 1.
    Eigen::MatrixXd A(1, 1);
    A << 1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    HeuristicResult h = l1_heuristic(A, b);
    CHECK(h.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(h.point[0] == doctest::Approx(1.0).epsilon(1e-5));

    // {x1 + x2 >= 1, x >= 0}: value 1.
    Eigen::MatrixXd A2(3, 2);
    A2 << 1.0, 1.0, 1.0, 0.0, 0.0, 1.0;
    Eigen::VectorXd b2(3);
    b2 << 1.0, 0.0, 0.0;
    HeuristicResult h2 = l1_heuristic(A2, b2);
    CHECK(h2.value == doctest::Approx(1.0).epsilon(1e-6));

    // Infeasible region.
    Eigen::MatrixXd A3(2, 1);
    A3 << 1.0, -1.0;
    Eigen::VectorXd b3(2);
    b3 << 1.0, 0.0;
    CHECK_THROWS_AS(l1_heuristic(A3, b3), InfeasibleError);
}

TEST_CASE("l1 value lower-bounds Card for witnesses inside the unit cube") {
    Eigen::MatrixXd A(3, 2);
    A << 1.0, 1.0, 1.0, 0.0, 0.0, 1.0;
    Eigen::VectorXd b(3);
    b << 0.8, 0.0, 0.0;
    HeuristicResult h = l1_heuristic(A, b);
    double linf = 0.0;
    int card = 0;
    for (double v : h.point) {
        linf = std::max(linf, std::abs(v));
        if (std::abs(v) > 1e-8) {
            ++card;
        }
    }
    REQUIRE(linf <= 1.0 + 1e-8);
    CHECK(h.value <= card + 1e-6);
}

TEST_CASE("nuclear heuristic") {
    // Tr(X) = 1 pins the objective.
    std::vector<Eigen::MatrixXd> A1 = {Eigen::MatrixXd::Identity(2, 2)};
    Eigen::VectorXd b1(1);
    b1 << 1.0;
    NuclearResult r1 = nuclear_heuristic(A1, b1);
    CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-6));

    // X11 = 1, X22 = 1, X12 = 0 force X = I, value 2.
    Eigen::MatrixXd E11 = Eigen::MatrixXd::Zero(2, 2);
    E11(0, 0) = 1.0;
    Eigen::MatrixXd E22 = Eigen::MatrixXd::Zero(2, 2);
    E22(1, 1) = 1.0;
    Eigen::MatrixXd E12 = Eigen::MatrixXd::Zero(2, 2);
    E12(0, 1) = E12(1, 0) = 0.5;
    std::vector<Eigen::MatrixXd> A2 = {E11, E22, E12};
    Eigen::VectorXd b2(3);
    b2 << 1.0, 1.0, 0.0;
    NuclearResult r2 = nuclear_heuristic(A2, b2);
    CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r2.X(0, 0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r2.X(1, 1) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(r2.X(0, 1)) <= 1e-5);

    // Tr(X) = 0 with X >= 0 forces X = 0.
    Eigen::VectorXd b3(1);
    b3 << 0.0;
    NuclearResult r3 = nuclear_heuristic(A1, b3);
    CHECK(r3.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("rounded bound") {
    CHECK(rounded_bound(0.9997) == 1);
    CHECK(rounded_bound(1.5002) == 2);
    CHECK(rounded_bound(0.0) == 0);
    CHECK(rounded_bound(-0.00005) == 0);
    CHECK(rounded_bound(2.0) == 2);
    CHECK_THROWS_AS(rounded_bound(std::numeric_limits<double>::infinity()),
                    DimensionError);
}
