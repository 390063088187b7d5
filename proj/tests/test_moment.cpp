#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <random>

#include "momentsos/moment.hpp"

using namespace momentsos;

namespace {

Monomial mono(std::vector<int> e) { return Monomial(std::move(e)); }

} // namespace

TEST_CASE("moment layout structure") {
    // n=1, d=1: Hankel [[y0, y1], [y1, y2]].
    MatrixLayout L = moment_layout(1, 1);
    REQUIRE(L.side() == 2);
    CHECK(L.required_order() == 2);
    CHECK(L.entry(0, 0).at(0).moment_index == 0);
    CHECK(L.entry(0, 1).at(0).moment_index == 1);
    CHECK(L.entry(1, 0).at(0).moment_index == 1);
    CHECK(L.entry(1, 1).at(0).moment_index == 2);

    // n=2, d=1: rows (1, x1, x2); entry (x1, x2) reads y_{x1 x2}.
    MatrixLayout L2 = moment_layout(2, 1);
    MonomialBasis b = basis(2, 2);
    REQUIRE(L2.side() == 3);
    CHECK(L2.entry(1, 2).at(0).moment_index == b.index_of(mono({1, 1})));
    // Diagonal entries read the squared monomials.
    for (int i = 0; i < 3; ++i) {
        Monomial sq = basis(2, 1)[i] * basis(2, 1)[i];
        CHECK(L2.entry(i, i).at(0).moment_index == b.index_of(sq));
    }
    // First row equals y itself.
    for (int j = 0; j < 3; ++j) {
        CHECK(L2.entry(0, j).at(0).moment_index == j);
    }
}

TEST_CASE("localizing layout structure") {
    // g = 1 reduces to the moment layout.
    Polynomial one = Polynomial::constant(2, 1.0);
    MatrixLayout Lg = localizing_layout(one, 2, 1);
    MatrixLayout Lm = moment_layout(2, 1);
    REQUIRE(Lg.side() == Lm.side());
    for (int i = 0; i < Lg.side(); ++i) {
        for (int j = i; j < Lg.side(); ++j) {
            REQUIRE(Lg.entry(i, j).size() == 1);
            CHECK(Lg.entry(i, j)[0].moment_index ==
                  Lm.entry(i, j)[0].moment_index);
            CHECK(Lg.entry(i, j)[0].coef == doctest::Approx(1.0));
        }
    }

    // n=1, d=1, g = 1 - x^2: entry (0,0) = y0 - y2.
    Polynomial g(1);
    g.add_term(mono({0}), 1.0);
    g.add_term(mono({2}), -1.0);
    MatrixLayout L = localizing_layout(g, 1, 1);
    const auto &e00 = L.entry(0, 0);
    REQUIRE(e00.size() == 2);
    double c0 = 0.0, c2 = 0.0;
    for (const auto &t : e00) {
        if (t.moment_index == 0) c0 = t.coef;
        if (t.moment_index == 2) c2 = t.coef;
    }
    CHECK(c0 == doctest::Approx(1.0));
    CHECK(c2 == doctest::Approx(-1.0));

    // n=2, d=1, g = a1 x1 + a2 x2 - b: entry (0,0).
    Polynomial aff(2);
    aff.add_term(mono({1, 0}), 1.5);
    aff.add_term(mono({0, 1}), -2.0);
    aff.add_term(mono({0, 0}), -0.25);
    MatrixLayout La = localizing_layout(aff, 2, 1);
    MonomialBasis b3 = basis(2, 3);
    const auto &a00 = La.entry(0, 0);
    REQUIRE(a00.size() == 3);
    for (const auto &t : a00) {
        if (t.moment_index == b3.index_of(mono({1, 0}))) {
            CHECK(t.coef == doctest::Approx(1.5));
        } else if (t.moment_index == b3.index_of(mono({0, 1}))) {
            CHECK(t.coef == doctest::Approx(-2.0));
        } else {
            CHECK(t.moment_index == 0);
            CHECK(t.coef == doctest::Approx(-0.25));
        }
    }
}

TEST_CASE("assemble") {
    // Dirac at x=2: [[1,2],[2,4]], rank 1.
    MomentVector y = moments_of_atoms({{2.0}}, {1.0}, 2);
    Eigen::MatrixXd M = assemble(y, moment_layout(1, 1));
    CHECK(M(0, 0) == doctest::Approx(1.0));
    CHECK(M(0, 1) == doctest::Approx(2.0));
    CHECK(M(1, 0) == doctest::Approx(2.0));
    CHECK(M(1, 1) == doctest::Approx(4.0));
    CHECK(M.determinant() == doctest::Approx(0.0));

    // Uniform two-atom measure (delta_0 + delta_1)/2: [[1,.5],[.5,.5]].
    MomentVector y2 = moments_of_atoms({{0.0}, {1.0}}, {0.5, 0.5}, 2);
    Eigen::MatrixXd M2 = assemble(y2, moment_layout(1, 1));
    CHECK(M2(0, 0) == doctest::Approx(1.0));
    CHECK(M2(0, 1) == doctest::Approx(0.5));
    CHECK(M2(1, 1) == doctest::Approx(0.5));
    CHECK(M2.determinant() > 0.0);

    // Zero measure (weights need not be a probability).
    MomentVector yz = moments_of_atoms({{1.0}}, {0.0}, 2, false);
    CHECK(assemble(yz, moment_layout(1, 1)).cwiseAbs().maxCoeff() == 0.0);

    // Insufficient order throws.
    CHECK_THROWS_AS(assemble(y, moment_layout(1, 2)), DegreeOverflowError);
}

TEST_CASE("moments_of_atoms") {
    MomentVector y = moments_of_atoms({{0.5, 2.0}}, {1.0}, 2);
    MonomialBasis b = basis(2, 2);
    CHECK(y.size() == b.size());
    for (int i = 0; i < b.size(); ++i) {
        double v = 1.0;
        const std::vector<double> pt = {0.5, 2.0};
        for (int k = 0; k < 2; ++k) {
            for (int e = 0; e < b[i].exponents[k]; ++e) {
                v *= pt[k];
            }
        }
        CHECK(y.values(i) == doctest::Approx(v));
    }

    // Symmetric atoms +-1 in n=1: odd moments vanish.
    MomentVector ys = moments_of_atoms({{1.0}, {-1.0}}, {0.5, 0.5}, 2);
    CHECK(ys.values(0) == doctest::Approx(1.0));
    CHECK(ys.values(1) == doctest::Approx(0.0));
    CHECK(ys.values(2) == doctest::Approx(1.0));

    // Weight normalization enforced when requested.
    CHECK_THROWS_AS(moments_of_atoms({{1.0}}, {0.5}, 2), DimensionError);
}

TEST_CASE("localizing quadratic-form identity on random atoms") {
    // <v, M(g y) v> = sum_k w_k v(x_k)^2 g(x_k) for atomic measures in
    // K = {g >= 0}; also the moment matrix stays PSD.
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> wdist(0.1, 1.0);
    std::uniform_int_distribution<int> ndist(1, 3);
    std::uniform_int_distribution<int> ddist(1, 2);

    for (int rep = 0; rep < 200; ++rep) {
        const int n = ndist(rng);
        const int d = ddist(rng);
        // g = r^2 - ||x||^2 keeps the sampled box inside K.
        Polynomial g = Polynomial::constant(n, static_cast<double>(n) + 1.0);
        for (int i = 0; i < n; ++i) {
            Polynomial xi = Polynomial::variable(n, i);
            g = g - xi * xi;
        }
        const int atoms = 1 + rep % 3;
        std::vector<std::vector<double>> pts;
        std::vector<double> w;
        for (int a = 0; a < atoms; ++a) {
            std::vector<double> p(n);
            for (double &c : p) {
                c = coord(rng);
            }
            pts.push_back(p);
            w.push_back(wdist(rng));
        }
        const int order = 2 * d + g.degree();
        MomentVector y = moments_of_atoms(pts, w, order, false);

        Eigen::MatrixXd Mg = assemble(y, localizing_layout(g, n, d));
        MonomialBasis vb = basis(n, d);
        Eigen::VectorXd v(vb.size());
        for (int i = 0; i < vb.size(); ++i) {
            v(i) = coord(rng);
        }
        double expect = 0.0;
        for (int a = 0; a < atoms; ++a) {
            double vx = 0.0;
            for (int i = 0; i < vb.size(); ++i) {
                double m = 1.0;
                for (int k = 0; k < n; ++k) {
                    for (int e = 0; e < vb[i].exponents[k]; ++e) {
                        m *= pts[a][k];
                    }
                }
                vx += v(i) * m;
            }
            expect += w[a] * vx * vx * g.eval(pts[a]);
        }
        CHECK(v.dot(Mg * v) == doctest::Approx(expect).epsilon(1e-9));
        CHECK(expect >= -1e-9);

        Eigen::MatrixXd Mm = assemble(y, moment_layout(n, d));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            Mm, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
}

TEST_CASE("moment layout nests as leading block of the next degree") {
    for (int n = 1; n <= 3; ++n) {
        for (int d = 0; d <= 2; ++d) {
            MatrixLayout small = moment_layout(n, d);
            MatrixLayout big = moment_layout(n, d + 1);
            for (int i = 0; i < small.side(); ++i) {
                for (int j = i; j < small.side(); ++j) {
                    CHECK(small.entry(i, j)[0].moment_index ==
                          big.entry(i, j)[0].moment_index);
                }
            }
        }
    }
}

TEST_CASE("assemble is linear in y") {
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    MatrixLayout L = moment_layout(2, 1);
    MomentVector a{2, 2, Eigen::VectorXd(6)}, b{2, 2, Eigen::VectorXd(6)};
    for (int i = 0; i < 6; ++i) {
        a.values(i) = dist(rng);
        b.values(i) = dist(rng);
    }
    MomentVector combo{2, 2, 2.0 * a.values + 3.0 * b.values};
    Eigen::MatrixXd lhs = assemble(combo, L);
    Eigen::MatrixXd rhs = 2.0 * assemble(a, L) + 3.0 * assemble(b, L);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}
