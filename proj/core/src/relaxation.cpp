#include "momentsos/relaxation.hpp"

#include <cmath>
#include <map>

#include "momentsos/symmetric_poly.hpp"

namespace momentsos {

namespace {

int ceil_half(int d) { return (d + 1) / 2; }

std::string numbered(const std::string &stem, int i) {
    return stem + std::to_string(i + 1);
}

} // namespace

SemialgebraicProgram SemialgebraicProgram::create(
    std::vector<std::string> variables, Polynomial objective,
    std::vector<Polynomial> inequalities,
    std::vector<std::string> inequality_names,
    std::vector<Polynomial> equalities, std::vector<std::string> equality_names,
    double alpha, std::optional<Polynomial> custom_ball) {
    const int n = static_cast<int>(variables.size());
    if (n < 1) {
        throw DimensionError("SemialgebraicProgram: no variables");
    }
    if (!(alpha > 1.0)) {
        throw DimensionError("SemialgebraicProgram: ball radius must exceed 1");
    }
    if (objective.num_vars() != n) {
        throw DimensionError("SemialgebraicProgram: objective dimension mismatch");
    }
    if (inequality_names.size() != inequalities.size() ||
        equality_names.size() != equalities.size()) {
        throw DimensionError("SemialgebraicProgram: name lists must be parallel");
    }
    for (const auto &g : inequalities) {
        if (g.num_vars() != n) {
            throw DimensionError("SemialgebraicProgram: inequality dimension mismatch");
        }
    }
    for (const auto &h : equalities) {
        if (h.num_vars() != n) {
            throw DimensionError("SemialgebraicProgram: equality dimension mismatch");
        }
    }

    Polynomial ball = Polynomial::constant(n, alpha);
    if (custom_ball) {
        if (custom_ball->num_vars() != n) {
            throw DimensionError("SemialgebraicProgram: ball dimension mismatch");
        }
        ball = *custom_ball;
    } else {
        for (int i = 0; i < n; ++i) {
            const Polynomial xi = Polynomial::variable(n, i);
            ball = ball - xi * xi;
        }
    }
    inequalities.push_back(std::move(ball));
    inequality_names.push_back("ball");

    SemialgebraicProgram sap;
    sap.variables = std::move(variables);
    sap.objective = std::move(objective);
    sap.inequalities = std::move(inequalities);
    sap.inequality_names = std::move(inequality_names);
    sap.equalities = std::move(equalities);
    sap.equality_names = std::move(equality_names);
    sap.ball_radius = alpha;
    return sap;
}

SemialgebraicProgram min_card_program(const Eigen::MatrixXd &A,
                                      const Eigen::VectorXd &b, double alpha) {
    const int rows = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (n < 1) {
        throw DimensionError("min_card_program: A must have at least one column");
    }
    if (b.size() != rows) {
        throw DimensionError("min_card_program: A and b sizes disagree");
    }
    const int nt = 2 * n; // (x_1..x_n, v_1..v_n)

    std::vector<std::string> vars;
    for (int i = 0; i < n; ++i) {
        vars.push_back(numbered("x", i));
    }
    for (int i = 0; i < n; ++i) {
        vars.push_back(numbered("v", i));
    }

    Polynomial obj(nt);
    for (int i = 0; i < n; ++i) {
        obj = obj + Polynomial::variable(nt, n + i);
    }

    std::vector<Polynomial> eqs;
    std::vector<std::string> eq_names;
    for (int i = 0; i < n; ++i) {
        const Polynomial xi = Polynomial::variable(nt, i);
        const Polynomial vi = Polynomial::variable(nt, n + i);
        eqs.push_back(vi * xi - xi); // (v_i - 1) x_i = 0
        eq_names.push_back(numbered("comp", i));
    }

    std::vector<Polynomial> ineqs;
    std::vector<std::string> ineq_names;
    for (int j = 0; j < rows; ++j) {
        Polynomial row = Polynomial::constant(nt, -b(j));
        for (int i = 0; i < n; ++i) {
            if (A(j, i) != 0.0) {
                row = row + Polynomial::variable(nt, i) * A(j, i);
            }
        }
        ineqs.push_back(std::move(row));
        ineq_names.push_back(numbered("row", j));
    }
    for (int i = 0; i < n; ++i) {
        ineqs.push_back(Polynomial::variable(nt, n + i));
        ineq_names.push_back(numbered("vpos", i));
    }

    return SemialgebraicProgram::create(std::move(vars), std::move(obj),
                                        std::move(ineqs), std::move(ineq_names),
                                        std::move(eqs), std::move(eq_names),
                                        alpha);
}

SemialgebraicProgram min_rank_program(const std::vector<Eigen::MatrixXd> &A_list,
                                      const Eigen::VectorXd &b, double alpha) {
    if (A_list.empty()) {
        throw DimensionError("min_rank_program: need at least one constraint matrix");
    }
    const int n = static_cast<int>(A_list[0].rows());
    if (n < 1 || n > 4) {
        throw DimensionError("min_rank_program: matrix side must be in [1, 4]");
    }
    if (b.size() != static_cast<Eigen::Index>(A_list.size())) {
        throw DimensionError("min_rank_program: A_list and b sizes disagree");
    }
    for (const auto &Aj : A_list) {
        if (Aj.rows() != n || Aj.cols() != n) {
            throw DimensionError("min_rank_program: constraint matrices must be square "
                                 "and of equal size");
        }
        if ((Aj - Aj.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            throw DimensionError("min_rank_program: constraint matrices must be symmetric");
        }
    }

    const int ne = sym_entry_count(n);
    const int nt = 2 * n + ne; // (u, X upper row-major, v)
    const auto u_idx = [&](int i) { return i; };
    const auto x_idx = [&](int i, int j) { return n + sym_entry_index(n, i, j); };
    const auto v_idx = [&](int i) { return n + ne + i; };

    std::vector<std::string> vars;
    for (int i = 0; i < n; ++i) {
        vars.push_back(numbered("u", i));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            vars.push_back("X" + std::to_string(i + 1) + std::to_string(j + 1));
        }
    }
    for (int i = 0; i < n; ++i) {
        vars.push_back(numbered("v", i));
    }

    Polynomial obj(nt);
    for (int i = 0; i < n; ++i) {
        obj = obj + Polynomial::variable(nt, v_idx(i));
    }

    std::vector<int> xmap(ne);
    for (int k = 0; k < ne; ++k) {
        xmap[k] = n + k;
    }

    std::vector<Polynomial> eqs;
    std::vector<std::string> eq_names;
    for (int k = 1; k <= n; ++k) {
        const Polynomial sig = sigma_k<double>(n, k).embed(nt, xmap);
        const Polynomial vk = Polynomial::variable(nt, v_idx(k - 1));
        eqs.push_back(vk * sig - sig); // (v_k - 1) sigma_k(X) = 0
        eq_names.push_back(numbered("sigma", k - 1));
    }
    for (size_t j = 0; j < A_list.size(); ++j) {
        Polynomial tr = Polynomial::constant(nt, -b(static_cast<Eigen::Index>(j)));
        for (int a = 0; a < n; ++a) {
            for (int c = a; c < n; ++c) {
                const double w = (a == c ? 1.0 : 2.0) * A_list[j](a, c);
                if (w != 0.0) {
                    tr = tr + Polynomial::variable(nt, x_idx(a, c)) * w;
                }
            }
        }
        eqs.push_back(std::move(tr));
        eq_names.push_back(numbered("trace", static_cast<int>(j)));
    }

    std::vector<Polynomial> ineqs;
    std::vector<std::string> ineq_names;
    for (int i = 0; i < n; ++i) {
        ineqs.push_back(Polynomial::variable(nt, v_idx(i)));
        ineq_names.push_back(numbered("vpos", i));
    }
    Polynomial quad(nt); // u' X u >= 0
    for (int a = 0; a < n; ++a) {
        for (int c = a; c < n; ++c) {
            const double w = a == c ? 1.0 : 2.0;
            quad = quad + Polynomial::variable(nt, u_idx(a)) *
                              Polynomial::variable(nt, u_idx(c)) *
                              Polynomial::variable(nt, x_idx(a, c)) * w;
        }
    }
    ineqs.push_back(std::move(quad));
    ineq_names.push_back("uXu");

    // Ball uses the Frobenius norm of X, so off-diagonal entries count twice.
    Polynomial ball = Polynomial::constant(nt, alpha);
    for (int i = 0; i < n; ++i) {
        const Polynomial ui = Polynomial::variable(nt, u_idx(i));
        const Polynomial vi = Polynomial::variable(nt, v_idx(i));
        ball = ball - ui * ui - vi * vi;
    }
    for (int a = 0; a < n; ++a) {
        for (int c = a; c < n; ++c) {
            const Polynomial e = Polynomial::variable(nt, x_idx(a, c));
            ball = ball - e * e * (a == c ? 1.0 : 2.0);
        }
    }

    SemialgebraicProgram sap = SemialgebraicProgram::create(
        std::move(vars), std::move(obj), std::move(ineqs), std::move(ineq_names),
        std::move(eqs), std::move(eq_names), alpha, std::move(ball));
    sap.min_order = (n + 2) / 2; // ceil((n + 1) / 2)
    return sap;
}

MomentVector RelaxationSdp::moment_vector(const SdpSolution &sol) const {
    if (sol.dual_multipliers.size() != y_dim) {
        throw DimensionError("RelaxationSdp::moment_vector: solution shape mismatch");
    }
    MomentVector y;
    y.n = n;
    y.order = 2 * order;
    y.values = sol.dual_multipliers;
    return y;
}

RelaxationSdp build_moment_relaxation(const SemialgebraicProgram &sap, int N) {
    const int n = sap.num_vars();
    if (N < 1) {
        throw DegreeOverflowError("build_moment_relaxation: order must be >= 1");
    }
    if (N < sap.min_order) {
        throw DegreeOverflowError(
            "build_moment_relaxation: order " + std::to_string(N) +
            " below the program's minimum order " + std::to_string(sap.min_order));
    }
    if (sap.objective.degree() > 2 * N) {
        throw DegreeOverflowError(
            "build_moment_relaxation: objective degree exceeds 2N");
    }

    RelaxationSdp rel;
    rel.order = N;
    rel.n = n;
    rel.variables = sap.variables;
    rel.objective = sap.objective;
    rel.program_inequalities = sap.inequalities;
    rel.program_equalities = sap.equalities;

    const MonomialBasis big = basis(n, 2 * N);
    const int m = big.size();
    rel.y_dim = m;

    // One equality row per moment y_alpha; rhs carries the negated objective
    // coefficient so the dual multipliers are exactly the moment vector and
    // the dual (a maximization) computes -min L_y(objective).
    std::vector<EqualityConstraint> rows(m);
    for (const auto &[mono, coef] : sap.objective.terms()) {
        rows[big.index_of(mono)].rhs -= coef;
    }

    SdpProblem &sdp = rel.sdp;
    auto add_layout_block = [&](const MatrixLayout &layout, const std::string &tag) {
        const int blk = sdp.add_block(layout.side(), BlockKind::Psd, tag);
        rel.block_tags.push_back(tag);
        for (int i = 0; i < layout.side(); ++i) {
            for (int j = i; j < layout.side(); ++j) {
                for (const auto &t : layout.entry(i, j)) {
                    const double v = (i == j ? 1.0 : 2.0) * t.coef;
                    rows[t.moment_index].lhs.add_mat(blk, i, j, -v);
                }
            }
        }
        return blk;
    };

    add_layout_block(moment_layout(n, N), "moment");
    rel.moment_info = {"moment", Polynomial::constant(n, 1.0), N};

    for (size_t k = 0; k < sap.inequalities.size(); ++k) {
        const Polynomial &g = sap.inequalities[k];
        const std::string &name = sap.inequality_names[k];
        const int d = N - ceil_half(g.degree());
        if (d < 0) {
            throw DegreeOverflowError("build_moment_relaxation: order " +
                                      std::to_string(N) +
                                      " too small for inequality '" + name + "'");
        }
        add_layout_block(localizing_layout(g, n, d), name);
        rel.localizing.push_back({name, g, d});
    }

    // Equalities: every entry of the localizing layout must vanish. Each
    // distinct linear form on y becomes one free scalar variable (the
    // unrestricted multiplier of that scalar equation).
    // The scalar equation E.y = d_w is enforced through the dual constraint
    // of its multiplier w; d_w only shows up as the objective coefficient -d_w.
    std::map<std::vector<std::pair<int, double>>, int> seen;
    auto add_scalar_equation = [&](const std::vector<std::pair<int, double>> &row,
                                   double obj_coef) {
        if (obj_coef == 0.0 && seen.count(row) > 0) {
            return; // duplicate homogeneous equation
        }
        const int w = sdp.add_free_vars(1);
        seen.emplace(row, w);
        for (const auto &[idx, c] : row) {
            rows[idx].lhs.add_free(w, -c);
        }
        if (obj_coef != 0.0) {
            sdp.objective.add_free(w, obj_coef);
        }
    };

    for (size_t k = 0; k < sap.equalities.size(); ++k) {
        const Polynomial &h = sap.equalities[k];
        const std::string &name = sap.equality_names[k];
        const int d = N - ceil_half(h.degree());
        if (d < 0) {
            throw DegreeOverflowError("build_moment_relaxation: order " +
                                      std::to_string(N) +
                                      " too small for equality '" + name + "'");
        }
        const MatrixLayout layout = localizing_layout(h, n, d);
        for (int i = 0; i < layout.side(); ++i) {
            for (int j = i; j < layout.side(); ++j) {
                std::map<int, double> acc;
                for (const auto &t : layout.entry(i, j)) {
                    acc[t.moment_index] += t.coef;
                }
                std::vector<std::pair<int, double>> row(acc.begin(), acc.end());
                if (!row.empty()) {
                    add_scalar_equation(row, 0.0);
                }
            }
        }
    }

    // y_0 = 1: multiplier enters the primal objective with coefficient -1.
    add_scalar_equation({{0, 1.0}}, -1.0);

    for (auto &row : rows) {
        sdp.add_equality(std::move(row.lhs), row.rhs);
    }
    sdp.validate();
    return rel;
}

namespace {

/// Append the coefficient-matching rows of a Putinar identity
///   target_const + sum_f coef_f * w_f = q_0 + sum_k g_k q_k + sum_j h_j l_j
/// over basis(nvars, 2N) to `sdp`, creating the Gram blocks and multiplier
/// variables. Returns the ids of the Gram blocks (q_0 first).
std::vector<int> add_putinar_identity(
    SdpProblem &sdp, std::vector<std::string> *block_tags, int nvars, int N,
    const std::vector<Polynomial> &ineqs,
    const std::vector<std::string> &ineq_names,
    const std::vector<Polynomial> &eqs, const std::vector<std::string> &eq_names,
    const Polynomial &target_const,
    const std::vector<std::pair<int, Polynomial>> &target_linear,
    const std::string &prefix) {
    const MonomialBasis big = basis(nvars, 2 * N);
    const int m = big.size();
    if (target_const.degree() > 2 * N) {
        throw DegreeOverflowError(prefix + ": target degree exceeds 2N");
    }

    std::vector<EqualityConstraint> rows(m);
    for (const auto &[mono, coef] : target_const.terms()) {
        rows[big.index_of(mono)].rhs += coef;
    }
    for (const auto &[f, poly] : target_linear) {
        if (poly.degree() > 2 * N) {
            throw DegreeOverflowError(prefix + ": target degree exceeds 2N");
        }
        for (const auto &[mono, coef] : poly.terms()) {
            rows[big.index_of(mono)].lhs.add_free(f, -coef);
        }
    }

    std::vector<int> gram_blocks;
    auto add_gram = [&](const Polynomial *g, int d, const std::string &tag) {
        const MonomialBasis bd = basis(nvars, d);
        const int blk = sdp.add_block(bd.size(), BlockKind::Psd, tag);
        if (block_tags) {
            block_tags->push_back(tag);
        }
        gram_blocks.push_back(blk);
        for (int i = 0; i < bd.size(); ++i) {
            for (int j = i; j < bd.size(); ++j) {
                const Monomial prod = bd[i] * bd[j];
                const double sym = i == j ? 1.0 : 2.0;
                if (g == nullptr) {
                    rows[big.index_of(prod)].lhs.add_mat(blk, i, j, sym);
                } else {
                    for (const auto &[gm, gc] : g->terms()) {
                        rows[big.index_of(prod * gm)].lhs.add_mat(blk, i, j,
                                                                  sym * gc);
                    }
                }
            }
        }
    };

    add_gram(nullptr, N, prefix + ":q0");
    for (size_t k = 0; k < ineqs.size(); ++k) {
        const int d = N - ceil_half(ineqs[k].degree());
        if (d < 0) {
            throw DegreeOverflowError(prefix + ": order " + std::to_string(N) +
                                      " too small for inequality '" +
                                      ineq_names[k] + "'");
        }
        add_gram(&ineqs[k], d, prefix + ":" + ineq_names[k]);
    }

    for (size_t k = 0; k < eqs.size(); ++k) {
        const int d = 2 * N - eqs[k].degree();
        if (d < 0) {
            throw DegreeOverflowError(prefix + ": order " + std::to_string(N) +
                                      " too small for equality '" + eq_names[k] +
                                      "'");
        }
        const MonomialBasis bd = basis(nvars, d);
        const int first = sdp.add_free_vars(bd.size());
        for (int t = 0; t < bd.size(); ++t) {
            for (const auto &[hm, hc] : eqs[k].terms()) {
                rows[big.index_of(bd[t] * hm)].lhs.add_free(first + t, hc);
            }
        }
    }

    for (auto &row : rows) {
        sdp.add_equality(std::move(row.lhs), row.rhs);
    }
    return gram_blocks;
}

} // namespace

SosDualProgram build_sos_dual(const SemialgebraicProgram &sap, int N) {
    const int n = sap.num_vars();
    if (N < sap.min_order) {
        throw DegreeOverflowError("build_sos_dual: order " + std::to_string(N) +
                                  " below the program's minimum order " +
                                  std::to_string(sap.min_order));
    }

    SosDualProgram sd;
    sd.order = N;
    sd.t_index = sd.sdp.add_free_vars(1);
    // objective - t = q_0 + sum g_k q_k + sum h_j lambda_j; maximize t.
    sd.gram_blocks = add_putinar_identity(
        sd.sdp, &sd.block_tags, n, N, sap.inequalities, sap.inequality_names,
        sap.equalities, sap.equality_names, sap.objective,
        {{sd.t_index, Polynomial::constant(n, -1.0)}}, "sos");
    sd.sdp.objective.add_free(sd.t_index, -1.0);
    sd.sdp.validate();
    return sd;
}

double box_monomial_integral(const Monomial &mono) {
    double v = 1.0;
    for (int e : mono.exponents) {
        v /= static_cast<double>(e + 1);
    }
    return v;
}

Polynomial EnvelopeProgram::fitted(const SdpSolution &sol) const {
    Polynomial p(n);
    for (size_t k = 0; k < p_monomials.size(); ++k) {
        p.add_term(p_monomials[k], sol.free_values(p_indices[k]));
    }
    return p;
}

EnvelopeProgram envelope_program(const Eigen::MatrixXd &A,
                                 const Eigen::VectorXd &b, int d, int N,
                                 const EnvelopeOptions &opts) {
    const int n = static_cast<int>(A.cols());
    if (n < 1) {
        throw DimensionError("envelope_program: A must have at least one column");
    }
    if (b.size() != A.rows()) {
        throw DimensionError("envelope_program: A and b sizes disagree");
    }
    if (d < 1) {
        throw DimensionError("envelope_program: polynomial degree must be >= 1");
    }
    const double alpha = opts.alpha > 0.0 ? opts.alpha : 2.0 * n + 1.0;
    if (!(alpha > 1.0)) {
        throw DimensionError("envelope_program: ball radius must exceed 1");
    }

    EnvelopeProgram env;
    env.degree = d;
    env.order = N;
    env.n = n;
    SdpProblem &sdp = env.sdp;

    const MonomialBasis pb = basis(n, d);
    const int p_first = sdp.add_free_vars(pb.size());
    for (int k = 0; k < pb.size(); ++k) {
        env.p_monomials.push_back(pb[k]);
        env.p_indices.push_back(p_first + k);
        // Maximize the box integral of p.
        sdp.objective.add_free(p_first + k, -box_monomial_integral(pb[k]));
    }

    const int nt = 2 * n;

    // --- System 1: sum v_i - p(x) >= 0 on the lifted MinCard set K. ---
    {
        std::vector<int> xmap(n);
        for (int i = 0; i < n; ++i) {
            xmap[i] = i;
        }
        std::vector<Polynomial> ineqs;
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) {
            ineqs.push_back(Polynomial::variable(nt, i));
            names.push_back(numbered("xpos", i));
        }
        for (int i = 0; i < n; ++i) {
            ineqs.push_back(Polynomial::variable(nt, n + i));
            names.push_back(numbered("vpos", i));
        }
        if (opts.unit_box) {
            for (int i = 0; i < n; ++i) {
                ineqs.push_back(Polynomial::constant(nt, 1.0) -
                                Polynomial::variable(nt, i));
                names.push_back(numbered("xbox", i));
            }
        }
        if (opts.include_A) {
            for (Eigen::Index j = 0; j < A.rows(); ++j) {
                Polynomial row = Polynomial::constant(nt, -b(j));
                for (int i = 0; i < n; ++i) {
                    if (A(j, i) != 0.0) {
                        row = row + Polynomial::variable(nt, i) * A(j, i);
                    }
                }
                ineqs.push_back(std::move(row));
                names.push_back(numbered("row", static_cast<int>(j)));
            }
        }
        Polynomial ball = Polynomial::constant(nt, alpha);
        for (int i = 0; i < nt; ++i) {
            const Polynomial z = Polynomial::variable(nt, i);
            ball = ball - z * z;
        }
        ineqs.push_back(std::move(ball));
        names.push_back("ball");

        std::vector<Polynomial> eqs;
        std::vector<std::string> eq_names;
        for (int i = 0; i < n; ++i) {
            const Polynomial xi = Polynomial::variable(nt, i);
            const Polynomial vi = Polynomial::variable(nt, n + i);
            eqs.push_back(vi * xi - xi);
            eq_names.push_back(numbered("comp", i));
        }

        Polynomial card(nt);
        for (int i = 0; i < n; ++i) {
            card = card + Polynomial::variable(nt, n + i);
        }
        auto minus_p_terms = [&]() {
            std::vector<std::pair<int, Polynomial>> linear;
            for (int k = 0; k < pb.size(); ++k) {
                Polynomial lifted(nt);
                std::vector<int> e(nt, 0);
                for (int i = 0; i < n; ++i) {
                    e[i] = pb[k].exponents[i];
                }
                lifted.add_term(Monomial(std::move(e)), -1.0);
                linear.emplace_back(p_first + k, std::move(lifted));
            }
            return linear;
        };
        add_putinar_identity(sdp, nullptr, nt, N, ineqs, names, eqs, eq_names,
                             card, minus_p_terms(), "K");

        if (opts.card_upper_bound) {
            add_putinar_identity(sdp, nullptr, nt, N, ineqs, names, eqs,
                                 eq_names,
                                 Polynomial::constant(nt, *opts.card_upper_bound),
                                 minus_p_terms(), "UB");
        }
    }

    // --- System 2: z' Hess(p)(x) z >= 0 on box x sphere. ---
    {
        std::vector<Polynomial> ineqs;
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) {
            ineqs.push_back(Polynomial::variable(nt, i));
            names.push_back(numbered("xpos", i));
            ineqs.push_back(Polynomial::constant(nt, 1.0) -
                            Polynomial::variable(nt, i));
            names.push_back(numbered("xbox", i));
        }
        Polynomial zsq(nt);
        for (int i = 0; i < n; ++i) {
            const Polynomial zi = Polynomial::variable(nt, n + i);
            zsq = zsq + zi * zi;
        }
        // The sphere ||z||^2 = 1 gets a free polynomial multiplier. Encoding
        // it as a +/- inequality pair forces the paired localizing slacks to
        // be singular at every dual-feasible point, so the interior-point
        // method has no central path to follow.
        std::vector<Polynomial> eqs;
        std::vector<std::string> eq_names;
        eqs.push_back(Polynomial::constant(nt, 1.0) - zsq);
        eq_names.push_back("sphere");

        std::vector<std::pair<int, Polynomial>> linear;
        for (int k = 0; k < pb.size(); ++k) {
            const Monomial &mono = pb[k];
            Polynomial hess(nt); // z' Hess(x^mono) z in variables (x, z)
            for (int a = 0; a < n; ++a) {
                for (int c = a; c < n; ++c) {
                    double coef;
                    std::vector<int> e(nt, 0);
                    for (int i = 0; i < n; ++i) {
                        e[i] = mono.exponents[i];
                    }
                    if (a == c) {
                        coef = static_cast<double>(mono.exponents[a]) *
                               (mono.exponents[a] - 1);
                        e[a] -= 2;
                    } else {
                        coef = 2.0 * mono.exponents[a] * mono.exponents[c];
                        e[a] -= 1;
                        e[c] -= 1;
                    }
                    if (coef == 0.0) {
                        continue;
                    }
                    e[n + a] += 1;
                    e[n + c] += 1;
                    hess.add_term(Monomial(std::move(e)), coef);
                }
            }
            if (!hess.is_zero()) {
                linear.emplace_back(p_first + k, std::move(hess));
            }
        }
        add_putinar_identity(sdp, nullptr, nt, N, ineqs, names, eqs, eq_names,
                             Polynomial(nt), linear, "H");
    }

    sdp.validate();
    return env;
}

} // namespace momentsos
