#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <momentsos/certify.hpp>
#include <momentsos/json_io.hpp>
#include <momentsos/oracle.hpp>
#include <momentsos/relaxation.hpp>
#include <momentsos/sdpa.hpp>

namespace ms = momentsos;
using ms::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInfeasible = 4;

struct Options {
    std::string command;
    std::string input;
    std::string out;
    std::string order_spec = "2";
    double alpha = 0.0;
    double tol = 0.0;
    int max_iter = 0;
    int degree = 0;
    int drop_constraint = -1;
};

std::vector<int> parse_orders(const std::string &spec) {
    const auto dots = spec.find("..");
    auto to_int = [](const std::string &s) {
        size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (const std::exception &) {
            throw ms::ParseError("bad order '" + s + "'");
        }
        if (pos != s.size() || v < 1) {
            throw ms::ParseError("bad order '" + s + "'");
        }
        return v;
    };
    std::vector<int> orders;
    if (dots == std::string::npos) {
        orders.push_back(to_int(spec));
    } else {
        const int lo = to_int(spec.substr(0, dots));
        const int hi = to_int(spec.substr(dots + 2));
        if (hi < lo) {
            throw ms::ParseError("empty order range '" + spec + "'");
        }
        for (int N = lo; N <= hi; ++N) {
            orders.push_back(N);
        }
    }
    return orders;
}

ms::ProblemInput load_input(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ms::ParseError("cannot open input file '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ms::ParseError(std::string("invalid JSON: ") + e.what());
    }
    return ms::problem_from_json(j);
}

ms::SolverConfig solver_config(const Options &opt) {
    ms::SolverConfig cfg;
    if (opt.tol > 0.0) {
        cfg.gap_tol = opt.tol;
        cfg.feas_tol = opt.tol;
    }
    if (opt.max_iter > 0) {
        cfg.max_iter = opt.max_iter;
    }
    return cfg;
}

/// Default ball radius 2*(1 + ||feasible point||^2) from the convex
/// heuristic, per the alpha policy; throws if no heuristic point exists.
double pick_alpha(const ms::ProblemInput &p) {
    if (p.alpha > 0.0) {
        return p.alpha;
    }
    if (p.type == "minrank") {
        ms::NuclearResult nr = ms::nuclear_heuristic(p.A_list, p.b);
        const int n = static_cast<int>(nr.X.rows());
        const double norm2 = nr.X.squaredNorm() + 2.0 * n; // + v and u room
        return 2.0 * (1.0 + norm2);
    }
    ms::HeuristicResult hr = ms::l1_heuristic(p.A, p.b);
    double norm2 = 0.0;
    for (double x : hr.point) {
        norm2 += x * x;
        if (std::abs(x) > 1e-9) {
            norm2 += 1.0; // matching v_i = 1
        }
    }
    return 2.0 * (1.0 + norm2);
}

ms::SemialgebraicProgram build_program(const ms::ProblemInput &p, double alpha,
                                       int drop_constraint) {
    ms::SemialgebraicProgram sap;
    if (p.type == "mincard") {
        sap = ms::min_card_program(p.A, p.b, alpha);
    } else if (p.type == "minrank") {
        sap = ms::min_rank_program(p.A_list, p.b, alpha);
    } else {
        throw ms::ParseError("command does not accept problem type '" + p.type +
                             "'");
    }
    if (drop_constraint >= 0) {
        if (drop_constraint >= static_cast<int>(sap.inequalities.size())) {
            throw ms::ParseError("--drop-constraint index out of range");
        }
        sap.inequalities.erase(sap.inequalities.begin() + drop_constraint);
        sap.inequality_names.erase(sap.inequality_names.begin() +
                                   drop_constraint);
    }
    return sap;
}

void write_report(const json &report, const std::string &out) {
    if (out.empty()) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) {
        throw ms::Error("cannot open output file '" + out + "'");
    }
    f << report.dump(2) << "\n";
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int run_relax(const Options &opt, bool certify_mode) {
    const ms::ProblemInput input = load_input(opt.input);
    std::vector<int> orders = parse_orders(opt.order_spec);
    if (certify_mode) {
        // certify runs N and N+1 and applies the stabilization check.
        orders = {orders.front(), orders.front() + 1};
    }
    ms::ProblemInput p = input;
    if (opt.alpha > 0.0) {
        p.alpha = opt.alpha;
    }
    const double alpha = pick_alpha(p);
    const ms::SemialgebraicProgram sap =
        build_program(p, alpha, opt.drop_constraint);
    const ms::SolverConfig cfg = solver_config(opt);

    json results = json::array();
    std::vector<ms::RelaxationResult> analyzed;
    bool solver_trouble = false;
    for (int N : orders) {
        const ms::RelaxationSdp rel = ms::build_moment_relaxation(sap, N);
        const ms::SdpSolution sol = ms::solve(rel.sdp, cfg);
        ms::RelaxationResult res = ms::analyze_relaxation(rel, sol);
        if (sol.status != ms::SolveStatus::Optimal) {
            solver_trouble = true;
        }
        analyzed.push_back(res);
        results.push_back(ms::relaxation_result_to_json(res));
    }

    json report;
    report["timestamp"] = timestamp();
    report["problem"] = ms::problem_to_json(input);
    report["alpha"] = alpha;

    if (certify_mode) {
        bool certified = false;
        if (analyzed.size() == 2) {
            certified = ms::stabilization_check(analyzed[0], analyzed[1]);
            analyzed[1].certified = certified;
            results[1] = ms::relaxation_result_to_json(analyzed[1]);
        }
        report["results"] = std::move(results);
        report["certified"] = certified;
        report["bound"] = analyzed.back().lower_bound;
        report["rounded_bound"] = ms::rounded_bound(analyzed.back().lower_bound);
    } else {
        report["results"] = std::move(results);
    }
    write_report(report, opt.out);
    return solver_trouble ? kExitSolver : kExitOk;
}

int run_bruteforce(const Options &opt) {
    const ms::ProblemInput p = load_input(opt.input);
    if (p.type != "mincard") {
        throw ms::ParseError("bruteforce requires a mincard problem");
    }
    const ms::OracleReport rep = ms::brute_force_card(p.A, p.b);
    json report;
    report["timestamp"] = timestamp();
    report["problem"] = ms::problem_to_json(p);
    report["report"] = ms::oracle_report_to_json(rep);
    write_report(report, opt.out);
    return kExitOk;
}

int run_heuristic(const Options &opt) {
    const ms::ProblemInput p = load_input(opt.input);
    json report;
    report["timestamp"] = timestamp();
    report["problem"] = ms::problem_to_json(p);
    if (p.type == "mincard") {
        const ms::HeuristicResult hr = ms::l1_heuristic(p.A, p.b);
        report["method"] = "l1";
        report["value"] = hr.value;
        report["point"] = hr.point;
    } else if (p.type == "minrank") {
        const ms::NuclearResult nr = ms::nuclear_heuristic(p.A_list, p.b);
        report["method"] = "nuclear";
        report["value"] = nr.value;
        json X = json::array();
        for (Eigen::Index r = 0; r < nr.X.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < nr.X.cols(); ++c) {
                row.push_back(nr.X(r, c));
            }
            X.push_back(std::move(row));
        }
        report["X"] = std::move(X);
    } else {
        throw ms::ParseError("heuristic requires a mincard or minrank problem");
    }
    write_report(report, opt.out);
    return kExitOk;
}

int run_envelope(const Options &opt) {
    const ms::ProblemInput p = load_input(opt.input);
    if (p.type != "envelope") {
        throw ms::ParseError("envelope requires an envelope problem");
    }
    const int d = opt.degree > 0 ? opt.degree : p.degree;
    const int N = parse_orders(opt.order_spec).front();
    ms::EnvelopeOptions eopts;
    if (opt.alpha > 0.0) {
        eopts.alpha = opt.alpha;
    } else if (p.alpha > 0.0) {
        eopts.alpha = p.alpha;
    }
    const ms::EnvelopeProgram env = ms::envelope_program(p.A, p.b, d, N, eopts);
    const ms::SdpSolution sol = ms::solve(env.sdp, solver_config(opt));
    const ms::Polynomial fitted = env.fitted(sol);

    const int n = env.n;
    std::vector<std::string> vars;
    for (int i = 0; i < n; ++i) {
        vars.push_back("x" + std::to_string(i + 1));
    }

    // Validation sample: the 2^n binary corners of the unit box; feasible
    // corners must be underestimated by p.
    json samples = json::array();
    bool under = true;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<double> x(n);
        int card = 0;
        for (int i = 0; i < n; ++i) {
            x[i] = (mask >> i) & 1 ? 1.0 : 0.0;
            card += (mask >> i) & 1;
        }
        bool feasible = true;
        for (Eigen::Index r = 0; r < p.A.rows(); ++r) {
            double ax = 0.0;
            for (int i = 0; i < n; ++i) {
                ax += p.A(r, i) * x[i];
            }
            if (ax < p.b(r) - 1e-9) {
                feasible = false;
            }
        }
        const double pv = fitted.eval(x);
        if (feasible && pv > card + 1e-6) {
            under = false;
        }
        samples.push_back({{"x", x},
                           {"card", card},
                           {"feasible", feasible},
                           {"p", pv}});
    }

    json report;
    report["timestamp"] = timestamp();
    report["problem"] = ms::problem_to_json(p);
    report["order"] = N;
    report["degree"] = d;
    report["status"] = ms::to_string(sol.status);
    report["objective"] = -sol.primal_obj; // box integral of p
    report["p"] = ms::polynomial_to_json(fitted, vars);
    report["samples"] = std::move(samples);
    report["underestimates_samples"] = under;
    write_report(report, opt.out);
    return sol.status == ms::SolveStatus::Optimal ? kExitOk : kExitSolver;
}

int run_export(const Options &opt) {
    const ms::ProblemInput p = load_input(opt.input);
    ms::ProblemInput q = p;
    if (opt.alpha > 0.0) {
        q.alpha = opt.alpha;
    }
    const double alpha = pick_alpha(q);
    const ms::SemialgebraicProgram sap =
        build_program(q, alpha, opt.drop_constraint);
    const int N = parse_orders(opt.order_spec).front();
    const ms::RelaxationSdp rel = ms::build_moment_relaxation(sap, N);
    const std::string text = ms::export_sdpa(ms::split_free_variables(rel.sdp));
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(opt.out);
        if (!f) {
            throw ms::Error("cannot open output file '" + opt.out + "'");
        }
        f << text;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Lasserre moment relaxations for MinCard / MinRank"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App *cmd, bool with_order) {
        cmd->add_option("input", opt.input, "problem JSON file")->required();
        cmd->add_option("--out", opt.out, "report output path (default stdout)");
        if (with_order) {
            cmd->add_option("--order", opt.order_spec,
                            "relaxation order N or range lo..hi");
            cmd->add_option("--alpha", opt.alpha, "ball radius override");
            cmd->add_option("--tol", opt.tol, "solver tolerance");
            cmd->add_option("--max-iter", opt.max_iter, "solver iteration cap");
        }
    };

    CLI::App *relax = app.add_subcommand("relax", "solve moment relaxations");
    add_common(relax, true);
    relax->add_option("--drop-constraint", opt.drop_constraint,
                      "drop the k-th inequality's localizing block (0-based)");
    CLI::App *certify =
        app.add_subcommand("certify", "solve orders N, N+1 and check flatness");
    add_common(certify, true);
    certify->add_option("--drop-constraint", opt.drop_constraint,
                        "drop the k-th inequality's localizing block (0-based)");
    CLI::App *bf = app.add_subcommand("bruteforce", "exact MinCard by enumeration");
    add_common(bf, false);
    CLI::App *heur = app.add_subcommand("heuristic", "l1 / nuclear-norm heuristic");
    add_common(heur, false);
    CLI::App *env = app.add_subcommand("envelope", "fit an envelope polynomial");
    add_common(env, true);
    env->add_option("--degree", opt.degree, "envelope polynomial degree");
    CLI::App *exp = app.add_subcommand("export-sdpa", "write SDPA sparse format");
    add_common(exp, true);
    exp->add_option("--drop-constraint", opt.drop_constraint,
                    "drop the k-th inequality's localizing block (0-based)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (relax->parsed()) {
            return run_relax(opt, false);
        }
        if (certify->parsed()) {
            return run_relax(opt, true);
        }
        if (bf->parsed()) {
            return run_bruteforce(opt);
        }
        if (heur->parsed()) {
            return run_heuristic(opt);
        }
        if (env->parsed()) {
            return run_envelope(opt);
        }
        if (exp->parsed()) {
            return run_export(opt);
        }
    } catch (const ms::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ms::InfeasibleError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ms::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitParse;
}
