#include "momentsos/json_io.hpp"

namespace momentsos {

namespace {

Eigen::MatrixXd matrix_from_json(const json &j, const char *what) {
    if (!j.is_array() || j.empty()) {
        throw ParseError(std::string("expected a non-empty matrix for ") + what);
    }
    const size_t rows = j.size();
    size_t cols = 0;
    Eigen::MatrixXd M;
    for (size_t r = 0; r < rows; ++r) {
        const json &row = j[r];
        if (!row.is_array()) {
            throw ParseError(std::string("expected a row array in ") + what);
        }
        if (r == 0) {
            cols = row.size();
            if (cols == 0) {
                throw ParseError(std::string("empty row in ") + what);
            }
            M.resize(static_cast<Eigen::Index>(rows),
                     static_cast<Eigen::Index>(cols));
        } else if (row.size() != cols) {
            throw ParseError(std::string("ragged rows in ") + what);
        }
        for (size_t c = 0; c < cols; ++c) {
            if (!row[c].is_number()) {
                throw ParseError(std::string("non-numeric entry in ") + what);
            }
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                row[c].get<double>();
        }
    }
    return M;
}

Eigen::VectorXd vector_from_json(const json &j, const char *what) {
    if (!j.is_array()) {
        throw ParseError(std::string("expected an array for ") + what);
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw ParseError(std::string("non-numeric entry in ") + what);
        }
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

json matrix_to_json(const Eigen::MatrixXd &M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) {
            row.push_back(M(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

} // namespace

json polynomial_to_json(const Polynomial &p,
                        const std::vector<std::string> &vars) {
    if (static_cast<int>(vars.size()) != p.num_vars()) {
        throw DimensionError("polynomial_to_json: variable name count mismatch");
    }
    json terms = json::array();
    for (const auto &[mono, coef] : p.terms()) {
        terms.push_back({{"exp", mono.exponents}, {"coef", coef}});
    }
    return {{"vars", vars}, {"terms", std::move(terms)}};
}

NamedPolynomial polynomial_from_json(const json &j) {
    if (!j.is_object() || !j.contains("vars") || !j.contains("terms")) {
        throw ParseError("polynomial JSON needs 'vars' and 'terms'");
    }
    NamedPolynomial out;
    if (!j["vars"].is_array() || j["vars"].empty()) {
        throw ParseError("polynomial 'vars' must be a non-empty array");
    }
    for (const auto &v : j["vars"]) {
        if (!v.is_string()) {
            throw ParseError("polynomial variable names must be strings");
        }
        out.vars.push_back(v.get<std::string>());
    }
    const int n = static_cast<int>(out.vars.size());
    out.poly = Polynomial(n);
    if (!j["terms"].is_array()) {
        throw ParseError("polynomial 'terms' must be an array");
    }
    for (const auto &t : j["terms"]) {
        if (!t.is_object() || !t.contains("exp") || !t.contains("coef") ||
            !t["exp"].is_array() || !t["coef"].is_number()) {
            throw ParseError("polynomial term needs 'exp' array and 'coef'");
        }
        if (static_cast<int>(t["exp"].size()) != n) {
            throw ParseError("polynomial term exponent length mismatch");
        }
        std::vector<int> e;
        for (const auto &x : t["exp"]) {
            if (!x.is_number_integer() || x.get<int>() < 0) {
                throw ParseError("polynomial exponents must be nonnegative integers");
            }
            e.push_back(x.get<int>());
        }
        out.poly.add_term(Monomial(std::move(e)), t["coef"].get<double>());
    }
    return out;
}

json moment_vector_to_json(const MomentVector &y) {
    return {{"n", y.n}, {"order", y.order}, {"values", vector_to_json(y.values)}};
}

MomentVector moment_vector_from_json(const json &j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("order") ||
        !j.contains("values")) {
        throw ParseError("moment vector JSON needs 'n', 'order', 'values'");
    }
    MomentVector y;
    if (!j["n"].is_number_integer() || !j["order"].is_number_integer()) {
        throw ParseError("moment vector 'n' and 'order' must be integers");
    }
    y.n = j["n"].get<int>();
    y.order = j["order"].get<int>();
    y.values = vector_from_json(j["values"], "moment values");
    if (y.n < 1 || y.order < 0 ||
        y.values.size() != basis_size(y.n, y.order)) {
        throw ParseError("moment vector length does not match (n, order)");
    }
    return y;
}

ProblemInput problem_from_json(const json &j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ParseError("problem JSON needs a string 'type'");
    }
    ProblemInput p;
    p.type = j["type"].get<std::string>();
    if (p.type == "mincard" || p.type == "envelope") {
        if (!j.contains("A") || !j.contains("b")) {
            throw ParseError("problem needs 'A' and 'b'");
        }
        p.A = matrix_from_json(j["A"], "A");
        p.b = vector_from_json(j["b"], "b");
        if (p.b.size() != p.A.rows()) {
            throw ParseError("'A' and 'b' sizes disagree");
        }
        if (p.type == "envelope") {
            if (!j.contains("degree") || !j["degree"].is_number_integer()) {
                throw ParseError("envelope problem needs an integer 'degree'");
            }
            p.degree = j["degree"].get<int>();
            if (p.degree < 1) {
                throw ParseError("envelope degree must be >= 1");
            }
        }
    } else if (p.type == "minrank") {
        if (!j.contains("A_list") || !j["A_list"].is_array() ||
            j["A_list"].empty() || !j.contains("b")) {
            throw ParseError("minrank problem needs 'A_list' and 'b'");
        }
        for (const auto &Aj : j["A_list"]) {
            p.A_list.push_back(matrix_from_json(Aj, "A_list entry"));
        }
        p.b = vector_from_json(j["b"], "b");
        if (p.b.size() != static_cast<Eigen::Index>(p.A_list.size())) {
            throw ParseError("'A_list' and 'b' sizes disagree");
        }
    } else {
        throw ParseError("unknown problem type '" + p.type + "'");
    }
    if (j.contains("alpha")) {
        if (!j["alpha"].is_number()) {
            throw ParseError("'alpha' must be a number");
        }
        p.alpha = j["alpha"].get<double>();
    }
    return p;
}

json problem_to_json(const ProblemInput &p) {
    json j;
    j["type"] = p.type;
    if (p.type == "minrank") {
        json list = json::array();
        for (const auto &Aj : p.A_list) {
            list.push_back(matrix_to_json(Aj));
        }
        j["A_list"] = std::move(list);
    } else {
        j["A"] = matrix_to_json(p.A);
    }
    j["b"] = vector_to_json(p.b);
    if (p.alpha > 0.0) {
        j["alpha"] = p.alpha;
    }
    if (p.type == "envelope") {
        j["degree"] = p.degree;
    }
    return j;
}

json relaxation_result_to_json(const RelaxationResult &r) {
    json ranks;
    ranks["moment"] = r.moment_rank;
    ranks["truncated"] = r.truncated_rank;
    json loc = json::object();
    for (const auto &[tag, rank] : r.localizing_ranks) {
        loc[tag] = rank;
    }
    ranks["localizing"] = std::move(loc);

    json out;
    out["order"] = r.order;
    out["status"] = to_string(r.status);
    out["bound"] = r.lower_bound;
    out["rounded_bound"] = rounded_bound(r.lower_bound);
    out["ranks"] = std::move(ranks);
    out["certified"] = r.certified;
    if (r.extracted_point) {
        out["point"] = *r.extracted_point;
    }
    return out;
}

json oracle_report_to_json(const OracleReport &r) {
    return {{"optimum", r.optimum},
            {"witness", r.witness},
            {"lps_solved", r.lps_solved},
            {"wall_time", r.wall_time}};
}

} // namespace momentsos
