#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "momentsos/certify.hpp"
#include "momentsos/moment.hpp"
#include "momentsos/oracle.hpp"
#include "momentsos/polynomial.hpp"

namespace momentsos {

using nlohmann::json;

/// Polynomial with variable names, the unit of polynomial serialization:
/// {"vars": ["x1", ...], "terms": [{"exp": [2,0,1], "coef": -3.5}, ...]}.
struct NamedPolynomial {
    std::vector<std::string> vars;
    Polynomial poly{1};
};

json polynomial_to_json(const Polynomial &p, const std::vector<std::string> &vars);
NamedPolynomial polynomial_from_json(const json &j);

/// Moment vectors serialize as {"n": ..., "order": ..., "values": [...]}.
json moment_vector_to_json(const MomentVector &y);
MomentVector moment_vector_from_json(const json &j);

/// Parsed problem input file:
///   {"type":"mincard","A":[[...]],"b":[...],"alpha":...}
///   {"type":"minrank","A_list":[[[...]]],"b":[...],"alpha":...}
///   {"type":"envelope","A":[[...]],"b":[...],"degree":d}
struct ProblemInput {
    std::string type; // "mincard", "minrank", or "envelope"
    Eigen::MatrixXd A;                  // mincard / envelope
    std::vector<Eigen::MatrixXd> A_list; // minrank
    Eigen::VectorXd b;
    double alpha = 0.0; // 0 = builder default
    int degree = 0;     // envelope only
};

ProblemInput problem_from_json(const json &j);
json problem_to_json(const ProblemInput &p);

/// Certificate / per-order relaxation report:
/// {order, bound, rounded_bound, ranks, certified, point?}.
json relaxation_result_to_json(const RelaxationResult &r);

/// Brute-force report mirroring OracleReport. The wall_time field is the
/// only run-dependent entry; comparisons should ignore it.
json oracle_report_to_json(const OracleReport &r);

} // namespace momentsos
