#pragma once

#include <stdexcept>
#include <string>

namespace momentsos {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Operands with mismatched variable counts or vector lengths.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string &msg) : Error(msg) {}
};

// A relaxation order too small for the degrees involved.
class DegreeOverflowError : public Error {
public:
    explicit DegreeOverflowError(const std::string &msg) : Error(msg) {}
};

// Numerical failure inside the SDP/LP solver.
class SolverError : public Error {
public:
    explicit SolverError(const std::string &msg) : Error(msg) {}
};

// A requested problem or constraint set is infeasible.
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string &msg) : Error(msg) {}
};

// Rank-1 point extraction requested on a higher-rank moment matrix.
class ExtractionUnavailableError : public Error {
public:
    explicit ExtractionUnavailableError(const std::string &msg) : Error(msg) {}
};

// SOS decomposition requested on an indefinite Gram matrix.
class DecompositionError : public Error {
public:
    explicit DecompositionError(const std::string &msg) : Error(msg) {}
};

// Problem structure not representable in a requested export format.
class ExportError : public Error {
public:
    explicit ExportError(const std::string &msg) : Error(msg) {}
};

// Malformed input file or JSON document.
class ParseError : public Error {
public:
    explicit ParseError(const std::string &msg) : Error(msg) {}
};

} // namespace momentsos
