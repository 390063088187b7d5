#include "momentsos/moment.hpp"

#include <cmath>

#include "momentsos/errors.hpp"

namespace momentsos {

const std::vector<MatrixLayout::Term> &MatrixLayout::entry(int i, int j) const {
    if (i > j) {
        std::swap(i, j);
    }
    if (i < 0 || j >= side_) {
        throw DimensionError("MatrixLayout::entry: index out of range");
    }
    return entries_[i * side_ - i * (i - 1) / 2 + (j - i)];
}

MatrixLayout moment_layout(int n, int d) {
    if (d < 0) {
        throw DimensionError("moment_layout: negative degree");
    }
    const MonomialBasis bas = basis(n, d);
    const MonomialBasis big = basis(n, 2 * d);
    MatrixLayout layout(bas.size(), 2 * d);
    layout.entries_.reserve(bas.size() * (bas.size() + 1) / 2);
    for (int i = 0; i < bas.size(); ++i) {
        for (int j = i; j < bas.size(); ++j) {
            layout.entries_.push_back(
                {{1.0, big.index_of(bas[i] * bas[j])}});
        }
    }
    return layout;
}

MatrixLayout localizing_layout(const Polynomial &g, int n, int d) {
    if (g.num_vars() != n) {
        throw DimensionError("localizing_layout: variable count mismatch");
    }
    if (d < 0) {
        throw DimensionError("localizing_layout: negative degree");
    }
    const MonomialBasis bas = basis(n, d);
    const int order = 2 * d + g.degree();
    const MonomialBasis big = basis(n, order);
    MatrixLayout layout(bas.size(), order);
    layout.entries_.reserve(bas.size() * (bas.size() + 1) / 2);
    for (int i = 0; i < bas.size(); ++i) {
        for (int j = i; j < bas.size(); ++j) {
            const Monomial prod = bas[i] * bas[j];
            std::vector<MatrixLayout::Term> terms;
            terms.reserve(g.terms().size());
            for (const auto &[mono, coef] : g.terms()) {
                terms.push_back({coef, big.index_of(prod * mono)});
            }
            layout.entries_.push_back(std::move(terms));
        }
    }
    return layout;
}

Eigen::MatrixXd assemble(const MomentVector &y, const MatrixLayout &layout) {
    if (y.order < layout.required_order()) {
        throw DegreeOverflowError(
            "assemble: moment vector order " + std::to_string(y.order) +
            " below layout requirement " +
            std::to_string(layout.required_order()));
    }
    const int s = layout.side();
    Eigen::MatrixXd M(s, s);
    for (int i = 0; i < s; ++i) {
        for (int j = i; j < s; ++j) {
            double v = 0.0;
            for (const auto &t : layout.entry(i, j)) {
                if (t.moment_index >= y.size()) {
                    throw DimensionError("assemble: moment index out of range");
                }
                v += t.coef * y.values(t.moment_index);
            }
            M(i, j) = v;
            M(j, i) = v;
        }
    }
    return M;
}

MomentVector moments_of_atoms(const std::vector<std::vector<double>> &points,
                              const std::vector<double> &weights, int order,
                              bool require_probability) {
    if (points.size() != weights.size()) {
        throw DimensionError("moments_of_atoms: points/weights size mismatch");
    }
    if (points.empty()) {
        throw DimensionError("moments_of_atoms: need at least one atom");
    }
    const int n = static_cast<int>(points[0].size());
    double wsum = 0.0;
    for (size_t k = 0; k < points.size(); ++k) {
        if (static_cast<int>(points[k].size()) != n) {
            throw DimensionError("moments_of_atoms: point dimension mismatch");
        }
        if (weights[k] < 0.0) {
            throw DimensionError("moments_of_atoms: negative weight");
        }
        wsum += weights[k];
    }
    if (require_probability && std::abs(wsum - 1.0) > 1e-12) {
        throw DimensionError("moments_of_atoms: weights do not sum to 1");
    }

    const MonomialBasis bas = basis(n, order);
    MomentVector y;
    y.n = n;
    y.order = order;
    y.values = Eigen::VectorXd::Zero(bas.size());
    for (size_t k = 0; k < points.size(); ++k) {
        for (int idx = 0; idx < bas.size(); ++idx) {
            double t = weights[k];
            for (int v = 0; v < n; ++v) {
                for (int e = 0; e < bas[idx].exponents[v]; ++e) {
                    t *= points[k][v];
                }
            }
            y.values(idx) += t;
        }
    }
    return y;
}

} // namespace momentsos
