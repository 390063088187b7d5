#include "momentsos/sdpa.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace momentsos {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

using EntryKey = std::tuple<int, int, int, int>; // matno, block, i, j (1-based)

} // namespace

std::string export_sdpa(const SdpProblem &p) {
    if (p.num_free > 0) {
        throw ExportError("export_sdpa: problem has free scalar variables; "
                          "split them first (split_free_variables)");
    }
    p.validate();

    const int m = static_cast<int>(p.equalities.size());
    std::ostringstream out;
    out << m << "\n";
    out << p.blocks.size() << "\n";
    for (size_t b = 0; b < p.blocks.size(); ++b) {
        if (b > 0) {
            out << " ";
        }
        const int d = p.blocks[b].dim;
        out << (p.blocks[b].kind == BlockKind::Diagonal ? -d : d);
    }
    out << "\n";
    for (int r = 0; r < m; ++r) {
        if (r > 0) {
            out << " ";
        }
        out << format_double(p.equalities[r].rhs);
    }
    out << "\n";

    std::map<EntryKey, double> entries;
    // F_0 = -C: our objective coefficient convention stores c for entry
    // (i, j) meaning a symmetric matrix with c/2 off-diagonal.
    for (const auto &mc : p.objective.mat) {
        const double v = mc.i == mc.j ? mc.value : 0.5 * mc.value;
        entries[{0, mc.block + 1, mc.i + 1, mc.j + 1}] += -v;
    }
    for (int r = 0; r < m; ++r) {
        for (const auto &mc : p.equalities[r].lhs.mat) {
            const double v = mc.i == mc.j ? mc.value : 0.5 * mc.value;
            entries[{r + 1, mc.block + 1, mc.i + 1, mc.j + 1}] += v;
        }
    }
    for (const auto &[key, v] : entries) {
        if (v == 0.0) {
            continue;
        }
        const auto [matno, blk, i, j] = key;
        out << matno << " " << blk << " " << i << " " << j << " "
            << format_double(v) << "\n";
    }
    return out.str();
}

SdpProblem import_sdpa(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    auto next_data_line = [&]() -> std::string {
        while (std::getline(in, line)) {
            size_t pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) {
                continue;
            }
            const char c = line[pos];
            if (c == '"' || c == '*') {
                continue; // comment
            }
            return line;
        }
        throw ParseError("import_sdpa: unexpected end of input");
    };

    SdpProblem p;
    int m = 0, nblocks = 0;
    {
        std::istringstream ls(next_data_line());
        if (!(ls >> m) || m < 0) {
            throw ParseError("import_sdpa: bad mDIM line");
        }
    }
    {
        std::istringstream ls(next_data_line());
        if (!(ls >> nblocks) || nblocks < 0) {
            throw ParseError("import_sdpa: bad nBLOCK line");
        }
    }
    if (nblocks > 0) {
        std::istringstream ls(next_data_line());
        for (int b = 0; b < nblocks; ++b) {
            // Block sizes may carry stray punctuation in the wild format;
            // accept plain integers only.
            int d = 0;
            if (!(ls >> d) || d == 0) {
                throw ParseError("import_sdpa: bad block structure line");
            }
            p.add_block(std::abs(d), d < 0 ? BlockKind::Diagonal : BlockKind::Psd);
        }
    }
    p.equalities.resize(m);
    if (m > 0) {
        std::istringstream ls(next_data_line());
        for (int r = 0; r < m; ++r) {
            if (!(ls >> p.equalities[r].rhs)) {
                throw ParseError("import_sdpa: bad rhs line");
            }
        }
    }

    while (std::getline(in, line)) {
        std::istringstream ls(line);
        int matno, blk, i, j;
        double v;
        if (!(ls >> matno >> blk >> i >> j >> v)) {
            size_t pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) {
                continue;
            }
            throw ParseError("import_sdpa: bad entry line: " + line);
        }
        if (matno < 0 || matno > m || blk < 1 || blk > nblocks) {
            throw ParseError("import_sdpa: entry indices out of range");
        }
        if (i > j) {
            std::swap(i, j);
        }
        const double coef = i == j ? v : 2.0 * v;
        if (matno == 0) {
            p.objective.add_mat(blk - 1, i - 1, j - 1, -coef);
        } else {
            p.equalities[matno - 1].lhs.add_mat(blk - 1, i - 1, j - 1, coef);
        }
    }
    p.validate();
    return p;
}

SdpProblem split_free_variables(const SdpProblem &p) {
    if (p.num_free == 0) {
        return p;
    }
    SdpProblem out;
    out.blocks = p.blocks;
    out.objective_constant = p.objective_constant;
    // One diagonal block holding (w_plus, w_minus) pairs.
    const int split_block =
        out.add_block(2 * p.num_free, BlockKind::Diagonal, "free_split");

    auto convert = [&](const LinearFunctional &f) {
        LinearFunctional g;
        g.mat = f.mat;
        for (const auto &[idx, v] : f.free_terms) {
            g.add_mat(split_block, 2 * idx, 2 * idx, v);
            g.add_mat(split_block, 2 * idx + 1, 2 * idx + 1, -v);
        }
        return g;
    };
    out.objective = convert(p.objective);
    for (const auto &eq : p.equalities) {
        out.add_equality(convert(eq.lhs), eq.rhs);
    }
    return out;
}

} // namespace momentsos
