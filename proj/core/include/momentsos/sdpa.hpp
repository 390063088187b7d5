#pragma once

#include <string>

#include "momentsos/sdp.hpp"

namespace momentsos {

/// Serialize a problem without free variables to SDPA sparse format
/// (".dat-s"). The problem min <C,X> s.t. <A_i,X> = b_i, X >= 0 is written
/// as the SDPA dual pair with F_i = A_i, F_0 = -C and c = b. Values are
/// printed in shortest round-trip decimal. Throws ExportError when free
/// variables are present.
std::string export_sdpa(const SdpProblem &p);

/// Parse SDPA sparse format back into a problem (internal reader used for
/// round-trip tests).
SdpProblem import_sdpa(const std::string &text);

/// Rewrite free scalar variables as differences of nonnegative diagonal
/// entries, making a problem exportable.
SdpProblem split_free_variables(const SdpProblem &p);

} // namespace momentsos
