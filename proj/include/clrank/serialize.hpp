#pragma once

#include <string>
#include <string_view>

#include "clrank/poly.hpp"

namespace clrank::io {

using poly::FqPoly;
using poly::LFun;

/// Little-endian coefficient list "a0,a1,...,am"; the zero polynomial is "0".
std::string format_poly(const FqPoly& p);

/// Inverse of format_poly.  Whitespace around entries is ignored.  Throws
/// std::invalid_argument on malformed text or an out-of-field coefficient.
FqPoly parse_poly(const ff::FieldCtx& field, std::string_view text);

enum class LFunLayout {
  Records,  ///< [{"u_deg": j, "coeffs_T": [...]}, ...]
  ByDegree  ///< {"j": [...], ...}
};

std::string lfun_to_json(const LFun& l, LFunLayout layout = LFunLayout::Records);

/// Accepts either layout.  Throws std::invalid_argument on malformed input.
LFun lfun_from_json(const ff::FieldCtx& field, std::string_view text);

}  // namespace clrank::io
