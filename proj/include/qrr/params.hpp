#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qrr {

/// Formal parameters are drawn from a fixed alphabet so that monomial order
/// (and therefore every rendering) is the same in every process.
inline constexpr std::array<char, 8> kParamNames = {'a', 'b', 'c', 'u', 'v', 'w', 't', 'x'};
inline constexpr int kNumParams = 8;

/// Index of a parameter name, if it is one.
inline std::optional<int> param_index(char name) {
  for (int i = 0; i < kNumParams; ++i)
    if (kParamNames[static_cast<size_t>(i)] == name) return i;
  return std::nullopt;
}

/// Monomial in the parameters, one byte per parameter. Exponents stay below
/// 128 so that the top bit of every byte flags overflow after an addition.
using Mono = uint64_t;

inline constexpr Mono kMonoHigh = 0x8080808080808080ULL;
inline constexpr int kMaxParamExp = 127;
/// Sentinel for "no parameter truncation".
inline constexpr int kNoParamCap = kMaxParamExp;

inline int mono_exp(Mono m, int p) { return static_cast<int>((m >> (8 * p)) & 0xff); }
inline Mono mono_var(int p, int e = 1) { return static_cast<Mono>(e) << (8 * p); }
inline int mono_max_exp(Mono m) {
  int r = 0;
  for (int p = 0; p < kNumParams; ++p) r = std::max(r, mono_exp(m, p));
  return r;
}
inline int mono_total_degree(Mono m) {
  int r = 0;
  for (int p = 0; p < kNumParams; ++p) r += mono_exp(m, p);
  return r;
}

/// Product of monomials; returns false when some exponent exceeds cap
/// (the product then lies in the truncated ideal). Throws ParamOverflow if no
/// cap is active and an exponent leaves the representable range.
bool mono_mul_slow(Mono a, Mono b, int cap, Mono& out);
inline bool mono_mul(Mono a, Mono b, int cap, Mono& out) {
  if ((a | b) == 0) {
    out = 0;
    return true;
  }
  return mono_mul_slow(a, b, cap, out);
}

/// True iff every exponent of a is <= the matching exponent of b.
inline bool mono_divides(Mono a, Mono b) {
  for (int p = 0; p < kNumParams; ++p)
    if (mono_exp(a, p) > mono_exp(b, p)) return false;
  return true;
}

std::string mono_str(Mono m);

}  // namespace qrr
