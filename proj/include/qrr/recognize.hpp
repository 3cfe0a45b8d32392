#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qrr/products.hpp"

namespace qrr {

/// q^C * prod_{n=1..L} (1 - q^n)^{a_n}, recovered from a truncated series.
struct RecognizedProduct {
  QExp C{0};
  /// a[n-1] is a_n; always integers.
  std::vector<Rat> a;
  std::optional<int64_t> period;
  /// Tail length the period was checked on.
  int64_t window = 0;
  /// Order to which the product form agrees with the input.
  int64_t order = 0;
};

/// Exponent sequence of f via the logarithmic-derivative recursion
/// [q^k] q f'/f = -sum_{d|k} d a_d. Throws LeadingUnit when the leading
/// coefficient is not 1 and NonIntegerExponent as soon as some a_k is not an
/// integer.
RecognizedProduct prodmake(const QSeries& f, int64_t L);

/// Smallest P <= maxP such that the last W entries of a are P-periodic.
/// W defaults to max(2 maxP, 32) and is clamped to the sequence length;
/// only periods with 2P <= W count.
std::optional<int64_t> detect_period(const std::vector<Rat>& a, int64_t maxP, int64_t W = 0);

/// prodmake followed by detect_period on the full sequence.
RecognizedProduct recognize(const QSeries& f, int64_t L, int64_t maxP);

/// Grouped infinite products (q^r,...;q^P)_oo^e from the periodic tail plus
/// finite factors (1-q^n)^d correcting the head. Without a period every
/// a_n becomes a finite factor.
ProductExpr render(const RecognizedProduct& rp);

}  // namespace qrr
