#pragma once

#include <cstdint>
#include <vector>

#include "qrr/qseries.hpp"

namespace qrr {

/// Mutable working buffer used by the hot paths: slot i holds the
/// coefficient of key base+i, and every key <= limit is exact.
class DenseSeries {
 public:
  DenseSeries(int64_t D, int64_t base, int64_t limit, int pcap);
  /// Copies f into a buffer that is exact up to key `limit`.
  static DenseSeries from(const QSeries& f, int64_t limit);

  int64_t denom() const { return D_; }
  int64_t base() const { return base_; }
  int64_t limit() const { return limit_; }
  int pcap() const { return pcap_; }
  bool empty_range() const { return limit_ < base_; }
  Coef& at(int64_t key) { return c_[static_cast<size_t>(key - base_)]; }
  const Coef& at(int64_t key) const { return c_[static_cast<size_t>(key - base_)]; }

  /// *= (1 - x q^(e/D)) for e >= 0.
  void mul_one_minus(const Coef& x, int64_t e);
  /// /= (1 - x q^(e/D)) for e > 0, or e == 0 with x of positive parameter
  /// degree (geometric expansion bounded by the parameter cap).
  void div_one_minus(const Coef& x, int64_t e);
  void scale(const Coef& s);
  /// Adds g (same D) into this buffer on the overlap of both key ranges.
  void add(const DenseSeries& g, bool negate = false);

  QSeries to_series() const;

 private:
  int64_t D_;
  int64_t base_;
  int64_t limit_;
  int pcap_;
  std::vector<Coef> c_;
};

/// (1 - x q^(e/D))^sign with sign = +1 (numerator) or -1 (denominator).
struct Binomial {
  Coef x;
  int64_t e;
  int sign;
};

/// scalar * q^(shift/D) * prod of binomials, exact to order N (or exactly,
/// when N is infinite and no binomial is a denominator). Negative-exponent
/// binomials with invertible x are rewritten as monomial times a
/// positive-exponent binomial; identically-zero denominators raise
/// PoleAtNegativeIndex.
QSeries binomial_product(const Coef& scalar, int64_t shift, const std::vector<Binomial>& bins, int64_t D,
                         Trunc N, int pcap);

}  // namespace qrr
