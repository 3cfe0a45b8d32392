#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qrr/dense.hpp"
#include "qrr/qseries.hpp"
#include "qrr/zqseries.hpp"

namespace qrr {

/// First argument x*q^offset of a Pochhammer symbol (x q^offset; q^base),
/// where x = scalar * (parameter monomial). The scalar is a sign in most
/// identities but any nonzero cyclotomic value is accepted.
struct PochArg {
  CycloRat scalar{1};
  Mono mono = 0;
  QExp offset{0};
  QExp base{1};

  Coef x() const { return Coef::monomial(mono, scalar); }
  /// Smallest denominator carrying every exponent of the factors.
  int64_t denom() const;
};

/// Appends the binomials of (arg; q^d)_n, or of (arg; q^d)_oo when n is
/// nullopt, raised to `power`. Exponent keys are over denominator D, which
/// must be a multiple of arg.denom(). Infinite products keep the factors
/// whose key is at most `budget`.
void append_poch_bins(const PochArg& arg, std::optional<int64_t> n, int power, int64_t D, int64_t budget,
                      std::vector<Binomial>& out);

/// Lower bound (<= 0) on the key shift produced by the negative-exponent
/// factors of (arg; q^d)_n^power, including parameter-graded denominators
/// under cap pcap.
int64_t poch_negative_keys(const PochArg& arg, std::optional<int64_t> n, int power, int64_t D,
                           int pcap = kNoParamCap);

/// (arg; q^d)_n for any integer n, using (a;q)_n = (a;q)_oo/(a q^n;q)_oo.
QSeries poch_finite(const PochArg& arg, int64_t n, Trunc N, int pcap = kNoParamCap);
/// (arg; q^d)_oo to order N.
QSeries poch_inf(const PochArg& arg, Trunc N, int pcap = kNoParamCap);
/// Gaussian binomial [n m] in q^d via the Pascal recurrence; 0 unless 0 <= m <= n.
QSeries qbinom(int64_t n, int64_t m, QExp d = 1);
/// Rogers-Szego polynomial sum_j t^j [n j] (base q^d) at t = tc * q^te.
QSeries rogers_szego(int64_t n, const Coef& tc, QExp te, QExp d = 1);
/// sum_n (-1)^n q^((n^2-n)/2) z^n over every n with (n^2-n)/2 <= N.
ZQSeries jtp_kernel(Trunc N);

}  // namespace qrr
