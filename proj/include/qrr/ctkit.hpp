#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrr/side.hpp"
#include "qrr/zqseries.hpp"

namespace qrr {

/// One factor of a constant-term product, always expanded as a sum over an
/// integer index n:
///   Euler     (x z^s; q^d)_oo   = sum_{n>=0} (-x)^n q^{d n(n-1)/2} z^{sn} / (q^d;q^d)_n
///   InvEuler  1/(x z^s; q^d)_oo = sum_{n>=0} x^n z^{sn} / (q^d;q^d)_n
///   Theta     the triple-product kernel sum_n (-1)^n q^{d n(n-1)/2} y^n
///             after y -> c z^beta q^gamma, i.e. (y, q^d/y, q^d; q^d)_oo.
/// For the Euler kinds x = arg.x() q^{arg.offset} and d = arg.base. For
/// Theta, arg.scalar is c, arg.offset is gamma, arg.base is d and zpow is
/// beta; arg.mono must be empty.
struct CtFactor {
  enum class Kind { Euler, InvEuler, Theta };
  Kind kind = Kind::Euler;
  PochArg arg;
  int64_t zpow = 1;

  static CtFactor euler(const PochArg& x, int64_t s);
  static CtFactor inv_euler(const PochArg& x, int64_t s);
  static CtFactor theta(QExp d, const CycloRat& c, int64_t beta, QExp gamma);

  /// Valuation of the coefficient of index n, ignoring the 1/(q^d;q^d)_n.
  QExp exponent(int64_t n) const;
  bool bilateral() const { return kind == Kind::Theta; }
  std::string str() const;
};

/// CT_z[prod factors] times a z-free prefactor, claimed to equal target.
struct CtScript {
  std::string name;
  ProductExpr prefactor;
  std::vector<CtFactor> factors;
  Side target;
};

/// Inclusive index range of one factor; nullopt ends are unbounded.
struct IndexWindow {
  std::optional<int64_t> lo, hi;
  bool finite() const { return lo && hi; }
  bool empty() const { return finite() && *lo > *hi; }
};

/// Index windows outside which no tuple of indices with total z-power 0
/// reaches q-order N (or stays within parameter degree M). Obtained by
/// alternating valuation pruning and z-balance propagation to a fixpoint.
/// Throws WindowMiss when some window stays infinite.
std::vector<IndexWindow> ct_windows(const std::vector<CtFactor>& factors, QExp N, int M = 8);

/// The factor restricted to its window, as an exact finite Laurent series in
/// z whose coefficients are known to order N.
ZQSeries factor_series(const CtFactor& f, const IndexWindow& w, Trunc N, int M = 8);

/// Prefactor times CT of the product, exactly to order N.
QSeries run_ct(const CtScript& script, QExp N, int M = 8);

struct CtReport {
  std::string name;
  QExp order{0};
  bool pass = false;
  std::optional<QExp> mismatch;
  /// Set when a window or truncation failure prevented the comparison.
  std::string error;
  QSeries ct, target;
};

/// run_ct against eval_side(target), exactly to order N.
CtReport check_ct_equals_sum(const CtScript& script, QExp N, int M = 8);

/// Parameter p -> c q^e in every factor and in the target.
CtScript specialize(const CtScript& s, char p, const CycloRat& c, QExp e);

}  // namespace qrr
