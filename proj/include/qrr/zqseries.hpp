#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "qrr/qseries.hpp"

namespace qrr {

/// Laurent series in z with QSeries coefficients sharing one denominator and
/// one truncation order. Coefficients for w in [wmin, wmax] are complete to
/// order N. Coefficients outside the window are only known to have q-valuation
/// at least outside_bound() (infinite: exactly zero; nullopt: no bound). When
/// that bound exceeds N every z-exponent counts as complete.
class ZQSeries {
 public:
  ZQSeries() = default;  // exact zero
  /// Takes ownership of window coefficients. All coefficients are moved to
  /// common denominator and truncated at N; entries outside the window are
  /// dropped.
  ZQSeries(std::map<int64_t, QSeries> coeffs, int64_t wmin, int64_t wmax, Trunc N, std::optional<Trunc> outside);
  /// A series with no z dependence.
  static ZQSeries from_q(const QSeries& f);
  /// c * z^w as an exact single term.
  static ZQSeries monomial(const QSeries& c, int64_t w);

  int64_t denom() const { return D_; }
  Trunc trunc() const { return N_; }
  int64_t wmin() const { return wmin_; }
  int64_t wmax() const { return wmax_; }
  /// True when every coefficient outside the window vanishes to order N.
  bool outside_vanishes() const;
  std::optional<Trunc> outside_bound() const { return outside_; }
  bool window_empty() const { return wmin_ > wmax_; }
  bool complete_at(int64_t w) const { return (w >= wmin_ && w <= wmax_) || outside_vanishes(); }
  const std::map<int64_t, QSeries>& coeffs() const { return c_; }
  /// Coefficient of z^w; WindowMiss when w is not known to be complete.
  QSeries coeff(int64_t w) const;
  /// Lower bound on the q-valuation of every coefficient, in or out of
  /// window; infinite for the zero series, nullopt when unbounded.
  std::optional<Trunc> min_valuation() const;

  ZQSeries truncated(Trunc N) const;
  ZQSeries scaled(const Coef& c) const;

 private:
  int64_t D_ = 1;
  std::map<int64_t, QSeries> c_;  // nonempty coefficients only
  int64_t wmin_ = 0;
  int64_t wmax_ = 0;
  Trunc N_;
  std::optional<Trunc> outside_ = Trunc::infinite();
};

ZQSeries zq_add(const ZQSeries& f, const ZQSeries& g);
ZQSeries zq_mul(const ZQSeries& f, const ZQSeries& g);
/// z -> c * z^beta * q^gamma for integer beta != 0. c must be a unit when
/// negative z-powers are present.
ZQSeries zq_subst(const ZQSeries& f, const CycloRat& c, int64_t beta, QExp gamma);
/// The z^0 coefficient; WindowMiss if it is not known to be complete.
QSeries zq_ct(const ZQSeries& f);

}  // namespace qrr
