#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrr/coef.hpp"

namespace qrr {

/// Exact rational exponent of q with 64-bit parts; overflow throws.
class QExp {
 public:
  QExp() = default;
  QExp(int64_t n) : n_(n) {}  // NOLINT(google-explicit-constructor)
  QExp(int n) : n_(n) {}      // NOLINT(google-explicit-constructor)
  QExp(int64_t n, int64_t d);

  int64_t numerator() const { return n_; }
  int64_t denominator() const { return d_; }

  friend QExp operator+(QExp a, QExp b);
  friend QExp operator-(QExp a, QExp b);
  friend QExp operator*(QExp a, QExp b);
  friend QExp operator/(QExp a, QExp b);
  QExp operator-() const { return QExp(-n_, d_); }
  QExp& operator+=(QExp b) { return *this = *this + b; }
  QExp& operator-=(QExp b) { return *this = *this - b; }
  QExp& operator*=(QExp b) { return *this = *this * b; }
  friend bool operator==(QExp a, QExp b) { return a.n_ == b.n_ && a.d_ == b.d_; }
  friend bool operator!=(QExp a, QExp b) { return !(a == b); }
  friend bool operator<(QExp a, QExp b) {
    return static_cast<__int128>(a.n_) * b.d_ < static_cast<__int128>(b.n_) * a.d_;
  }
  friend bool operator>(QExp a, QExp b) { return b < a; }
  friend bool operator<=(QExp a, QExp b) { return !(b < a); }
  friend bool operator>=(QExp a, QExp b) { return !(a < b); }

 private:
  int64_t n_ = 0;
  int64_t d_ = 1;
};

int64_t floor_to_int(QExp a);
int64_t ceil_to_int(QExp a);
std::string exp_str(QExp e);
QExp parse_exp(const std::string& s);

/// Truncation order: a rational, or +infinity for exactly known series.
class Trunc {
 public:
  Trunc() = default;  // +infinity
  Trunc(QExp v) : inf_(false), v_(v) {}  // NOLINT(google-explicit-constructor)
  Trunc(int64_t v) : inf_(false), v_(v) {}  // NOLINT(google-explicit-constructor)
  Trunc(int v) : inf_(false), v_(v) {}      // NOLINT(google-explicit-constructor)
  static Trunc infinite() { return Trunc(); }

  bool is_inf() const { return inf_; }
  QExp value() const { return v_; }
  /// Largest scaled key e*D with e <= N. Requires a finite order.
  int64_t key_limit(int64_t D) const { return floor_to_int(v_ * QExp(D)); }

  friend Trunc operator+(Trunc a, QExp b) { return a.inf_ ? a : Trunc(a.v_ + b); }
  friend bool operator==(Trunc a, Trunc b) { return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_); }
  friend bool operator!=(Trunc a, Trunc b) { return !(a == b); }
  friend bool operator<(Trunc a, Trunc b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.v_ < b.v_;
  }
  friend Trunc min(Trunc a, Trunc b) { return b < a ? b : a; }
  std::string str() const { return inf_ ? "inf" : exp_str(v_); }

 private:
  bool inf_ = true;
  QExp v_{0};
};

/// Truncated Puiseux series in q. Exponents are stored as integer keys e*D
/// for one series-wide denominator D; coefficients are known exactly for
/// every exponent <= trunc() and every parameter monomial whose exponents
/// are all <= pcap().
class QSeries {
 public:
  using Term = std::pair<int64_t, Coef>;

  QSeries() = default;  // exact zero
  static QSeries zero(Trunc N = Trunc::infinite(), int64_t D = 1);
  static QSeries constant(const Coef& c, Trunc N = Trunc::infinite());
  static QSeries monomial(const Coef& c, QExp e, Trunc N = Trunc::infinite());
  /// Builds a series from (key, coef) pairs in any order; duplicate keys are
  /// summed, zero coefficients and keys beyond N are dropped.
  static QSeries from_terms(int64_t D, std::vector<Term> terms, Trunc N = Trunc::infinite(),
                            int pcap = kNoParamCap);

  int64_t denom() const { return D_; }
  Trunc trunc() const { return N_; }
  int pcap() const { return pcap_; }
  const std::vector<Term>& terms() const { return t_; }
  bool empty() const { return t_.empty(); }
  /// Smallest exponent with a nonzero coefficient, or nullopt.
  std::optional<QExp> valuation() const;
  std::optional<int64_t> valuation_key() const;
  Coef coeff(QExp e) const;
  Coef coeff_key(int64_t k) const;
  QExp exp_of(int64_t key) const { return QExp(key, D_); }
  uint32_t conductor() const;
  int max_param_exp() const;

  /// Same series with denominator D2 (a multiple of denom()).
  QSeries with_denom(int64_t D2) const;
  /// Smallest possible denominator.
  QSeries normalized() const;
  QSeries truncated(Trunc N) const;
  QSeries param_truncated(int cap) const;
  QSeries scaled(const Coef& c) const;
  /// Multiplies by q^e.
  QSeries shifted(QExp e) const;

  /// Compact single-line rendering, e.g. "1 + q + 2*q^2 + O(q^3)".
  std::string str() const;

  friend bool operator==(const QSeries& a, const QSeries& b);

 private:
  int64_t D_ = 1;
  std::vector<Term> t_;
  Trunc N_;
  int pcap_ = kNoParamCap;
};

QSeries qs_add(const QSeries& f, const QSeries& g);
QSeries qs_sub(const QSeries& f, const QSeries& g);
QSeries qs_neg(const QSeries& f);
/// Product; both operands must share a denominator.
QSeries qs_mul(const QSeries& f, const QSeries& g);
/// Laurent inverse; the valuation coefficient must be a parameter-free unit.
QSeries qs_inv(const QSeries& f);
/// q -> q^r for a positive rational r.
QSeries qs_rescale(const QSeries& f, QExp r);
/// q -> -q; integer exponents only.
QSeries qs_subst_sign(const QSeries& f);
/// Parameter p -> c*q^e. When e < 0 the truncation drops by |e| times the
/// largest p-degree present; *lowered reports whether that happened.
QSeries param_subst(const QSeries& f, char p, const CycloRat& c, QExp e, bool* lowered = nullptr);
QSeries qs_pow(const QSeries& f, int64_t n);

/// Smallest exponent <= N where f and g differ, if any. Both series have
/// to be known to order N.
std::optional<QExp> first_mismatch(const QSeries& f, const QSeries& g, QExp N);

/// Common denominator of two series.
int64_t common_denom(const QSeries& f, const QSeries& g);

inline QSeries operator+(const QSeries& f, const QSeries& g) { return qs_add(f, g); }
inline QSeries operator-(const QSeries& f, const QSeries& g) { return qs_sub(f, g); }
inline QSeries operator-(const QSeries& f) { return qs_neg(f); }
/// Product after aligning denominators.
QSeries operator*(const QSeries& f, const QSeries& g);

}  // namespace qrr
