#pragma once

#include <boost/container/small_vector.hpp>

#include <string>

#include "qrr/cyclo.hpp"
#include "qrr/params.hpp"

namespace qrr {

struct CoefTerm {
  Mono mono;
  CycloRat c;
};

/// Polynomial in the formal parameters with cyclotomic-rational coefficients.
/// Terms are sorted by monomial and never hold a zero coefficient.
class Coef {
 public:
  using Terms = boost::container::small_vector<CoefTerm, 1>;

  Coef() = default;
  Coef(const CycloRat& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) t_.push_back({0, c});
  }
  Coef(const Rat& r) : Coef(CycloRat(r)) {}  // NOLINT(google-explicit-constructor)
  Coef(int64_t v) : Coef(CycloRat(v)) {}     // NOLINT(google-explicit-constructor)
  Coef(int v) : Coef(CycloRat(v)) {}         // NOLINT(google-explicit-constructor)
  static Coef monomial(Mono m, const CycloRat& c = CycloRat(1)) {
    Coef r;
    if (!c.is_zero()) r.t_.push_back({m, c});
    return r;
  }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].mono == 0); }
  /// Coefficient of the parameter-free monomial.
  CycloRat constant_term() const {
    return (!t_.empty() && t_[0].mono == 0) ? t_[0].c : CycloRat(0);
  }
  bool is_one() const { return t_.size() == 1 && t_[0].mono == 0 && t_[0].c.is_one(); }
  /// Largest exponent of any single parameter.
  int max_param_exp() const;
  uint32_t conductor() const;

  void add_term(Mono m, const CycloRat& c);
  Coef& operator+=(const Coef& o);
  Coef& operator-=(const Coef& o);
  Coef operator-() const;
  /// this += a*b (or -= when negate), dropping monomials beyond cap.
  void add_mul(const Coef& a, const Coef& b, int cap, bool negate = false);
  Coef mul(const Coef& o, int cap = kNoParamCap) const;
  Coef scaled(const CycloRat& s) const;
  /// Drops monomials with some exponent above cap.
  Coef truncated(int cap) const;
  Coef pow(int64_t e, int cap = kNoParamCap) const;

  friend Coef operator+(Coef a, const Coef& b) { return a += b; }
  friend Coef operator-(Coef a, const Coef& b) { return a -= b; }
  friend Coef operator*(const Coef& a, const Coef& b) { return a.mul(b); }
  friend bool operator==(const Coef& a, const Coef& b);
  friend bool operator!=(const Coef& a, const Coef& b) { return !(a == b); }

  std::string str() const;

 private:
  Terms t_;
};

/// Inverse of a nonzero parameter-free coefficient.
Coef coef_inv(const Coef& c);
Coef coef_mul(const Coef& a, const Coef& b);

inline void Coef::add_mul(const Coef& a, const Coef& b, int cap, bool negate) {
  if (a.t_.empty() || b.t_.empty()) return;
  if (a.t_.size() == 1 && b.t_.size() == 1 && a.t_[0].mono == 0 && b.t_[0].mono == 0 &&
      a.t_[0].c.is_rational() && b.t_[0].c.is_rational() && t_.size() == 1 && t_[0].mono == 0 &&
      t_[0].c.is_rational()) {
    Rat& acc = t_[0].c.rational_mut();
    if (negate) acc.sub_mul(a.t_[0].c.rational(), b.t_[0].c.rational());
    else acc.add_mul(a.t_[0].c.rational(), b.t_[0].c.rational());
    if (acc.is_zero()) t_.clear();
    return;
  }
  for (const auto& x : a.t_) {
    for (const auto& y : b.t_) {
      Mono m;
      if (!mono_mul(x.mono, y.mono, cap, m)) continue;
      CycloRat p = x.c * y.c;
      add_term(m, negate ? -p : p);
    }
  }
}

}  // namespace qrr
