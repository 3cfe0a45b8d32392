#pragma once

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "qrr/rat.hpp"

namespace qrr {

/// Largest supported cyclotomic conductor.
inline constexpr uint32_t kMaxConductor = 120;

int euler_phi(uint32_t m);

/// Integer coefficients of the m-th cyclotomic polynomial, lowest degree first.
const std::vector<int64_t>& cyclotomic_poly(uint32_t m);

/// Element of Q(zeta_m) stored as phi(m) rational coordinates on the power
/// basis 1, zeta, ..., zeta^(phi(m)-1). Rational values are always kept at
/// conductor 1, so mixing a rational with a cyclotomic value never loses
/// the fast path.
class CycloRat {
 public:
  using Coords = boost::container::small_vector<Rat, 2>;

  CycloRat() : c_(1) {}
  CycloRat(const Rat& r) : c_{r} {}  // NOLINT(google-explicit-constructor)
  CycloRat(int64_t v) : c_{Rat(v)} {}  // NOLINT(google-explicit-constructor)
  CycloRat(int v) : c_{Rat(v)} {}      // NOLINT(google-explicit-constructor)
  CycloRat(uint32_t m, Coords coords);

  /// zeta_m^k.
  static CycloRat root_of_unity(uint32_t m, int64_t k = 1);

  uint32_t conductor() const { return m_; }
  const Coords& coords() const { return c_; }
  bool is_rational() const { return m_ == 1; }
  const Rat& rational() const { return c_[0]; }
  /// Mutable access to the value of a rational element (conductor 1 only).
  Rat& rational_mut() { return c_[0]; }
  bool is_zero() const { return m_ == 1 && c_[0].is_zero(); }
  bool is_one() const { return m_ == 1 && c_[0].is_one(); }

  /// Same value expressed over Q(zeta_L); L must be a multiple of conductor().
  CycloRat promoted(uint32_t L) const;

  CycloRat operator-() const;
  CycloRat& operator+=(const CycloRat& o);
  CycloRat& operator-=(const CycloRat& o);
  CycloRat& operator*=(const CycloRat& o);
  /// this += a * b
  void add_mul(const CycloRat& a, const CycloRat& b);
  CycloRat inv() const;
  CycloRat pow(int64_t e) const;

  friend CycloRat operator+(CycloRat a, const CycloRat& b) { return a += b; }
  friend CycloRat operator-(CycloRat a, const CycloRat& b) { return a -= b; }
  friend CycloRat operator*(CycloRat a, const CycloRat& b) { return a *= b; }
  friend bool operator==(const CycloRat& a, const CycloRat& b);
  friend bool operator!=(const CycloRat& a, const CycloRat& b) { return !(a == b); }

  /// Rendering such as "3", "-1/2", "1+2*z4", "z3^2".
  std::string str() const;

 private:
  void normalize();
  static uint32_t common(uint32_t a, uint32_t b);

  uint32_t m_ = 1;
  Coords c_;
};

}  // namespace qrr
