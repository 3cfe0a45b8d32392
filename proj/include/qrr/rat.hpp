#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>

namespace qrr {

/// Exact rational number. Values whose numerator and denominator fit in
/// 64 bits are kept inline; anything larger lives in a GMP rational.
/// The representation is canonical (a value is big only if it does not fit),
/// so equality can compare representations directly.
class Rat {
 public:
  Rat() = default;
  Rat(int64_t n) : n_(n) {}  // NOLINT(google-explicit-constructor)
  Rat(int n) : n_(n) {}      // NOLINT(google-explicit-constructor)
  Rat(int64_t n, int64_t d);
  explicit Rat(const mpq_class& q) { assign_big(mpq_class(q)); }
  explicit Rat(const mpz_class& z) { assign_big(mpq_class(z)); }

  Rat(const Rat& o) : n_(o.n_), d_(o.d_), big_(o.big_ ? new mpq_class(*o.big_) : nullptr) {}
  Rat(Rat&& o) noexcept : n_(o.n_), d_(o.d_), big_(o.big_) { o.big_ = nullptr; }
  Rat& operator=(const Rat& o) {
    if (this != &o) {
      if (o.big_) {
        if (big_) *big_ = *o.big_;
        else big_ = new mpq_class(*o.big_);
      } else {
        drop_big();
        n_ = o.n_;
        d_ = o.d_;
      }
    }
    return *this;
  }
  Rat& operator=(Rat&& o) noexcept {
    std::swap(n_, o.n_);
    std::swap(d_, o.d_);
    std::swap(big_, o.big_);
    return *this;
  }
  ~Rat() { delete big_; }

  bool is_small() const { return big_ == nullptr; }
  bool is_zero() const { return !big_ && n_ == 0; }
  bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : d_ == 1; }
  int sign() const { return big_ ? sgn(*big_) : (n_ > 0) - (n_ < 0); }

  /// Inline numerator/denominator; only meaningful when is_small().
  int64_t small_num() const { return n_; }
  int64_t small_den() const { return d_; }

  mpq_class to_mpq() const;
  mpz_class num() const;
  mpz_class den() const;
  std::string str() const;
  double to_double() const;

  Rat operator-() const;
  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);
  /// this += x * y
  void add_mul(const Rat& x, const Rat& y);
  /// this -= x * y
  void sub_mul(const Rat& x, const Rat& y);
  Rat inv() const;

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend bool operator==(const Rat& a, const Rat& b) {
    if (a.big_ || b.big_) return a.big_ && b.big_ && *a.big_ == *b.big_;
    return a.n_ == b.n_ && a.d_ == b.d_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return cmp(a, b) < 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return cmp(a, b) > 0; }
  friend bool operator<=(const Rat& a, const Rat& b) { return cmp(a, b) <= 0; }
  friend bool operator>=(const Rat& a, const Rat& b) { return cmp(a, b) >= 0; }
  static int cmp(const Rat& a, const Rat& b);

  /// Parses "p", "-p" or "p/q".
  static Rat parse(const std::string& s);

 private:
  void drop_big() {
    delete big_;
    big_ = nullptr;
  }
  void assign_big(mpq_class&& q);
  void set_i128(__int128 n, __int128 d);
  void slow_add(const Rat& o, bool subtract);
  void slow_mul(const Rat& o);

  int64_t n_ = 0;
  int64_t d_ = 1;
  mpq_class* big_ = nullptr;
};

inline Rat& Rat::operator+=(const Rat& o) {
  if (!big_ && !o.big_ && d_ == 1 && o.d_ == 1) {
    int64_t r;
    if (!__builtin_add_overflow(n_, o.n_, &r)) {
      n_ = r;
      return *this;
    }
  }
  slow_add(o, false);
  return *this;
}

inline Rat& Rat::operator-=(const Rat& o) {
  if (!big_ && !o.big_ && d_ == 1 && o.d_ == 1) {
    int64_t r;
    if (!__builtin_sub_overflow(n_, o.n_, &r)) {
      n_ = r;
      return *this;
    }
  }
  slow_add(o, true);
  return *this;
}

inline Rat& Rat::operator*=(const Rat& o) {
  if (!big_ && !o.big_ && d_ == 1 && o.d_ == 1) {
    int64_t r;
    if (!__builtin_mul_overflow(n_, o.n_, &r)) {
      n_ = r;
      return *this;
    }
  }
  slow_mul(o);
  return *this;
}

inline void Rat::add_mul(const Rat& x, const Rat& y) {
  if (!big_ && !x.big_ && !y.big_ && d_ == 1 && x.d_ == 1 && y.d_ == 1) {
    int64_t p, r;
    if (!__builtin_mul_overflow(x.n_, y.n_, &p) && !__builtin_add_overflow(n_, p, &r)) {
      n_ = r;
      return;
    }
  }
  Rat t = x;
  t *= y;
  *this += t;
}

inline void Rat::sub_mul(const Rat& x, const Rat& y) {
  if (!big_ && !x.big_ && !y.big_ && d_ == 1 && x.d_ == 1 && y.d_ == 1) {
    int64_t p, r;
    if (!__builtin_mul_overflow(x.n_, y.n_, &p) && !__builtin_sub_overflow(n_, p, &r)) {
      n_ = r;
      return;
    }
  }
  Rat t = x;
  t *= y;
  *this -= t;
}

}  // namespace qrr
