#include "qrr/rat.hpp"

#include <cmath>
#include <limits>

#include "qrr/errors.hpp"

namespace qrr {

namespace {

using u128 = unsigned __int128;

u128 uabs(__int128 v) { return v < 0 ? u128(-(v + 1)) + 1 : u128(v); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(__int128 v) {
  return v >= std::numeric_limits<int64_t>::min() && v <= std::numeric_limits<int64_t>::max();
}

mpz_class mpz_from_i128(__int128 v) {
  bool neg = v < 0;
  u128 u = uabs(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

Rat::Rat(int64_t n, int64_t d) {
  if (d == 0) throw NotInvertible("rational with zero denominator");
  set_i128(n, d);
}

void Rat::set_i128(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) {
    drop_big();
    n_ = 0;
    d_ = 1;
    return;
  }
  u128 g = gcd128(uabs(n), uabs(d));
  if (g > 1) {
    n /= static_cast<__int128>(g);
    d /= static_cast<__int128>(g);
  }
  if (fits64(n) && fits64(d)) {
    drop_big();
    n_ = static_cast<int64_t>(n);
    d_ = static_cast<int64_t>(d);
    return;
  }
  mpq_class q(mpz_from_i128(n), mpz_from_i128(d));
  if (!big_) big_ = new mpq_class();
  *big_ = std::move(q);
}

void Rat::assign_big(mpq_class&& q) {
  q.canonicalize();
  if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
    n_ = q.get_num().get_si();
    d_ = q.get_den().get_si();
    drop_big();
    return;
  }
  if (!big_) big_ = new mpq_class();
  *big_ = std::move(q);
}

mpq_class Rat::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(n_)), mpz_class(static_cast<long>(d_)));
}

mpz_class Rat::num() const { return big_ ? mpz_class(big_->get_num()) : mpz_class(static_cast<long>(n_)); }
mpz_class Rat::den() const { return big_ ? mpz_class(big_->get_den()) : mpz_class(static_cast<long>(d_)); }

std::string Rat::str() const {
  if (big_) return big_->get_str();
  if (d_ == 1) return std::to_string(n_);
  return std::to_string(n_) + "/" + std::to_string(d_);
}

double Rat::to_double() const { return big_ ? big_->get_d() : double(n_) / double(d_); }

Rat Rat::operator-() const {
  if (big_) return Rat(mpq_class(-*big_));
  if (n_ == std::numeric_limits<int64_t>::min()) return Rat(mpq_class(-to_mpq()));
  Rat r;
  r.n_ = -n_;
  r.d_ = d_;
  return r;
}

void Rat::slow_add(const Rat& o, bool subtract) {
  if (!big_ && !o.big_) {
    __int128 on = subtract ? -static_cast<__int128>(o.n_) : static_cast<__int128>(o.n_);
    if (d_ == o.d_) {
      set_i128(static_cast<__int128>(n_) + on, d_);
    } else {
      __int128 n = static_cast<__int128>(n_) * o.d_ + on * d_;
      __int128 d = static_cast<__int128>(d_) * o.d_;
      set_i128(n, d);
    }
    return;
  }
  mpq_class a = to_mpq();
  if (subtract) a -= o.to_mpq();
  else a += o.to_mpq();
  assign_big(std::move(a));
}

void Rat::slow_mul(const Rat& o) {
  if (!big_ && !o.big_) {
    set_i128(static_cast<__int128>(n_) * o.n_, static_cast<__int128>(d_) * o.d_);
    return;
  }
  assign_big(mpq_class(to_mpq() * o.to_mpq()));
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw NotInvertible("division by zero rational");
  if (!big_ && !o.big_) {
    set_i128(static_cast<__int128>(n_) * o.d_, static_cast<__int128>(d_) * o.n_);
    return *this;
  }
  assign_big(mpq_class(to_mpq() / o.to_mpq()));
  return *this;
}

Rat Rat::inv() const {
  Rat one(1);
  one /= *this;
  return one;
}

int Rat::cmp(const Rat& a, const Rat& b) {
  if (!a.big_ && !b.big_) {
    __int128 l = static_cast<__int128>(a.n_) * b.d_;
    __int128 r = static_cast<__int128>(b.n_) * a.d_;
    return (l > r) - (l < r);
  }
  return ::cmp(a.to_mpq(), b.to_mpq());
}

Rat Rat::parse(const std::string& s) {
  try {
    mpq_class q(s, 10);
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rat(q);
  } catch (const std::invalid_argument&) {
    throw ParseError("not a rational number: '" + s + "'");
  }
}

}  // namespace qrr
