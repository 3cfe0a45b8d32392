#include "qrr/cyclo.hpp"

#include <numeric>

#include "qrr/errors.hpp"

namespace qrr {

namespace {

using IPoly = std::vector<int64_t>;
using RPoly = std::vector<Rat>;

struct CycloTable {
  std::vector<IPoly> phi_polys;
  CycloTable() : phi_polys(kMaxConductor + 1) {
    for (uint32_t m = 1; m <= kMaxConductor; ++m) {
      // x^m - 1 divided by every Phi_d with d | m, d < m.
      IPoly num(m + 1, 0);
      num[0] = -1;
      num[m] = 1;
      for (uint32_t d = 1; d < m; ++d) {
        if (m % d) continue;
        const IPoly& den = phi_polys[d];
        size_t dn = den.size() - 1;
        IPoly quo(num.size() - dn, 0);
        for (size_t i = num.size(); i-- > dn;) {
          int64_t c = num[i];  // den is monic
          quo[i - dn] = c;
          if (c == 0) continue;
          for (size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
        }
        num = quo;
      }
      phi_polys[m] = num;
    }
  }
};

const CycloTable& table() {
  static const CycloTable t;
  return t;
}

void check_conductor(uint32_t m) {
  if (m == 0 || m > kMaxConductor)
    throw BadParameters("cyclotomic conductor out of range: " + std::to_string(m));
}

void trim(RPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

// Reduce an arbitrary-length coordinate vector modulo Phi_m.
CycloRat::Coords reduce(RPoly p, uint32_t m) {
  const IPoly& phi = cyclotomic_poly(m);
  size_t n = phi.size() - 1;
  for (size_t i = p.size(); i-- > n;) {
    if (p[i].is_zero()) continue;
    Rat c = p[i];
    for (size_t j = 0; j <= n; ++j) {
      if (phi[j] != 0) p[i - n + j].sub_mul(c, Rat(phi[j]));
    }
  }
  CycloRat::Coords out(n);
  for (size_t i = 0; i < n && i < p.size(); ++i) out[i] = std::move(p[i]);
  return out;
}

RPoly poly_mul(const RPoly& a, const RPoly& b) {
  if (a.empty() || b.empty()) return {};
  RPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j].add_mul(a[i], b[j]);
  }
  trim(r);
  return r;
}

RPoly poly_sub(const RPoly& a, const RPoly& b) {
  RPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

// Polynomial long division over Q.
void poly_divmod(RPoly a, const RPoly& b, RPoly& q, RPoly& r) {
  trim(a);
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
  Rat lead_inv = b.back().inv();
  while (a.size() >= b.size() && !a.empty()) {
    size_t shift = a.size() - b.size();
    Rat c = a.back() * lead_inv;
    q[shift] = c;
    for (size_t j = 0; j < b.size(); ++j) a[shift + j].sub_mul(c, b[j]);
    a.pop_back();
    trim(a);
  }
  trim(q);
  r = std::move(a);
}

}  // namespace

int euler_phi(uint32_t m) {
  int r = 0;
  for (uint32_t k = 1; k <= m; ++k)
    if (std::gcd(k, m) == 1) ++r;
  return r;
}

const std::vector<int64_t>& cyclotomic_poly(uint32_t m) {
  check_conductor(m);
  return table().phi_polys[m];
}

CycloRat::CycloRat(uint32_t m, Coords coords) : m_(m), c_(std::move(coords)) {
  check_conductor(m);
  size_t n = static_cast<size_t>(euler_phi(m));
  if (c_.size() != n) {
    RPoly p(c_.begin(), c_.end());
    c_ = reduce(std::move(p), m);
  }
  normalize();
}

CycloRat CycloRat::root_of_unity(uint32_t m, int64_t k) {
  check_conductor(m);
  int64_t e = ((k % m) + m) % m;
  RPoly p(static_cast<size_t>(e) + 1);
  p[static_cast<size_t>(e)] = Rat(1);
  CycloRat r;
  r.m_ = m;
  r.c_ = reduce(std::move(p), m);
  r.normalize();
  return r;
}

void CycloRat::normalize() {
  if (m_ == 1) return;
  for (size_t i = 1; i < c_.size(); ++i)
    if (!c_[i].is_zero()) return;
  c_.resize(1);
  m_ = 1;
}

uint32_t CycloRat::common(uint32_t a, uint32_t b) {
  uint32_t l = std::lcm(a, b);
  check_conductor(l);
  return l;
}

CycloRat CycloRat::promoted(uint32_t L) const {
  if (L == m_) return *this;
  if (L % m_ != 0) throw BadParameters("cannot promote conductor " + std::to_string(m_) + " to " + std::to_string(L));
  uint32_t step = L / m_;
  RPoly p((c_.size() - 1) * step + 1);
  for (size_t k = 0; k < c_.size(); ++k) p[k * step] = c_[k];
  CycloRat r;
  r.m_ = L;
  r.c_ = reduce(std::move(p), L);
  return r;  // deliberately not normalized: callers want conductor L
}

CycloRat CycloRat::operator-() const {
  CycloRat r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

CycloRat& CycloRat::operator+=(const CycloRat& o) {
  if (m_ == o.m_) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  } else {
    uint32_t L = common(m_, o.m_);
    CycloRat a = promoted(L), b = o.promoted(L);
    for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
    *this = std::move(a);
  }
  normalize();
  return *this;
}

CycloRat& CycloRat::operator-=(const CycloRat& o) {
  if (m_ == o.m_) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  } else {
    uint32_t L = common(m_, o.m_);
    CycloRat a = promoted(L), b = o.promoted(L);
    for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
    *this = std::move(a);
  }
  normalize();
  return *this;
}

CycloRat& CycloRat::operator*=(const CycloRat& o) {
  if (m_ == 1 && o.m_ == 1) {
    c_[0] *= o.c_[0];
    return *this;
  }
  if (o.m_ == 1) {
    for (auto& x : c_) x *= o.c_[0];
    normalize();
    return *this;
  }
  if (m_ == 1) {
    Rat s = c_[0];
    *this = o;
    for (auto& x : c_) x *= s;
    normalize();
    return *this;
  }
  uint32_t L = common(m_, o.m_);
  CycloRat a = promoted(L), b = o.promoted(L);
  RPoly pa(a.c_.begin(), a.c_.end()), pb(b.c_.begin(), b.c_.end());
  m_ = L;
  c_ = reduce(poly_mul(pa, pb), L);
  normalize();
  return *this;
}

void CycloRat::add_mul(const CycloRat& a, const CycloRat& b) {
  if (m_ == 1 && a.m_ == 1 && b.m_ == 1) {
    c_[0].add_mul(a.c_[0], b.c_[0]);
    return;
  }
  *this += a * b;
}

CycloRat CycloRat::inv() const {
  if (is_zero()) throw NotInvertible("zero has no inverse");
  if (m_ == 1) return CycloRat(c_[0].inv());
  // Extended Euclid: find s with s*a + t*Phi = 1.
  const IPoly& phi = cyclotomic_poly(m_);
  RPoly f(phi.begin(), phi.end());
  RPoly a(c_.begin(), c_.end());
  trim(a);
  RPoly r0 = f, r1 = a, s0, s1{Rat(1)};
  while (!r1.empty() && r1.size() > 1) {
    RPoly q, r;
    poly_divmod(r0, r1, q, r);
    RPoly s2 = poly_sub(s0, poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r1.empty()) throw NotInvertible("element shares a factor with the cyclotomic polynomial");
  Rat c = r1[0].inv();
  for (auto& x : s1) x *= c;
  CycloRat out;
  out.m_ = m_;
  out.c_ = reduce(std::move(s1), m_);
  out.normalize();
  return out;
}

CycloRat CycloRat::pow(int64_t e) const {
  if (e < 0) return inv().pow(-e);
  CycloRat result(1), base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

bool operator==(const CycloRat& a, const CycloRat& b) {
  if (a.m_ == b.m_) {
    for (size_t i = 0; i < a.c_.size(); ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  CycloRat d = a - b;
  return d.is_zero();
}

std::string CycloRat::str() const {
  if (m_ == 1) return c_[0].str();
  std::string out;
  std::string root = "z" + std::to_string(m_);
  for (size_t k = 0; k < c_.size(); ++k) {
    const Rat& x = c_[k];
    if (x.is_zero()) continue;
    std::string mag = x.sign() < 0 ? (-x).str() : x.str();
    std::string term;
    if (k == 0) {
      term = mag;
    } else {
      std::string r = k == 1 ? root : root + "^" + std::to_string(k);
      term = mag == "1" ? r : mag + "*" + r;
    }
    if (out.empty()) out = x.sign() < 0 ? "-" + term : term;
    else out += (x.sign() < 0 ? "-" : "+") + term;
  }
  return out.empty() ? "0" : out;
}

}  // namespace qrr
