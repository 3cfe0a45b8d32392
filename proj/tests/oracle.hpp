#pragma once

// Independent reference arithmetic for tests: dense power series in q with
// GMP rational coefficients, integer exponents 0..L only, no parameters.
// Deliberately naive so it shares no code with the library.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qrr/qseries.hpp"

namespace oracle {

using Poly = std::vector<mpq_class>;  // coefficient of q^i at index i, i <= L

inline Poly one(int L) {
  Poly p(static_cast<size_t>(L + 1), 0);
  p[0] = 1;
  return p;
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; i + j < r.size() && j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// Power-series inverse by long division; a[0] must be nonzero.
inline Poly inv(const Poly& a) {
  Poly r(a.size(), 0);
  r[0] = 1 / a[0];
  for (size_t n = 1; n < a.size(); ++n) {
    mpq_class s = 0;
    for (size_t j = 1; j <= n; ++j) s += a[j] * r[n - j];
    r[n] = -s / a[0];
  }
  return r;
}

/// Multiplies by (1 + s q^e) for e >= 0 by direct convolution.
inline Poly times_binomial(const Poly& a, const mpq_class& s, int e) {
  Poly b(a.size(), 0);
  b[0] += 1;
  if (static_cast<size_t>(e) < b.size()) b[static_cast<size_t>(e)] += s;
  return mul(a, b);
}

/// prod_{n in parts} (1 - q^n)^power, for positive parts <= L.
inline Poly eta_like(int L, const std::function<bool(int)>& part, int power) {
  Poly r = one(L);
  for (int n = 1; n <= L; ++n) {
    if (!part(n)) continue;
    Poly f = one(L);
    f[static_cast<size_t>(n)] = -1;
    if (power < 0) f = inv(f);
    for (int k = 0; k < (power < 0 ? -power : power); ++k) r = mul(r, f);
  }
  return r;
}

/// Number of partitions of n into parts accepted by `part` (counting
/// recursion, independent of any product expansion).
inline std::vector<mpz_class> partition_counts(int L, const std::function<bool(int)>& part, bool distinct = false) {
  std::vector<mpz_class> c(static_cast<size_t>(L + 1), 0);
  c[0] = 1;
  for (int p = 1; p <= L; ++p) {
    if (!part(p)) continue;
    if (distinct) {
      for (int n = L; n >= p; --n) c[static_cast<size_t>(n)] += c[static_cast<size_t>(n - p)];
    } else {
      for (int n = p; n <= L; ++n) c[static_cast<size_t>(n)] += c[static_cast<size_t>(n - p)];
    }
  }
  return c;
}

/// Coefficients of a library series at integer exponents 0..L (D must
/// reduce to 1 on those keys).
inline Poly from_series(const qrr::QSeries& f, int L) {
  Poly r(static_cast<size_t>(L + 1), 0);
  for (int i = 0; i <= L; ++i) {
    qrr::Coef c = f.coeff(qrr::QExp(i));
    if (c.is_zero()) continue;
    r[static_cast<size_t>(i)] = c.constant_term().rational().to_mpq();
  }
  return r;
}

inline qrr::QSeries to_series(const Poly& p, int L) {
  std::vector<qrr::QSeries::Term> t;
  for (int i = 0; i <= L && i < static_cast<int>(p.size()); ++i)
    if (p[static_cast<size_t>(i)] != 0) t.push_back({i, qrr::Coef(qrr::Rat(p[static_cast<size_t>(i)]))});
  return qrr::QSeries::from_terms(1, std::move(t), qrr::Trunc(L));
}

/// (q^b; q^b)_n as a dense polynomial truncated at L.
inline Poly poch_q(int L, int b, int n) {
  Poly r = one(L);
  for (int k = 1; k <= n; ++k) r = times_binomial(r, -1, b * k);
  return r;
}

/// q^e * p, truncated at the same length; e >= 0.
inline Poly shift(const Poly& p, int e) {
  Poly r(p.size(), 0);
  for (size_t i = 0; i + static_cast<size_t>(e) < p.size(); ++i) r[i + static_cast<size_t>(e)] = p[i];
  return r;
}

/// Brute-force sum of sign(x) q^{Q(x)} / prod_r (q^{b_r}; q^{b_r})_{x_r} over
/// the box [0, box]^k. Q must be integer valued; terms with Q > L are skipped,
/// and the caller picks a box outside of which Q exceeds L.
inline Poly brute_sum(int L, size_t k, int box, const std::function<long(const std::vector<int>&)>& Q,
                      const std::vector<int>& base, const std::function<int(const std::vector<int>&)>& sign = {}) {
  Poly total(static_cast<size_t>(L + 1), 0);
  std::vector<int> x(k, 0);
  for (;;) {
    long e = Q(x);
    if (e >= 0 && e <= L) {
      Poly d = one(L);
      for (size_t r = 0; r < k; ++r) d = mul(d, poch_q(L, base[r], x[r]));
      Poly t = shift(inv(d), static_cast<int>(e));
      int sg = sign ? sign(x) : 1;
      for (size_t i = 0; i < total.size(); ++i) total[i] += sg * t[i];
    }
    size_t r = 0;
    while (r < k && x[r] == box) x[r++] = 0;
    if (r == k) break;
    ++x[r];
  }
  return total;
}

}  // namespace oracle
