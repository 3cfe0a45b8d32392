#include "qrr/qfactors.hpp"

#include <numeric>

#include "qrr/errors.hpp"

namespace qrr {

int64_t PochArg::denom() const { return std::lcm(offset.denominator(), base.denominator()); }

namespace {

int64_t key_of(QExp e, int64_t D) {
  QExp k = e * QExp(D);
  if (k.denominator() != 1) throw DenominatorMismatch("exponent " + exp_str(e) + " is not a multiple of 1/" + std::to_string(D));
  return k.numerator();
}

}  // namespace

void append_poch_bins(const PochArg& arg, std::optional<int64_t> n, int power, int64_t D, int64_t budget,
                      std::vector<Binomial>& out) {
  if (!(arg.base > 0)) throw BadParameters("Pochhammer base must be positive");
  if (power == 0) return;
  Coef x = arg.x();
  int64_t c = key_of(arg.offset, D), d = key_of(arg.base, D);
  if (!n) {
    for (int64_t e = c; e <= budget || e < 0; e += d) out.push_back({x, e, power});
    return;
  }
  if (*n >= 0) {
    for (int64_t j = 0; j < *n; ++j) out.push_back({x, c + d * j, power});
  } else {
    for (int64_t j = 1; j <= -*n; ++j) out.push_back({x, c - d * j, -power});
  }
}

int64_t poch_negative_keys(const PochArg& arg, std::optional<int64_t> n, int power, int64_t D, int pcap) {
  int64_t c = key_of(arg.offset, D), d = key_of(arg.base, D);
  bool param = arg.mono != 0;
  int64_t s = 0;
  auto take = [&](int64_t e, int p) {
    if (e >= 0) return;
    if (p > 0) s += e * p;
    else if (param && pcap < kNoParamCap) s += e * pcap * (-p);
  };
  if (!n) {
    for (int64_t e = c; e < 0; e += d) take(e, power);
  } else if (*n >= 0) {
    for (int64_t j = 0; j < *n; ++j) take(c + d * j, power);
  } else {
    for (int64_t j = 1; j <= -*n; ++j) take(c - d * j, -power);
  }
  return s;
}

QSeries poch_finite(const PochArg& arg, int64_t n, Trunc N, int pcap) {
  int64_t D = arg.denom();
  std::vector<Binomial> bins;
  append_poch_bins(arg, n, 1, D, 0, bins);
  return binomial_product(Coef(1), 0, bins, D, N, pcap).normalized();
}

QSeries poch_inf(const PochArg& arg, Trunc N, int pcap) {
  if (N.is_inf()) throw NonTruncating("infinite product needs a finite order");
  int64_t D = arg.denom();
  int64_t budget = N.key_limit(D) - poch_negative_keys(arg, std::nullopt, 1, D, pcap);
  std::vector<Binomial> bins;
  append_poch_bins(arg, std::nullopt, 1, D, budget, bins);
  return binomial_product(Coef(1), 0, bins, D, N, pcap).normalized();
}

QSeries qbinom(int64_t n, int64_t m, QExp d) {
  if (!(d > 0)) throw BadParameters("q-binomial base must be positive");
  if (m < 0 || m > n) return QSeries();
  int64_t D = d.denominator(), step = d.numerator();
  m = std::min(m, n - m);
  // row[j] holds [nn j] in plain q as an integer polynomial.
  std::vector<std::vector<Rat>> row(static_cast<size_t>(m + 1));
  row[0] = {Rat(1)};
  for (int64_t nn = 1; nn <= n; ++nn) {
    for (int64_t j = std::min(nn, m); j >= 1; --j) {
      // [nn j] = [nn-1 j-1] + q^j [nn-1 j]
      const auto& a = row[static_cast<size_t>(j - 1)];
      const auto& b = row[static_cast<size_t>(j)];
      std::vector<Rat> r(std::max(a.size(), b.empty() ? 0 : b.size() + static_cast<size_t>(j)));
      for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
      for (size_t i = 0; i < b.size(); ++i) r[i + static_cast<size_t>(j)] += b[i];
      row[static_cast<size_t>(j)] = std::move(r);
    }
  }
  std::vector<QSeries::Term> terms;
  const auto& p = row[static_cast<size_t>(m)];
  for (size_t i = 0; i < p.size(); ++i)
    if (!p[i].is_zero()) terms.push_back({static_cast<int64_t>(i) * step, Coef(p[i])});
  return QSeries::from_terms(D, std::move(terms)).normalized();
}

QSeries rogers_szego(int64_t n, const Coef& tc, QExp te, QExp d) {
  if (n < 0) throw BadParameters("Rogers-Szego degree must be nonnegative");
  QSeries sum;
  Coef tpow(1);
  for (int64_t j = 0; j <= n; ++j) {
    QSeries term = qbinom(n, j, d).scaled(tpow).shifted(te * QExp(j));
    sum = qs_add(sum, term);
    tpow = tpow.mul(tc);
  }
  return sum.normalized();
}

ZQSeries jtp_kernel(Trunc N) {
  if (N.is_inf()) throw NonTruncating("theta kernel needs a finite order");
  int64_t L = N.key_limit(1);
  std::map<int64_t, QSeries> coeffs;
  int64_t lo = 1, hi = 0;
  // (n^2-n)/2 is symmetric about n = 1/2: n and 1-n give the same exponent.
  for (int64_t n = 0; n * (n - 1) / 2 <= L; ++n) {
    int64_t e = n * (n - 1) / 2;
    for (int64_t m : {n, 1 - n}) {
      if (coeffs.count(m)) continue;
      coeffs.emplace(m, QSeries::monomial(Coef(m % 2 == 0 ? 1 : -1), QExp(e), N));
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  }
  int64_t nxt = hi + 1;
  Trunc bound(QExp(nxt * (nxt - 1) / 2));
  return ZQSeries(std::move(coeffs), lo, hi, N, bound);
}

}  // namespace qrr
