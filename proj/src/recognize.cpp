#include "qrr/recognize.hpp"

#include <algorithm>
#include <map>

#include "qrr/errors.hpp"

namespace qrr {

RecognizedProduct prodmake(const QSeries& f, int64_t L) {
  if (L < 1) throw BadParameters("prodmake needs L >= 1");
  if (f.max_param_exp() > 0) throw BadParameters("prodmake needs a parameter-free series");
  if (f.conductor() != 1) throw BadParameters("prodmake needs rational coefficients");
  auto v = f.valuation();
  if (!v) throw LeadingUnit("the zero series has no product form");
  RecognizedProduct rp;
  rp.C = *v;
  if (f.trunc() < Trunc(*v + QExp(L)))
    throw NonTruncating("series known to " + f.trunc().str() + ", need " + exp_str(*v + QExp(L)));

  std::vector<Rat> c(static_cast<size_t>(L + 1), Rat(0));
  for (const auto& [key, coef] : f.terms()) {
    QExp e = f.exp_of(key) - *v;
    if (e.denominator() != 1) throw NonIntegerExponent("exponent " + exp_str(e) + " after the leading term is fractional");
    if (e > QExp(L)) break;
    c[static_cast<size_t>(e.numerator())] = coef.constant_term().rational();
  }
  if (!c[0].is_one()) throw LeadingUnit("leading coefficient is " + c[0].str() + ", not 1");

  // g = q f'/f from f g = q f'.
  std::vector<Rat> g(static_cast<size_t>(L + 1), Rat(0));
  for (int64_t k = 1; k <= L; ++k) {
    Rat s = Rat(k) * c[static_cast<size_t>(k)];
    for (int64_t j = 1; j < k; ++j) s.sub_mul(c[static_cast<size_t>(j)], g[static_cast<size_t>(k - j)]);
    g[static_cast<size_t>(k)] = s;
  }
  rp.a.assign(static_cast<size_t>(L), Rat(0));
  for (int64_t k = 1; k <= L; ++k) {
    Rat s = g[static_cast<size_t>(k)];
    for (int64_t d = 1; d * 2 <= k; ++d)
      if (k % d == 0) s.add_mul(Rat(d), rp.a[static_cast<size_t>(d - 1)]);
    Rat ak = -(s / Rat(k));
    if (!ak.is_integer()) throw NonIntegerExponent("a_" + std::to_string(k) + " = " + ak.str() + " is not an integer");
    rp.a[static_cast<size_t>(k - 1)] = ak;
  }
  rp.order = L;
  return rp;
}

std::optional<int64_t> detect_period(const std::vector<Rat>& a, int64_t maxP, int64_t W) {
  if (maxP < 1) return std::nullopt;
  if (W <= 0) W = std::max<int64_t>(2 * maxP, 32);
  int64_t L = static_cast<int64_t>(a.size());
  // A short sequence is checked on all of it, still requiring two full periods.
  W = std::min(W, L);
  for (int64_t P = 1; P <= maxP && 2 * P <= W; ++P) {
    bool ok = true;
    for (int64_t n = L - W; n + P < L && ok; ++n) ok = a[static_cast<size_t>(n)] == a[static_cast<size_t>(n + P)];
    if (ok) return P;
  }
  return std::nullopt;
}

RecognizedProduct recognize(const QSeries& f, int64_t L, int64_t maxP) {
  RecognizedProduct rp = prodmake(f, L);
  rp.window = std::min<int64_t>(std::max<int64_t>(2 * maxP, 32), L);
  rp.period = detect_period(rp.a, maxP, rp.window);
  return rp;
}

namespace {

int small_power(const Rat& r) {
  if (!r.is_small() || r.small_num() > 1000 || r.small_num() < -1000)
    throw BadParameters("product exponent " + r.str() + " too large to render");
  return static_cast<int>(r.small_num());
}

}  // namespace

ProductExpr render(const RecognizedProduct& rp) {
  ProductExpr p;
  p.shift = rp.C;
  int64_t L = static_cast<int64_t>(rp.a.size());
  std::vector<int> tail;
  if (rp.period) {
    int64_t P = *rp.period;
    tail.assign(static_cast<size_t>(P), 0);
    for (int64_t n = L - P + 1; n <= L; ++n) tail[static_cast<size_t>((n - 1) % P)] = small_power(rp.a[static_cast<size_t>(n - 1)]);
    // Residues sharing an exponent go into one symbol, larger exponents first.
    std::map<int, std::vector<int64_t>, std::greater<>> by_power;
    for (int64_t r = 1; r <= P; ++r)
      if (tail[static_cast<size_t>(r - 1)] != 0) by_power[tail[static_cast<size_t>(r - 1)]].push_back(r);
    for (const auto& [e, rs] : by_power)
      for (int64_t r : rs) p.factors.push_back(inf_factor(r, P, e));
  }
  for (int64_t n = 1; n <= L; ++n) {
    int want = small_power(rp.a[static_cast<size_t>(n - 1)]);
    int have = tail.empty() ? 0 : tail[static_cast<size_t>((n - 1) % static_cast<int64_t>(tail.size()))];
    if (want == have) continue;
    PochArg x;
    x.offset = n;
    p.factors.push_back({x, int64_t{1}, want - have});
  }
  return p;
}

}  // namespace qrr
