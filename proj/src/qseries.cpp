#include "qrr/qseries.hpp"

#include <algorithm>
#include <numeric>

#include "qrr/errors.hpp"

namespace qrr {

namespace {

QExp make_exp(__int128 n, __int128 d) {
  if (d == 0) throw Error("exponent with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 a = n < 0 ? -n : n, b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX) throw Error("exponent arithmetic overflow");
  return QExp(static_cast<int64_t>(n), static_cast<int64_t>(d));
}

}  // namespace

QExp::QExp(int64_t n, int64_t d) {
  if (d == 0) throw Error("exponent with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  int64_t g = std::gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  n_ = n;
  d_ = d;
}

QExp operator+(QExp a, QExp b) {
  if (a.d_ == 1 && b.d_ == 1) {
    int64_t r;
    if (!__builtin_add_overflow(a.n_, b.n_, &r)) return QExp(r);
  }
  return make_exp(static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_,
                  static_cast<__int128>(a.d_) * b.d_);
}

QExp operator-(QExp a, QExp b) { return a + (-b); }

QExp operator*(QExp a, QExp b) {
  if (a.d_ == 1 && b.d_ == 1) {
    int64_t r;
    if (!__builtin_mul_overflow(a.n_, b.n_, &r)) return QExp(r);
  }
  return make_exp(static_cast<__int128>(a.n_) * b.n_, static_cast<__int128>(a.d_) * b.d_);
}

QExp operator/(QExp a, QExp b) {
  if (b.n_ == 0) throw Error("exponent division by zero");
  return make_exp(static_cast<__int128>(a.n_) * b.d_, static_cast<__int128>(a.d_) * b.n_);
}

int64_t floor_to_int(QExp a) {
  int64_t n = a.numerator(), d = a.denominator();
  int64_t q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

int64_t ceil_to_int(QExp a) { return -floor_to_int(-a); }

std::string exp_str(QExp e) {
  if (e.denominator() == 1) return std::to_string(e.numerator());
  return std::to_string(e.numerator()) + "/" + std::to_string(e.denominator());
}

QExp parse_exp(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return QExp(static_cast<int64_t>(std::stoll(s)));
    int64_t d = static_cast<int64_t>(std::stoll(s.substr(slash + 1)));
    if (d == 0) throw ParseError("zero denominator in exponent '" + s + "'");
    return QExp(static_cast<int64_t>(std::stoll(s.substr(0, slash))), d);
  } catch (const std::logic_error&) {
    throw ParseError("bad exponent '" + s + "'");
  }
}

namespace {

std::vector<QSeries::Term> merge_sorted(std::vector<QSeries::Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<QSeries::Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
      if (out.back().second.is_zero()) out.pop_back();
    } else if (!t.second.is_zero()) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

int64_t lcm64(int64_t a, int64_t b) { return std::lcm(a, b); }

}  // namespace

QSeries QSeries::zero(Trunc N, int64_t D) {
  QSeries s;
  s.D_ = D;
  s.N_ = N;
  return s;
}

QSeries QSeries::constant(const Coef& c, Trunc N) {
  QSeries s;
  s.N_ = N;
  if (!c.is_zero() && (N.is_inf() || N.value() >= 0)) s.t_.push_back({0, c});
  return s;
}

QSeries QSeries::monomial(const Coef& c, QExp e, Trunc N) {
  QSeries s;
  s.D_ = e.denominator();
  s.N_ = N;
  if (!c.is_zero() && (N.is_inf() || e <= N.value())) s.t_.push_back({e.numerator(), c});
  return s;
}

QSeries QSeries::from_terms(int64_t D, std::vector<Term> terms, Trunc N, int pcap) {
  if (D <= 0) throw BadParameters("series denominator must be positive");
  QSeries s;
  s.D_ = D;
  s.N_ = N;
  s.pcap_ = pcap;
  if (pcap < kNoParamCap)
    for (auto& t : terms) t.second = t.second.truncated(pcap);
  s.t_ = merge_sorted(std::move(terms));
  if (!N.is_inf()) {
    int64_t lim = N.key_limit(D);
    while (!s.t_.empty() && s.t_.back().first > lim) s.t_.pop_back();
  }
  return s;
}

std::optional<QExp> QSeries::valuation() const {
  if (t_.empty()) return std::nullopt;
  return QExp(t_.front().first, D_);
}

std::optional<int64_t> QSeries::valuation_key() const {
  if (t_.empty()) return std::nullopt;
  return t_.front().first;
}

Coef QSeries::coeff_key(int64_t k) const {
  auto it = std::lower_bound(t_.begin(), t_.end(), k, [](const Term& t, int64_t v) { return t.first < v; });
  if (it != t_.end() && it->first == k) return it->second;
  return Coef();
}

Coef QSeries::coeff(QExp e) const {
  QExp k = e * QExp(D_);
  if (k.denominator() != 1) return Coef();
  return coeff_key(k.numerator());
}

uint32_t QSeries::conductor() const {
  uint32_t m = 1;
  for (const auto& t : t_) m = std::lcm(m, t.second.conductor());
  return m;
}

int QSeries::max_param_exp() const {
  int r = 0;
  for (const auto& t : t_) r = std::max(r, t.second.max_param_exp());
  return r;
}

QSeries QSeries::with_denom(int64_t D2) const {
  if (D2 == D_) return *this;
  if (D2 <= 0 || D2 % D_ != 0) throw DenominatorMismatch("cannot move denominator " + std::to_string(D_) + " to " + std::to_string(D2));
  QSeries s = *this;
  int64_t f = D2 / D_;
  s.D_ = D2;
  for (auto& t : s.t_) t.first *= f;
  return s;
}

QSeries QSeries::normalized() const {
  int64_t g = D_;
  for (const auto& t : t_) g = std::gcd(g, t.first);
  if (t_.empty()) g = D_;
  if (g <= 1) return *this;
  QSeries s = *this;
  s.D_ /= g;
  for (auto& t : s.t_) t.first /= g;
  return s;
}

QSeries QSeries::truncated(Trunc N) const {
  QSeries s = *this;
  if (!(N < N_)) return s;
  s.N_ = N;
  int64_t lim = N.key_limit(D_);
  while (!s.t_.empty() && s.t_.back().first > lim) s.t_.pop_back();
  return s;
}

QSeries QSeries::param_truncated(int cap) const {
  if (cap >= pcap_) return *this;
  QSeries s = *this;
  s.pcap_ = cap;
  std::vector<Term> out;
  for (auto& t : s.t_) {
    Coef c = t.second.truncated(cap);
    if (!c.is_zero()) out.push_back({t.first, std::move(c)});
  }
  s.t_ = std::move(out);
  return s;
}

QSeries QSeries::scaled(const Coef& c) const {
  QSeries s = *this;
  if (c.is_zero()) {
    s.t_.clear();
    if (N_.is_inf()) return s;
    return s;
  }
  std::vector<Term> out;
  for (const auto& t : t_) {
    Coef v = t.second.mul(c, pcap_);
    if (!v.is_zero()) out.push_back({t.first, std::move(v)});
  }
  s.t_ = std::move(out);
  return s;
}

QSeries QSeries::shifted(QExp e) const {
  int64_t D = lcm64(D_, e.denominator());
  QSeries s = with_denom(D);
  int64_t k = (e * QExp(D)).numerator();
  for (auto& t : s.t_) t.first += k;
  s.N_ = s.N_ + e;
  return s;
}

std::string QSeries::str() const {
  std::string out;
  for (const auto& [k, c] : t_) {
    std::string cs = c.str();
    bool compound = cs.find_first_of("+-", 1) != std::string::npos;
    std::string qpart;
    QExp e(k, D_);
    if (k != 0) {
      qpart = "q";
      if (e != 1) qpart += e.denominator() == 1 ? "^" + exp_str(e) : "^(" + exp_str(e) + ")";
    }
    std::string term;
    if (qpart.empty()) term = compound ? "(" + cs + ")" : cs;
    else if (cs == "1") term = qpart;
    else if (cs == "-1") term = "-" + qpart;
    else term = (compound ? "(" + cs + ")" : cs) + "*" + qpart;
    if (out.empty()) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  if (!N_.is_inf()) {
    QExp next = QExp(N_.key_limit(D_) + 1, D_);
    std::string o = "O(q^" + (next.denominator() == 1 ? exp_str(next) : "(" + exp_str(next) + ")") + ")";
    out = out.empty() ? o : out + " + " + o;
  }
  return out.empty() ? "0" : out;
}

bool operator==(const QSeries& a, const QSeries& b) {
  if (a.N_ != b.N_ || a.pcap_ != b.pcap_) return false;
  QSeries x = a.normalized(), y = b.normalized();
  if (x.t_.size() != y.t_.size()) return false;
  if (!x.t_.empty() && x.D_ != y.D_) return false;
  for (size_t i = 0; i < x.t_.size(); ++i)
    if (x.t_[i].first != y.t_[i].first || x.t_[i].second != y.t_[i].second) return false;
  return true;
}

int64_t common_denom(const QSeries& f, const QSeries& g) { return lcm64(f.denom(), g.denom()); }

QSeries qs_add(const QSeries& f0, const QSeries& g0) {
  int64_t D = common_denom(f0, g0);
  QSeries f = f0.with_denom(D), g = g0.with_denom(D);
  Trunc N = min(f.trunc(), g.trunc());
  int cap = std::min(f.pcap(), g.pcap());
  std::vector<QSeries::Term> terms;
  terms.reserve(f.terms().size() + g.terms().size());
  for (const auto& t : f.terms()) terms.push_back(t);
  for (const auto& t : g.terms()) terms.push_back(t);
  return QSeries::from_terms(D, std::move(terms), N, cap);
}

QSeries qs_neg(const QSeries& f) { return f.scaled(Coef(-1)); }

QSeries qs_sub(const QSeries& f, const QSeries& g) { return qs_add(f, qs_neg(g)); }

QSeries qs_mul(const QSeries& f, const QSeries& g) {
  if (f.denom() != g.denom())
    throw DenominatorMismatch("qs_mul: denominators " + std::to_string(f.denom()) + " and " + std::to_string(g.denom()));
  int64_t D = f.denom();
  auto v1 = f.valuation(), v2 = g.valuation();
  Trunc N = Trunc::infinite();
  if (!f.trunc().is_inf() && v2) N = min(N, f.trunc() + *v2);
  if (!g.trunc().is_inf() && v1) N = min(N, g.trunc() + *v1);
  if (!f.trunc().is_inf() && !g.trunc().is_inf()) N = min(N, f.trunc() + g.trunc().value());
  int cap = std::min(f.pcap(), g.pcap());
  if (f.empty() || g.empty()) return QSeries::from_terms(D, {}, N, cap);
  int64_t base = f.terms().front().first + g.terms().front().first;
  int64_t lim = N.is_inf() ? f.terms().back().first + g.terms().back().first : N.key_limit(D);
  if (lim < base) return QSeries::from_terms(D, {}, N, cap);
  std::vector<Coef> acc(static_cast<size_t>(lim - base + 1));
  for (const auto& [k1, c1] : f.terms()) {
    if (k1 + g.terms().front().first > lim) break;
    for (const auto& [k2, c2] : g.terms()) {
      int64_t k = k1 + k2;
      if (k > lim) break;
      acc[static_cast<size_t>(k - base)].add_mul(c1, c2, cap);
    }
  }
  std::vector<QSeries::Term> terms;
  for (size_t i = 0; i < acc.size(); ++i)
    if (!acc[i].is_zero()) terms.push_back({base + static_cast<int64_t>(i), std::move(acc[i])});
  return QSeries::from_terms(D, std::move(terms), N, cap);
}

QSeries operator*(const QSeries& f, const QSeries& g) {
  int64_t D = common_denom(f, g);
  return qs_mul(f.with_denom(D), g.with_denom(D));
}

QSeries qs_inv(const QSeries& f) {
  if (f.empty()) throw NotInvertible("inverse of a series with no known nonzero term");
  int64_t D = f.denom();
  int64_t v = f.terms().front().first;
  Coef lead_inv = coef_inv(f.terms().front().second);
  int cap = f.pcap();
  if (f.terms().size() == 1) {
    Trunc N = f.trunc().is_inf() ? Trunc::infinite() : Trunc(f.trunc().value() - QExp(2 * v, D));
    return QSeries::from_terms(D, {{-v, lead_inv}}, N, cap);
  }
  if (f.trunc().is_inf())
    throw NonTruncating("inverse of an exact non-monomial series needs a truncation order");
  Trunc N(f.trunc().value() - QExp(2 * v, D));
  int64_t lim = N.key_limit(D);
  int64_t len = lim + v + 1;  // relative indices 0..lim+v
  if (len <= 0) return QSeries::from_terms(D, {}, N, cap);
  // h = f / (lead q^v), keyed relative to v.
  std::vector<std::pair<int64_t, Coef>> h;
  for (size_t i = 1; i < f.terms().size(); ++i) {
    int64_t j = f.terms()[i].first - v;
    if (j >= len) break;
    h.push_back({j, f.terms()[i].second.mul(lead_inv, cap)});
  }
  std::vector<Coef> g(static_cast<size_t>(len));
  g[0] = Coef(1);
  for (int64_t n = 1; n < len; ++n) {
    Coef acc;
    for (const auto& [j, hj] : h) {
      if (j > n) break;
      acc.add_mul(hj, g[static_cast<size_t>(n - j)], cap, true);
    }
    g[static_cast<size_t>(n)] = std::move(acc);
  }
  std::vector<QSeries::Term> terms;
  for (int64_t n = 0; n < len; ++n) {
    if (g[static_cast<size_t>(n)].is_zero()) continue;
    terms.push_back({n - v, g[static_cast<size_t>(n)].mul(lead_inv, cap)});
  }
  return QSeries::from_terms(D, std::move(terms), N, cap);
}

QSeries qs_rescale(const QSeries& f, QExp r) {
  if (r <= 0) throw BadParameters("rescale factor must be positive");
  int64_t p = r.numerator(), s = r.denominator();
  std::vector<QSeries::Term> terms = f.terms();
  for (auto& t : terms) t.first *= p;
  Trunc N = f.trunc().is_inf() ? Trunc::infinite() : Trunc(f.trunc().value() * r);
  return QSeries::from_terms(f.denom() * s, std::move(terms), N, f.pcap()).normalized();
}

QSeries qs_subst_sign(const QSeries& f0) {
  QSeries f = f0.normalized();
  if (f.denom() != 1) throw FractionalExponent("q -> -q needs integer exponents");
  std::vector<QSeries::Term> terms = f.terms();
  for (auto& t : terms)
    if (t.first % 2 != 0) t.second = -t.second;
  return QSeries::from_terms(1, std::move(terms), f.trunc(), f.pcap());
}

QSeries param_subst(const QSeries& f, char p, const CycloRat& c, QExp e, bool* lowered) {
  auto idx = param_index(p);
  if (!idx) throw BadParameters(std::string("unknown parameter '") + p + "'");
  int pi = *idx;
  int kmax = 0;
  for (const auto& t : f.terms())
    for (const auto& ct : t.second.terms()) kmax = std::max(kmax, mono_exp(ct.mono, pi));
  if (f.pcap() < kNoParamCap && kmax > 0)
    throw BadParameters("cannot substitute into a parameter-truncated series");
  int64_t D = lcm64(f.denom(), e.denominator());
  int64_t scale = D / f.denom();
  int64_t step = (e * QExp(D)).numerator();
  std::vector<CycloRat> pw{CycloRat(1)};
  for (int k = 1; k <= kmax; ++k) pw.push_back(pw.back() * c);
  std::vector<QSeries::Term> terms;
  for (const auto& t : f.terms()) {
    for (const auto& ct : t.second.terms()) {
      int k = mono_exp(ct.mono, pi);
      Mono rest = ct.mono & ~mono_var(pi, 0xff);
      terms.push_back({t.first * scale + step * k, Coef::monomial(rest, ct.c * pw[static_cast<size_t>(k)])});
    }
  }
  Trunc N = f.trunc();
  if (e < 0 && kmax > 0 && !N.is_inf()) N = Trunc(N.value() + e * QExp(kmax));
  if (lowered) *lowered = (e < 0 && kmax > 0 && !f.trunc().is_inf());
  return QSeries::from_terms(D, std::move(terms), N, f.pcap());
}

QSeries qs_pow(const QSeries& f, int64_t n) {
  if (n < 0) return qs_pow(qs_inv(f), -n);
  QSeries r = QSeries::constant(Coef(1)).with_denom(f.denom());
  QSeries base = f;
  while (n > 0) {
    if (n & 1) r = qs_mul(r, base);
    n >>= 1;
    if (n) base = qs_mul(base, base);
  }
  return r;
}

std::optional<QExp> first_mismatch(const QSeries& f0, const QSeries& g0, QExp N) {
  if (f0.trunc() < Trunc(N) || g0.trunc() < Trunc(N))
    throw Error("comparison to order " + exp_str(N) + " but operands are known only to " + f0.trunc().str() +
                " and " + g0.trunc().str());
  int cap = std::min(f0.pcap(), g0.pcap());
  int64_t D = common_denom(f0, g0);
  QSeries f = f0.with_denom(D).param_truncated(cap), g = g0.with_denom(D).param_truncated(cap);
  int64_t lim = Trunc(N).key_limit(D);
  size_t i = 0, j = 0;
  const auto& a = f.terms();
  const auto& b = g.terms();
  while (i < a.size() || j < b.size()) {
    int64_t ka = i < a.size() ? a[i].first : INT64_MAX;
    int64_t kb = j < b.size() ? b[j].first : INT64_MAX;
    int64_t k = std::min(ka, kb);
    if (k > lim) break;
    if (ka != kb) return QExp(k, D);
    if (a[i].second != b[j].second) return QExp(k, D);
    ++i;
    ++j;
  }
  return std::nullopt;
}

}  // namespace qrr
