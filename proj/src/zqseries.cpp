#include "qrr/zqseries.hpp"

#include <algorithm>
#include <numeric>

#include "qrr/errors.hpp"

namespace qrr {

namespace {

Trunc tsum(Trunc a, Trunc b) {
  if (a.is_inf() || b.is_inf()) return Trunc::infinite();
  return Trunc(a.value() + b.value());
}

std::optional<Trunc> osum(const std::optional<Trunc>& a, const std::optional<Trunc>& b) {
  // An exactly-zero operand wins over an unbounded one.
  if ((a && a->is_inf()) || (b && b->is_inf())) return Trunc::infinite();
  if (!a || !b) return std::nullopt;
  return tsum(*a, *b);
}

std::optional<Trunc> omin(const std::optional<Trunc>& a, const std::optional<Trunc>& b) {
  if (!a || !b) return std::nullopt;
  return min(*a, *b);
}

// Strictly above N (never true for infinite N unless the bound is infinite).
bool above(const std::optional<Trunc>& v, Trunc N) {
  if (!v) return false;
  if (v->is_inf()) return true;
  if (N.is_inf()) return false;
  return N < *v;
}

// Valuation lower bound of one stored coefficient.
Trunc coeff_val(const QSeries& s) {
  if (!s.empty()) return Trunc(*s.valuation());
  if (s.trunc().is_inf()) return Trunc::infinite();
  return Trunc(QExp(s.trunc().key_limit(s.denom()) + 1, s.denom()));
}

}  // namespace

ZQSeries::ZQSeries(std::map<int64_t, QSeries> coeffs, int64_t wmin, int64_t wmax, Trunc N,
                   std::optional<Trunc> outside)
    : wmin_(wmin), wmax_(wmax), N_(N), outside_(outside) {
  int64_t D = 1;
  for (const auto& [w, s] : coeffs) {
    if (w < wmin || w > wmax) continue;
    if (s.trunc() < N)
      throw Error("z-coefficient known only to order " + s.trunc().str() + ", below " + N.str());
    D = std::lcm(D, s.denom());
  }
  D_ = D;
  for (auto& [w, s] : coeffs) {
    if (w < wmin || w > wmax) continue;
    QSeries t = s.with_denom(D).truncated(N);
    if (!t.empty()) c_.emplace(w, std::move(t));
  }
}

ZQSeries ZQSeries::from_q(const QSeries& f) {
  std::map<int64_t, QSeries> m;
  m.emplace(0, f);
  return ZQSeries(std::move(m), 0, 0, f.trunc(), Trunc::infinite());
}

ZQSeries ZQSeries::monomial(const QSeries& c, int64_t w) {
  std::map<int64_t, QSeries> m;
  m.emplace(w, c);
  return ZQSeries(std::move(m), w, w, c.trunc(), Trunc::infinite());
}

bool ZQSeries::outside_vanishes() const { return above(outside_, N_); }

QSeries ZQSeries::coeff(int64_t w) const {
  if (!complete_at(w))
    throw WindowMiss("z^" + std::to_string(w) + " lies outside the complete window [" + std::to_string(wmin_) + ", " +
                     std::to_string(wmax_) + "]");
  auto it = c_.find(w);
  if (it != c_.end()) return it->second;
  return QSeries::zero(N_, D_);
}

std::optional<Trunc> ZQSeries::min_valuation() const {
  std::optional<Trunc> v = outside_;
  if (!v) return std::nullopt;
  if (!window_empty() && !N_.is_inf()) {
    // Window slots with no stored coefficient are zero to order N.
    int64_t stored = static_cast<int64_t>(c_.size());
    if (stored < wmax_ - wmin_ + 1) v = min(*v, Trunc(QExp(N_.key_limit(D_) + 1, D_)));
  }
  for (const auto& [w, s] : c_) v = min(*v, coeff_val(s));
  return v;
}

ZQSeries ZQSeries::truncated(Trunc N) const {
  if (!(N < N_)) return *this;
  ZQSeries r = *this;
  r.N_ = N;
  r.c_.clear();
  for (const auto& [w, s] : c_) {
    QSeries t = s.truncated(N);
    if (!t.empty()) r.c_.emplace(w, std::move(t));
  }
  return r;
}

ZQSeries ZQSeries::scaled(const Coef& c) const {
  ZQSeries r = *this;
  r.c_.clear();
  for (const auto& [w, s] : c_) {
    QSeries t = s.scaled(c);
    if (!t.empty()) r.c_.emplace(w, std::move(t));
  }
  if (c.is_zero()) r.outside_ = Trunc::infinite();
  return r;
}

ZQSeries zq_add(const ZQSeries& f0, const ZQSeries& g0) {
  Trunc N = min(f0.trunc(), g0.trunc());
  ZQSeries f = f0.truncated(N), g = g0.truncated(N);
  bool fv = f.outside_vanishes(), gv = g.outside_vanishes();
  int64_t lo, hi;
  if (fv && gv) {
    if (f.window_empty()) { lo = g.wmin(); hi = g.wmax(); }
    else if (g.window_empty()) { lo = f.wmin(); hi = f.wmax(); }
    else { lo = std::min(f.wmin(), g.wmin()); hi = std::max(f.wmax(), g.wmax()); }
  } else if (fv) {
    lo = g.wmin(); hi = g.wmax();
  } else if (gv) {
    lo = f.wmin(); hi = f.wmax();
  } else {
    lo = std::max(f.wmin(), g.wmin()); hi = std::min(f.wmax(), g.wmax());
  }
  std::map<int64_t, QSeries> out;
  for (const auto* src : {&f, &g}) {
    for (const auto& [w, s] : src->coeffs()) {
      if (w < lo || w > hi) continue;
      auto it = out.find(w);
      if (it == out.end()) out.emplace(w, s);
      else it->second = qs_add(it->second, s);
    }
  }
  // Slots missing on one side are zero to order N there; adding keeps N.
  for (auto& [w, s] : out) s = s.truncated(N);
  return ZQSeries(std::move(out), lo, hi, N, omin(f.outside_bound(), g.outside_bound()));
}

ZQSeries zq_mul(const ZQSeries& f, const ZQSeries& g) {
  auto vf = f.min_valuation(), vg = g.min_valuation();
  Trunc N = tsum(f.trunc(), g.trunc());
  if (!f.trunc().is_inf()) {
    if (!vg) throw NonTruncating("product with a z-series of unbounded valuation");
    N = min(N, tsum(f.trunc(), *vg));
  }
  if (!g.trunc().is_inf()) {
    if (!vf) throw NonTruncating("product with a z-series of unbounded valuation");
    N = min(N, tsum(g.trunc(), *vf));
  }
  auto of = f.outside_bound(), og = g.outside_bound();
  if (f.window_empty() || g.window_empty()) {
    // Everything is cross terms.
    std::optional<Trunc> bound = omin(osum(of, vg), osum(og, vf));
    return ZQSeries({}, 0, -1, N, bound);
  }
  // In-window valuation minima and per-slot valuations.
  auto slot_val = [](const ZQSeries& s, int64_t w) -> Trunc {
    auto it = s.coeffs().find(w);
    if (it != s.coeffs().end()) return coeff_val(it->second);
    if (s.trunc().is_inf()) return Trunc::infinite();
    return Trunc(QExp(s.trunc().key_limit(s.denom()) + 1, s.denom()));
  };
  bool both_out_ok = above(osum(of, og), N);
  int64_t lo = f.wmin() + g.wmin(), hi = f.wmax() + g.wmax();
  std::vector<char> ok(static_cast<size_t>(hi - lo + 1), 1);
  for (int64_t w = lo; w <= hi; ++w) {
    bool good = both_out_ok;
    for (int64_t b = g.wmin(); good && b <= g.wmax(); ++b) {
      int64_t a = w - b;
      if (a >= f.wmin() && a <= f.wmax()) continue;
      if (!above(osum(of, slot_val(g, b)), N)) good = false;
    }
    for (int64_t a = f.wmin(); good && a <= f.wmax(); ++a) {
      int64_t b = w - a;
      if (b >= g.wmin() && b <= g.wmax()) continue;
      if (!above(osum(og, slot_val(f, a)), N)) good = false;
    }
    ok[static_cast<size_t>(w - lo)] = good;
  }
  // Largest run of complete exponents, preferring the one holding 0.
  int64_t best_lo = 0, best_hi = -1;
  for (int64_t w = lo; w <= hi;) {
    if (!ok[static_cast<size_t>(w - lo)]) { ++w; continue; }
    int64_t s = w;
    while (w <= hi && ok[static_cast<size_t>(w - lo)]) ++w;
    int64_t e = w - 1;
    bool has0 = s <= 0 && 0 <= e, best0 = best_lo <= 0 && 0 <= best_hi && best_lo <= best_hi;
    if (best_lo > best_hi || (has0 && !best0) || (has0 == best0 && e - s > best_hi - best_lo)) {
      best_lo = s;
      best_hi = e;
    }
  }
  int64_t D = std::lcm(f.denom(), g.denom());
  std::map<int64_t, QSeries> out;
  if (best_lo <= best_hi) {
    for (const auto& [a, fa] : f.coeffs()) {
      QSeries fa_d = fa.with_denom(D);
      for (const auto& [b, gb] : g.coeffs()) {
        int64_t w = a + b;
        if (w < best_lo || w > best_hi) continue;
        QSeries p = qs_mul(fa_d, gb.with_denom(D)).truncated(N);
        auto it = out.find(w);
        if (it == out.end()) out.emplace(w, std::move(p));
        else it->second = qs_add(it->second, p).truncated(N);
      }
    }
  }
  bool all_cross_ok = both_out_ok && above(osum(of, vg), N) && above(osum(og, vf), N);
  std::optional<Trunc> bound = all_cross_ok ? omin(osum(of, vg), osum(og, vf)) : osum(vf, vg);
  return ZQSeries(std::move(out), best_lo, best_hi, N, bound);
}

ZQSeries zq_subst(const ZQSeries& f, const CycloRat& c, int64_t beta, QExp gamma) {
  if (beta == 0) throw BadParameters("z -> z^0 is not a valid substitution");
  Trunc N = f.trunc();
  if (!f.window_empty() && !N.is_inf() && gamma != 0) {
    QExp lo = QExp(gamma < 0 ? f.wmax() : f.wmin()) * gamma;
    N = Trunc(N.value() + lo);
  }
  std::map<int64_t, QSeries> out;
  for (const auto& [w, s] : f.coeffs()) {
    QSeries t = s.scaled(Coef(c.pow(w))).shifted(gamma * QExp(w));
    out.emplace(beta * w, t.truncated(N));
  }
  int64_t lo = beta * f.wmin(), hi = beta * f.wmax();
  if (f.window_empty()) { lo = 0; hi = -1; }
  else if (lo > hi) std::swap(lo, hi);
  std::optional<Trunc> bound = f.outside_bound();
  if (bound && !bound->is_inf() && gamma != 0) bound = std::nullopt;
  return ZQSeries(std::move(out), lo, hi, N, bound);
}

QSeries zq_ct(const ZQSeries& f) { return f.coeff(0); }

}  // namespace qrr
