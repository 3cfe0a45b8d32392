#include "qrr/ctkit.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qrr/errors.hpp"

namespace qrr {

CtFactor CtFactor::euler(const PochArg& x, int64_t s) { return {Kind::Euler, x, s}; }
CtFactor CtFactor::inv_euler(const PochArg& x, int64_t s) { return {Kind::InvEuler, x, s}; }

CtFactor CtFactor::theta(QExp d, const CycloRat& c, int64_t beta, QExp gamma) {
  PochArg a;
  a.scalar = c;
  a.offset = gamma;
  a.base = d;
  return {Kind::Theta, a, beta};
}

QExp CtFactor::exponent(int64_t n) const {
  QExp lin = arg.offset * QExp(n);
  if (kind == Kind::InvEuler) return lin;
  return arg.base * QExp(n * (n - 1) / 2) + lin;
}

std::string CtFactor::str() const {
  std::ostringstream os;
  std::string zs = zpow == 1 ? "z" : "z^" + std::to_string(zpow);
  switch (kind) {
    case Kind::Euler:
      os << "(" << render(arg) << "*" << zs << ";q^" << exp_str(arg.base) << ")_oo";
      break;
    case Kind::InvEuler:
      os << "1/(" << render(arg) << "*" << zs << ";q^" << exp_str(arg.base) << ")_oo";
      break;
    case Kind::Theta:
      os << "theta[q^" << exp_str(arg.base) << "](" << arg.scalar.str() << "*" << zs << "*q^" << exp_str(arg.offset)
         << ")";
      break;
  }
  return os.str();
}

namespace {

using Bound = std::optional<int64_t>;

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

void validate(const CtFactor& f) {
  if (!(f.arg.base > QExp(0))) throw BadParameters("constant-term factor needs a positive base");
  if (f.kind == CtFactor::Kind::Theta) {
    if (f.arg.mono != 0) throw BadParameters("theta kernel takes no parameters");
    if (f.zpow == 0) throw BadParameters("theta kernel needs a nonzero z-power");
  }
  if (f.arg.scalar.is_zero()) throw BadParameters("constant-term factor with zero argument");
}

bool grows_up(const CtFactor& f) { return f.kind != CtFactor::Kind::InvEuler || f.arg.offset > QExp(0); }
bool grows_down(const CtFactor& f) { return f.kind != CtFactor::Kind::InvEuler || f.arg.offset < QExp(0); }

/// Minimum of the (convex) exponent over the window; nullopt if unbounded.
std::optional<QExp> min_exponent(const CtFactor& f, const IndexWindow& w) {
  if (w.empty()) return std::nullopt;
  std::vector<int64_t> cand;
  if (f.kind == CtFactor::Kind::InvEuler) {
    QExp e = f.arg.offset;
    if (e > QExp(0) || e == QExp(0)) {
      if (!w.lo) return std::nullopt;
      cand.push_back(*w.lo);
    } else {
      if (!w.hi) return std::nullopt;
      cand.push_back(*w.hi);
    }
  } else {
    // Vertex of d n(n-1)/2 + e n sits at 1/2 - e/d.
    QExp v = QExp(1, 2) - f.arg.offset / f.arg.base;
    for (int64_t n : {floor_to_int(v), ceil_to_int(v)}) {
      if (w.lo) n = std::max(n, *w.lo);
      if (w.hi) n = std::min(n, *w.hi);
      cand.push_back(n);
    }
  }
  QExp m = f.exponent(cand[0]);
  for (int64_t n : cand) m = std::min(m, f.exponent(n));
  return m;
}

/// Shrinks w to the indices with exponent <= T. Convexity makes that set an
/// interval, found by doubling and bisection from its minimiser.
IndexWindow prune(const CtFactor& f, IndexWindow w, QExp T) {
  if (w.empty()) return w;
  auto m = min_exponent(f, w);
  if (m && *m > T) return IndexWindow{0, -1};
  // A feasible starting point.
  int64_t start;
  if (f.kind == CtFactor::Kind::InvEuler) {
    if (f.arg.offset > QExp(0) || f.arg.offset == QExp(0)) start = *w.lo;
    else if (w.hi) start = *w.hi;
    else return w;
  } else {
    QExp v = QExp(1, 2) - f.arg.offset / f.arg.base;
    start = floor_to_int(v);
    if (w.lo) start = std::max(start, *w.lo);
    if (w.hi) start = std::min(start, *w.hi);
    if (f.exponent(start) > T) {
      start = ceil_to_int(v);
      if (w.lo) start = std::max(start, *w.lo);
      if (w.hi) start = std::min(start, *w.hi);
    }
  }
  if (f.exponent(start) > T) return IndexWindow{0, -1};
  auto search = [&](int dir, Bound limit, bool grows) -> Bound {
    int64_t good = start, step = 1;
    int64_t far;
    // Double until infeasible or the window edge.
    for (;;) {
      int64_t probe = good + dir * step;
      if (limit && (dir > 0 ? probe > *limit : probe < *limit)) {
        if (f.exponent(*limit) <= T) return limit;
        far = *limit;
        break;
      }
      if (f.exponent(probe) > T) {
        far = probe;
        break;
      }
      good = probe;
      if (!grows && step > (int64_t{1} << 40)) return std::nullopt;
      step *= 2;
    }
    while ((far - good) * dir > 1) {
      int64_t mid = good + (far - good) / 2;
      if (f.exponent(mid) <= T) good = mid;
      else far = mid;
    }
    return good;
  };
  IndexWindow r = w;
  if (grows_up(f) || w.hi) r.hi = search(+1, w.hi, grows_up(f));
  if (grows_down(f) || w.lo) r.lo = search(-1, w.lo, grows_down(f));
  return r;
}

/// n_f ranges allowed by sum_g zpow_g n_g = 0 given the other windows.
IndexWindow balance(const std::vector<CtFactor>& fs, const std::vector<IndexWindow>& ws, size_t f) {
  int64_t s = fs[f].zpow;
  if (s == 0) return ws[f];
  // Range of sum_{g != f} zpow_g n_g.
  Bound lo = 0, hi = 0;
  for (size_t g = 0; g < fs.size(); ++g) {
    if (g == f || fs[g].zpow == 0) continue;
    int64_t t = fs[g].zpow;
    Bound a = ws[g].lo ? Bound(t * *ws[g].lo) : std::nullopt;
    Bound b = ws[g].hi ? Bound(t * *ws[g].hi) : std::nullopt;
    if (t < 0) std::swap(a, b);
    lo = (lo && a) ? Bound(*lo + *a) : std::nullopt;
    hi = (hi && b) ? Bound(*hi + *b) : std::nullopt;
  }
  // s n_f lies in [-hi, -lo].
  Bound rlo = hi ? Bound(-*hi) : std::nullopt, rhi = lo ? Bound(-*lo) : std::nullopt;
  IndexWindow r = ws[f];
  Bound nlo, nhi;
  if (s > 0) {
    if (rlo) nlo = ceil_div(*rlo, s);
    if (rhi) nhi = floor_div(*rhi, s);
  } else {
    if (rhi) nlo = ceil_div(*rhi, s);
    if (rlo) nhi = floor_div(*rlo, s);
  }
  if (nlo && (!r.lo || *nlo > *r.lo)) r.lo = nlo;
  if (nhi && (!r.hi || *nhi < *r.hi)) r.hi = nhi;
  return r;
}

bool same(const IndexWindow& a, const IndexWindow& b) { return a.lo == b.lo && a.hi == b.hi; }

}  // namespace

std::vector<IndexWindow> ct_windows(const std::vector<CtFactor>& fs, QExp N, int M) {
  std::vector<IndexWindow> ws;
  for (const auto& f : fs) {
    validate(f);
    IndexWindow w;
    if (!f.bilateral()) w.lo = 0;
    if (f.arg.mono != 0) {
      int deg = mono_max_exp(f.arg.mono);
      w.hi = M / deg;
    }
    ws.push_back(w);
  }
  for (int iter = 0; iter < 100000; ++iter) {
    bool changed = false;
    for (const auto& w : ws)
      if (w.empty()) {
        for (auto& x : ws) x = IndexWindow{0, -1};
        return ws;
      }
    std::vector<std::optional<QExp>> mins;
    for (size_t f = 0; f < fs.size(); ++f) mins.push_back(min_exponent(fs[f], ws[f]));
    for (size_t f = 0; f < fs.size(); ++f) {
      QExp T = N;
      bool bounded = true;
      for (size_t g = 0; g < fs.size() && bounded; ++g) {
        if (g == f) continue;
        if (!mins[g]) bounded = false;
        else T -= *mins[g];
      }
      IndexWindow w = ws[f];
      if (bounded) w = prune(fs[f], w, T);
      w = balance(fs, [&] { auto c = ws; c[f] = w; return c; }(), f);
      if (!same(w, ws[f])) {
        ws[f] = w;
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (size_t f = 0; f < fs.size(); ++f)
    if (!ws[f].finite())
      throw WindowMiss("index window of factor " + fs[f].str() + " is not finite at order " + exp_str(N));
  return ws;
}

ZQSeries factor_series(const CtFactor& f, const IndexWindow& w, Trunc N, int M) {
  if (N.is_inf()) throw NonTruncating("constant-term factors need a finite order");
  if (w.empty()) return ZQSeries({}, 0, -1, N, Trunc::infinite());
  if (!w.finite()) throw WindowMiss("factor " + f.str() + " has an infinite window");
  int64_t D = f.arg.denom();
  auto mexp = min_exponent(f, w);
  QExp need = N.value() - *mexp;  // order the 1/(q^d;q^d)_n part needs
  std::map<int64_t, QSeries> coeffs;
  bool has_denominator = f.kind != CtFactor::Kind::Theta;
  // Running 1/(q^d;q^d)_n, known to order `need`.
  QSeries recip = QSeries::constant(Coef(1), Trunc(need));
  int64_t built = 0;
  // (-1)^n for Euler and Theta, 1 for InvEuler.
  CycloRat step = f.kind == CtFactor::Kind::InvEuler ? f.arg.scalar : -f.arg.scalar;
  Coef x = Coef::monomial(f.arg.mono, CycloRat(1));
  for (int64_t n = *w.lo; n <= *w.hi; ++n) {
    QExp e = f.exponent(n);
    if (e > N.value()) continue;
    QSeries c = QSeries::constant(Coef(1), Trunc(need));
    if (has_denominator) {
      for (; built < n; ++built) {
        QExp dn = f.arg.base * QExp(built + 1);
        std::vector<QSeries::Term> geo;
        for (int64_t k = 0; QExp(k) * dn <= need; ++k) geo.emplace_back(floor_to_int(QExp(k) * dn * QExp(D)), Coef(1));
        recip = recip * QSeries::from_terms(D, std::move(geo), Trunc(need));
      }
      c = recip;
    }
    Coef k = x.pow(n < 0 ? 0 : n, M).scaled(step.pow(n));
    if (k.is_zero()) continue;
    c = c.truncated(Trunc(N.value() - e)).shifted(e).scaled(k).param_truncated(M);
    coeffs.emplace(f.zpow * n, c.truncated(N));
  }
  int64_t z0 = f.zpow * *w.lo, z1 = f.zpow * *w.hi;
  if (z0 > z1) std::swap(z0, z1);
  // Entries that were never stored are zero to order N.
  for (int64_t n = *w.lo; n <= *w.hi; ++n)
    if (!coeffs.count(f.zpow * n)) coeffs.emplace(f.zpow * n, QSeries::zero(N, D));
  return ZQSeries(std::move(coeffs), z0, z1, N, Trunc::infinite());
}

QSeries run_ct(const CtScript& script, QExp N, int M) {
  QExp prefactor_val = script.prefactor.shift;
  QExp ct_order = N - std::min(QExp(0), prefactor_val);
  std::vector<IndexWindow> ws = ct_windows(script.factors, ct_order, M);
  size_t r = script.factors.size();
  std::vector<QExp> mins(r, QExp(0));
  bool empty = false;
  for (size_t f = 0; f < r; ++f) {
    if (ws[f].empty()) empty = true;
    else mins[f] = *min_exponent(script.factors[f], ws[f]);
  }
  QSeries ct;
  QExp total_min{0};
  if (empty) {
    ct = QSeries::zero(Trunc(ct_order));
  } else {
    ZQSeries prod = ZQSeries::from_q(QSeries::constant(Coef(1), Trunc::infinite()));
    for (size_t f = 0; f < r; ++f) {
      QExp nf = ct_order;
      for (size_t g = 0; g < r; ++g)
        if (g != f) nf -= mins[g];
      prod = zq_mul(prod, factor_series(script.factors[f], ws[f], Trunc(nf), M));
    }
    for (QExp m : mins) total_min += m;
    prod = prod.truncated(Trunc(ct_order));
    ct = zq_ct(prod).param_truncated(M);
  }
  QExp pre_order = N - std::min(QExp(0), total_min);
  QSeries pre = eval_product(script.prefactor, Trunc(pre_order), M);
  return (pre * ct).param_truncated(M).truncated(Trunc(N)).normalized();
}

CtReport check_ct_equals_sum(const CtScript& script, QExp N, int M) {
  CtReport rep;
  rep.name = script.name;
  rep.order = N;
  try {
    rep.ct = run_ct(script, N, M);
    rep.target = eval_side(script.target, N, M);
  } catch (const Error& e) {
    rep.error = e.what();
    return rep;
  }
  rep.mismatch = first_mismatch(rep.ct, rep.target, N);
  rep.pass = !rep.mismatch;
  return rep;
}

CtScript specialize(const CtScript& s, char p, const CycloRat& c, QExp e) {
  CtScript r = s;
  r.prefactor = specialize(s.prefactor, p, c, e);
  for (auto& f : r.factors)
    if (f.kind != CtFactor::Kind::Theta) f.arg = specialize(f.arg, p, c, e);
  r.target = specialize(s.target, p, c, e);
  return r;
}

}  // namespace qrr
