#include "qrr/side.hpp"

#include <numeric>

#include "qrr/errors.hpp"
#include "qrr/params.hpp"

namespace qrr {

bool has_sum(const Side& s) {
  for (const auto& t : s)
    if (t.sum) return true;
  return false;
}

int64_t side_denom(const Side& s) {
  int64_t D = 1;
  for (const auto& t : s) {
    D = std::lcm(D, t.mult.denom());
    if (t.sum) D = std::lcm(D, t.sum->denom());
  }
  return D;
}

QSeries eval_side(const Side& s, QExp N, int M, int threads) {
  QSeries total = QSeries::zero(Trunc(N));
  for (const auto& t : s) {
    if (!t.sum) {
      total = qs_add(total, eval_product(t.mult, Trunc(N), M));
      continue;
    }
    // Raise the orders by the (valuation) deficits of the other factor
    // until the product is exact to N.
    QExp np = N, ns = N;
    QSeries prod, sum;
    for (int attempt = 0; attempt < 4; ++attempt) {
      prod = eval_product(t.mult, Trunc(np), M);
      sum = eval_multisum(*t.sum, ns, M, threads);
      QSeries r = prod * sum;
      if (!(r.trunc() < Trunc(N))) {
        total = qs_add(total, r.param_truncated(M));
        break;
      }
      auto vp = prod.valuation(), vs = sum.valuation();
      if (vp && *vp < 0) ns = N - *vp;
      if (vs && *vs < 0) np = N - *vs;
      if (attempt == 3) throw NonTruncating("side term could not be made exact to order " + exp_str(N));
    }
  }
  return total.truncated(Trunc(N)).normalized();
}

namespace {

int param_or_throw(char p) {
  auto i = param_index(p);
  if (!i) throw BadParameters(std::string("unknown parameter '") + p + "'");
  return *i;
}

void check_scalar(const Coef& s, int pi) {
  for (const auto& t : s.terms())
    if (mono_exp(t.mono, pi) != 0) throw BadParameters("cannot specialise a parameter inside a scalar");
}

}  // namespace

std::optional<std::pair<uint32_t, int64_t>> as_root_of_unity(const CycloRat& c) {
  uint32_t L = std::lcm<uint32_t>(2, c.conductor());
  for (uint32_t m = 1; m <= L; ++m) {
    if (L % m != 0) continue;
    for (int64_t k = 0; k < m; ++k)
      if (std::gcd<int64_t>(k, m) == 1 || m == 1)
        if (CycloRat::root_of_unity(m, k) == c) return std::make_pair(m, k);
  }
  return std::nullopt;
}

PochArg specialize(const PochArg& a, char p, const CycloRat& c, QExp e) {
  int pi = param_or_throw(p);
  int k = mono_exp(a.mono, pi);
  if (k == 0) return a;
  PochArg r = a;
  r.mono = a.mono & ~mono_var(pi, 0xff);
  r.scalar = a.scalar * c.pow(k);
  r.offset = a.offset + QExp(k) * e;
  return r;
}

ProductExpr specialize(const ProductExpr& x, char p, const CycloRat& c, QExp e) {
  int pi = param_or_throw(p);
  check_scalar(x.scalar, pi);
  ProductExpr r = x;
  if (int k = mono_exp(x.mono, pi); k != 0) {
    r.mono = x.mono & ~mono_var(pi, 0xff);
    r.scalar = x.scalar.scaled(c.pow(k));
    r.shift = x.shift + QExp(k) * e;
  }
  for (auto& f : r.factors) f.arg = specialize(f.arg, p, c, e);
  return r;
}

MultiSumSpec specialize(const MultiSumSpec& s, char p, const CycloRat& c, QExp e) {
  int pi = param_or_throw(p);
  check_scalar(s.scalar, pi);
  MultiSumSpec r = s;
  for (auto& f : r.factors) f.arg = specialize(f.arg, p, c, e);
  LinForm L = s.param_exp[static_cast<size_t>(pi)];
  if (L.is_zero()) return r;
  r.param_exp[static_cast<size_t>(pi)] = LinForm{};
  for (size_t i = 0; i < s.rank(); ++i) r.lin[i] = r.lin[i] + QExp(L.coef(i)) * e;
  r.cst = r.cst + QExp(L.c0) * e;
  auto root = as_root_of_unity(c);
  if (!root) throw BadParameters("a summation parameter can only be specialised to a root of unity times q^e");
  auto [m, k] = *root;
  if (m == 1) return r;
  // zeta_R^S * zeta_m^(k L) = zeta_T^((T/R) S + (T/m) k L).
  uint32_t T = std::lcm(r.sign_root, m);
  int64_t fr = T / r.sign_root, fm = (T / m) * k;
  LinForm S;
  S.c.assign(s.rank(), 0);
  for (size_t i = 0; i < s.rank(); ++i) S.c[i] = ((fr * s.sign.coef(i) + fm * L.coef(i)) % T + T) % T;
  S.c0 = ((fr * s.sign.c0 + fm * L.c0) % T + T) % T;
  r.sign = S;
  r.sign_root = T;
  return r;
}

Side specialize(const Side& s, char p, const CycloRat& c, QExp e) {
  Side r;
  for (const auto& t : s) {
    SideTerm u;
    u.mult = specialize(t.mult, p, c, e);
    if (t.sum) u.sum = specialize(*t.sum, p, c, e);
    r.push_back(std::move(u));
  }
  return r;
}

}  // namespace qrr
