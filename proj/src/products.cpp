#include "qrr/products.hpp"

#include <numeric>
#include <sstream>

#include "qrr/errors.hpp"

namespace qrr {

ProductExpr& ProductExpr::merge(const ProductExpr& o) {
  scalar = scalar * o.scalar;
  Mono m = 0;
  if (!mono_mul(mono, o.mono, kNoParamCap, m)) throw ParamOverflow("monomial exponent overflow");
  mono = m;
  shift += o.shift;
  factors.insert(factors.end(), o.factors.begin(), o.factors.end());
  return *this;
}

int64_t ProductExpr::denom() const {
  int64_t D = shift.denominator();
  for (const auto& f : factors) D = std::lcm(D, f.arg.denom());
  return D;
}

ProductFactor inf_factor(QExp c, QExp d, int power, const CycloRat& scalar, Mono mono) {
  ProductFactor f;
  f.arg.scalar = scalar;
  f.arg.mono = mono;
  f.arg.offset = c;
  f.arg.base = d;
  f.power = power;
  return f;
}

QSeries eval_product(const ProductExpr& p, Trunc N, int M) {
  if (p.scalar.is_zero()) return QSeries::zero(N);
  int64_t D = p.denom();
  QExp sk = p.shift * QExp(D);
  int64_t shift = sk.numerator();
  bool has_inf = false;
  int64_t neg = 0;
  for (const auto& f : p.factors) {
    has_inf = has_inf || !f.n;
    neg += poch_negative_keys(f.arg, f.n, f.power, D, M);
  }
  if (has_inf && N.is_inf()) throw NonTruncating("infinite product needs a finite order");
  // Every factor with a key beyond this budget multiplies by 1 + O(q^(N+1)).
  int64_t budget = N.is_inf() ? 0 : N.key_limit(D) - shift - neg;
  std::vector<Binomial> bins;
  for (const auto& f : p.factors) append_poch_bins(f.arg, f.n, f.power, D, budget, bins);
  return binomial_product(Coef::monomial(p.mono).mul(p.scalar), shift, bins, D, N, M).normalized();
}

QSeries eval_rhs(const RhsExpr& r, Trunc N, int M) {
  QSeries sum = QSeries::zero(N);
  for (const auto& t : r.terms) sum = qs_add(sum, eval_product(t, N, M));
  return sum.normalized();
}

namespace {

std::string exp_power(const std::string& base, QExp e) {
  if (e == 0) return "";
  if (e == 1) return base;
  if (e.denominator() == 1 && e > 0) return base + "^" + std::to_string(e.numerator());
  return base + "^(" + exp_str(e) + ")";
}

}  // namespace

std::string render(const PochArg& a) {
  std::string s;
  CycloRat sc = a.scalar;
  bool neg = false;
  if (sc == CycloRat(-1)) {
    neg = true;
    sc = CycloRat(1);
  }
  std::vector<std::string> parts;
  if (!sc.is_one()) parts.push_back(sc.is_rational() ? sc.str() : "(" + sc.str() + ")");
  if (a.mono != 0) parts.push_back(mono_str(a.mono));
  std::string qp = exp_power("q", a.offset);
  if (!qp.empty()) parts.push_back(qp);
  if (parts.empty()) parts.push_back("1");
  for (size_t i = 0; i < parts.size(); ++i) s += (i ? "*" : "") + parts[i];
  return neg ? "-" + s : s;
}

std::string render(const ProductExpr& p) {
  std::vector<std::string> parts;
  if (!p.scalar.is_one()) {
    bool simple = p.scalar.is_constant() && p.scalar.constant_term().is_rational();
    parts.push_back(simple ? p.scalar.str() : "(" + p.scalar.str() + ")");
  }
  if (p.mono != 0) parts.push_back(mono_str(p.mono));
  std::string qp = exp_power("q", p.shift);
  if (!qp.empty()) parts.push_back(qp);
  // Consecutive factors with equal base, subscript and power share one symbol.
  size_t i = 0;
  while (i < p.factors.size()) {
    const auto& f = p.factors[i];
    std::string args = render(f.arg);
    size_t j = i + 1;
    while (j < p.factors.size() && p.factors[j].arg.base == f.arg.base && p.factors[j].n == f.n &&
           p.factors[j].power == f.power) {
      args += "," + render(p.factors[j].arg);
      ++j;
    }
    std::string sym = "(" + args + ";" + exp_power("q", f.arg.base) + ")_";
    if (!f.n) sym += "oo";
    else if (*f.n >= 0 && *f.n < 10) sym += std::to_string(*f.n);
    else sym += "(" + std::to_string(*f.n) + ")";
    if (f.power != 1) sym += "^" + std::to_string(f.power);
    parts.push_back(sym);
    i = j;
  }
  if (parts.empty()) return "1";
  std::string s;
  for (size_t k = 0; k < parts.size(); ++k) s += (k ? "*" : "") + parts[k];
  return s;
}

std::string render(const RhsExpr& r) {
  if (r.terms.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < r.terms.size(); ++i) s += (i ? " + " : "") + render(r.terms[i]);
  return s;
}

std::string render_fraction(const ProductExpr& p) {
  ProductExpr num = p, den;
  num.factors.clear();
  for (auto f : p.factors) {
    if (f.power > 0) {
      num.factors.push_back(f);
    } else {
      f.power = -f.power;
      den.factors.push_back(f);
    }
  }
  std::string n = render(num);
  if (den.factors.empty()) return n;
  std::string d = render(den);
  int depth = 0;
  bool product = false;
  for (char c : d) {
    if (c == '(') ++depth;
    else if (c == ')') --depth;
    else if (c == '*' && depth == 0) product = true;
  }
  return n + "/" + (product ? "(" + d + ")" : d);
}

}  // namespace qrr
