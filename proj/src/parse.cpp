#include "qrr/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "qrr/errors.hpp"
#include "qrr/series_text.hpp"

namespace qrr {
namespace {

using Key = std::vector<int>;

/// Polynomial in the summation variables with rational coefficients.
struct Poly {
  size_t nv = 0;
  std::map<Key, Rat> t;

  Poly() = default;
  explicit Poly(size_t n) : nv(n) {}
  static Poly constant(size_t n, const Rat& c) {
    Poly p(n);
    if (!c.is_zero()) p.t[Key(n, 0)] = c;
    return p;
  }
  static Poly var(size_t n, size_t r) {
    Poly p(n);
    Key k(n, 0);
    k[r] = 1;
    p.t[k] = Rat(1);
    return p;
  }
  bool is_zero() const { return t.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& [k, c] : t) d = std::max(d, std::accumulate(k.begin(), k.end(), 0));
    return d;
  }
  bool is_constant() const { return degree() <= 0; }
  Rat coef(const Key& k) const {
    auto it = t.find(k);
    return it == t.end() ? Rat(0) : it->second;
  }
  Rat const_term() const { return coef(Key(nv, 0)); }
  Poly& operator+=(const Poly& o) {
    for (const auto& [k, c] : o.t) {
      Rat v = coef(k) + c;
      if (v.is_zero()) t.erase(k);
      else t[k] = v;
    }
    return *this;
  }
  Poly scaled(const Rat& s) const {
    Poly p(nv);
    if (s.is_zero()) return p;
    for (const auto& [k, c] : t) p.t[k] = c * s;
    return p;
  }
  Poly operator*(const Poly& o) const {
    Poly p(nv);
    for (const auto& [a, x] : t)
      for (const auto& [b, y] : o.t) {
        Key k(nv);
        for (size_t r = 0; r < nv; ++r) k[r] = a[r] + b[r];
        Rat v = p.coef(k) + x * y;
        if (v.is_zero()) p.t.erase(k);
        else p.t[k] = v;
      }
    return p;
  }
};

QExp to_qexp(const Rat& r) {
  if (!r.is_small()) throw ParseError("exponent " + r.str() + " is too large");
  return QExp(r.small_num(), r.small_den());
}

int64_t to_int(const Rat& r, const std::string& what) {
  if (!r.is_integer() || !r.is_small()) throw ParseError(what + " must be an integer, got " + r.str());
  return r.small_num();
}

struct RawFactor {
  PochArg arg;
  std::optional<Poly> sub;  // nullopt: infinite product
  int power = 1;
};

/// Everything one product of atoms contributes.
struct Acc {
  Coef scalar{1};
  Poly qexp;
  std::map<uint32_t, Poly> roots;
  std::array<Poly, kNumParams> pexp;
  std::vector<RawFactor> factors;

  explicit Acc(size_t nv) : qexp(nv) {
    for (auto& p : pexp) p = Poly(nv);
  }
  size_t nv() const { return qexp.nv; }

  void merge(const Acc& o, int k) {
    scalar = scalar * (k > 0 ? o.scalar.pow(k) : coef_inv(o.scalar).pow(-k));
    qexp += o.qexp.scaled(k);
    for (const auto& [m, p] : o.roots) {
      auto it = roots.try_emplace(m, Poly(nv())).first;
      it->second += p.scaled(k);
    }
    for (int p = 0; p < kNumParams; ++p) pexp[p] += o.pexp[p].scaled(k);
    for (auto f : o.factors) {
      f.power *= k;
      factors.push_back(std::move(f));
    }
  }
};

bool reserved_var(const std::string& v) {
  if (v.empty() || !std::isalpha(static_cast<unsigned char>(v[0]))) return true;
  char c = v[0];
  if (c == 'q' || c == 'z' || c == 'o' || param_index(c)) return true;
  for (size_t i = 1; i < v.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(v[i]))) return true;
  return false;
}

class Parser {
 public:
  Parser(std::string s, std::vector<std::string> vars) : s_(std::move(s)), vars_(std::move(vars)) {}

  Side side();
  Poly poly_expr();
  void factors(Acc& acc, bool stop_at_sum);
  void require_end() {
    if (peek() != '\0') fail("unexpected text");
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }

 private:
  std::string s_;
  std::vector<std::string> vars_;
  size_t i_ = 0;

  size_t nv() const { return vars_.size(); }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(i_) + " in '" + s_ + "'");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  char peek_at(size_t off) const { return i_ + off < s_.size() ? s_[i_ + off] : '\0'; }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool at_sum() const { return s_.compare(i_, 4, "sum[") == 0; }

  /// Index of the bracket closing the one at position `open`.
  size_t close(size_t open) const {
    int depth = 0;
    for (size_t j = open; j < s_.size(); ++j) {
      char c = s_[j];
      if (c == '(' || c == '{' || c == '[') ++depth;
      else if (c == ')' || c == '}' || c == ']') {
        if (--depth == 0) return j;
      }
    }
    throw ParseError("unbalanced brackets in '" + s_ + "'");
  }
  /// Contents of the bracket at the cursor; the cursor moves past it.
  std::string bracket() {
    skip();
    size_t j = close(i_);
    std::string c = s_.substr(i_ + 1, j - i_ - 1);
    i_ = j + 1;
    return c;
  }
  Parser sub(const std::string& text) const { return Parser(text, vars_); }

  Rat number() {
    skip();
    size_t j = i_;
    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    if (j == i_) fail("expected a number");
    Rat r = Rat::parse(s_.substr(i_, j - i_));
    i_ = j;
    return r;
  }
  /// Longest summation variable named at the cursor.
  std::optional<size_t> var_at() {
    skip();
    std::optional<size_t> best;
    size_t len = 0;
    for (size_t r = 0; r < vars_.size(); ++r) {
      const auto& v = vars_[r];
      if (v.size() > len && s_.compare(i_, v.size(), v) == 0) {
        char after = peek_at(v.size());
        if (std::isdigit(static_cast<unsigned char>(after))) continue;
        best = r;
        len = v.size();
      }
    }
    if (best) i_ += len;
    return best;
  }

  Poly poly_term();
  Poly poly_factor();
  Poly exponent();
  int int_power();
  QExp const_exponent();

  void atom(Acc& a);
  void paren(Acc& a);
  void poch(Acc& a, const std::string& content);
  void binomial(Acc& a, const std::string& content, size_t split);
  void root_power(Acc& a, const CycloRat& base, const Poly& e);
  PochArg arg(const std::string& text, QExp base) const;
  SideTerm side_term();
};

Poly Parser::poly_expr() {
  Poly p(nv());
  bool neg = false;
  if (eat('-')) neg = true;
  else eat('+');
  p += neg ? poly_term().scaled(-1) : poly_term();
  for (;;) {
    if (eat('+')) p += poly_term();
    else if (eat('-')) p += poly_term().scaled(-1);
    else return p;
  }
}

Poly Parser::poly_term() {
  Poly p = poly_factor();
  for (;;) {
    char c = peek();
    if (c == '*') {
      ++i_;
      p = p * poly_factor();
    } else if (c == '/') {
      ++i_;
      Poly d = poly_factor();
      if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
      p = p.scaled(d.const_term().inv());
    } else if (c == '(' || c == '{' || std::isalpha(static_cast<unsigned char>(c))) {
      p = p * poly_factor();
    } else {
      return p;
    }
  }
}

Poly Parser::poly_factor() {
  Poly base(nv());
  char c = peek();
  if (c == '(' || c == '{') {
    Parser in = sub(bracket());
    base = in.poly_expr();
    in.require_end();
  } else if (std::isdigit(static_cast<unsigned char>(c))) {
    base = Poly::constant(nv(), number());
  } else if (auto r = var_at()) {
    base = Poly::var(nv(), *r);
  } else {
    fail("expected a number, variable or parenthesis");
  }
  if (eat('^')) {
    int e = int_power();
    if (e < 0) fail("negative power in an exponent");
    Poly p = Poly::constant(nv(), Rat(1));
    for (int k = 0; k < e; ++k) p = p * base;
    return p;
  }
  return base;
}

Poly Parser::exponent() {
  char c = peek();
  if (c == '(' || c == '{') {
    Parser in = sub(bracket());
    Poly p = in.poly_expr();
    in.require_end();
    return p;
  }
  bool neg = eat('-');
  Poly p(nv());
  if (std::isdigit(static_cast<unsigned char>(peek()))) p = Poly::constant(nv(), number());
  else if (auto r = var_at()) p = Poly::var(nv(), *r);
  else fail("expected an exponent");
  return neg ? p.scaled(-1) : p;
}

int Parser::int_power() {
  Poly p = exponent();
  if (!p.is_constant()) fail("power must be a constant");
  return static_cast<int>(to_int(p.const_term(), "power"));
}

QExp Parser::const_exponent() {
  Poly p = exponent();
  if (!p.is_constant()) fail("exponent may not depend on summation variables here");
  return to_qexp(p.const_term());
}

void Parser::factors(Acc& acc, bool stop_at_sum) {
  for (;;) {
    char c = peek();
    if (c == '\0' || c == '+' || c == '-') return;
    if (stop_at_sum && at_sum()) return;
    if (c == '*') {
      ++i_;
      continue;
    }
    int k = 1;
    if (c == '/') {
      ++i_;
      k = -1;
    }
    Acc a(acc.nv());
    atom(a);
    acc.merge(a, k);
  }
}

void Parser::atom(Acc& a) {
  char c = peek();
  char n1 = peek_at(1);
  if (std::isdigit(static_cast<unsigned char>(c))) {
    Rat v = number();
    a.scalar = Coef(v);
    if (eat('^')) a.scalar = a.scalar.pow(int_power());
  } else if (c == 'q' && !std::isalnum(static_cast<unsigned char>(n1))) {
    ++i_;
    a.qexp += eat('^') ? exponent() : Poly::constant(nv(), Rat(1));
  } else if (c == 'z' && std::isdigit(static_cast<unsigned char>(n1))) {
    ++i_;
    int64_t m = to_int(number(), "root order");
    if (m < 1 || m > kMaxConductor) fail("root of unity order out of range");
    Poly e = eat('^') ? exponent() : Poly::constant(nv(), Rat(1));
    root_power(a, CycloRat::root_of_unity(static_cast<uint32_t>(m)), e);
  } else if (c == '(') {
    paren(a);
  } else if (auto p = param_index(c)) {
    ++i_;
    a.pexp[*p] += eat('^') ? exponent() : Poly::constant(nv(), Rat(1));
  } else if (std::isalpha(static_cast<unsigned char>(c))) {
    if (var_at()) fail("summation variable outside an exponent or subscript");
    fail(std::string("unknown symbol '") + c + "'");
  } else {
    fail(std::string("unexpected '") + c + "'");
  }
}

void Parser::root_power(Acc& a, const CycloRat& base, const Poly& e) {
  if (e.is_constant()) {
    a.scalar = a.scalar * Coef(base.pow(to_int(e.const_term(), "power of a constant")));
    return;
  }
  uint32_t L = std::lcm(2u, base.conductor());
  for (uint32_t k = 0; k < L; ++k) {
    if (CycloRat::root_of_unity(L, k) != base) continue;
    auto it = a.roots.try_emplace(L, Poly(nv())).first;
    it->second += e.scaled(Rat(static_cast<int64_t>(k)));
    return;
  }
  fail("variable powers need a root of unity as base, got " + base.str());
}

void Parser::paren(Acc& a) {
  std::string content = bracket();
  // Classify by the top-level structure of the contents.
  int depth = 0;
  bool semi = false;
  size_t split = std::string::npos;
  size_t first = content.find_first_not_of(" \t");
  for (size_t j = 0; j < content.size(); ++j) {
    char c = content[j];
    if (c == '(' || c == '{' || c == '[') ++depth;
    else if (c == ')' || c == '}' || c == ']') --depth;
    else if (depth == 0 && c == ';') semi = true;
    else if (depth == 0 && (c == '+' || c == '-') && j != first && split == std::string::npos) {
      size_t b = content.find_last_not_of(" \t", j - 1);
      if (b != std::string::npos && content[b] != '^' && content[b] != '*' && content[b] != '/') split = j;
    }
  }
  if (semi) {
    poch(a, content);
    return;
  }
  if (peek() == '^') {
    try {
      Coef c = parse_coef(content);
      if (c.is_constant() && !c.is_zero()) {
        ++i_;
        root_power(a, c.constant_term(), exponent());
        return;
      }
    } catch (const Error&) {
      // not a constant base; fall through
    }
  }
  if (split != std::string::npos) {
    binomial(a, content, split);
    return;
  }
  Parser in = sub(content);
  Acc g(nv());
  bool neg = in.eat('-');
  if (!neg) in.eat('+');
  in.factors(g, false);
  in.require_end();
  if (neg) g.scalar = -g.scalar;
  int k = eat('^') ? int_power() : 1;
  a.merge(g, k);
}

void Parser::binomial(Acc& a, const std::string& content, size_t split) {
  std::string left = content.substr(0, split);
  left.erase(0, left.find_first_not_of(" \t"));
  left.erase(left.find_last_not_of(" \t") + 1);
  if (left != "1") fail("a binomial factor must read (1+x) or (1-x)");
  bool plus = content[split] == '+';
  PochArg x = arg(content.substr(split + 1), QExp(1));
  // 1 + x = (-x; q)_1 and 1 - x = (x; q)_1.
  if (plus) x.scalar = -x.scalar;
  Acc g(nv());
  g.factors.push_back({x, Poly::constant(nv(), Rat(1)), 1});
  int k = eat('^') ? int_power() : 1;
  a.merge(g, k);
}

void Parser::poch(Acc& a, const std::string& content) {
  size_t semi = std::string::npos;
  std::vector<size_t> commas;
  int depth = 0;
  for (size_t j = 0; j < content.size(); ++j) {
    char c = content[j];
    if (c == '(' || c == '{') ++depth;
    else if (c == ')' || c == '}') --depth;
    else if (depth == 0 && c == ';') {
      if (semi != std::string::npos) fail("two ';' in a Pochhammer symbol");
      semi = j;
    } else if (depth == 0 && c == ',' && semi == std::string::npos) {
      commas.push_back(j);
    }
  }
  Parser bp = sub(content.substr(semi + 1));
  if (!bp.eat('q')) fail("Pochhammer base must be q or a power of q");
  QExp base = bp.eat('^') ? bp.const_exponent() : QExp(1);
  bp.require_end();
  if (!(base > 0)) fail("Pochhammer base must be a positive power of q");

  std::vector<PochArg> args;
  size_t from = 0;
  commas.push_back(semi);
  for (size_t c : commas) {
    args.push_back(arg(content.substr(from, c - from), base));
    from = c + 1;
  }

  expect('_');
  std::optional<Poly> subscript;
  if (s_.compare(i_, 2, "oo") == 0) {
    i_ += 2;
  } else {
    char c = peek();
    if (c == '(' || c == '{') {
      Parser in = sub(bracket());
      subscript = in.poly_expr();
      in.require_end();
    } else {
      subscript = exponent();
    }
  }
  int power = eat('^') ? int_power() : 1;
  for (const auto& x : args) a.factors.push_back({x, subscript, power});
}

PochArg Parser::arg(const std::string& text, QExp base) const {
  Parser p(text, {});
  PochArg r;
  r.base = base;
  if (p.eat('-')) r.scalar = CycloRat(-1);
  else p.eat('+');
  bool any = false;
  for (;;) {
    char c = p.peek();
    if (c == '\0') break;
    if (c == '*') {
      ++p.i_;
      continue;
    }
    bool inv = false;
    if (c == '/') {
      ++p.i_;
      inv = true;
      c = p.peek();
    }
    char n1 = p.peek_at(1);
    any = true;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Rat v = p.number();
      r.scalar *= inv ? CycloRat(v).inv() : CycloRat(v);
    } else if (c == 'z' && std::isdigit(static_cast<unsigned char>(n1))) {
      ++p.i_;
      int64_t m = to_int(p.number(), "root order");
      if (m < 1 || m > kMaxConductor) p.fail("root of unity order out of range");
      int64_t e = p.eat('^') ? p.int_power() : 1;
      r.scalar *= CycloRat::root_of_unity(static_cast<uint32_t>(m), inv ? -e : e);
    } else if (c == 'q' && !std::isalnum(static_cast<unsigned char>(n1))) {
      ++p.i_;
      QExp e = p.eat('^') ? p.const_exponent() : QExp(1);
      r.offset += inv ? -e : e;
    } else if (auto k = param_index(c)) {
      ++p.i_;
      int e = p.eat('^') ? p.int_power() : 1;
      if (inv || e < 0) p.fail("parameters may not appear in denominators of an argument");
      if (!mono_mul(r.mono, mono_var(*k, e), kNoParamCap, r.mono)) p.fail("parameter exponent too large");
    } else if (c == '(') {
      Coef v = parse_coef(p.bracket());
      if (!v.is_constant() || v.is_zero()) p.fail("parenthesized argument factors must be nonzero constants");
      r.scalar *= inv ? v.constant_term().inv() : v.constant_term();
    } else {
      p.fail(std::string("unexpected '") + c + "' in a Pochhammer argument");
    }
  }
  if (!any) p.fail("empty Pochhammer argument");
  return r;
}

ProductExpr to_product(const Acc& a) {
  ProductExpr out;
  out.scalar = a.scalar;
  if (!a.qexp.is_constant()) throw ParseError("q exponent depends on a variable outside a sum");
  out.shift = to_qexp(a.qexp.const_term());
  for (const auto& [m, p] : a.roots) {
    if (!p.is_constant()) throw ParseError("root power depends on a variable outside a sum");
    out.scalar = out.scalar * Coef(CycloRat::root_of_unity(m, to_int(p.const_term(), "root power")));
  }
  for (int k = 0; k < kNumParams; ++k) {
    const Poly& p = a.pexp[k];
    if (p.is_zero()) continue;
    if (!p.is_constant()) throw ParseError("parameter exponent depends on a variable outside a sum");
    int64_t e = to_int(p.const_term(), "parameter exponent");
    if (e < 0) throw ParseError("negative parameter exponents are not supported; substitute the parameter");
    if (!mono_mul(out.mono, mono_var(k, static_cast<int>(e)), kNoParamCap, out.mono))
      throw ParseError("parameter exponent too large");
  }
  for (const auto& f : a.factors) {
    if (f.power == 0) continue;
    ProductFactor pf{f.arg, std::nullopt, f.power};
    if (f.sub) {
      if (!f.sub->is_constant()) throw ParseError("Pochhammer subscript depends on a variable outside a sum");
      pf.n = to_int(f.sub->const_term(), "subscript");
    }
    out.factors.push_back(pf);
  }
  return out;
}

LinForm to_lin(const Poly& p, size_t k, const std::string& what) {
  if (p.degree() > 1) throw ParseError(what + " must be linear in the summation variables");
  LinForm f;
  f.c.assign(k, 0);
  for (const auto& [key, c] : p.t) {
    int64_t v = to_int(c, what + " coefficient");
    size_t r = 0;
    while (r < k && key[r] == 0) ++r;
    if (r == k) f.c0 = v;
    else f.c[r] = v;
  }
  while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
  return f;
}

MultiSumSpec to_sum(const Acc& a, const std::vector<std::string>& names) {
  size_t k = names.size();
  MultiSumSpec s = MultiSumSpec::of_rank(k);
  s.vars = names;
  s.index.assign(k, 0);
  s.scalar = a.scalar;
  for (const auto& [key, c] : a.qexp.t) {
    std::vector<size_t> at;
    for (size_t r = 0; r < k; ++r)
      for (int e = 0; e < key[r]; ++e) at.push_back(r);
    QExp v = to_qexp(c);
    if (at.size() > 2) throw ParseError("q exponent of a summand must be at most quadratic");
    if (at.empty()) s.cst = v;
    else if (at.size() == 1) s.lin[at[0]] = v;
    else s.quad[at[0]][at[1]] = v;
  }

  // Every root power becomes a power of one primitive zeta_L.
  uint32_t L = 1;
  for (const auto& [m, p] : a.roots)
    if (!p.is_zero()) L = std::lcm(L, m);
  if (L > kMaxConductor) throw ParseError("combined root of unity order too large");
  if (L > 1) {
    Poly t(k);
    for (const auto& [m, p] : a.roots) t += p.scaled(Rat(static_cast<int64_t>(L / m)));
    // zeta^(c x^2) = zeta^(c x) when 2c is a multiple of L, since x(x-1) is even.
    Poly lin(k);
    for (const auto& [key, c] : t.t) {
      int deg = std::accumulate(key.begin(), key.end(), 0);
      if (deg <= 1) {
        lin.t[key] = c;
        continue;
      }
      Rat twice = c * Rat(2);
      bool square = deg == 2 && std::count(key.begin(), key.end(), 2) == 1;
      bool vanishes = c.is_integer() && to_int(c, "sign exponent") % static_cast<int64_t>(L) == 0;
      if (square && twice.is_integer() && to_int(twice, "sign exponent") % static_cast<int64_t>(L) == 0) {
        Key one = key;
        for (auto& e : one) e = e == 2 ? 1 : 0;
        Poly m(k);
        m.t[one] = c;
        lin += m;
      } else if (!vanishes) {
        throw ParseError("sign exponent must be linear in the summation variables");
      }
    }
    s.sign_root = L;
    s.sign = to_lin(lin, k, "sign exponent");
    for (auto& v : s.sign.c) v = ((v % L) + L) % L;
    s.sign.c0 = ((s.sign.c0 % L) + L) % L;
    while (!s.sign.c.empty() && s.sign.c.back() == 0) s.sign.c.pop_back();
  }
  for (int p = 0; p < kNumParams; ++p) s.param_exp[p] = to_lin(a.pexp[p], k, "parameter exponent");

  for (const auto& f : a.factors) {
    if (f.power == 0) continue;
    if (!f.sub) throw ParseError("infinite product inside a sum; move it in front of sum[...]");
    s.factors.push_back({f.arg, to_lin(*f.sub, k, "subscript"), f.power, false});
  }
  // 1/(q^b;q^b)_{x_r} becomes the implicit denominator of axis r.
  for (auto& f : s.factors) {
    const PochArg& x = f.arg;
    if (f.power >= 0 || x.mono != 0 || !x.scalar.is_one() || x.offset != x.base) continue;
    if (x.base.denominator() != 1 || f.sub.c0 != 0) continue;
    size_t nz = 0, r = 0;
    for (size_t t = 0; t < f.sub.c.size(); ++t)
      if (f.sub.c[t] != 0) {
        ++nz;
        r = t;
      }
    if (nz != 1 || f.sub.c[r] != 1 || s.index[r] != 0) continue;
    s.index[r] = x.base.numerator();
    f.power += 1;
  }
  std::erase_if(s.factors, [](const SumFactor& f) { return f.power == 0; });
  s.validate();
  return s;
}

SideTerm Parser::side_term() {
  SideTerm t;
  auto saved = vars_;
  vars_.clear();
  Acc m(0);
  size_t start = i_;
  factors(m, true);
  t.mult = to_product(m);
  if (at_sum()) {
    i_ += 3;
    std::string list = bracket();
    std::vector<std::string> names;
    std::stringstream ss(list);
    std::string v;
    while (std::getline(ss, v, ',')) {
      v.erase(0, v.find_first_not_of(" \t"));
      v.erase(v.find_last_not_of(" \t") + 1);
      if (reserved_var(v)) fail("bad summation variable '" + v + "'");
      if (std::find(names.begin(), names.end(), v) != names.end()) fail("repeated summation variable " + v);
      names.push_back(v);
    }
    if (names.empty()) fail("sum without variables");
    vars_ = names;
    Acc a(names.size());
    factors(a, false);
    t.sum = to_sum(a, names);
  } else if (i_ == start) {
    fail("empty term");
  }
  vars_ = saved;
  return t;
}

Side Parser::side() {
  Side out;
  std::string trimmed = s_;
  trimmed.erase(0, trimmed.find_first_not_of(" \t\n"));
  trimmed.erase(trimmed.find_last_not_of(" \t\n") + 1);
  if (trimmed == "0") return out;
  bool first = true;
  while (peek() != '\0') {
    int sg = 1;
    if (eat('-')) sg = -1;
    else if (!eat('+') && !first) fail("expected '+' or '-'");
    SideTerm t = side_term();
    if (sg < 0) t.mult.scalar = -t.mult.scalar;
    out.push_back(std::move(t));
    first = false;
  }
  if (out.empty()) fail("empty side");
  return out;
}

std::string lin_str(const LinForm& f, const std::vector<std::string>& vars) {
  std::string s;
  for (size_t r = 0; r < f.c.size(); ++r) {
    int64_t c = f.c[r];
    if (c == 0) continue;
    if (!s.empty() || c < 0) s += c < 0 ? "-" : "+";
    int64_t a = c < 0 ? -c : c;
    if (a != 1) s += std::to_string(a) + "*";
    s += vars[r];
  }
  if (f.c0 != 0 || s.empty()) {
    if (!s.empty() && f.c0 > 0) s += "+";
    s += std::to_string(f.c0);
  }
  return s;
}

std::string base_str(QExp b) {
  if (b == 1) return "q";
  if (b.denominator() == 1) return "q^" + std::to_string(b.numerator());
  return "q^(" + exp_str(b) + ")";
}

}  // namespace

Side parse_side(const std::string& text) { return Parser(text, {}).side(); }

MultiSumSpec parse_sum(const std::string& text) {
  Side s = parse_side(text);
  if (s.size() != 1 || !s[0].sum) throw ParseError("expected a single sum term: '" + text + "'");
  const ProductExpr& m = s[0].mult;
  if (!m.factors.empty() || m.mono != 0 || m.shift != 0) throw ParseError("sum term has a product multiplier");
  MultiSumSpec out = *s[0].sum;
  out.scalar = out.scalar * m.scalar;
  return out;
}

ProductExpr parse_product(const std::string& text) {
  Side s = parse_side(text);
  if (s.size() != 1 || s[0].sum) throw ParseError("expected a single product term: '" + text + "'");
  return s[0].mult;
}

RhsExpr parse_rhs(const std::string& text) {
  RhsExpr r;
  for (auto& t : parse_side(text)) {
    if (t.sum) throw ParseError("expected products only: '" + text + "'");
    r.terms.push_back(std::move(t.mult));
  }
  return r;
}

QExp parse_rational(const std::string& text) {
  Parser p(text, {});
  Poly v = p.poly_expr();
  p.require_end();
  return to_qexp(v.const_term());
}

std::string format_sum(const MultiSumSpec& s) {
  std::vector<std::string> num;
  if (!s.scalar.is_one()) num.push_back("(" + s.scalar.str() + ")");
  if (!s.sign.is_zero()) {
    std::string b = s.sign_root == 2 ? "(-1)" : "z" + std::to_string(s.sign_root);
    num.push_back(b + "^(" + lin_str(s.sign, s.vars) + ")");
  }
  std::string qe;
  auto put = [&](QExp c, const std::string& mon) {
    if (c == 0) return;
    if (!qe.empty() || c < 0) qe += c < 0 ? "-" : "+";
    QExp a = c < 0 ? -c : c;
    if (a != 1 || mon.empty()) qe += exp_str(a) + (mon.empty() ? "" : "*");
    qe += mon;
  };
  size_t k = s.rank();
  for (size_t r = 0; r < k; ++r)
    for (size_t t = r; t < k; ++t) put(s.quad_coef(r, t), r == t ? s.vars[r] + "^2" : s.vars[r] + "*" + s.vars[t]);
  for (size_t r = 0; r < s.lin.size(); ++r) put(s.lin[r], s.vars[r]);
  put(s.cst, "");
  if (!qe.empty()) num.push_back("q^(" + qe + ")");
  for (int p = 0; p < kNumParams; ++p) {
    const LinForm& f = s.param_exp[static_cast<size_t>(p)];
    if (!f.is_zero()) num.push_back(std::string(1, kParamNames[static_cast<size_t>(p)]) + "^(" + lin_str(f, s.vars) + ")");
  }
  std::vector<std::string> den;
  for (size_t r = 0; r < k; ++r) {
    int64_t b = s.index[r];
    if (b == 0) continue;
    den.push_back("(" + base_str(b) + ";" + base_str(b) + ")_" + s.vars[r]);
  }
  for (const auto& f : s.factors) {
    std::string sym = "(" + render(f.arg) + ";" + base_str(f.arg.base) + ")_(" + lin_str(f.sub, s.vars) + ")";
    int p = f.power < 0 ? -f.power : f.power;
    if (p != 1) sym += "^" + std::to_string(p);
    (f.power > 0 ? num : den).push_back(sym);
  }
  std::string out = "sum[";
  for (size_t r = 0; r < k; ++r) out += (r ? "," : "") + s.vars[r];
  out += "] ";
  if (num.empty()) out += "1";
  for (size_t i = 0; i < num.size(); ++i) out += (i ? "*" : "") + num[i];
  if (!den.empty()) {
    out += "/(";
    for (const auto& d : den) out += d;
    out += ")";
  }
  return out;
}

std::string format_side(const Side& s) {
  if (s.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    const auto& t = s[i];
    std::string m = render(t.mult);
    std::string piece;
    if (t.sum) piece = (m == "1" ? "" : m + " ") + format_sum(*t.sum);
    else piece = m;
    if (m == "-1" && t.sum) piece = "-" + format_sum(*t.sum);
    bool neg = !piece.empty() && piece[0] == '-';
    if (neg) piece.erase(0, 1);
    if (neg && piece.rfind("1*", 0) == 0) piece.erase(0, 2);
    if (i == 0) out += neg ? "-" + piece : piece;
    else out += (neg ? " - " : " + ") + piece;
  }
  return out;
}

}  // namespace qrr
