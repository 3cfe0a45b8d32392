#include "qrr/summation.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "qrr/errors.hpp"

namespace qrr {

int64_t LinForm::at(const Point& x) const {
  int64_t s = c0;
  for (size_t r = 0; r < c.size() && r < x.size(); ++r) s += c[r] * x[r];
  return s;
}

bool LinForm::is_zero() const {
  return c0 == 0 && std::all_of(c.begin(), c.end(), [](int64_t v) { return v == 0; });
}

namespace {

Rat to_rat(QExp e) { return Rat(e.numerator(), e.denominator()); }

bool nonneg_on_orthant(const LinForm& f) {
  return f.c0 >= 0 && std::all_of(f.c.begin(), f.c.end(), [](int64_t v) { return v >= 0; });
}

int64_t key_of(QExp e, int64_t D) {
  QExp k = e * QExp(D);
  if (k.denominator() != 1) throw DenominatorMismatch("exponent " + exp_str(e) + " is not a multiple of 1/" + std::to_string(D));
  return k.numerator();
}

/// Numerator factors 1 - q^(c - d j) vanish for j = c/d, so negative
/// subscripts of 1/(q^c;q^d)_n never give negative valuations.
bool harmless_negative(const SumFactor& f) {
  if (f.power > 0 || f.arg.mono != 0 || !f.arg.scalar.is_one()) return false;
  QExp r = f.arg.offset / f.arg.base;
  return r.denominator() == 1 && r.numerator() >= 1;
}

/// Smallest subscript value over the orthant, or nullopt when unbounded.
std::optional<int64_t> sub_min(const LinForm& f) {
  if (std::any_of(f.c.begin(), f.c.end(), [](int64_t v) { return v < 0; })) return std::nullopt;
  return f.c0;
}

/// Constant lower bound (in q units) on the valuation of one factor over
/// every reachable subscript, under parameter degree cap M.
Rat factor_lower_bound(const SumFactor& f, int M) {
  Rat c = to_rat(f.arg.offset), d = to_rat(f.arg.base);
  bool param = f.arg.mono != 0;
  int p = f.power < 0 ? -f.power : f.power;
  Rat lb(0);
  // n >= 0: factors c + d j for j >= 0, numerators when power > 0.
  bool num_up = f.power > 0;
  if (num_up || param) {
    Rat w = num_up ? Rat(p) : Rat(static_cast<int64_t>(p) * M);
    for (Rat e = c; e.sign() < 0; e += d) lb += e * w;
  }
  auto m = sub_min(f.sub);
  if (f.strict || (m && *m >= 0)) return lb;
  if (!m) {
    // Validation admits this only for denominators of constant x and
    // for power > 0 constant factors, whose negative subscripts give
    // nonnegative valuations.
    return lb;
  }
  // n = -1 .. m: factors c - d j flip between numerator and denominator.
  bool num_down = f.power < 0;
  if (num_down || param) {
    Rat w = num_down ? Rat(p) : Rat(static_cast<int64_t>(p) * M);
    for (int64_t j = 1; j <= -*m; ++j) {
      Rat e = c - d * Rat(j);
      if (e.sign() < 0) lb += e * w;
    }
  }
  return lb;
}

enum class Assembly { Zero, Ok };

struct Assembled {
  Coef scalar;
  int64_t shift = 0;
  std::vector<Binomial> bins;
  int64_t lb = 0;  // lower bound on the valuation key
};

Assembly assemble(const MultiSumSpec& spec, const Point& x, int64_t D, int pcap, Assembled& out) {
  Mono mono = 0;
  for (int p = 0; p < kNumParams; ++p) {
    const LinForm& f = spec.param_exp[static_cast<size_t>(p)];
    if (f.is_zero()) continue;
    int64_t e = f.at(x);
    if (e < 0) throw BadParameters("negative parameter exponent at a lattice point");
    if (e > pcap || e > kNoParamCap) return Assembly::Zero;
    mono |= mono_var(p, static_cast<int>(e));
  }
  CycloRat sg(1);
  if (!spec.sign.is_zero()) {
    int64_t m = spec.sign_root;
    int64_t t = ((spec.sign.at(x) % m) + m) % m;
    if (m == 2) sg = t ? CycloRat(-1) : CycloRat(1);
    else if (t != 0) sg = CycloRat::root_of_unity(static_cast<uint32_t>(m), t);
  }
  out.scalar = Coef::monomial(mono, sg).mul(spec.scalar);
  out.shift = key_of(spec.q_exp(x), D);
  out.bins.clear();
  for (size_t r = 0; r < spec.rank(); ++r) {
    int64_t b = spec.index[r];
    if (b == 0) continue;
    PochArg a;
    a.offset = b;
    a.base = b;
    append_poch_bins(a, x[r], -1, D, 0, out.bins);
  }
  for (const auto& f : spec.factors) {
    int64_t n = f.sub.at(x);
    if (n < 0 && f.strict) return Assembly::Zero;
    append_poch_bins(f.arg, n, f.power, D, 0, out.bins);
  }
  int64_t lb = out.shift;
  for (const auto& b : out.bins) {
    int mult = b.sign < 0 ? -b.sign : b.sign;
    bool constant = b.x.is_constant();
    if (b.sign > 0) {
      if (constant && b.e == 0 && b.x.is_one()) return Assembly::Zero;
      if (b.e < 0) lb += b.e * mult;
    } else if (b.e < 0) {
      if (constant) lb -= b.e * mult;
      else if (pcap < kNoParamCap) lb += b.e * pcap * mult;
    }
  }
  out.lb = lb;
  return Assembly::Ok;
}

// ---- exact quadratic programming over boxes -----------------------------

using RVec = std::vector<Rat>;
using RMat = std::vector<RVec>;

/// Solves M y = rhs by Gauss-Jordan elimination; nullopt unless unique.
std::optional<RVec> solve_unique(RMat M, RVec rhs) {
  size_t n = rhs.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && M[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    Rat inv = M[col][col].inv();
    for (size_t k = col; k < n; ++k) M[col][k] *= inv;
    rhs[col] *= inv;
    for (size_t r = 0; r < n; ++r) {
      if (r == col || M[r][col].is_zero()) continue;
      Rat f = M[r][col];
      for (size_t k = col; k < n; ++k) M[r][k] -= f * M[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  return rhs;
}

Rat det(RMat M) {
  size_t n = M.size();
  Rat d(1);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && M[piv][col].is_zero()) ++piv;
    if (piv == n) return Rat(0);
    if (piv != col) {
      std::swap(M[piv], M[col]);
      d = -d;
    }
    d *= M[col][col];
    Rat inv = M[col][col].inv();
    for (size_t r = col + 1; r < n; ++r) {
      if (M[r][col].is_zero()) continue;
      Rat f = M[r][col] * inv;
      for (size_t k = col; k < n; ++k) M[r][k] -= f * M[col][k];
    }
  }
  return d;
}

/// Positive semidefinite iff every principal minor is nonnegative.
bool is_psd(const RMat& A) {
  size_t n = A.size();
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    RMat S(idx.size(), RVec(idx.size()));
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = 0; b < idx.size(); ++b) S[a][b] = A[idx[a]][idx[b]];
    if (det(S).sign() < 0) return false;
  }
  return true;
}

/// f(x) = x^T A x + b.x + c with A symmetric.
struct Quadratic {
  RMat A;
  RVec b;
  Rat c;

  size_t dim() const { return b.size(); }
  Rat at(const RVec& x) const {
    Rat s = c;
    for (size_t r = 0; r < dim(); ++r) {
      if (x[r].is_zero()) continue;
      Rat row = b[r];
      for (size_t t = 0; t < dim(); ++t) row += A[r][t] * x[t];
      s += row * x[r];
    }
    return s;
  }
  /// Component r of the gradient 2 A x + b.
  Rat grad(const RVec& x, size_t r) const {
    Rat g = b[r];
    for (size_t t = 0; t < dim(); ++t) g += Rat(2) * A[r][t] * x[t];
    return g;
  }
};

/// Stationary point of f over the free coordinates, with the fixed ones
/// taken from x; fills x and returns false when not uniquely solvable.
bool stationary(const Quadratic& f, const std::vector<size_t>& freev, RVec& x) {
  if (freev.empty()) return true;
  size_t n = freev.size();
  RMat M(n, RVec(n));
  RVec rhs(n);
  for (size_t a = 0; a < n; ++a) {
    size_t s = freev[a];
    Rat r = -f.b[s];
    for (size_t t = 0; t < f.dim(); ++t) {
      bool is_free = std::find(freev.begin(), freev.end(), t) != freev.end();
      if (!is_free) r -= Rat(2) * f.A[s][t] * x[t];
    }
    rhs[a] = r;
    for (size_t bidx = 0; bidx < n; ++bidx) M[a][bidx] = Rat(2) * f.A[s][freev[bidx]];
  }
  auto y = solve_unique(std::move(M), std::move(rhs));
  if (!y) return false;
  for (size_t a = 0; a < n; ++a) x[freev[a]] = (*y)[a];
  return true;
}

/// Exact minimum of a convex f over {x_r = v, 0 <= x_s <= hi_s (s != r)}
/// by enumerating which coordinates sit at a bound.
Rat face_minimum(const Quadratic& f, size_t r, const Rat& v, const std::vector<int64_t>& hi) {
  size_t k = f.dim();
  std::vector<size_t> others;
  for (size_t s = 0; s < k; ++s)
    if (s != r) others.push_back(s);
  std::optional<Rat> best;
  size_t combos = 1;
  for (size_t i = 0; i < others.size(); ++i) combos *= 3;
  for (size_t code = 0; code < combos; ++code) {
    RVec x(k, Rat(0));
    x[r] = v;
    std::vector<size_t> freev;
    size_t cc = code;
    for (size_t s : others) {
      int st = static_cast<int>(cc % 3);
      cc /= 3;
      if (st == 1) x[s] = Rat(hi[s]);
      else if (st == 2) freev.push_back(s);
    }
    if (!stationary(f, freev, x)) continue;
    bool feasible = true;
    for (size_t s : freev)
      if (x[s].sign() < 0 || x[s] > Rat(hi[s])) feasible = false;
    if (!feasible) continue;
    Rat val = f.at(x);
    if (!best || val < *best) best = val;
  }
  // The all-at-bounds corners are always solvable, so best is set.
  return *best;
}

/// Global minimizer of a convex f over the orthant via KKT enumeration.
std::optional<RVec> orthant_minimizer(const Quadratic& f) {
  size_t k = f.dim();
  for (uint32_t mask = 0; mask < (1u << k); ++mask) {
    RVec x(k, Rat(0));
    std::vector<size_t> freev;
    for (size_t s = 0; s < k; ++s)
      if (mask & (1u << s)) freev.push_back(s);
    if (!stationary(f, freev, x)) continue;
    bool ok = true;
    for (size_t s = 0; s < k && ok; ++s) {
      bool is_free = (mask & (1u << s)) != 0;
      if (is_free) ok = x[s].sign() >= 0;
      else ok = f.grad(x, s).sign() >= 0;
    }
    if (ok) return x;
  }
  return std::nullopt;
}

int64_t ceil_rat(const Rat& r) {
  mpq_class q = r.to_mpq();
  mpz_class z;
  mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z.get_si();
}

constexpr int64_t kMaxBound = int64_t{1} << 20;

struct QuadResult {
  std::vector<int64_t> bounds;
  std::vector<Rat> face_min;
  bool empty = false;
};

/// Box certificate for one convex f: grows the box until every outer face
/// lies above N, then shrinks each bound back to the tightest valid value.
std::optional<QuadResult> certify(const Quadratic& f, const Rat& N) {
  size_t k = f.dim();
  RVec anchor(k, Rat(0));
  if (f.at(anchor) > N) {
    auto m = orthant_minimizer(f);
    if (!m) return std::nullopt;
    if (f.at(*m) > N) {
      QuadResult r;
      r.empty = true;
      return r;
    }
    anchor = *m;
  }
  std::vector<int64_t> lo(k), B(k);
  for (size_t r = 0; r < k; ++r) {
    lo[r] = std::max<int64_t>(0, ceil_rat(anchor[r]) - 1);
    B[r] = lo[r];
  }
  auto face = [&](size_t r, const std::vector<int64_t>& bb) {
    std::vector<int64_t> hi(k);
    for (size_t s = 0; s < k; ++s) hi[s] = bb[s] + 1;
    return face_minimum(f, r, Rat(bb[r] + 1), hi);
  };
  for (int round = 0;; ++round) {
    bool all = true;
    for (size_t r = 0; r < k; ++r) {
      if (face(r, B) > N) continue;
      all = false;
      B[r] = 2 * B[r] + 1;
      if (B[r] > kMaxBound) return std::nullopt;
    }
    if (all) break;
    if (round > 80) return std::nullopt;
  }
  // Beyond the anchor the face minimum is convex in the face position, so
  // once above N it stays above N: binary search is valid.
  for (size_t r = 0; r < k; ++r) {
    int64_t a = lo[r], b = B[r];
    while (a < b) {
      int64_t mid = a + (b - a) / 2;
      auto trial = B;
      trial[r] = mid;
      if (face(r, trial) > N) b = mid;
      else a = mid + 1;
    }
    B[r] = a;
  }
  QuadResult res;
  res.bounds = B;
  for (size_t r = 0; r < k; ++r) res.face_min.push_back(face(r, B));
  return res;
}

}  // namespace

MultiSumSpec MultiSumSpec::of_rank(size_t k) {
  static const char* names[] = {"i", "j", "k", "l", "m", "n", "r", "s"};
  MultiSumSpec s;
  for (size_t r = 0; r < k; ++r) s.vars.push_back(r < 8 ? names[r] : "x" + std::to_string(r));
  s.index.assign(k, 1);
  s.quad.assign(k, std::vector<QExp>(k, QExp(0)));
  s.lin.assign(k, QExp(0));
  return s;
}

QExp MultiSumSpec::quad_coef(size_t r, size_t s) const {
  if (r > s) std::swap(r, s);
  if (r >= quad.size() || s >= quad[r].size()) return QExp(0);
  return quad[r][s];
}

QExp MultiSumSpec::q_exp(const Point& x) const {
  QExp e = cst;
  for (size_t r = 0; r < rank(); ++r) {
    if (x[r] == 0) continue;
    QExp row = r < lin.size() ? lin[r] : QExp(0);
    for (size_t s = r; s < rank(); ++s) row += quad_coef(r, s) * QExp(x[s]);
    e += row * QExp(x[r]);
  }
  return e;
}

int64_t MultiSumSpec::denom() const {
  int64_t D = cst.denominator();
  for (const auto& row : quad)
    for (QExp v : row) D = std::lcm(D, v.denominator());
  for (QExp v : lin) D = std::lcm(D, v.denominator());
  for (const auto& f : factors) D = std::lcm(D, f.arg.denom());
  return D;
}

void MultiSumSpec::validate() const {
  size_t k = rank();
  if (index.size() != k) throw BadParameters("index vector length differs from the rank");
  for (int64_t b : index)
    if (b < 0) throw BadParameters("index entries must be nonnegative");
  if (quad.size() > k || lin.size() > k) throw BadParameters("quadratic form larger than the rank");
  for (size_t r = 0; r < quad.size(); ++r) {
    if (quad[r].size() > k) throw BadParameters("quadratic form row too long");
    for (size_t s = 0; s < r && s < quad[r].size(); ++s)
      if (quad[r][s] != 0) throw BadParameters("quadratic form must be stored upper-triangular");
  }
  if (sign_root < 1 || sign_root > kMaxConductor) throw BadParameters("sign root of unity out of range");
  if (sign.c.size() > k) throw BadParameters("sign form longer than the rank");
  for (const auto& f : param_exp) {
    if (f.c.size() > k) throw BadParameters("parameter exponent form longer than the rank");
    if (!nonneg_on_orthant(f)) throw BadParameters("parameter exponents must be nonnegative on the orthant");
  }
  for (const auto& f : factors) {
    if (!(f.arg.base > 0)) throw BadParameters("Pochhammer base must be positive");
    if (f.power == 0) throw BadParameters("factor power must be nonzero");
    if (f.sub.c.size() > k) throw BadParameters("subscript form longer than the rank");
    if (f.strict || sub_min(f.sub)) continue;
    // Unbounded negative subscripts: only shapes whose negative side has
    // nonnegative valuation are accepted.
    bool constant = f.arg.mono == 0;
    if (constant && (f.power > 0 || harmless_negative(f))) continue;
    throw BadParameters("subscript can be arbitrarily negative; mark the factor strict");
  }
}

std::string MultiSumSpec::str() const {
  std::ostringstream os;
  os << "sum[";
  for (size_t r = 0; r < rank(); ++r) os << (r ? "," : "") << vars[r];
  os << "] q^(";
  bool first = true;
  auto put = [&](QExp c, const std::string& mon) {
    if (c == 0) return;
    if (!first) os << (c < 0 ? "-" : "+");
    else if (c < 0) os << "-";
    QExp a = c < 0 ? -c : c;
    if (a != 1 || mon.empty()) os << exp_str(a) << (mon.empty() ? "" : "*");
    os << mon;
    first = false;
  };
  for (size_t r = 0; r < rank(); ++r)
    for (size_t s = r; s < rank(); ++s) put(quad_coef(r, s), r == s ? vars[r] + "^2" : vars[r] + "*" + vars[s]);
  for (size_t r = 0; r < lin.size(); ++r) put(lin[r], vars[r]);
  put(cst, "");
  if (first) os << "0";
  os << ") / (";
  for (size_t r = 0; r < rank(); ++r) {
    if (index[r] == 0) continue;
    os << "(q^" << index[r] << ";q^" << index[r] << ")_" << vars[r];
  }
  os << ")";
  if (!factors.empty()) os << " * " << factors.size() << " factor(s)";
  return os.str();
}

QSeries term(const MultiSumSpec& spec, const Point& x, Trunc N, int pcap) {
  if (x.size() != spec.rank()) throw BadParameters("point dimension differs from the rank");
  for (int64_t v : x)
    if (v < 0) throw BadParameters("lattice point outside the orthant");
  int64_t D = spec.denom();
  Assembled a;
  if (assemble(spec, x, D, pcap, a) == Assembly::Zero) return QSeries::zero(N, D);
  return binomial_product(a.scalar, a.shift, a.bins, D, N, pcap).normalized();
}

std::string CutoffCertificate::str() const {
  std::ostringstream os;
  os << "method=" << method;
  if (empty) return os.str() + " empty";
  os << " bounds=(";
  for (size_t r = 0; r < bounds.size(); ++r) os << (r ? "," : "") << bounds[r];
  os << ")";
  bool any = false;
  for (int p = 0; p < kNumParams; ++p) {
    if (lambda[static_cast<size_t>(p)].is_zero()) continue;
    os << (any ? "," : " lambda=") << kParamNames[static_cast<size_t>(p)] << ":" << lambda[static_cast<size_t>(p)].str();
    any = true;
  }
  if (!face_min.empty()) {
    os << " face_min=(";
    for (size_t r = 0; r < face_min.size(); ++r) os << (r ? "," : "") << face_min[r].str();
    os << ")";
  }
  return os.str();
}

CutoffCertificate cutoff_bounds(const MultiSumSpec& spec, QExp N, int M) {
  spec.validate();
  size_t k = spec.rank();
  CutoffCertificate cert;
  if (k == 0) {
    cert.method = "params";
    return cert;
  }
  // Bounds from the parameter grading alone.
  std::vector<std::optional<int64_t>> pbox(k);
  std::vector<int> used;
  for (int p = 0; p < kNumParams; ++p) {
    const LinForm& f = spec.param_exp[static_cast<size_t>(p)];
    if (f.is_zero()) continue;
    used.push_back(p);
    if (f.c0 > M) {
      cert.method = "params";
      cert.empty = true;
      return cert;
    }
    for (size_t r = 0; r < k; ++r) {
      int64_t c = f.coef(r);
      if (c <= 0) continue;
      int64_t b = (M - f.c0) / c;
      if (!pbox[r] || b < *pbox[r]) pbox[r] = b;
    }
  }
  Rat C(0);
  for (const auto& f : spec.factors) C += factor_lower_bound(f, M);

  RMat A(k, RVec(k, Rat(0)));
  for (size_t r = 0; r < k; ++r)
    for (size_t s = r; s < k; ++s) {
      Rat v = to_rat(spec.quad_coef(r, s));
      if (r == s) A[r][r] = v;
      else A[r][s] = A[s][r] = v / Rat(2);
    }
  std::optional<RMat> convex;
  if (is_psd(A)) {
    convex = A;
  } else {
    // On the orthant positive cross terms only raise Q, so dropping them
    // gives a valid lower bound.
    RMat At = A;
    for (size_t r = 0; r < k; ++r)
      for (size_t s = 0; s < k; ++s)
        if (r != s && At[r][s].sign() > 0) At[r][s] = Rat(0);
    if (is_psd(At)) convex = At;
  }

  std::optional<QuadResult> best;
  std::array<Rat, kNumParams> best_lambda{};
  if (convex) {
    std::vector<Rat> grid = {Rat(0), Rat(1, 4), Rat(1, 2), Rat(1), Rat(2), Rat(4), Rat(8), Rat(16), Rat(32),
                             to_rat(N) + Rat(1)};
    std::vector<std::array<Rat, kNumParams>> choices;
    for (const Rat& g : grid) {
      std::array<Rat, kNumParams> lam{};
      for (int p : used) lam[static_cast<size_t>(p)] = g;
      choices.push_back(lam);
      if (used.size() > 1 && !g.is_zero()) {
        for (int p : used) {
          std::array<Rat, kNumParams> one{};
          one[static_cast<size_t>(p)] = g;
          choices.push_back(one);
        }
      }
    }
    Rat Nr = to_rat(N);
    double best_vol = 0;
    for (const auto& lam : choices) {
      Quadratic f{*convex, RVec(k, Rat(0)), to_rat(spec.cst) + C};
      for (size_t r = 0; r < k; ++r) f.b[r] = r < spec.lin.size() ? to_rat(spec.lin[r]) : Rat(0);
      for (int p : used) {
        const Rat& l = lam[static_cast<size_t>(p)];
        if (l.is_zero()) continue;
        const LinForm& g = spec.param_exp[static_cast<size_t>(p)];
        for (size_t r = 0; r < k; ++r) f.b[r] += l * Rat(g.coef(r));
        f.c += l * Rat(g.c0 - M);
      }
      auto res = certify(f, Nr);
      if (!res) continue;
      if (res->empty) {
        cert.method = "quadratic";
        cert.empty = true;
        cert.lambda = lam;
        return cert;
      }
      double vol = 1;
      for (size_t r = 0; r < k; ++r) {
        int64_t b = res->bounds[r];
        if (pbox[r]) b = std::min(b, *pbox[r]);
        vol *= static_cast<double>(b + 1);
      }
      if (!best || vol < best_vol) {
        best = res;
        best_vol = vol;
        best_lambda = lam;
      }
    }
  }
  cert.bounds.assign(k, 0);
  for (size_t r = 0; r < k; ++r) {
    std::optional<int64_t> b = pbox[r];
    if (best) b = b ? std::min(*b, best->bounds[r]) : best->bounds[r];
    if (!b) throw NonSummable("no certified cutoff for axis " + spec.vars[r] + " of " + spec.str());
    cert.bounds[r] = *b;
  }
  if (best) {
    cert.method = "quadratic";
    cert.lambda = best_lambda;
    cert.face_min = best->face_min;
  } else {
    cert.method = "params";
  }
  return cert;
}

QSeries eval_multisum(const MultiSumSpec& spec, QExp N, int M, int threads) {
  CutoffCertificate cert = cutoff_bounds(spec, N, M);
  int64_t D = spec.denom();
  Trunc NT(N);
  int pcap = std::min(M, kNoParamCap);
  if (cert.empty) return QSeries::from_terms(D, {}, NT, pcap);
  int64_t limit = NT.key_limit(D);
  size_t k = spec.rank();
  Rat C(0);
  for (const auto& f : spec.factors) C += factor_lower_bound(f, M);
  Rat Nr = to_rat(N);

  // Each worker takes the slices x_0 = w, w + threads, ... of the box.
  auto work = [&](int64_t first, int64_t step) {
    std::map<int64_t, Coef> acc;
    Point x(k, 0);
    Assembled a;
    auto visit = [&]() {
      if (to_rat(spec.q_exp(x)) + C > Nr) return;
      if (assemble(spec, x, D, pcap, a) == Assembly::Zero) return;
      if (a.lb > limit) return;
      QSeries t = binomial_product(a.scalar, a.shift, a.bins, D, NT, pcap);
      for (const auto& [key, c] : t.terms()) acc[key] += c;
    };
    if (k == 0) {
      visit();
      return acc;
    }
    for (int64_t x0 = first; x0 <= cert.bounds[0]; x0 += step) {
      std::fill(x.begin(), x.end(), 0);
      x[0] = x0;
      // Odometer over the remaining axes.
      for (;;) {
        visit();
        size_t r = k - 1;
        while (r >= 1) {
          if (x[r] < cert.bounds[r]) {
            ++x[r];
            break;
          }
          x[r] = 0;
          --r;
        }
        if (r == 0) break;
      }
    }
    return acc;
  };

  int nt = std::max(1, threads);
  if (k == 0) nt = 1;
  else nt = static_cast<int>(std::min<int64_t>(nt, cert.bounds[0] + 1));
  std::map<int64_t, Coef> total;
  if (nt == 1) {
    total = work(0, 1);
  } else {
    std::vector<std::future<std::map<int64_t, Coef>>> fs;
    for (int t = 0; t < nt; ++t) fs.push_back(std::async(std::launch::async, work, t, nt));
    for (auto& f : fs)
      for (auto& [key, c] : f.get()) total[key] += c;
  }
  std::vector<QSeries::Term> terms;
  for (auto& [key, c] : total)
    if (!c.is_zero()) terms.push_back({key, std::move(c)});
  return QSeries::from_terms(D, std::move(terms), NT, pcap).normalized();
}

namespace {

MultiSumSpec gordon_like(int k, int s, bool even) {
  if (k < 2 || s < 1 || s > k) throw BadParameters("need k >= 2 and 1 <= s <= k");
  size_t n = static_cast<size_t>(k - 1);
  MultiSumSpec spec = MultiSumSpec::of_rank(n);
  // N_j = x_j + ... + x_{k-1}; sum_j N_j^2 has x_r x_t coefficient
  // (r+1) * (1 or 2), and sum_{j>=s} N_j has x_r coefficient r+2-s.
  for (size_t r = 0; r < n; ++r) {
    for (size_t t = r; t < n; ++t) spec.quad[r][t] = QExp(static_cast<int64_t>((r + 1) * (r == t ? 1 : 2)));
    spec.lin[r] = QExp(std::max<int64_t>(0, static_cast<int64_t>(r) + 2 - s));
  }
  if (even) spec.index[n - 1] = 2;
  return spec;
}

ProductExpr theta_over_eta(int64_t a, int64_t b, int64_t mod) {
  ProductExpr p;
  p.factors.push_back(inf_factor(a, mod));
  p.factors.push_back(inf_factor(b, mod));
  p.factors.push_back(inf_factor(mod, mod));
  p.factors.push_back(inf_factor(1, 1, -1));
  return p;
}

}  // namespace

MultiSumSpec andrews_gordon_spec(int k, int s) { return gordon_like(k, s, false); }
ProductExpr andrews_gordon_rhs(int k, int s) { return theta_over_eta(s, 2 * k + 1 - s, 2 * k + 1); }
MultiSumSpec bressoud_spec(int k, int s) { return gordon_like(k, s, true); }
ProductExpr bressoud_rhs(int k, int s) { return theta_over_eta(s, 2 * k - s, 2 * k); }

std::pair<MultiSumSpec, ProductExpr> zagier_spec(QExp alpha, QExp nu) {
  if (!(alpha > 0)) throw BadParameters("alpha must be positive");
  MultiSumSpec spec = MultiSumSpec::of_rank(2);
  QExp half = alpha / QExp(2);
  spec.quad[0][0] = half;
  spec.quad[0][1] = QExp(1) - alpha;
  spec.quad[1][1] = half;
  spec.lin = {alpha * nu, -(alpha * nu)};
  ProductExpr rhs;
  rhs.factors.push_back(inf_factor(half + alpha * nu, alpha, 1, CycloRat(-1)));
  rhs.factors.push_back(inf_factor(half - alpha * nu, alpha, 1, CycloRat(-1)));
  rhs.factors.push_back(inf_factor(alpha, alpha));
  rhs.factors.push_back(inf_factor(1, 1, -1));
  return {spec, rhs};
}

std::pair<MultiSumSpec, ProductExpr> thm31_spec(QExp alpha) {
  if (!(alpha > 0)) throw BadParameters("alpha must be positive");
  MultiSumSpec spec = MultiSumSpec::of_rank(2);
  QExp half = alpha / QExp(2);
  spec.quad[0][0] = half;
  spec.quad[0][1] = QExp(1) - alpha;
  spec.quad[1][1] = half;
  spec.lin = {QExp(1) - half, half};
  ProductExpr rhs;
  rhs.factors.push_back(inf_factor(QExp(2) * alpha, QExp(2) * alpha, 2));
  rhs.factors.push_back(inf_factor(1, 1, -1));
  rhs.factors.push_back(inf_factor(alpha, alpha, -1));
  return {spec, rhs};
}

MultiSumSpec gm_spec(int64_t m) {
  MultiSumSpec spec = MultiSumSpec::of_rank(1);
  spec.vars = {"n"};
  spec.quad[0][0] = 1;
  spec.lin[0] = 1 - m;
  SumFactor f;
  f.arg.offset = 1;
  f.arg.base = 1;
  f.sub = LinForm{{1}, -m};
  f.power = -1;
  f.strict = true;
  spec.factors.push_back(f);
  return spec;
}

QSeries gm_series(int64_t m, QExp N) { return eval_multisum(gm_spec(m), N, 0); }

}  // namespace qrr
