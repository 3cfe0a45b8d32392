#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qrr/products.hpp"

namespace qrr {

using Point = std::vector<int64_t>;

/// Integer affine form c0 + sum_r c[r] * x_r. A short coefficient vector
/// means the missing coefficients are zero.
struct LinForm {
  std::vector<int64_t> c;
  int64_t c0 = 0;

  int64_t at(const Point& x) const;
  bool is_zero() const;
  int64_t coef(size_t r) const { return r < c.size() ? c[r] : 0; }
};

/// Extra summand factor (arg; q^base)_{sub(x)}^power. A strict factor makes
/// the whole term vanish when its subscript is negative, which is the
/// 1/(q;q)_k = 0 convention; otherwise negative subscripts use the
/// quotient extension.
struct SumFactor {
  PochArg arg;
  LinForm sub;
  int power = 1;
  bool strict = false;
};

/// Sum over x in N^k of
///   scalar * zeta_m^{sign(x)} * q^{Q(x)} * prod_p p^{param_exp[p](x)}
///     * prod_r 1/(q^{index_r}; q^{index_r})_{x_r} * prod factors.
/// index_r == 0 means axis r carries no implicit denominator.
struct MultiSumSpec {
  std::vector<std::string> vars;
  std::vector<int64_t> index;
  /// quad[r][s] for r <= s is the coefficient of x_r x_s.
  std::vector<std::vector<QExp>> quad;
  std::vector<QExp> lin;
  QExp cst{0};
  uint32_t sign_root = 2;
  LinForm sign;
  std::vector<SumFactor> factors;
  std::array<LinForm, kNumParams> param_exp{};
  Coef scalar{1};

  size_t rank() const { return vars.size(); }
  /// Builds an empty rank-k spec with variables named i, j, k, l, ...
  static MultiSumSpec of_rank(size_t k);
  QExp q_exp(const Point& x) const;
  QExp quad_coef(size_t r, size_t s) const;
  int64_t denom() const;
  /// Checks shapes and the conditions the cutoff certificate relies on;
  /// throws BadParameters.
  void validate() const;
  /// Readable one-line summary for reports.
  std::string str() const;
};

/// The summand at one lattice point, to order N under parameter cap pcap.
QSeries term(const MultiSumSpec& spec, const Point& x, Trunc N, int pcap = kNoParamCap);

/// Certified enumeration box: every lattice point with some x_r > bounds[r]
/// has term valuation > N or some parameter degree > M.
struct CutoffCertificate {
  std::vector<int64_t> bounds;
  /// Multipliers of (deg_p - M) added to the valuation bound.
  std::array<Rat, kNumParams> lambda{};
  /// Exact minimum of the certifying function on each outer face.
  std::vector<Rat> face_min;
  /// Which certificate closed the box: "params", "quadratic", or "empty".
  std::string method;
  /// Nothing can contribute; bounds are meaningless.
  bool empty = false;

  std::string str() const;
};

CutoffCertificate cutoff_bounds(const MultiSumSpec& spec, QExp N, int M);

/// Exact value of the sum to order N with per-parameter degree cap M.
QSeries eval_multisum(const MultiSumSpec& spec, QExp N, int M = 8, int threads = 1);

/// Andrews-Gordon sum side of modulus 2k+1.
MultiSumSpec andrews_gordon_spec(int k, int s);
ProductExpr andrews_gordon_rhs(int k, int s);
/// Bressoud's even-modulus companion; last denominator has base q^2.
MultiSumSpec bressoud_spec(int k, int s);
ProductExpr bressoud_rhs(int k, int s);
/// Zagier's rank-two family with A = [[a, 1-a], [1-a, a]], B = (a*nu, -a*nu).
std::pair<MultiSumSpec, ProductExpr> zagier_spec(QExp alpha, QExp nu);
/// Same A with B = (1 - a/2, a/2).
std::pair<MultiSumSpec, ProductExpr> thm31_spec(QExp alpha);
/// g_m(q) = sum_n q^{n(n-m+1)} / ((q;q)_n (q;q)_{n-m}), strict in n-m.
MultiSumSpec gm_spec(int64_t m);
QSeries gm_series(int64_t m, QExp N);

}  // namespace qrr
