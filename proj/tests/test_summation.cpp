#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracle.hpp"
#include "qrr/errors.hpp"
#include "qrr/parse.hpp"
#include "qrr/qfactors.hpp"
#include "qrr/summation.hpp"

using namespace qrr;

namespace {

void expect_same(const QSeries& f, const QSeries& g, QExp N) {
  auto mm = first_mismatch(f, g, N);
  EXPECT_FALSE(mm.has_value()) << "first mismatch at q^" << exp_str(*mm) << "\n lhs " << f.str() << "\n rhs "
                               << g.str();
}

MultiSumSpec rr(QExp lin = 0) {
  MultiSumSpec s = MultiSumSpec::of_rank(1);
  s.vars = {"n"};
  s.quad[0][0] = 1;
  s.lin[0] = lin;
  return s;
}

/// Same sum with the axes renamed by perm (new axis r is old axis perm[r]).
MultiSumSpec permuted(const MultiSumSpec& s, const std::vector<size_t>& perm) {
  size_t k = s.rank();
  MultiSumSpec t = MultiSumSpec::of_rank(k);
  for (size_t r = 0; r < k; ++r) {
    t.index[r] = s.index[perm[r]];
    t.lin[r] = s.lin[perm[r]];
    for (size_t u = r; u < k; ++u) {
      QExp c = s.quad_coef(perm[r], perm[u]);
      t.quad[r][u] = c;
    }
  }
  t.cst = s.cst;
  return t;
}

oracle::Poly series_poly(const QSeries& f, int L) { return oracle::from_series(f, L); }

}  // namespace

TEST(Term, Examples) {
  MultiSumSpec s = rr();
  QSeries t = term(s, {2}, Trunc(20));
  EXPECT_EQ(series_poly(t, 20), oracle::shift(oracle::inv(oracle::poch_q(20, 1, 2)), 4));
  QSeries o = term(s, {0}, Trunc(20));
  EXPECT_EQ(series_poly(o, 20), oracle::one(20));
  // sum_n q^n / ((q;q)_n (1-q)) style term with an extra factor at n = 1.
  MultiSumSpec e = rr();
  e.quad[0][0] = 0;
  e.lin[0] = 1;
  e.index[0] = 0;
  SumFactor f;
  f.arg.offset = 1;
  f.sub = LinForm{{0}, 1};
  f.power = -1;
  e.factors.push_back(f);
  QSeries t1 = term(e, {1}, Trunc(15));
  EXPECT_EQ(series_poly(t1, 15), oracle::shift(oracle::inv(oracle::poch_q(15, 1, 1)), 1));
}

TEST(MultiSum, RogersRamanujanLeadingTerms) {
  QSeries f = eval_multisum(rr(), 6);
  std::vector<int> want = {1, 1, 1, 1, 2, 2, 3};
  for (int e = 0; e <= 6; ++e) EXPECT_EQ(f.coeff(e), Coef(want[static_cast<size_t>(e)])) << e;
}

TEST(MultiSum, RogersRamanujanAgainstPartitionCounts) {
  const int L = 60;
  auto first = oracle::eta_like(L, [](int n) { return n % 5 == 1 || n % 5 == 4; }, -1);
  auto second = oracle::eta_like(L, [](int n) { return n % 5 == 2 || n % 5 == 3; }, -1);
  EXPECT_EQ(series_poly(eval_multisum(rr(), L), L), first);
  EXPECT_EQ(series_poly(eval_multisum(rr(1), L), L), second);
}

TEST(MultiSum, AndrewsGordonBruteForce) {
  const int L = 40;
  // k = 3, s = 3: q^{N1^2+N2^2} with N1 = x0 + x1, N2 = x1. Q >= x_r^2 so a
  // box of 7 covers every exponent <= 40.
  auto Q = [](const std::vector<int>& x) { return long((x[0] + x[1]) * (x[0] + x[1]) + x[1] * x[1]); };
  auto brute = oracle::brute_sum(L, 2, 7, Q, {1, 1});
  EXPECT_EQ(series_poly(eval_multisum(andrews_gordon_spec(3, 3), L), L), brute);
  auto prod = oracle::eta_like(L, [](int n) { return n % 7 != 0 && n % 7 != 3 && n % 7 != 4; }, -1);
  EXPECT_EQ(brute, prod);
  // Bressoud k = 3, s = 3: last denominator (q^2;q^2).
  auto bb = oracle::brute_sum(L, 2, 7, Q, {1, 2});
  EXPECT_EQ(series_poly(eval_multisum(bressoud_spec(3, 3), L), L), bb);
  // For s = k the theta factor (q^3;q^6) appears squared.
  auto bp = oracle::mul(oracle::eta_like(L, [](int n) { return n % 6 != 0 && n % 6 != 3; }, -1),
                        oracle::eta_like(L, [](int n) { return n % 6 == 3; }, 1));
  EXPECT_EQ(bb, bp);
}

TEST(MultiSum, GordonFamilies) {
  for (int k = 2; k <= 4; ++k)
    for (int s = 1; s <= k; ++s) {
      SCOPED_TRACE("k=" + std::to_string(k) + " s=" + std::to_string(s));
      expect_same(eval_multisum(andrews_gordon_spec(k, s), 40), eval_product(andrews_gordon_rhs(k, s), Trunc(40)), 40);
      expect_same(eval_multisum(bressoud_spec(k, s), 40), eval_product(bressoud_rhs(k, s), Trunc(40)), 40);
    }
}

TEST(MultiSum, RankTwoAlphaFamily) {
  for (auto [a, N] : {std::pair<QExp, int>{1, 40}, {2, 40}, {QExp(1, 2), 20}, {3, 30}, {QExp(3, 2), 24}}) {
    SCOPED_TRACE("alpha=" + exp_str(a));
    auto [spec, rhs] = thm31_spec(a);
    expect_same(eval_multisum(spec, N), eval_product(rhs, Trunc(N)), N);
  }
}

TEST(MultiSum, ZagierFamily) {
  for (QExp a : {QExp(1, 2), QExp(1), QExp(2), QExp(3)})
    for (QExp nu : {QExp(0), QExp(1, 4), QExp(1, 3)}) {
      SCOPED_TRACE("alpha=" + exp_str(a) + " nu=" + exp_str(nu));
      auto [spec, rhs] = zagier_spec(a, nu);
      expect_same(eval_multisum(spec, 20), eval_product(rhs, Trunc(20)), 20);
    }
}

TEST(MultiSum, ZagierNegativeShiftAndEvenIndex) {
  // alpha = 3, nu = 1 puts -q^{-3/2} into the product side.
  auto [spec, rhs] = zagier_spec(3, 1);
  expect_same(eval_multisum(spec, 30), eval_product(rhs, Trunc(30)), 30);
  // Index (2,2) double sum equal to the second Rogers-Ramanujan product.
  MultiSumSpec s = parse_sum("sum[i,j] q^(i^2+j^2+2ij+2i+j)/((q^2;q^2)_i(q^2;q^2)_j)");
  EXPECT_EQ(s.index, (std::vector<int64_t>{2, 2}));
  expect_same(eval_multisum(s, 30), eval_product(parse_product("1/(q^2,q^3;q^5)_oo"), Trunc(30)), 30);
}

TEST(MultiSum, ParameterSumMatchesEuler) {
  // sum a^n q^n/(q;q)_n = 1/(aq;q)_oo under a degree cap.
  MultiSumSpec s = rr();
  s.quad[0][0] = 0;
  s.lin[0] = 1;
  s.param_exp[0] = LinForm{{1}, 0};
  ProductExpr p;
  PochArg x;
  x.mono = mono_var(0);
  x.offset = 1;
  p.factors.push_back({x, std::nullopt, -1});
  expect_same(eval_multisum(s, 25, 5), eval_product(p, Trunc(25), 5), 25);
}

TEST(MultiSum, RootOfUnitySign) {
  // sum z^n q^binom(n,2)/(q;q)_n = (-z;q)_oo at z = zeta_4.
  MultiSumSpec s = rr();
  s.quad[0][0] = QExp(1, 2);
  s.lin[0] = QExp(-1, 2);
  s.sign_root = 4;
  s.sign = LinForm{{1}, 0};
  ProductExpr p;
  PochArg x;
  x.scalar = -CycloRat::root_of_unity(4);
  x.offset = 0;
  p.factors.push_back({x, std::nullopt, 1});
  expect_same(eval_multisum(s, 30), eval_product(p, Trunc(30)), 30);
}

TEST(Cutoff, RogersRamanujanBox) {
  CutoffCertificate c = cutoff_bounds(rr(), 50, 8);
  ASSERT_EQ(c.bounds.size(), 1u);
  EXPECT_EQ(c.bounds[0], 7);
  EXPECT_FALSE(c.empty);
}

TEST(Cutoff, ParameterBoxForSemidefiniteForm) {
  // q^{(i-j)^2} a^{i+j}: the form is only semidefinite, so the parameter
  // degree has to close the box.
  MultiSumSpec s = MultiSumSpec::of_rank(2);
  s.quad[0][0] = 1;
  s.quad[0][1] = -2;
  s.quad[1][1] = 1;
  s.param_exp[0] = LinForm{{1, 1}, 0};
  CutoffCertificate c = cutoff_bounds(s, 40, 6);
  EXPECT_EQ(c.bounds, (std::vector<int64_t>{6, 6}));
  MultiSumSpec bare = s;
  bare.param_exp[0] = LinForm{};
  EXPECT_THROW(cutoff_bounds(bare, 40, 6), NonSummable);
}

TEST(Cutoff, SoundAgainstValuationScan) {
  const int N = 30;
  MultiSumSpec s = bressoud_spec(3, 2);
  CutoffCertificate c = cutoff_bounds(s, N, 8);
  ASSERT_EQ(c.bounds.size(), 2u);
  // All denominators here have valuation 0, so the term valuation is Q(x).
  for (int64_t i = 0; i <= 3 * N; ++i)
    for (int64_t j = 0; j <= 3 * N; ++j) {
      if (s.q_exp({i, j}) > N) continue;
      EXPECT_LE(i, c.bounds[0]);
      EXPECT_LE(j, c.bounds[1]);
    }
  MultiSumSpec far = rr();
  far.cst = 100;
  EXPECT_TRUE(cutoff_bounds(far, 50, 8).empty);
  EXPECT_FALSE(eval_multisum(far, 50).valuation().has_value());
}

TEST(MultiSum, AxisPermutationInvariance) {
  MultiSumSpec s = andrews_gordon_spec(4, 2);
  QSeries base = eval_multisum(s, 40);
  std::vector<size_t> perm = {0, 1, 2};
  while (std::next_permutation(perm.begin(), perm.end()))
    expect_same(eval_multisum(permuted(s, perm), 40), base, 40);
}

TEST(MultiSum, TruncationAndThreadConsistency) {
  MultiSumSpec s = bressoud_spec(4, 3);
  QSeries hi = eval_multisum(s, 45);
  QSeries lo = eval_multisum(s, 20);
  expect_same(hi.truncated(Trunc(20)), lo, 20);
  expect_same(eval_multisum(s, 45, 8, 4), hi, 45);
}

TEST(Gm, LeadingBehaviour) {
  QSeries g0 = gm_series(0, 10);
  EXPECT_EQ(g0.valuation(), std::optional<QExp>(0));
  EXPECT_EQ(g0.coeff(0), Coef(1));
  QSeries g2 = gm_series(2, 10);
  EXPECT_EQ(g2.valuation(), std::optional<QExp>(2));
  EXPECT_EQ(g2.coeff(2), Coef(1));
  for (int m = -4; m <= 0; ++m) EXPECT_EQ(gm_series(m, 5).coeff(0), Coef(1)) << m;
}

TEST(Gm, RecurrenceWithNeighbour) {
  const int N = 30;
  QSeries inv_eta = qs_inv(poch_inf(PochArg{CycloRat(1), 0, 1, 1}, Trunc(N)));
  for (int m = -5; m <= 5; ++m) {
    QSeries lhs = gm_series(m, N) + gm_series(m - 1, N + 8).shifted(1 - m).truncated(Trunc(N));
    expect_same(lhs, inv_eta, N);
  }
}

TEST(Gm, ClosedForm) {
  const int N = 40;
  for (int m = -8; m <= 8; ++m) {
    SCOPED_TRACE("m=" + std::to_string(m));
    QSeries prod = gm_series(m, N + 10) * poch_inf(PochArg{CycloRat(1), 0, 1, 1}, Trunc(N + 10));
    oracle::Poly want(N + 1, 0);
    for (int n = 0; n <= 2 * N + 20; ++n) {
      long e = long(n) * (n + 1) / 2 + long(n + 1) * m;
      if (e >= 0 && e <= N) want[static_cast<size_t>(e)] += (n % 2 == 0) ? 1 : -1;
    }
    EXPECT_EQ(series_poly(prod, N), want);
  }
}

TEST(FiniteIdentities, BinomialSliceAndRecurrence) {
  // L_n = q^{n^2+n} sum_i [n i]_{q^4} q^{4i^2-(4n+2)i} equals (-q^2;q^2)_n,
  // and L_n - q^{2n} L_{n-1} = L_{n-1}.
  QSeries prev;
  for (int64_t n = 0; n <= 30; ++n) {
    QSeries lhs = QSeries::zero(Trunc::infinite());
    for (int64_t i = 0; i <= n; ++i) lhs = lhs + qbinom(n, i, 4).shifted(n * n + n + 4 * i * i - (4 * n + 2) * i);
    int L = static_cast<int>(n * (n + 1));
    oracle::Poly want = oracle::one(L);
    for (int k = 1; k <= n; ++k) want = oracle::times_binomial(want, 1, 2 * k);
    EXPECT_EQ(series_poly(lhs, L), want) << n;
    EXPECT_EQ(lhs.valuation(), std::optional<QExp>(0));
    if (n > 0) {
      expect_same(lhs - prev.shifted(2 * n), prev, L);
      expect_same(lhs, prev * (QSeries::monomial(1, 0) + QSeries::monomial(1, 2 * n)), L);
    }
    prev = lhs;
  }
}

TEST(FiniteIdentities, CoefficientSlices) {
  // sum_{i+j=n} q^{(j-i)^2+(j-i)} / ((q^4;q^4)_i (q^4;q^4)_j) = 1/(q^2;q^2)_n.
  const int L = 60;
  PochArg q4{CycloRat(1), 0, 4, 4};
  for (int64_t n = 0; n <= 25; ++n) {
    QSeries lhs = QSeries::zero(Trunc(L));
    for (int64_t i = 0; i <= n; ++i) {
      int64_t d = n - 2 * i;
      QSeries t = qs_inv(poch_finite(q4, i, Trunc(L)) * poch_finite(q4, n - i, Trunc(L)));
      lhs = lhs + t.shifted(d * d + d).truncated(Trunc(L));
    }
    oracle::Poly want = oracle::inv(oracle::poch_q(L, 2, static_cast<int>(n)));
    EXPECT_EQ(series_poly(lhs, L), want) << n;
  }
}
