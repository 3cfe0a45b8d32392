#include <gtest/gtest.h>

#include <random>

#include "qrr/errors.hpp"
#include "qrr/parse.hpp"
#include "qrr/recognize.hpp"
#include "qrr/summation.hpp"

using namespace qrr;

namespace {

std::vector<Rat> ints(const std::vector<int64_t>& v) {
  std::vector<Rat> r;
  for (int64_t x : v) r.emplace_back(x);
  return r;
}

struct RandomProduct {
  ProductExpr p;
  std::vector<int64_t> a;  // exponent of (1-q^n), n = 1..L
};

/// Up to three infinite factors (q^r;q^P)_oo^e sharing one modulus P <= 16,
/// e in [-2,2] \ {0}.
RandomProduct random_product(std::mt19937& rng, int64_t L) {
  RandomProduct out;
  out.a.assign(static_cast<size_t>(L), 0);
  std::uniform_int_distribution<int> count(1, 3), mod(1, 16), pw(-2, 1);
  int k = count(rng);
  int P = mod(rng);
  for (int f = 0; f < k; ++f) {
    int r = std::uniform_int_distribution<int>(1, P)(rng);
    int e = pw(rng);
    if (e >= 0) ++e;
    out.p.factors.push_back(inf_factor(r, P, e));
    for (int64_t n = r; n <= L; n += P) out.a[static_cast<size_t>(n - 1)] += e;
  }
  return out;
}

}  // namespace

TEST(Prodmake, EulerProduct) {
  QSeries f = eval_product(parse_product("(q;q)_oo"), Trunc(40));
  RecognizedProduct rp = recognize(f, 40, 8);
  EXPECT_EQ(rp.a, ints(std::vector<int64_t>(40, 1)));
  EXPECT_EQ(rp.period, std::optional<int64_t>(1));
  EXPECT_EQ(render_fraction(render(rp)), "(q;q)_oo");
}

TEST(Prodmake, RogersRamanujanSumSide) {
  MultiSumSpec s = parse_sum("sum[n] q^(n^2)/(q;q)_n");
  RecognizedProduct rp = recognize(eval_multisum(s, 60), 60, 32);
  ASSERT_EQ(rp.period, std::optional<int64_t>(5));
  std::vector<Rat> head(rp.a.begin(), rp.a.begin() + 5);
  EXPECT_EQ(head, ints({-1, 0, 0, -1, 0}));
  EXPECT_EQ(render_fraction(render(rp)), "1/(q,q^4;q^5)_oo");
  RecognizedProduct second = recognize(eval_multisum(parse_sum("sum[n] q^(n^2+n)/(q;q)_n"), 60), 60, 32);
  EXPECT_EQ(render_fraction(render(second)), "1/(q^2,q^3;q^5)_oo");
}

TEST(Prodmake, ShiftAndHeadCorrection) {
  QSeries f = eval_product(parse_product("q^3 (q^2;q^2)_oo/(1-q)"), Trunc(60));
  RecognizedProduct rp = recognize(f, 50, 16);
  EXPECT_EQ(rp.C, QExp(3));
  EXPECT_EQ(rp.a[0], Rat(-1));
  EXPECT_EQ(rp.period, std::optional<int64_t>(2));
  ProductExpr p = render(rp);
  EXPECT_EQ(render_fraction(p), "q^3*(q^2;q^2)_oo/(q;q)_1");
  EXPECT_FALSE(first_mismatch(eval_product(p, Trunc(60)), f, 53).has_value());
}

TEST(Prodmake, FinitePolynomials) {
  // 1 + q = (1 - q^2)/(1 - q) is itself a finite product.
  QSeries f = QSeries::monomial(1, 0) + QSeries::monomial(1, 1);
  RecognizedProduct rp = prodmake(f, 40);
  std::vector<int64_t> want(40, 0);
  want[0] = -1;
  want[1] = 1;
  EXPECT_EQ(rp.a, ints(want));
  // 1 + 2q has integral but unbounded exponents and no period.
  QSeries g = QSeries::monomial(1, 0) + QSeries::monomial(2, 1);
  RecognizedProduct rg = recognize(g, 64, 16);
  EXPECT_FALSE(rg.period.has_value());
  EXPECT_GT(abs(rg.a[63].small_num()), 1000);
}

TEST(Prodmake, Rejections) {
  QSeries half = QSeries::monomial(1, 0) + QSeries::monomial(Coef(Rat(1, 2)), 1);
  EXPECT_THROW(prodmake(half, 10), NonIntegerExponent);
  QSeries two = QSeries::monomial(2, 0) + QSeries::monomial(1, 1);
  EXPECT_THROW(prodmake(two, 10), LeadingUnit);
  QSeries shortf = eval_product(parse_product("(q;q)_oo"), Trunc(10));
  EXPECT_THROW(prodmake(shortf, 20), NonTruncating);
}

TEST(DetectPeriod, Examples) {
  EXPECT_EQ(detect_period(ints(std::vector<int64_t>(40, -1)), 8), std::optional<int64_t>(1));
  std::vector<int64_t> five;
  for (int n = 1; n <= 60; ++n) five.push_back(n % 5 == 1 || n % 5 == 4 ? -1 : 0);
  EXPECT_EQ(detect_period(ints(five), 32), std::optional<int64_t>(5));
  std::mt19937 rng(7);
  std::vector<int64_t> noise;
  for (int n = 1; n <= 100; ++n) noise.push_back(std::uniform_int_distribution<int>(-n, n)(rng));
  EXPECT_FALSE(detect_period(ints(noise), 32).has_value());
  // A short sequence still needs two full periods.
  EXPECT_EQ(detect_period(ints(std::vector<int64_t>(20, 1)), 4), std::optional<int64_t>(1));
  std::vector<int64_t> once = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 1, 2, 3, 4, 5};
  EXPECT_FALSE(detect_period(ints(once), 10).has_value());
}

TEST(Prodmake, RandomRoundTrip) {
  std::mt19937 rng(20240611);
  const int64_t L = 80;
  for (int trial = 0; trial < 50; ++trial) {
    RandomProduct rnd = random_product(rng, L);
    SCOPED_TRACE(render(rnd.p));
    QSeries f = eval_product(rnd.p, Trunc(L));
    RecognizedProduct rp = recognize(f, L, 16);
    EXPECT_EQ(rp.a, ints(rnd.a));
    ASSERT_TRUE(rp.period.has_value());
    EXPECT_FALSE(first_mismatch(eval_product(render(rp), Trunc(L)), f, L).has_value());
  }
}

TEST(Prodmake, Multiplicative) {
  std::mt19937 rng(99);
  const int64_t L = 60;
  for (int trial = 0; trial < 20; ++trial) {
    RandomProduct x = random_product(rng, L), y = random_product(rng, L);
    QSeries fx = eval_product(x.p, Trunc(L)), fy = eval_product(y.p, Trunc(L));
    RecognizedProduct rxy = prodmake(fx * fy, L), rx = prodmake(fx, L), ry = prodmake(fy, L);
    for (size_t n = 0; n < static_cast<size_t>(L); ++n) EXPECT_EQ(rxy.a[n], rx.a[n] + ry.a[n]);
  }
}
