// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any criterion fails. Tolerances are exact unless a time limit is named.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>

#include "mutants.hpp"
#include "oracle.hpp"
#include "qrr/catalog.hpp"
#include "qrr/ct_scripts.hpp"
#include "qrr/errors.hpp"
#include "qrr/parse.hpp"
#include "qrr/products.hpp"
#include "qrr/qfactors.hpp"
#include "qrr/recognize.hpp"
#include "qrr/search.hpp"
#include "qrr/summation.hpp"

using namespace qrr;

namespace {

constexpr int kJobs = 8;
constexpr double kCatalogSeconds = 600;
constexpr double kSearchSeconds = 60;

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const QSeries& a, const QSeries& b, QExp N) { return !first_mismatch(a, b, N).has_value(); }

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

const std::vector<IdentityRecord>& catalog() {
  static const std::vector<IdentityRecord> cat = load_catalog(default_catalog_path());
  return cat;
}

Outcome full_catalog() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  VerifySummary s;
  auto reports = verify_all(catalog(), 50, 8, kJobs, &s);
  double secs = since(t0);
  for (const auto& r : reports)
    if (!r.pass()) o.fail(r.line());
  if (catalog().size() < 180) o.fail("only " + std::to_string(catalog().size()) + " records");
  if (secs > kCatalogSeconds) o.fail("took " + std::to_string(secs) + "s");
  if (o.ok)
    o.detail = std::to_string(s.passed) + " pass, " + std::to_string(s.consistent) + " conjectures consistent in " +
               std::to_string(static_cast<int>(secs + 0.5)) + "s";
  return o;
}

Outcome conjecture() {
  Outcome o;
  const IdentityRecord* r = find_record(catalog(), "conjecture-13");
  if (!r) {
    o.fail("record missing");
    return o;
  }
  VerifyReport v = verify_at(*r, 200);
  if (!v.pass()) o.fail(v.line());
  else o.detail = "consistent to order 200";
  return o;
}

Outcome polynomial_suites() {
  Outcome o;
  // L_n = q^{n^2+n} sum_i [n i]_{q^4} q^{4i^2-(4n+2)i} against R_n = (-q^2;q^2)_n,
  // both satisfying X_n = (1 + q^{2n}) X_{n-1}.
  QSeries prevL;
  for (int64_t n = 0; n <= 30; ++n) {
    QSeries L = QSeries::zero(Trunc::infinite());
    for (int64_t i = 0; i <= n; ++i) L = L + qbinom(n, i, 4).shifted(n * n + n + 4 * i * i - (4 * n + 2) * i);
    int deg = static_cast<int>(n * (n + 1));
    oracle::Poly R = oracle::one(deg);
    for (int k = 1; k <= n; ++k) R = oracle::times_binomial(R, 1, 2 * k);
    if (oracle::from_series(L, deg) != R) o.fail("L_n != R_n at n=" + std::to_string(n));
    if (n > 0 && !same(L, prevL * (QSeries::monomial(1, 0) + QSeries::monomial(1, 2 * n)), deg))
      o.fail("recurrence at n=" + std::to_string(n));
    prevL = L;
  }
  // Rogers-Szego H_n(q^2; q^4) = (-q^2;q^2)_n.
  for (int n = 0; n <= 30; ++n) {
    int deg = n * (n + 1);
    oracle::Poly R = oracle::one(deg);
    for (int k = 1; k <= n; ++k) R = oracle::times_binomial(R, 1, 2 * k);
    if (oracle::from_series(rogers_szego(n, Coef(1), 2, 4), deg) != R) o.fail("H_n at n=" + std::to_string(n));
  }
  // Finite Euler form (-z;q)_n = sum_k [n k] z^k q^{k(k-1)/2} at z = q^j.
  for (int n = 0; n <= 20; ++n)
    for (int j = 0; j <= 2; ++j) {
      int deg = n * (n + 1) / 2 + n * j + 1;
      oracle::Poly lhs = oracle::one(deg);
      for (int m = 0; m < n; ++m) lhs = oracle::times_binomial(lhs, 1, j + m);
      QSeries rhs = QSeries::zero(Trunc::infinite());
      for (int k = 0; k <= n; ++k) rhs = rhs + qbinom(n, k).shifted(k * (k - 1) / 2 + k * j);
      if (oracle::from_series(rhs, deg) != lhs) o.fail("finite Euler at n=" + std::to_string(n));
    }
  // Coefficient slices sum_{i+j=n} q^{(j-i)^2+(j-i)}/((q^4;q^4)_i (q^4;q^4)_j) = 1/(q^2;q^2)_n.
  const int L = 60;
  PochArg q4{CycloRat(1), 0, 4, 4};
  for (int64_t n = 0; n <= 25; ++n) {
    QSeries lhs = QSeries::zero(Trunc(L));
    for (int64_t i = 0; i <= n; ++i) {
      int64_t d = n - 2 * i;
      QSeries t = qs_inv(poch_finite(q4, i, Trunc(L)) * poch_finite(q4, n - i, Trunc(L)));
      lhs = lhs + t.shifted(d * d + d).truncated(Trunc(L));
    }
    if (oracle::from_series(lhs, L) != oracle::inv(oracle::poch_q(L, 2, static_cast<int>(n))))
      o.fail("coefficient slice at n=" + std::to_string(n));
  }
  // g_m: g_m + q^{1-m} g_{m-1} = 1/(q;q)_oo and (q;q)_oo g_m = sum_n (-1)^n q^{n(n+1)/2 + (n+1)m}.
  const int N = 40;
  QSeries inv_eta = qs_inv(poch_inf(PochArg{CycloRat(1), 0, 1, 1}, Trunc(N)));
  for (int m = -8; m <= 8; ++m) {
    QSeries rec = gm_series(m, N) + gm_series(m - 1, N + 10).shifted(1 - m).truncated(Trunc(N));
    if (!same(rec, inv_eta, N)) o.fail("g_m recurrence at m=" + std::to_string(m));
    QSeries prod = gm_series(m, N + 10) * poch_inf(PochArg{CycloRat(1), 0, 1, 1}, Trunc(N + 10));
    oracle::Poly want(N + 1, 0);
    for (int n = 0; n <= 2 * N + 20; ++n) {
      long e = long(n) * (n + 1) / 2 + long(n + 1) * m;
      if (e >= 0 && e <= N) want[static_cast<size_t>(e)] += (n % 2 == 0) ? 1 : -1;
    }
    if (oracle::from_series(prod, N) != want) o.fail("g_m closed form at m=" + std::to_string(m));
  }
  if (o.ok) o.detail = "L_n/R_n, H_n, finite Euler, slices, g_m";
  return o;
}

Outcome ct_replay() {
  Outcome o;
  int passed = 0;
  for (const auto& s : replay_scripts()) {
    CtReport r = check_ct_equals_sum(s, 30);
    if (r.pass) ++passed;
    else o.fail(s.name + (r.error.empty() ? " mismatch" : ": " + r.error));
  }
  if (passed < 12) o.fail("only " + std::to_string(passed) + " scripts");
  if (o.ok) o.detail = std::to_string(passed) + " scripts to order 30";
  return o;
}

Outcome prodmake_roundtrip() {
  Outcome o;
  std::mt19937 rng(20240611);
  const int64_t L = 80;
  for (int trial = 0; trial < 50; ++trial) {
    ProductExpr p;
    std::vector<Rat> a(static_cast<size_t>(L), Rat(0));
    int P = std::uniform_int_distribution<int>(1, 16)(rng);
    int k = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int f = 0; f < k; ++f) {
      int r = std::uniform_int_distribution<int>(1, P)(rng);
      int e = std::uniform_int_distribution<int>(-2, 1)(rng);
      if (e >= 0) ++e;
      p.factors.push_back(inf_factor(r, P, e));
      for (int64_t n = r; n <= L; n += P) a[static_cast<size_t>(n - 1)] = a[static_cast<size_t>(n - 1)] + Rat(e);
    }
    QSeries f = eval_product(p, Trunc(L));
    RecognizedProduct rp = recognize(f, L, 16);
    if (rp.a != a || !rp.period || !same(eval_product(render(rp), Trunc(L)), f, L))
      o.fail("round trip of " + render_fraction(p));
  }
  RecognizedProduct rr = recognize(eval_multisum(parse_sum("sum[n] q^(n^2)/(q;q)_n"), 60), 60, 32);
  std::vector<Rat> head(rr.a.begin(), rr.a.begin() + 5);
  if (rr.period != std::optional<int64_t>(5) || head != std::vector<Rat>{Rat(-1), Rat(0), Rat(0), Rat(-1), Rat(0)})
    o.fail("Rogers-Ramanujan sum side not period 5 with (-1,0,0,-1,0)");
  if (o.ok) o.detail = "50 random products, Rogers-Ramanujan period 5";
  return o;
}

Outcome search_rediscovery() {
  Outcome o;
  SearchConfig cfg;  // rank 1, index 1/2/4, Q coefficient <= 2, shifts in [-1, 2]
  cfg.jobs = kJobs;
  auto t0 = std::chrono::steady_clock::now();
  auto cands = run_search(cfg, &catalog());
  double secs = since(t0);
  if (secs > kSearchSeconds) o.fail("took " + std::to_string(secs) + "s");
  for (const char* id : {"rogers-ramanujan-1", "rogers-ramanujan-2", "slater-16", "slater-20"}) {
    std::string key = canonical_key(*find_record(catalog(), id)->lhs.at(0).sum);
    bool hit = false;
    for (const auto& c : cands) hit = hit || c.key == key;
    if (!hit) o.fail(std::string("missed ") + id);
  }
  auto text = [](const std::vector<Candidate>& cs) {
    std::string s;
    for (const auto& c : cs) s += candidate_json(c) + "\n";
    return s;
  };
  SearchConfig serial = cfg;
  serial.jobs = 1;
  if (text(run_search(serial, &catalog())) != text(cands)) o.fail("output depends on jobs");
  std::map<std::string, int64_t> first;
  for (int i = 0; i < 4; ++i) {
    SearchConfig sh = cfg;
    sh.shard = Shard{i, 4};
    for (const auto& c : run_search(sh)) {
      auto it = first.find(c.key);
      if (it == first.end() || c.grid_index < it->second) first[c.key] = c.grid_index;
    }
  }
  std::map<std::string, int64_t> full;
  for (const auto& c : cands) full[c.key] = c.grid_index;
  if (first != full) o.fail("shard union differs from the full run");
  if (o.ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu candidates in %.2fs, 4 targets found", cands.size(), secs);
    o.detail = buf;
  }
  return o;
}

Outcome negative_controls() {
  Outcome o;
  QExp worst{0};
  for (const auto& m : mutants::list()) {
    const IdentityRecord* r = find_record(catalog(), m.id);
    if (!r) {
      o.fail("missing " + m.id);
      continue;
    }
    VerifyReport v = verify(mutants::apply(*r, m), 50);
    if (v.result != VerifyReport::Result::Fail || !v.mismatch || *v.mismatch > QExp(12)) o.fail(v.line());
    else worst = std::max(worst, *v.mismatch);
  }
  if (o.ok) o.detail = "10 mutants fail, latest first mismatch at q^" + exp_str(worst);
  return o;
}

Outcome machinery() {
  Outcome o;
  const QExp N = 40;
  Mono a = mono_var(*param_index('a'), 1);
  // Euler: sum a^n/(q;q)_n = 1/(a;q)_oo and sum a^n q^{n(n-1)/2}/(q;q)_n = (-a;q)_oo.
  MultiSumSpec e1 = parse_sum("sum[n] a^n/(q;q)_n");
  ProductExpr r1;
  r1.factors.push_back(inf_factor(0, 1, -1, CycloRat(1), a));
  if (!same(eval_multisum(e1, N, 8), eval_product(r1, Trunc(N), 8), N)) o.fail("first Euler identity");
  MultiSumSpec e2 = parse_sum("sum[n] a^n q^((n^2-n)/2)/(q;q)_n");
  ProductExpr r2;
  r2.factors.push_back(inf_factor(0, 1, 1, CycloRat(-1), a));
  if (!same(eval_multisum(e2, N, 8), eval_product(r2, Trunc(N), 8), N)) o.fail("second Euler identity");
  // Jacobi triple product: kernel coefficients against (q, z, q/z; q)_oo multiplied out.
  const int L = 30;
  ZQSeries k = jtp_kernel(Trunc(L));
  std::map<std::pair<int, int>, mpq_class> prod{{{0, 0}, 1}};
  auto times = [&](int w, int e) {
    auto out = prod;
    for (const auto& [key, c] : prod)
      if (key.second + e <= L) out[{key.first + w, key.second + e}] -= c;
    prod = std::move(out);
  };
  for (int n = 1; n <= L; ++n) times(0, n);
  for (int n = 0; n <= L; ++n) times(1, n);
  for (int n = 1; n <= L; ++n) times(-1, n);
  for (const auto& [key, c] : prod) {
    if (c == 0) continue;
    if (key.first < k.wmin() || key.first > k.wmax()) {
      o.fail("triple product window");
      continue;
    }
    Coef got = k.coeff(key.first).coeff(key.second);
    mpq_class g = got.is_zero() ? mpq_class(0) : got.constant_term().rational().to_mpq();
    if (g != c) o.fail("triple product coefficient");
  }
  // q-Gauss at monomial points, parsed through the catalog grammar.
  for (const auto& [lhs, rhs] : std::vector<std::pair<std::string, std::string>>{
           {"sum[n] (q,q;q)_n q^n/(q,q^3;q)_n", "(q^2,q^2;q)_oo/(q^3,q;q)_oo"},
           {"sum[n] (-q,q^2;q)_n (-1)^n q^n/(q,q^4;q)_n", "(-q^3,q^2;q)_oo/(q^4,-q;q)_oo"},
           {"sum[n] (q^2,-q;q)_n q^(2n)/(q,-q^5;q)_n", "(-q^3,q^4;q)_oo/(-q^5,q^2;q)_oo"}}) {
    if (!same(eval_side(parse_side(lhs), N, 8), eval_side(parse_side(rhs), N, 8), N)) o.fail("q-Gauss " + lhs);
  }
  if (o.ok) o.detail = "Euler pair, triple product, q-Gauss";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"full catalog verification", full_catalog},
      {"conjecture to order 200", conjecture},
      {"polynomial identity suites", polynomial_suites},
      {"constant-term replay", ct_replay},
      {"product recognition round trip", prodmake_roundtrip},
      {"search rediscovery", search_rediscovery},
      {"negative controls", negative_controls},
      {"series machinery invariants", machinery},
  };
  bool all = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return all ? 0 : 1;
}
