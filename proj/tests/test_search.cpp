#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qrr/catalog.hpp"
#include "qrr/errors.hpp"
#include "qrr/parse.hpp"
#include "qrr/products.hpp"
#include "qrr/search.hpp"
#include "qrr/summation.hpp"

using namespace qrr;

namespace {

const std::vector<IdentityRecord>& shipped() {
  static const std::vector<IdentityRecord> cat = load_catalog(default_catalog_path());
  return cat;
}

std::string lhs_key(const std::string& id) {
  const IdentityRecord* r = find_record(shipped(), id);
  if (!r) throw Error("missing record " + id);
  return canonical_key(*r->lhs.at(0).sum);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// The small documented rediscovery grid: rank 1, index 1, 2 or 4, quadratic
/// coefficient up to 2, shifts in [-1, 2].
SearchConfig small_grid() {
  SearchConfig cfg;
  cfg.jobs = 4;
  return cfg;
}

}  // namespace

TEST(CanonicalKey, SymmetricSwap) {
  MultiSumSpec a = parse_sum("sum[i,j] q^(i^2+ij+j^2+i+j)/((q;q)_i(q;q)_j)");
  MultiSumSpec b = parse_sum("sum[j,i] q^(j^2+ij+i^2+i+j)/((q;q)_j(q;q)_i)");
  EXPECT_EQ(canonical_key(a), canonical_key(b));
}

TEST(CanonicalKey, PermutedQuadraticForm) {
  MultiSumSpec a = parse_sum("sum[i,j] q^(i^2+2ij+2j^2+j)/((q;q)_i(q^2;q^2)_j)");
  MultiSumSpec b = parse_sum("sum[i,j] q^(2i^2+2ij+j^2+i)/((q^2;q^2)_i(q;q)_j)");
  EXPECT_EQ(canonical_key(a), canonical_key(b));
}

TEST(CanonicalKey, DifferentShiftsDiffer) {
  MultiSumSpec a = parse_sum("sum[i,j] q^(i^2+2ij+2j^2+j)/((q;q)_i(q^2;q^2)_j)");
  MultiSumSpec b = parse_sum("sum[i,j] q^(i^2+2ij+2j^2+i)/((q;q)_i(q^2;q^2)_j)");
  EXPECT_NE(canonical_key(a), canonical_key(b));
  EXPECT_NE(canonical_key(parse_sum("sum[n] q^(n^2)/(q;q)_n")), canonical_key(parse_sum("sum[n] q^(n^2+n)/(q;q)_n")));
}

TEST(CanonicalKey, GlobalRescale) {
  // q -> q^2 maps the index-1 sum to an index-2 sum with the same key.
  EXPECT_EQ(canonical_key(parse_sum("sum[n] q^(n^2)/(q;q)_n")),
            canonical_key(parse_sum("sum[n] q^(2n^2)/(q^2;q^2)_n")));
  EXPECT_NE(canonical_key(parse_sum("sum[n] q^(n^2)/(q;q)_n")),
            canonical_key(parse_sum("sum[n] q^(n^2)/(q^2;q^2)_n")));
}

TEST(SearchConfig, ParsesDocumentedFormat) {
  SearchConfig c = parse_search_config(
      "# small grid\nschema_version = 1\nrank = 2\nindices = 1,1; 1,2\nquad_max = 1\nlin_min = 0\nlin_max = 1\n"
      "den = 1\nsigns = false\nn1 = 40\nn2 = 60\nmax_period = 10\nparam = a\njobs = 3\n");
  EXPECT_EQ(c.rank, 2);
  ASSERT_EQ(c.indices.size(), 2u);
  EXPECT_EQ(c.indices[1], (std::vector<int64_t>{1, 2}));
  EXPECT_FALSE(c.signs);
  EXPECT_EQ(c.param, std::optional<char>('a'));
  EXPECT_EQ(c.jobs, 3);
  EXPECT_NO_THROW(c.validate());
}

TEST(SearchConfig, Errors) {
  EXPECT_THROW(parse_search_config("rank = 1\n"), SchemaError);
  EXPECT_THROW(parse_search_config("schema_version = 2\n"), SchemaError);
  EXPECT_THROW(parse_search_config("schema_version = 1\nwidth = 3\n"), SchemaError);
  EXPECT_THROW(parse_search_config("schema_version = 1\nrank 1\n"), SchemaError);
  EXPECT_THROW(parse_search_config("schema_version = 1\nn1 = 40\nn2 = 80\nmax_period = 20\n"), SchemaError);
  SearchConfig c;
  c.n1 = 80;
  c.n2 = 80;
  EXPECT_THROW(c.validate(), BadParameters);
  c.n2 = 81;
  c.max_period = 21;
  EXPECT_THROW(c.validate(), BadParameters);
  EXPECT_THROW(parse_shard("3/3"), BadParameters);
  EXPECT_THROW(parse_shard("x"), BadParameters);
  EXPECT_EQ(parse_shard("2/5").count, 5);
}

TEST(Search, EmptyGridEmitsNothing) {
  SearchConfig cfg;
  cfg.indices.clear();
  SearchStats st;
  EXPECT_TRUE(run_search(cfg, nullptr, &st).empty());
  EXPECT_EQ(st.grid, 0);
}

TEST(Search, RediscoversClassicalSingleSums) {
  auto t0 = std::chrono::steady_clock::now();
  auto cands = run_search(small_grid(), &shipped());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 60.0);
  for (const char* id : {"rogers-ramanujan-1", "rogers-ramanujan-2", "slater-16", "slater-20"}) {
    std::string key = lhs_key(id);
    const Candidate* hit = nullptr;
    for (const auto& c : cands)
      if (c.key == key) hit = &c;
    ASSERT_NE(hit, nullptr) << id;
    EXPECT_NE(std::find(hit->known.begin(), hit->known.end(), id), hit->known.end()) << id;
  }
  std::set<std::string> keys;
  for (const auto& c : cands) EXPECT_TRUE(keys.insert(c.key).second) << "duplicate key " << c.key;
}

TEST(Search, EmittedCandidatesHoldBeyondConfirmation) {
  SearchConfig cfg = small_grid();
  for (const auto& c : run_search(cfg)) {
    ASSERT_EQ(c.products.size(), 1u);
    EXPECT_EQ(c.verified_to, cfg.n2);
    QExp N = cfg.n2 + 10;
    EXPECT_FALSE(first_mismatch(eval_multisum(c.spec, N), eval_product(c.products[0].product, Trunc(N)), N))
        << candidate_json(c);
  }
}

TEST(Search, DeterministicAcrossJobsAndRuns) {
  SearchConfig a = small_grid(), b = small_grid();
  a.jobs = 1;
  b.jobs = 8;
  std::string pa = testing::TempDir() + "search_a.jsonl", pb = testing::TempDir() + "search_b.jsonl";
  write_candidates(pa, run_search(a, &shipped()));
  write_candidates(pb, run_search(b, &shipped()));
  EXPECT_EQ(slurp(pa), slurp(pb));
  write_candidates(pb, run_search(b, &shipped()));
  EXPECT_EQ(slurp(pa), slurp(pb));
  EXPECT_FALSE(slurp(pa).empty());
  std::remove(pa.c_str());
  std::remove(pb.c_str());
}

TEST(Search, ShardUnionEqualsFullRun) {
  SearchConfig cfg = small_grid();
  std::set<std::pair<int64_t, std::string>> full, merged;
  for (const auto& c : run_search(cfg)) full.insert({c.grid_index, c.key});
  for (int i = 0; i < 3; ++i) {
    cfg.shard = Shard{i, 3};
    for (const auto& c : run_search(cfg)) merged.insert({c.grid_index, c.key});
  }
  // Shards deduplicate only within themselves; keep the first grid index per key.
  std::map<std::string, int64_t> first;
  for (const auto& [g, k] : merged)
    if (!first.count(k)) first[k] = g;
  std::set<std::pair<int64_t, std::string>> dedup;
  for (const auto& [k, g] : first) dedup.insert({g, k});
  EXPECT_EQ(dedup, full);
}

TEST(Search, StatsAddUp) {
  SearchStats st;
  auto cands = run_search(small_grid(), nullptr, &st);
  EXPECT_EQ(st.in_shard, st.grid);
  EXPECT_EQ(st.fractional + st.non_summable + st.rejected + st.unconfirmed + st.duplicates + st.emitted, st.in_shard);
  EXPECT_EQ(st.emitted, static_cast<int64_t>(cands.size()));
}

TEST(Search, ParameterModeNeedsEverySpecialisation) {
  // A candidate survives only if a = 1, q and q^2 all give products; the
  // Euler sums in this grid do.
  SearchConfig cfg;
  cfg.indices = {{1}};
  cfg.quad_max = QExp(1, 2);
  cfg.lin_min = QExp(-1, 2);
  cfg.lin_max = QExp(1, 2);
  cfg.signs = true;
  cfg.param = 'a';
  cfg.n1 = 40;
  cfg.n2 = 60;
  cfg.max_period = 10;
  auto cands = run_search(cfg);
  ASSERT_FALSE(cands.empty());
  for (const auto& c : cands) {
    ASSERT_EQ(c.products.size(), 3u) << candidate_json(c);
    std::set<std::string> at;
    for (const auto& p : c.products) at.insert(p.at);
    EXPECT_EQ(at.size(), 3u);
    EXPECT_NE(candidate_json(c).find("\"at\""), std::string::npos);
  }
}
