#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrr/catalog.hpp"
#include "qrr/recognize.hpp"

namespace qrr {

/// Deduplication key of a multi-sum: invariant under permuting the
/// summation variables and under q -> q^r rescales, normalised so that the
/// index vector has gcd 1.
std::string canonical_key(const MultiSumSpec& spec);

struct Shard {
  int index = 0;
  int count = 1;
};

/// "i/n" with 0 <= i < n.
Shard parse_shard(const std::string& s);

/// Candidate sum sides are
///   sum_x (-1)^{s.x} q^{Q(x) + b.x} / prod_r (q^{d_r};q^{d_r})_{x_r}
/// over every index vector d in `indices`, every upper-triangular Q whose
/// diagonal entries lie in (0, quad_max] and off-diagonal entries in
/// [-quad_max, quad_max], every b in [lin_min, lin_max], all with
/// denominators dividing `den`, and every sign vector s in {0,1}^rank when
/// `signs` is set. Only integer-valued exponent forms are kept.
struct SearchConfig {
  int schema_version = 1;
  int rank = 1;
  std::vector<std::vector<int64_t>> indices{{1}, {2}, {4}};
  QExp quad_max{2};
  QExp lin_min{-1}, lin_max{2};
  int64_t den = 2;
  bool signs = true;
  /// Screening order, confirmation order and largest period tried.
  int64_t n1 = 80, n2 = 120, max_period = 20;
  /// When set, the summand also carries param^{x_1 + ... + x_k}; a candidate
  /// survives only if it is recognised at param in {1, q, q^2}.
  std::optional<char> param;
  int jobs = 1;
  std::string out;
  Shard shard;

  /// Throws BadParameters unless N2 > N1 >= 4 maxP and the grid is sane.
  void validate() const;
};

/// Key-value file, one "key = value" per line, '#' comments:
///   schema_version = 1
///   rank = 1
///   indices = 1; 2; 4          (vectors separated by ';', entries by ',')
///   quad_max = 2
///   lin_min = -1
///   lin_max = 2
///   den = 2
///   signs = true
///   n1 = 80
///   n2 = 120
///   max_period = 20
///   param = a                  (optional)
///   jobs = 1
///   out = candidates.jsonl     (optional)
/// Unknown keys and a missing or unsupported schema_version raise
/// SchemaError.
SearchConfig parse_search_config(const std::string& text);
SearchConfig load_search_config(const std::string& path);

/// One recognised product per specialisation (just one without a
/// parameter).
struct Recognition {
  std::string at;
  CycloRat scalar{1};
  RecognizedProduct rp;
  ProductExpr product;
};

struct Candidate {
  /// Position in the full (unsharded) enumeration.
  int64_t grid_index = 0;
  MultiSumSpec spec;
  std::vector<Recognition> products;
  int64_t verified_to = 0;
  std::string key;
  /// Catalog records whose product side is the same product.
  std::vector<std::string> known;
};

struct SearchStats {
  int64_t grid = 0, in_shard = 0, fractional = 0, non_summable = 0, rejected = 0, unconfirmed = 0,
          duplicates = 0, emitted = 0;
  std::string str() const;
};

/// Size of the enumeration for cfg, ignoring the shard.
int64_t grid_size(const SearchConfig& cfg);
/// The grid point with the given index; nullopt when its exponent form is
/// not integer valued.
std::optional<MultiSumSpec> grid_point(const SearchConfig& cfg, int64_t index);

/// Screens every grid point of the shard at N1 (integral prodmake exponents
/// with a period <= maxP), re-verifies survivors at N2 against the rendered
/// product and deduplicates by canonical_key. Output is ordered by grid
/// index and does not depend on jobs. When a catalog is given, candidates
/// whose product equals some record's product side are tagged with those
/// record ids.
std::vector<Candidate> run_search(const SearchConfig& cfg, const std::vector<IdentityRecord>* catalog = nullptr,
                                  SearchStats* stats = nullptr);

/// Self-contained one-line JSON record.
std::string candidate_json(const Candidate& c);
/// Writes one line per candidate, replacing any previous file.
void write_candidates(const std::string& path, const std::vector<Candidate>& cands);

}  // namespace qrr
