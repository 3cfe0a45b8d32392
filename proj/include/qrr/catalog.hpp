#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrr/side.hpp"

namespace qrr {

enum class Status { Classical, PaperNew, NonModular, Conjecture };

std::string status_name(Status s);

/// Parameter p -> c q^e, checked in addition to the polynomial comparison.
struct Specialization {
  char param;
  CycloRat c;
  QExp e;
  std::string str() const;
};

struct IdentityRecord {
  std::string id;
  /// Line of the record header in its file.
  int line = 0;
  std::string lhs_text, rhs_text;
  Side lhs, rhs;
  /// Formal parameters the identity holds in, as polynomial identities to degree M.
  std::vector<char> params;
  std::vector<Specialization> checks;
  uint32_t conductor = 1;
  Status status = Status::PaperNew;
  /// Per-record order override; otherwise the default rule of effective_order.
  std::optional<int64_t> order;
  std::string note;
};

/// Reads a catalog file. The format is line based:
///
///   # comment
///   [record-id]
///   lhs: sum[i,j] q^(i^2+2ij+2j^2)/((q;q)_i(q^2;q^2)_j)
///   rhs: (q^3,q^3,q^6;q^6)_oo/(q;q)_oo
///   status: classical | paper-new | non-modular | conjecture
///   params: a b          (optional)
///   check: a=-q^2, a=1   (optional specialisations)
///   conductor: 4         (optional; must match the sides)
///   order: 40            (optional)
///   note: free text
///
/// A line starting with whitespace continues the previous value. An lhs of
/// the form @andrews-gordon(k,s), @bressoud(k,s), @alpha(a) or
/// @zagier(a,nu) is produced by the corresponding generator, and "rhs: @"
/// takes the generator's product side. Throws SchemaError.
std::vector<IdentityRecord> load_catalog(const std::string& path);
std::vector<IdentityRecord> parse_catalog(const std::string& text);

/// The shipped catalog under data/.
std::string default_catalog_path();

/// lcm of the cyclotomic conductors appearing on a side.
uint32_t side_conductor(const Side& s);

struct VerifyReport {
  enum class Result { Pass, Fail, InfraFail };
  std::string id;
  Status status = Status::PaperNew;
  int64_t order = 0;
  int param_degree = 0;
  Result result = Result::Pass;
  std::optional<QExp> mismatch;
  std::string lhs_coef, rhs_coef;
  /// Which comparison failed ("polynomial" or a specialisation), or the
  /// infrastructure error message.
  std::string detail;
  double seconds = 0;

  bool pass() const { return result == Result::Pass; }
  std::string line() const;
};

std::string result_name(VerifyReport::Result r);

/// Order at which a record is checked when the caller asks for N: the
/// record's own override if present, otherwise min(N, 40) for conductor-4
/// and half-integer-exponent records and N for the rest.
int64_t effective_order(const IdentityRecord& rec, int64_t N);

/// Compares both sides exactly to the record's effective order, as a
/// polynomial identity in the parameters below degree M, then under each
/// listed specialisation. Library errors become InfraFail.
VerifyReport verify(const IdentityRecord& rec, int64_t N, int M = 8);
/// Same at exactly order N, ignoring the effective-order rule.
VerifyReport verify_at(const IdentityRecord& rec, int64_t N, int M = 8);

struct VerifySummary {
  size_t passed = 0, failed = 0, infra = 0, consistent = 0;
  double seconds = 0;
};

/// verify on every record with a pool of `jobs` workers; reports are sorted
/// by id.
std::vector<VerifyReport> verify_all(const std::vector<IdentityRecord>& cat, int64_t N, int M, int jobs,
                                     VerifySummary* summary = nullptr);

/// Structured report: one JSON object per record plus a summary object.
/// Wall times are left out unless `timing`, so the default output is stable
/// across runs.
std::string reports_json(const std::vector<VerifyReport>& reports, const VerifySummary& summary,
                         bool timing = false);

const IdentityRecord* find_record(const std::vector<IdentityRecord>& cat, const std::string& id);

}  // namespace qrr
