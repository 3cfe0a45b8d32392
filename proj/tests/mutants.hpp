#pragma once

#include <string>
#include <vector>

#include "qrr/catalog.hpp"
#include "qrr/errors.hpp"
#include "qrr/parse.hpp"

namespace mutants {

/// A shipped record with one side edited: a modulus or a shift changed.
struct Mutant {
  std::string id;
  bool on_lhs;
  std::string from, to;
};

inline const std::vector<Mutant>& list() {
  static const std::vector<Mutant> m = {
      {"rogers-ramanujan-1", false, "q^5", "q^7"},
      {"rogers-ramanujan-2", true, "n^2+n", "n^2+2n"},
      {"slater-16", false, "q^5", "q^6"},
      {"slater-20", true, "q^(n^2)", "q^(n^2+n)"},
      {"bressoud-explicit-2", false, "q^2,q^4,q^6;q^6", "q^2,q^5,q^7;q^7"},
      {"index12-parametric-a1", true, "-i-j", "-i"},
      {"24-07", false, "1/(q^4,", "1/(q^2,"},
      {"222-03", true, "+i+2j+2k", "+i+2j+k"},
      {"124-26", false, "q^12;q^12", "q^10;q^10"},
      {"1112-08", true, "k+2l", "k+3l"},
  };
  return m;
}

/// The mutated record, re-read through the catalog loader.
inline qrr::IdentityRecord apply(const qrr::IdentityRecord& rec, const Mutant& m) {
  std::string lhs = rec.lhs_text, rhs = rec.rhs_text;
  std::string& s = m.on_lhs ? lhs : rhs;
  auto pos = s.find(m.from);
  if (pos == std::string::npos) throw qrr::Error("mutation '" + m.from + "' not found in " + rec.id);
  s.replace(pos, m.from.size(), m.to);
  std::string text = "[" + rec.id + "-mutant]\nlhs: " + lhs + "\nrhs: " + rhs + "\nstatus: " +
                     qrr::status_name(rec.status) + "\n";
  if (!rec.params.empty()) {
    text += "params:";
    for (char p : rec.params) text += std::string(" ") + p;
    text += "\n";
  }
  if (rec.conductor != 1) text += "conductor: " + std::to_string(rec.conductor) + "\n";
  return qrr::parse_catalog(text).at(0);
}

}  // namespace mutants
