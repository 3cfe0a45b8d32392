#include "qrr/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qrr/errors.hpp"
#include "qrr/parse.hpp"

namespace qrr {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

Status parse_status(const std::string& s, int line) {
  if (s == "classical") return Status::Classical;
  if (s == "paper-new") return Status::PaperNew;
  if (s == "non-modular") return Status::NonModular;
  if (s == "conjecture") return Status::Conjecture;
  throw SchemaError(line, "status", "unknown status '" + s + "'");
}

Side sum_side(const MultiSumSpec& s) { return Side{SideTerm{ProductExpr{}, s}}; }
Side product_side(const ProductExpr& p) { return Side{SideTerm{p, std::nullopt}}; }

/// Expands "@name(args)" into both sides of a generated identity.
std::pair<Side, Side> generate(const std::string& text, int line) {
  size_t open = text.find('('), close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw SchemaError(line, "lhs", "malformed generator '" + text + "'");
  std::string name = trim(text.substr(1, open - 1));
  std::vector<std::string> args = split(text.substr(open + 1, close - open - 1), ',');
  auto need = [&](size_t n) {
    if (args.size() != n)
      throw SchemaError(line, "lhs", "generator '" + name + "' takes " + std::to_string(n) + " arguments");
  };
  auto integer = [&](const std::string& a) {
    QExp v = parse_rational(a);
    if (v.denominator() != 1) throw SchemaError(line, "lhs", "integer argument expected, got '" + a + "'");
    return static_cast<int>(v.numerator());
  };
  if (name == "andrews-gordon") {
    need(2);
    int k = integer(args[0]), s = integer(args[1]);
    return {sum_side(andrews_gordon_spec(k, s)), product_side(andrews_gordon_rhs(k, s))};
  }
  if (name == "bressoud") {
    need(2);
    int k = integer(args[0]), s = integer(args[1]);
    return {sum_side(bressoud_spec(k, s)), product_side(bressoud_rhs(k, s))};
  }
  if (name == "alpha") {
    need(1);
    auto [spec, rhs] = thm31_spec(parse_rational(args[0]));
    return {sum_side(spec), product_side(rhs)};
  }
  if (name == "zagier") {
    need(2);
    auto [spec, rhs] = zagier_spec(parse_rational(args[0]), parse_rational(args[1]));
    return {sum_side(spec), product_side(rhs)};
  }
  throw SchemaError(line, "lhs", "unknown generator '" + name + "'");
}

void collect(const Coef& c, std::set<int>& out) {
  for (const auto& t : c.terms())
    for (int p = 0; p < kNumParams; ++p)
      if (mono_exp(t.mono, p)) out.insert(p);
}

void collect(Mono m, std::set<int>& out) {
  for (int p = 0; p < kNumParams; ++p)
    if (mono_exp(m, p)) out.insert(p);
}

std::set<int> side_params(const Side& s) {
  std::set<int> out;
  for (const auto& t : s) {
    collect(t.mult.scalar, out);
    collect(t.mult.mono, out);
    for (const auto& f : t.mult.factors) collect(f.arg.mono, out);
    if (!t.sum) continue;
    collect(t.sum->scalar, out);
    for (int p = 0; p < kNumParams; ++p)
      if (!t.sum->param_exp[static_cast<size_t>(p)].is_zero()) out.insert(p);
    for (const auto& f : t.sum->factors) collect(f.arg.mono, out);
  }
  return out;
}

uint32_t lcm_u(uint32_t a, uint32_t b) { return std::lcm(a, b); }

uint32_t product_conductor(const ProductExpr& p) {
  uint32_t m = p.scalar.conductor();
  for (const auto& f : p.factors) m = lcm_u(m, f.arg.scalar.conductor());
  return m;
}

Specialization parse_check(const std::string& s, int line) {
  size_t eq = s.find('=');
  std::string name = trim(s.substr(0, eq));
  if (eq == std::string::npos || name.size() != 1 || !param_index(name[0]))
    throw SchemaError(line, "check", "expected p=value, got '" + s + "'");
  ProductExpr v;
  try {
    v = parse_product(trim(s.substr(eq + 1)));
  } catch (const Error& e) {
    throw SchemaError(line, "check", e.what());
  }
  if (!v.factors.empty() || v.mono != 0 || !v.scalar.is_constant() || v.scalar.is_zero())
    throw SchemaError(line, "check", "value must be c*q^e, got '" + s + "'");
  return Specialization{name[0], v.scalar.constant_term(), v.shift};
}

/// Validates a finished record and fills in derived fields.
void finish(IdentityRecord& r, const std::map<std::string, std::pair<int, std::string>>& fields) {
  auto line_of = [&](const std::string& k) {
    auto it = fields.find(k);
    return it == fields.end() ? r.line : it->second.first;
  };
  for (const char* k : {"lhs", "rhs"})
    if (!fields.count(k)) throw SchemaError(r.line, k, "record '" + r.id + "' has no " + k);

  r.lhs_text = fields.at("lhs").second;
  r.rhs_text = fields.at("rhs").second;
  std::optional<Side> generated_rhs;
  try {
    if (!r.lhs_text.empty() && r.lhs_text[0] == '@') {
      auto [l, rh] = generate(r.lhs_text, line_of("lhs"));
      r.lhs = std::move(l);
      generated_rhs = std::move(rh);
    } else {
      r.lhs = parse_side(r.lhs_text);
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(line_of("lhs"), "lhs", "record '" + r.id + "': " + e.what());
  }
  try {
    if (r.rhs_text == "@") {
      if (!generated_rhs) throw SchemaError(line_of("rhs"), "rhs", "'@' needs a generated lhs");
      r.rhs = *generated_rhs;
    } else {
      r.rhs = parse_side(r.rhs_text);
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(line_of("rhs"), "rhs", "record '" + r.id + "': " + e.what());
  }
  for (const Side* s : {&r.lhs, &r.rhs})
    for (const auto& t : *s)
      if (t.sum) {
        try {
          t.sum->validate();
        } catch (const Error& e) {
          throw SchemaError(line_of(s == &r.lhs ? "lhs" : "rhs"), s == &r.lhs ? "lhs" : "rhs",
                            "record '" + r.id + "': " + e.what());
        }
      }

  if (auto it = fields.find("status"); it != fields.end())
    r.status = parse_status(it->second.second, it->second.first);
  else
    throw SchemaError(r.line, "status", "record '" + r.id + "' has no status");

  std::set<int> used = side_params(r.lhs);
  for (int p : side_params(r.rhs)) used.insert(p);
  std::set<int> declared;
  if (auto it = fields.find("params"); it != fields.end()) {
    std::istringstream in(it->second.second);
    std::string tok;
    while (in >> tok) {
      if (tok.size() != 1 || !param_index(tok[0]))
        throw SchemaError(it->second.first, "params", "unknown parameter '" + tok + "'");
      declared.insert(*param_index(tok[0]));
    }
  }
  for (int p : used)
    if (!declared.count(p))
      throw SchemaError(line_of("params"), "params",
                        std::string("record '") + r.id + "' uses undeclared parameter " +
                            kParamNames[static_cast<size_t>(p)]);
  for (int p : declared) r.params.push_back(kParamNames[static_cast<size_t>(p)]);

  if (auto it = fields.find("check"); it != fields.end())
    for (const auto& c : split(it->second.second, ',')) {
      Specialization sp = parse_check(c, it->second.first);
      if (!declared.count(*param_index(sp.param)))
        throw SchemaError(it->second.first, "check", std::string("parameter ") + sp.param + " is not declared");
      r.checks.push_back(sp);
    }

  r.conductor = lcm_u(side_conductor(r.lhs), side_conductor(r.rhs));
  if (auto it = fields.find("conductor"); it != fields.end()) {
    QExp c = parse_rational(it->second.second);
    if (c.denominator() != 1 || c.numerator() != r.conductor)
      throw SchemaError(it->second.first, "conductor",
                        "record '" + r.id + "' declares " + it->second.second + " but its sides have " +
                            std::to_string(r.conductor));
  }
  if (auto it = fields.find("order"); it != fields.end()) {
    QExp o = parse_rational(it->second.second);
    if (o.denominator() != 1 || o.numerator() < 1)
      throw SchemaError(it->second.first, "order", "positive integer expected");
    r.order = o.numerator();
  }
  if (auto it = fields.find("note"); it != fields.end()) r.note = it->second.second;
}

const std::set<std::string> kKeys = {"lhs", "rhs", "status", "params", "check", "conductor", "order", "note"};

}  // namespace

std::string status_name(Status s) {
  switch (s) {
    case Status::Classical: return "classical";
    case Status::PaperNew: return "paper-new";
    case Status::NonModular: return "non-modular";
    case Status::Conjecture: return "conjecture";
  }
  return "?";
}

std::string Specialization::str() const {
  std::string v = c.str();
  if (e != QExp(0)) v += "*q^" + exp_str(e);
  return std::string(1, param) + "=" + v;
}

uint32_t side_conductor(const Side& s) {
  uint32_t m = 1;
  for (const auto& t : s) {
    m = lcm_u(m, product_conductor(t.mult));
    if (!t.sum) continue;
    if (!t.sum->sign.is_zero()) m = lcm_u(m, CycloRat::root_of_unity(t.sum->sign_root).conductor());
    m = lcm_u(m, t.sum->scalar.conductor());
    for (const auto& f : t.sum->factors) m = lcm_u(m, f.arg.scalar.conductor());
  }
  return m;
}

std::vector<IdentityRecord> parse_catalog(const std::string& text) {
  std::vector<IdentityRecord> out;
  std::set<std::string> ids;
  std::optional<IdentityRecord> cur;
  std::map<std::string, std::pair<int, std::string>> fields;
  std::string last_key;

  auto flush = [&] {
    if (!cur) return;
    finish(*cur, fields);
    out.push_back(std::move(*cur));
    cur.reset();
    fields.clear();
    last_key.clear();
  };

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string body = raw.substr(0, raw.find('#'));
    if (trim(body).empty()) continue;
    if (body[0] == ' ' || body[0] == '\t') {
      if (last_key.empty()) throw SchemaError(lineno, "", "continuation line outside a field");
      fields[last_key].second += " " + trim(body);
      continue;
    }
    std::string t = trim(body);
    if (t.front() == '[') {
      if (t.back() != ']') throw SchemaError(lineno, "id", "unterminated record header");
      flush();
      std::string id = trim(t.substr(1, t.size() - 2));
      if (id.empty()) throw SchemaError(lineno, "id", "empty record id");
      if (!ids.insert(id).second) throw SchemaError(lineno, "id", "duplicate record id '" + id + "'");
      cur = IdentityRecord{};
      cur->id = id;
      cur->line = lineno;
      continue;
    }
    size_t colon = t.find(':');
    if (colon == std::string::npos) throw SchemaError(lineno, "", "expected 'key: value'");
    std::string key = trim(t.substr(0, colon));
    if (!cur) throw SchemaError(lineno, key, "field before the first record header");
    if (!kKeys.count(key)) throw SchemaError(lineno, key, "unknown field in record '" + cur->id + "'");
    if (fields.count(key)) throw SchemaError(lineno, key, "repeated field in record '" + cur->id + "'");
    fields[key] = {lineno, trim(t.substr(colon + 1))};
    last_key = key;
  }
  flush();
  return out;
}

std::vector<IdentityRecord> load_catalog(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open catalog '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_catalog(ss.str());
}

std::string default_catalog_path() { return std::string(QRR_DATA_DIR) + "/catalog.txt"; }

std::string result_name(VerifyReport::Result r) {
  switch (r) {
    case VerifyReport::Result::Pass: return "pass";
    case VerifyReport::Result::Fail: return "fail";
    case VerifyReport::Result::InfraFail: return "infrastructure-fail";
  }
  return "?";
}

std::string VerifyReport::line() const {
  std::ostringstream o;
  std::string verdict = result_name(result);
  if (result == Result::Pass && status == Status::Conjecture) verdict = "consistent";
  o << id << ": " << verdict << " to order " << order;
  if (param_degree > 0) o << " (parameter degree " << param_degree << ")";
  if (result == Result::Fail) {
    o << ", first mismatch at q^" << exp_str(*mismatch) << " [" << detail << "]: lhs " << lhs_coef << " vs rhs "
      << rhs_coef;
  } else if (result == Result::InfraFail) {
    o << ": " << detail;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, " (%.2fs)", seconds);
  o << buf;
  return o.str();
}

int64_t effective_order(const IdentityRecord& rec, int64_t N) {
  if (rec.order) return *rec.order;
  bool heavy = rec.conductor % 4 == 0 || side_denom(rec.lhs) > 1 || side_denom(rec.rhs) > 1;
  return heavy ? std::min<int64_t>(N, 40) : N;
}

VerifyReport verify_at(const IdentityRecord& rec, int64_t N, int M) {
  auto t0 = std::chrono::steady_clock::now();
  VerifyReport r;
  r.id = rec.id;
  r.status = rec.status;
  r.order = N;
  r.param_degree = rec.params.empty() ? 0 : M;

  auto compare = [&](const Side& l, const Side& rh, int cap, const std::string& what) {
    QSeries a = eval_side(l, N, cap), b = eval_side(rh, N, cap);
    if (auto m = first_mismatch(a, b, N)) {
      r.result = VerifyReport::Result::Fail;
      r.mismatch = m;
      r.lhs_coef = a.coeff(*m).str();
      r.rhs_coef = b.coeff(*m).str();
      r.detail = what;
      return false;
    }
    return true;
  };

  try {
    if (compare(rec.lhs, rec.rhs, rec.params.empty() ? kNoParamCap : M, "polynomial"))
      for (const auto& sp : rec.checks) {
        Side l = specialize(rec.lhs, sp.param, sp.c, sp.e);
        Side rh = specialize(rec.rhs, sp.param, sp.c, sp.e);
        if (!compare(l, rh, M, sp.str())) break;
      }
  } catch (const Error& e) {
    r.result = VerifyReport::Result::InfraFail;
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

VerifyReport verify(const IdentityRecord& rec, int64_t N, int M) { return verify_at(rec, effective_order(rec, N), M); }

std::vector<VerifyReport> verify_all(const std::vector<IdentityRecord>& cat, int64_t N, int M, int jobs,
                                     VerifySummary* summary) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<VerifyReport> out(cat.size());
  // Heaviest records first would balance better, but index order keeps
  // scheduling independent of timing.
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < cat.size();) out[i] = verify(cat[i], N, M);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::max(jobs, 1); ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  std::sort(out.begin(), out.end(), [](const VerifyReport& a, const VerifyReport& b) { return a.id < b.id; });
  if (summary) {
    *summary = VerifySummary{};
    for (const auto& r : out) {
      if (r.result == VerifyReport::Result::InfraFail)
        ++summary->infra;
      else if (r.result == VerifyReport::Result::Fail)
        ++summary->failed;
      else if (r.status == Status::Conjecture)
        ++summary->consistent;
      else
        ++summary->passed;
    }
    summary->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return out;
}

std::string reports_json(const std::vector<VerifyReport>& reports, const VerifySummary& summary, bool timing) {
  nlohmann::ordered_json j;
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json o;
    o["id"] = r.id;
    o["status"] = status_name(r.status);
    o["order"] = r.order;
    o["param_degree"] = r.param_degree;
    o["result"] = r.pass() && r.status == Status::Conjecture ? "consistent" : result_name(r.result);
    if (r.mismatch) {
      o["mismatch_exponent"] = exp_str(*r.mismatch);
      o["lhs_coefficient"] = r.lhs_coef;
      o["rhs_coefficient"] = r.rhs_coef;
    }
    if (!r.detail.empty()) o["detail"] = r.detail;
    if (timing) o["seconds"] = r.seconds;
    j["records"].push_back(o);
  }
  nlohmann::ordered_json sum;
  sum["records"] = reports.size();
  sum["passed"] = summary.passed;
  sum["consistent"] = summary.consistent;
  sum["failed"] = summary.failed;
  sum["infrastructure_fail"] = summary.infra;
  if (timing) sum["seconds"] = summary.seconds;
  j["summary"] = sum;
  return j.dump(2);
}

const IdentityRecord* find_record(const std::vector<IdentityRecord>& cat, const std::string& id) {
  for (const auto& r : cat)
    if (r.id == id) return &r;
  return nullptr;
}

}  // namespace qrr
