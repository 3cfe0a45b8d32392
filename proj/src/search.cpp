#include "qrr/search.hpp"

#include <algorithm>
#include <atomic>
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

int64_t mod(int64_t a, int64_t m) { return ((a % m) + m) % m; }

std::string lin_str(const LinForm& f, const std::vector<size_t>& perm, int64_t m = 0) {
  std::string s;
  for (size_t r : perm) {
    int64_t c = f.coef(r);
    s += std::to_string(m ? mod(c, m) : c) + ",";
  }
  return s + std::to_string(m ? mod(f.c0, m) : f.c0);
}

std::string poch_str(const PochArg& a, QExp scale) {
  return a.scalar.str() + "*" + std::to_string(a.mono) + "*q^" + exp_str(a.offset / scale) + ";" +
         exp_str(a.base / scale);
}

std::string key_under(const MultiSumSpec& s, const std::vector<size_t>& perm, QExp g) {
  std::ostringstream o;
  o << "k" << s.rank() << "|d";
  for (size_t r : perm) o << s.index[r] / g.numerator() << ",";
  o << "|Q";
  for (size_t a = 0; a < perm.size(); ++a)
    for (size_t b = a; b < perm.size(); ++b) o << exp_str(s.quad_coef(perm[a], perm[b]) / g) << ",";
  o << "|L";
  for (size_t r : perm) o << exp_str((r < s.lin.size() ? s.lin[r] : QExp(0)) / g) << ",";
  o << exp_str(s.cst / g);
  if (!s.sign.is_zero()) o << "|S" << s.sign_root << ":" << lin_str(s.sign, perm, s.sign_root);
  for (int p = 0; p < kNumParams; ++p)
    if (!s.param_exp[static_cast<size_t>(p)].is_zero())
      o << "|P" << kParamNames[static_cast<size_t>(p)] << ":" << lin_str(s.param_exp[static_cast<size_t>(p)], perm);
  std::vector<std::string> fs;
  for (const auto& f : s.factors)
    fs.push_back(poch_str(f.arg, g) + "_" + lin_str(f.sub, perm) + "^" + std::to_string(f.power) +
                 (f.strict ? "!" : ""));
  std::sort(fs.begin(), fs.end());
  for (const auto& f : fs) o << "|F" << f;
  o << "|c" << s.scalar.str();
  return o.str();
}

/// p/den for every integer p with lo <= p/den <= hi.
std::vector<QExp> rational_grid(QExp lo, QExp hi, int64_t den, bool exclude_nonpositive = false) {
  std::vector<QExp> v;
  for (int64_t p = ceil_to_int(lo * QExp(den)); QExp(p, den) <= hi; ++p) {
    QExp x(p, den);
    if (exclude_nonpositive && x <= QExp(0)) continue;
    v.push_back(x);
  }
  return v;
}

struct Axes {
  std::vector<std::vector<int64_t>> indices;
  std::vector<QExp> diag, off, lin;
  int64_t sign_count = 1;
};

Axes axes(const SearchConfig& cfg) {
  Axes a;
  for (const auto& d : cfg.indices)
    if (static_cast<int>(d.size()) == cfg.rank) a.indices.push_back(d);
  a.diag = rational_grid(QExp(0), cfg.quad_max, cfg.den, true);
  a.off = rational_grid(-cfg.quad_max, cfg.quad_max, cfg.den);
  a.lin = rational_grid(cfg.lin_min, cfg.lin_max, cfg.den);
  a.sign_count = cfg.signs ? (int64_t{1} << cfg.rank) : 1;
  return a;
}

int64_t ipow(int64_t b, int64_t e) {
  int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

bool is_integer(QExp x) { return x.denominator() == 1; }

/// The sequence plus C and scalar, as a string equality key for products.
std::string product_fingerprint(const CycloRat& scalar, const RecognizedProduct& rp) {
  std::string s = scalar.str() + "|" + exp_str(rp.C) + "|";
  for (const auto& a : rp.a) s += a.str() + ",";
  return s;
}

/// Product form of f to order L after dividing out its leading scalar.
std::optional<Recognition> recognise_series(const QSeries& f, int64_t n, int64_t maxP, bool need_period) {
  auto v = f.valuation();
  if (!v || *v < QExp(0)) return std::nullopt;
  Coef lead = f.coeff(*v);
  if (!lead.is_constant() || !lead.constant_term().is_rational()) return std::nullopt;
  CycloRat c = lead.constant_term();
  int64_t L = floor_to_int(QExp(n) - *v);
  if (L < 1) return std::nullopt;
  Recognition r;
  r.scalar = c;
  try {
    r.rp = recognize(f.scaled(Coef(c.inv())), L, maxP);
  } catch (const NonIntegerExponent&) {
    return std::nullopt;
  } catch (const LeadingUnit&) {
    return std::nullopt;
  }
  if (need_period && !r.rp.period) return std::nullopt;
  r.product = render(r.rp);
  r.product.scalar = r.product.scalar.scaled(c);
  return r;
}

std::map<std::string, std::vector<std::string>> catalog_products(const std::vector<IdentityRecord>& cat,
                                                                 int64_t n, int jobs) {
  std::vector<std::string> prints(cat.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < cat.size();) {
      const auto& rec = cat[i];
      if (!rec.params.empty() || rec.conductor != 1) continue;
      try {
        QSeries f = eval_side(rec.rhs, n, kNoParamCap);
        if (auto r = recognise_series(f, n, 1, false)) prints[i] = product_fingerprint(r->scalar, r->rp);
      } catch (const Error&) {
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < jobs; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  std::map<std::string, std::vector<std::string>> out;
  for (size_t i = 0; i < cat.size(); ++i)
    if (!prints[i].empty()) out[prints[i]].push_back(cat[i].id);
  return out;
}

enum class Outcome { Emit, Fractional, NonSummable, Rejected, Unconfirmed };

struct PointResult {
  Outcome outcome = Outcome::Rejected;
  std::optional<Candidate> cand;
};

PointResult screen(const SearchConfig& cfg, int64_t idx) {
  PointResult res;
  auto spec = grid_point(cfg, idx);
  if (!spec) {
    res.outcome = Outcome::Fractional;
    return res;
  }
  std::vector<std::pair<std::string, MultiSumSpec>> forms;
  if (cfg.param) {
    for (int e = 0; e <= 2; ++e)
      forms.push_back({std::string(1, *cfg.param) + "=q^" + std::to_string(e),
                       specialize(*spec, *cfg.param, CycloRat(1), QExp(e))});
  } else {
    forms.push_back({"", *spec});
  }
  Candidate c;
  c.grid_index = idx;
  c.spec = *spec;
  c.verified_to = cfg.n2;
  try {
    for (const auto& [at, s] : forms) {
      auto r = recognise_series(eval_multisum(s, cfg.n1), cfg.n1, cfg.max_period, true);
      if (!r) return res;
      r->at = at;
      c.products.push_back(*r);
    }
    // Confirmation at the higher order against the rendered product.
    for (size_t i = 0; i < forms.size(); ++i) {
      QSeries lhs = eval_multisum(forms[i].second, cfg.n2);
      QSeries rhs = eval_product(c.products[i].product, cfg.n2);
      if (first_mismatch(lhs, rhs, cfg.n2)) {
        res.outcome = Outcome::Unconfirmed;
        return res;
      }
    }
  } catch (const NonSummable&) {
    res.outcome = Outcome::NonSummable;
    return res;
  }
  c.key = canonical_key(c.spec);
  res.outcome = Outcome::Emit;
  res.cand = std::move(c);
  return res;
}

}  // namespace

std::string canonical_key(const MultiSumSpec& spec) {
  int64_t g = 0;
  for (int64_t d : spec.index) g = std::gcd(g, d);
  if (g == 0) g = 1;
  std::vector<size_t> perm(spec.rank());
  std::iota(perm.begin(), perm.end(), size_t{0});
  std::string best;
  do {
    std::string k = key_under(spec, perm, QExp(g));
    if (best.empty() || k < best) best = k;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Shard parse_shard(const std::string& s) {
  size_t slash = s.find('/');
  Shard sh;
  try {
    if (slash == std::string::npos) throw std::invalid_argument(s);
    sh.index = std::stoi(s.substr(0, slash));
    sh.count = std::stoi(s.substr(slash + 1));
  } catch (const std::logic_error&) {
    throw BadParameters("shard must look like i/n, got '" + s + "'");
  }
  if (sh.count < 1 || sh.index < 0 || sh.index >= sh.count)
    throw BadParameters("shard " + s + " needs 0 <= i < n");
  return sh;
}

void SearchConfig::validate() const {
  if (schema_version != 1) throw BadParameters("unsupported schema_version " + std::to_string(schema_version));
  if (rank < 1 || rank > 4) throw BadParameters("rank must be between 1 and 4");
  if (den < 1) throw BadParameters("den must be positive");
  if (max_period < 1) throw BadParameters("max_period must be positive");
  if (!(n1 >= 4 * max_period)) throw BadParameters("need n1 >= 4 max_period");
  if (!(n2 > n1)) throw BadParameters("need n2 > n1");
  for (const auto& d : indices)
    for (int64_t x : d)
      if (x < 1) throw BadParameters("index entries must be positive");
  if (param && !param_index(*param)) throw BadParameters(std::string("unknown parameter ") + *param);
  if (jobs < 1) throw BadParameters("jobs must be >= 1");
}

SearchConfig parse_search_config(const std::string& text) {
  SearchConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool versioned = false;
  auto integer = [](const std::string& v, int line, const std::string& key) {
    QExp x;
    try {
      x = parse_rational(v);
    } catch (const Error& e) {
      throw SchemaError(line, key, e.what());
    }
    if (x.denominator() != 1) throw SchemaError(line, key, "integer expected");
    return x.numerator();
  };
  auto rational = [](const std::string& v, int line, const std::string& key) {
    try {
      return parse_rational(v);
    } catch (const Error& e) {
      throw SchemaError(line, key, e.what());
    }
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string t = trim(raw.substr(0, raw.find('#')));
    if (t.empty()) continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos) throw SchemaError(lineno, "", "expected 'key = value'");
    std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
    if (key == "schema_version") {
      cfg.schema_version = static_cast<int>(integer(val, lineno, key));
      if (cfg.schema_version != 1) throw SchemaError(lineno, key, "unsupported version " + val);
      versioned = true;
    } else if (key == "rank") {
      cfg.rank = static_cast<int>(integer(val, lineno, key));
    } else if (key == "indices") {
      cfg.indices.clear();
      std::istringstream vs(val);
      std::string vec;
      while (std::getline(vs, vec, ';')) {
        std::vector<int64_t> d;
        std::istringstream es(vec);
        std::string e;
        while (std::getline(es, e, ',')) d.push_back(integer(trim(e), lineno, key));
        cfg.indices.push_back(d);
      }
    } else if (key == "quad_max") {
      cfg.quad_max = rational(val, lineno, key);
    } else if (key == "lin_min") {
      cfg.lin_min = rational(val, lineno, key);
    } else if (key == "lin_max") {
      cfg.lin_max = rational(val, lineno, key);
    } else if (key == "den") {
      cfg.den = integer(val, lineno, key);
    } else if (key == "signs") {
      if (val != "true" && val != "false") throw SchemaError(lineno, key, "true or false expected");
      cfg.signs = val == "true";
    } else if (key == "n1") {
      cfg.n1 = integer(val, lineno, key);
    } else if (key == "n2") {
      cfg.n2 = integer(val, lineno, key);
    } else if (key == "max_period") {
      cfg.max_period = integer(val, lineno, key);
    } else if (key == "param") {
      if (val.size() != 1 || !param_index(val[0])) throw SchemaError(lineno, key, "unknown parameter '" + val + "'");
      cfg.param = val[0];
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(integer(val, lineno, key));
    } else if (key == "out") {
      cfg.out = val;
    } else {
      throw SchemaError(lineno, key, "unknown key");
    }
  }
  if (!versioned) throw SchemaError(lineno, "schema_version", "missing schema_version");
  try {
    cfg.validate();
  } catch (const BadParameters& e) {
    throw SchemaError(lineno, "", e.what());
  }
  return cfg;
}

SearchConfig load_search_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open search config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_search_config(ss.str());
}

std::string SearchStats::str() const {
  std::ostringstream o;
  o << "grid " << grid << ", in shard " << in_shard << ", fractional " << fractional << ", non-summable "
    << non_summable << ", rejected " << rejected << ", unconfirmed " << unconfirmed << ", duplicates "
    << duplicates << ", emitted " << emitted;
  return o.str();
}

int64_t grid_size(const SearchConfig& cfg) {
  Axes a = axes(cfg);
  int64_t k = cfg.rank, offs = k * (k - 1) / 2;
  return static_cast<int64_t>(a.indices.size()) * ipow(static_cast<int64_t>(a.diag.size()), k) *
         ipow(static_cast<int64_t>(a.off.size()), offs) * ipow(static_cast<int64_t>(a.lin.size()), k) *
         a.sign_count;
}

std::optional<MultiSumSpec> grid_point(const SearchConfig& cfg, int64_t index) {
  Axes a = axes(cfg);
  size_t k = static_cast<size_t>(cfg.rank);
  auto take = [&](int64_t radix) {
    int64_t d = index % radix;
    index /= radix;
    return static_cast<size_t>(d);
  };
  // Mixed radix, fastest digit first: signs, linear terms, off-diagonal,
  // diagonal, index vector.
  int64_t sign_bits = static_cast<int64_t>(take(a.sign_count));
  std::vector<QExp> lin(k);
  for (size_t r = k; r-- > 0;) lin[r] = a.lin[take(static_cast<int64_t>(a.lin.size()))];
  MultiSumSpec s = MultiSumSpec::of_rank(k);
  std::vector<std::pair<size_t, size_t>> offs;
  for (size_t r = 0; r < k; ++r)
    for (size_t c = r + 1; c < k; ++c) offs.push_back({r, c});
  std::vector<QExp> offv(offs.size());
  for (size_t i = offs.size(); i-- > 0;) offv[i] = a.off[take(static_cast<int64_t>(a.off.size()))];
  std::vector<QExp> diag(k);
  for (size_t r = k; r-- > 0;) diag[r] = a.diag[take(static_cast<int64_t>(a.diag.size()))];
  const auto& idx = a.indices[take(static_cast<int64_t>(a.indices.size()))];

  for (size_t r = 0; r < k; ++r) {
    if (!is_integer(diag[r] * QExp(2)) || !is_integer(diag[r] + lin[r])) return std::nullopt;
  }
  for (QExp v : offv)
    if (!is_integer(v)) return std::nullopt;

  s.index = idx;
  for (size_t r = 0; r < k; ++r) s.quad[r][r] = diag[r];
  for (size_t i = 0; i < offs.size(); ++i) s.quad[offs[i].first][offs[i].second] = offv[i];
  s.lin = lin;
  s.sign_root = 2;
  s.sign.c.assign(k, 0);
  for (size_t r = 0; r < k; ++r) s.sign.c[r] = (sign_bits >> r) & 1;
  if (cfg.param) s.param_exp[static_cast<size_t>(*param_index(*cfg.param))].c.assign(k, 1);
  return s;
}

std::vector<Candidate> run_search(const SearchConfig& cfg, const std::vector<IdentityRecord>* catalog,
                                  SearchStats* stats) {
  cfg.validate();
  SearchStats st;
  st.grid = grid_size(cfg);
  std::vector<int64_t> points;
  for (int64_t i = cfg.shard.index; i < st.grid; i += cfg.shard.count) points.push_back(i);
  st.in_shard = static_cast<int64_t>(points.size());

  std::vector<PointResult> results(points.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < points.size();) results[i] = screen(cfg, points[i]);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < cfg.jobs; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::map<std::string, std::vector<std::string>> known;
  if (catalog) known = catalog_products(*catalog, cfg.n2, cfg.jobs);

  std::vector<Candidate> out;
  std::set<std::string> seen;
  for (auto& r : results) {
    switch (r.outcome) {
      case Outcome::Fractional: ++st.fractional; continue;
      case Outcome::NonSummable: ++st.non_summable; continue;
      case Outcome::Rejected: ++st.rejected; continue;
      case Outcome::Unconfirmed: ++st.unconfirmed; continue;
      case Outcome::Emit: break;
    }
    Candidate& c = *r.cand;
    if (!seen.insert(c.key).second) {
      ++st.duplicates;
      continue;
    }
    if (catalog && !cfg.param) {
      // Fingerprint of the confirmed product at the confirmation order.
      QSeries p = eval_product(c.products[0].product, cfg.n2);
      if (auto rr = recognise_series(p, cfg.n2, 1, false)) {
        auto it = known.find(product_fingerprint(rr->scalar, rr->rp));
        if (it != known.end()) c.known = it->second;
      }
    }
    out.push_back(std::move(c));
  }
  st.emitted = static_cast<int64_t>(out.size());
  if (stats) *stats = st;
  return out;
}

std::string candidate_json(const Candidate& c) {
  nlohmann::ordered_json j;
  j["grid_index"] = c.grid_index;
  j["sum"] = format_sum(c.spec);
  nlohmann::ordered_json ps = nlohmann::ordered_json::array();
  for (const auto& r : c.products) {
    nlohmann::ordered_json p;
    if (!r.at.empty()) p["at"] = r.at;
    p["product"] = render_fraction(r.product);
    p["period"] = r.rp.period ? *r.rp.period : 0;
    p["screened_to"] = r.rp.order;
    ps.push_back(p);
  }
  j["products"] = ps;
  j["verified_to"] = c.verified_to;
  j["key"] = c.key;
  j["known"] = c.known;
  return j.dump();
}

void write_candidates(const std::string& path, const std::vector<Candidate>& cands) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("cannot write '" + path + "'");
  for (const auto& c : cands) f << candidate_json(c) << "\n";
  if (!f) throw Error("write to '" + path + "' failed");
}

}  // namespace qrr
