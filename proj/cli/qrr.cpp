// qrr: command-line front end for evaluation, catalog verification, product
// recognition, constant-term replay and identity search.
//
// Exit codes: 0 when everything requested passed, 1 on a verification
// mismatch, 2 on usage, schema or lookup errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qrr/catalog.hpp"
#include "qrr/ct_scripts.hpp"
#include "qrr/errors.hpp"
#include "qrr/parse.hpp"
#include "qrr/recognize.hpp"
#include "qrr/search.hpp"
#include "qrr/series_text.hpp"

using namespace qrr;

namespace {

struct Options {
  int64_t order = 50;
  int param_degree = 8;
  std::string catalog = default_catalog_path();
  int jobs = 1;
  std::string out;
  std::string format = "text";
  std::string shard = "0/1";
  std::string config;
  int64_t max_period = 32;
  std::string id;
  std::string side;
  bool timing = false;
};

/// Writes to --out when given, else stdout.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Error("cannot write '" + o.out + "'");
  f << text;
}

const IdentityRecord& lookup(const std::vector<IdentityRecord>& cat, const std::string& id) {
  if (id.empty()) throw CLI::ValidationError("--id", "an identity id is required");
  const IdentityRecord* r = find_record(cat, id);
  if (!r) throw BadParameters("no record '" + id + "' in the catalog");
  return *r;
}

int cmd_eval(const Options& o) {
  Side s;
  if (!o.side.empty()) {
    s = parse_side(o.side);
  } else {
    auto cat = load_catalog(o.catalog);
    s = lookup(cat, o.id).lhs;
  }
  QSeries f = eval_side(s, o.order, o.param_degree);
  emit(o, o.format == "structured" ? to_text(f) : f.str() + "\n");
  return 0;
}

int cmd_verify(const Options& o, bool all) {
  auto cat = load_catalog(o.catalog);
  std::vector<VerifyReport> reports;
  VerifySummary sum;
  if (all) {
    reports = verify_all(cat, o.order, o.param_degree, o.jobs, &sum);
  } else {
    VerifyReport r = verify(lookup(cat, o.id), o.order, o.param_degree);
    reports.push_back(r);
    sum.seconds = r.seconds;
    if (r.result == VerifyReport::Result::InfraFail)
      ++sum.infra;
    else if (!r.pass())
      ++sum.failed;
    else if (r.status == Status::Conjecture)
      ++sum.consistent;
    else
      ++sum.passed;
  }
  if (o.format == "structured") {
    emit(o, reports_json(reports, sum, o.timing) + "\n");
  } else {
    std::string text;
    for (const auto& r : reports) text += r.line() + "\n";
    if (all) {
      text += "summary: " + std::to_string(reports.size()) + " records, " + std::to_string(sum.passed) +
              " pass, " + std::to_string(sum.consistent) + " consistent (conjectures), " +
              std::to_string(sum.failed) + " fail, " + std::to_string(sum.infra) + " infrastructure-fail\n";
    }
    emit(o, text);
  }
  return sum.failed + sum.infra == 0 ? 0 : 1;
}

int cmd_prodmake(const Options& o) {
  QSeries f;
  if (!o.side.empty()) {
    f = eval_side(parse_side(o.side), o.order, o.param_degree);
  } else {
    auto cat = load_catalog(o.catalog);
    f = eval_side(lookup(cat, o.id).lhs, o.order, o.param_degree);
  }
  RecognizedProduct rp = recognize(f, o.order, o.max_period);
  std::string text;
  if (o.format == "structured") {
    text = "{\"C\": \"" + exp_str(rp.C) + "\", \"a\": [";
    for (size_t i = 0; i < rp.a.size(); ++i) text += (i ? ", " : "") + rp.a[i].str();
    text += "], \"period\": " + (rp.period ? std::to_string(*rp.period) : std::string("null")) +
            ", \"product\": \"" + render_fraction(render(rp)) + "\"}\n";
  } else {
    text = render_fraction(render(rp)) + "\n";
    if (!rp.period) text += "no period found up to " + std::to_string(o.max_period) + "\n";
  }
  emit(o, text);
  return rp.period ? 0 : 1;
}

int cmd_ct(const Options& o) {
  auto scripts = replay_scripts();
  std::string text;
  bool ok = true, found = false;
  for (const auto& s : scripts) {
    if (!o.id.empty() && s.name != o.id) continue;
    found = true;
    CtReport r = check_ct_equals_sum(s, o.order, o.param_degree);
    ok = ok && r.pass;
    text += s.name + ": " + (r.pass ? "pass" : "fail") + " to order " + exp_str(r.order);
    if (r.mismatch) text += ", first mismatch at q^" + exp_str(*r.mismatch);
    if (!r.error.empty()) text += ": " + r.error;
    text += "\n";
  }
  if (!found) throw BadParameters("no constant-term script named '" + o.id + "'");
  emit(o, text);
  return ok ? 0 : 1;
}

int cmd_search(const Options& o) {
  SearchConfig cfg = o.config.empty() ? SearchConfig{} : load_search_config(o.config);
  cfg.shard = parse_shard(o.shard);
  if (!o.out.empty()) cfg.out = o.out;
  if (o.jobs > 1) cfg.jobs = o.jobs;
  auto cat = load_catalog(o.catalog);
  SearchStats stats;
  auto cands = run_search(cfg, &cat, &stats);
  std::string text;
  for (const auto& c : cands) text += candidate_json(c) + "\n";
  if (cfg.out.empty()) std::cout << text;
  else write_candidates(cfg.out, cands);
  std::cerr << stats.str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-series identity verification and search"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--order", o.order, "q-order N")->check(CLI::PositiveNumber);
    c->add_option("--param-degree", o.param_degree, "parameter degree M")->check(CLI::Range(0, 100));
    c->add_option("--catalog", o.catalog, "catalog file");
    c->add_option("--out", o.out, "output file");
    c->add_option("--format", o.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    c->add_option("--id", o.id, "record id");
  };

  auto* eval = app.add_subcommand("eval", "expand a side or a record's sum side");
  common(eval);
  eval->add_option("side", o.side, "side text, e.g. \"sum[n] q^(n^2)/(q;q)_n\"");
  auto* ver = app.add_subcommand("verify", "verify one catalog record");
  common(ver);
  ver->add_flag("--timing", o.timing, "include wall times in structured output");
  auto* all = app.add_subcommand("verify-all", "verify the whole catalog");
  common(all);
  all->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  all->add_flag("--timing", o.timing, "include wall times in structured output");
  auto* pm = app.add_subcommand("prodmake", "recognise an infinite product");
  common(pm);
  pm->add_option("--max-period", o.max_period, "largest period tried")->check(CLI::PositiveNumber);
  pm->add_option("side", o.side, "side text instead of --id");
  auto* ct = app.add_subcommand("ct", "replay the constant-term proof scripts");
  common(ct);
  auto* se = app.add_subcommand("search", "enumerate and screen candidate sum sides");
  common(se);
  se->add_option("--config", o.config, "search config file");
  se->add_option("--shard", o.shard, "shard i/n");
  se->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(o);
    if (*ver) return cmd_verify(o, false);
    if (*all) return cmd_verify(o, true);
    if (*pm) return cmd_prodmake(o);
    if (*ct) return cmd_ct(o);
    if (*se) return cmd_search(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const BadParameters& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
