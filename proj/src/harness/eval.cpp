#include "epf/harness/eval.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>

#include "epf/harness/verdict_store.hpp"

namespace epf::harness {

namespace fs = std::filesystem;

bool EvalReport::ordering_holds() const {
  const double top1 = epr.value(), any = at_k.ratio.value();
  if (!oracle) return top1 <= any;
  const double mid = oracle->ratio.value();
  return top1 <= mid && mid <= any;
}

namespace {

std::optional<ArbitrarinessSummary> top1_arbitrariness(const metrics::Dataset& d) {
  std::vector<fol::Formula> formulas;
  for (const auto& s : d.sentences()) {
    if (s.candidates.empty()) continue;
    const auto& c = metrics::top1(s);
    if (c.formula) formulas.push_back(*c.formula);
  }
  try {
    ArbitrarinessSummary a;
    a.sentences = formulas.size();
    a.unique_predicates_per_sentence = arbitrariness::unique_predicates_per_sentence(formulas);
    a.arity = arbitrariness::corpus_arity_report(formulas);
    return a;
  } catch (const arbitrariness::EmptyCorpus&) {
    return std::nullopt;
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string());
  f << text;
  if (!f.flush()) throw Error("cannot write " + path.string());
}

}  // namespace

EvalReport run_eval(const metrics::Dataset& d, const EvalConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  EvalReport report;
  report.config = config;

  metrics::VerdictCache cache;
  std::optional<VerdictStore> store;
  if (!config.verdict_store.empty()) {
    store.emplace(config.verdict_store);
    report.stats.store_loaded = store->load_into(cache);
    report.stats.store_skipped = store->skipped();
    store->attach(cache);
  }
  metrics::CachedChecker checker(config.backend, config.budget, cache);

  std::mutex emitted_mu;
  std::set<std::string> emitted;
  if (!config.emit_tptp_dir.empty()) {
    fs::create_directories(config.emit_tptp_dir);
    checker.set_observer([&](const std::string& key, const entailment::EntailmentQuery& q) {
      {
        std::lock_guard lock(emitted_mu);
        if (!emitted.insert(key).second) return;
      }
      write_file(fs::path(config.emit_tptp_dir) / (VerdictStore::hash(key) + ".p"),
                 "% " + key + "\n" + entailment::tptp_problem(q));
    });
  }

  report.epr = metrics::epr(d, checker, config.workers, &report.top1);
  const bool exhaustive = config.exhaustive || config.oracle || config.emit_scores;
  report.at_k = metrics::epr_at_k(d, config.k, checker, exhaustive, config.workers);
  if (config.oracle) {
    report.oracle = metrics::epr_at_k_oracle(d, report.at_k, config.oracle_time_limit);
    report.stats.oracle_nodes = report.oracle->nodes;
  }
  if (config.emit_scores) report.scores = scoring::score_candidates(d, report.at_k);
  report.arbitrariness = top1_arbitrariness(d);

  report.stats.prover_calls = cache.prover_calls();
  report.stats.cache_hits = cache.hits();
  report.stats.distinct_queries = cache.size();
  report.stats.elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return report;
}

nlohmann::ordered_json report_json(const EvalReport& r) {
  using J = nlohmann::ordered_json;
  auto ratio = [](const metrics::Ratio& x) {
    J j;
    j["value"] = x.value();
    j["preserved"] = x.numerator;
    j["total"] = x.denominator;
    return j;
  };

  J config;
  config["k"] = r.config.k;
  config["backend"] = r.config.backend.kind == entailment::Backend::Kind::kInternal ? "internal" : "external";
  if (r.config.backend.kind == entailment::Backend::Kind::kExternal) config["prover_cmd"] = r.config.backend.command;
  config["prover_timeout_ms"] = r.config.budget.timeout.count();
  config["max_generated_clauses"] = r.config.budget.max_generated;
  config["exhaustive"] = r.at_k.exhaustive;
  config["oracle_time_limit_s"] = static_cast<double>(r.config.oracle_time_limit.count()) / 1000.0;

  J out;
  out["config"] = config;
  out["epr"] = ratio(r.epr);
  out["epr_at_k"] = ratio(r.at_k.ratio);
  if (r.oracle) {
    J o = ratio(r.oracle->ratio);
    o["status"] = metrics::to_string(r.oracle->status);
    o["selection"] = J(r.oracle->selection);
    out["epr_at_k_oracle"] = o;
  } else {
    out["epr_at_k_oracle"] = nullptr;
  }
  out["ordering_holds"] = r.ordering_holds();

  J pairs = J::array();
  for (std::size_t i = 0; i < r.at_k.pairs.size(); ++i) {
    const auto& t = r.top1[i];
    const auto& p = r.at_k.pairs[i];
    J top1;
    top1["combination"] = t.combination;
    top1["preserved"] = t.preserved;
    top1["reason"] = t.reason;
    J entry;
    entry["pair_id"] = p.pair_id;
    entry["top1"] = top1;
    entry["preserving"] = p.preserving;
    entry["combinations_checked"] = p.combinations_checked;
    entry["syntax_error_skipped"] = p.syntax_error_skipped;
    pairs.push_back(entry);
  }
  out["pairs"] = pairs;

  if (r.scores) {
    J scores = J::array();
    for (const auto& s : *r.scores) {
      J e;
      e["sentence_id"] = s.sentence_id;
      e["index"] = s.index;
      e["score"] = s.score;
      scores.push_back(e);
    }
    out["scores"] = scores;
  }

  if (r.arbitrariness) {
    J a;
    a["sentences"] = r.arbitrariness->sentences;
    a["unique_predicates_per_sentence"] = r.arbitrariness->unique_predicates_per_sentence;
    a["mean_arity_entropy"] = r.arbitrariness->arity.mean_entropy;
    a["weighted_mean_arity_entropy"] = r.arbitrariness->arity.weighted_mean_entropy;
    J table = J::array();
    for (const auto& row : r.arbitrariness->arity.table) {
      J e;
      e["predicate"] = row.histogram.predicate;
      J counts;
      for (const auto& [arity, n] : row.histogram.counts) counts[std::to_string(arity)] = n;
      e["arities"] = counts;
      e["entropy"] = row.entropy;
      table.push_back(e);
    }
    a["predicates"] = table;
    out["arbitrariness"] = a;
  } else {
    out["arbitrariness"] = nullptr;
  }
  return out;
}

nlohmann::ordered_json stats_json(const RunStats& s) {
  nlohmann::ordered_json j;
  j["prover_calls"] = s.prover_calls;
  j["cache_hits"] = s.cache_hits;
  j["distinct_queries"] = s.distinct_queries;
  j["verdict_store_loaded"] = s.store_loaded;
  j["verdict_store_skipped"] = s.store_skipped;
  j["oracle_nodes"] = s.oracle_nodes;
  j["elapsed_ms"] = s.elapsed.count();
  return j;
}

std::string summary_csv(const EvalReport& r, const std::string& dataset_name) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  std::string csv =
      "dataset,pairs,k,epr,epr_at_k,epr_at_k_oracle,oracle_status,epr_preserved,epr_at_k_preserved,"
      "oracle_preserved\n";
  std::string name = dataset_name;
  if (name.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : name) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    name = quoted + "\"";
  }
  csv += name + "," + std::to_string(r.epr.denominator) + "," + std::to_string(r.config.k) + "," +
         fmt(r.epr.value()) + "," + fmt(r.at_k.ratio.value()) + ",";
  if (r.oracle) {
    csv += fmt(r.oracle->ratio.value()) + "," + metrics::to_string(r.oracle->status) + ",";
  } else {
    csv += ",,";
  }
  csv += std::to_string(r.epr.numerator) + "," + std::to_string(r.at_k.ratio.numerator) + ",";
  csv += r.oracle ? std::to_string(r.oracle->ratio.numerator) : "";
  return csv + "\n";
}

void write_outputs(const EvalReport& r, const metrics::Dataset& d, const std::string& dataset_name,
                   const std::string& out_dir) {
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "report.json", report_json(r).dump(2) + "\n");
  write_file(fs::path(out_dir) / "summary.csv", summary_csv(r, dataset_name));
  write_file(fs::path(out_dir) / "stats.json", stats_json(r.stats).dump(2) + "\n");
  if (r.scores) scoring::export_ranked_training_file(d, *r.scores, (fs::path(out_dir) / "ranked.jsonl").string());
}

}  // namespace epf::harness
