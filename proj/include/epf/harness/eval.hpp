#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epf/arbitrariness/arity.hpp"
#include "epf/entailment/check.hpp"
#include "epf/metrics/epr.hpp"
#include "epf/scoring/rank.hpp"

namespace epf::harness {

struct EvalConfig {
  std::size_t k = 16;
  entailment::Backend backend;
  prover::ResourceBudget budget;
  std::chrono::milliseconds oracle_time_limit = std::chrono::seconds(600);
  bool exhaustive = false;   // enumerate every combination even without oracle/scores
  bool oracle = true;        // oracle and scores both force exhaustive enumeration
  bool emit_scores = false;
  std::size_t workers = 1;
  std::string verdict_store;  // empty: no persistence
  std::string emit_tptp_dir;  // empty: no .p files
};

// Counters that vary between runs; kept out of the report so reruns are
// byte-identical.
struct RunStats {
  std::size_t prover_calls = 0;
  std::size_t cache_hits = 0;
  std::size_t distinct_queries = 0;
  std::size_t store_loaded = 0;
  std::size_t store_skipped = 0;
  std::size_t oracle_nodes = 0;
  std::chrono::milliseconds elapsed{0};
};

struct ArbitrarinessSummary {
  std::size_t sentences = 0;  // sentences whose top-1 candidate parses
  double unique_predicates_per_sentence = 0;
  arbitrariness::ArityReport arity;
};

struct EvalReport {
  EvalConfig config;
  metrics::Ratio epr;
  std::vector<metrics::Top1Outcome> top1;
  metrics::EprAtKResult at_k;
  std::optional<metrics::OracleResult> oracle;
  std::optional<std::vector<scoring::CandidateScore>> scores;
  std::optional<ArbitrarinessSummary> arbitrariness;
  RunStats stats;

  // epr <= oracle <= epr@K (the oracle term drops out when not computed).
  bool ordering_holds() const;
};

EvalReport run_eval(const metrics::Dataset& d, const EvalConfig& config);

nlohmann::ordered_json report_json(const EvalReport& r);
nlohmann::ordered_json stats_json(const RunStats& s);
std::string summary_csv(const EvalReport& r, const std::string& dataset_name);

// report.json, summary.csv, stats.json and, with scores, ranked.jsonl.
void write_outputs(const EvalReport& r, const metrics::Dataset& d, const std::string& dataset_name,
                   const std::string& out_dir);

}  // namespace epf::harness
