#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "epf/metrics/dataset.hpp"
#include "epf/metrics/verdict_cache.hpp"

namespace epf::metrics {

struct Ratio {
  std::size_t numerator = 0;
  std::size_t denominator = 0;

  double value() const { return denominator ? static_cast<double>(numerator) / denominator : 0.0; }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

// Candidate indices aligned with Pair::sentence_ids() (premises, hypothesis).
using Combination = std::vector<std::size_t>;

struct Top1Outcome {
  std::string pair_id;
  Combination combination;
  bool preserved = false;
  std::string reason;  // a check reason, or "syntax_error"
};

struct PairDetail {
  std::string pair_id;
  std::vector<Combination> preserving;  // lexicographic order
  std::size_t combinations_checked = 0;
  std::size_t syntax_error_skipped = 0;
};

struct EprAtKResult {
  Ratio ratio;
  std::size_t k = 1;
  bool exhaustive = false;
  std::vector<PairDetail> pairs;  // dataset pair order
};

enum class OracleStatus { kExact, kLowerBound };
const char* to_string(OracleStatus s);

struct OracleResult {
  Ratio ratio;
  std::map<std::string, std::size_t> selection;  // sentence id -> candidate index
  OracleStatus status = OracleStatus::kExact;
  std::size_t nodes = 0;
};

// Fraction of pairs whose top-1 candidates pass the gated check. Pairs fan
// out over `workers` threads; outcomes, if requested, follow dataset order.
Ratio epr(const Dataset& d, CachedChecker& checker, std::size_t workers = 1,
          std::vector<Top1Outcome>* outcomes = nullptr);

// A pair succeeds if some combination of its sentences' top-k candidates
// passes. Combinations are tried in lexicographic index order, skipping any
// with a syntax error; the first success ends the pair unless `exhaustive`.
EprAtKResult epr_at_k(const Dataset& d, std::size_t k, CachedChecker& checker, bool exhaustive,
                      std::size_t workers = 1);

// One candidate per sentence, shared by every pair that mentions it; pair b
// succeeds iff its selected tuple is among its preserving combinations.
// Maximizes the number of successes by branch and bound over each group of
// pairs linked by shared sentences. Needs exhaustive detail. Past the time
// limit the best selection found so far is returned as a lower bound.
OracleResult epr_at_k_oracle(const Dataset& d, const EprAtKResult& detail,
                             std::chrono::milliseconds time_limit = std::chrono::seconds(600));

}  // namespace epf::metrics
