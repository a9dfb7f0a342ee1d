#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "epf/error.hpp"
#include "epf/metrics/dataset.hpp"
#include "epf/metrics/epr.hpp"

namespace epf::scoring {

class MissingDetail : public Error {
 public:
  using Error::Error;
};

class MissingLogprob : public Error {
 public:
  using Error::Error;
};

struct CandidateScore {
  std::string sentence_id;
  std::size_t index = 0;
  long score = 0;  // -1 for syntax errors

  friend bool operator==(const CandidateScore&, const CandidateScore&) = default;
};

// Each candidate scores the number of preserving combinations it belongs to,
// summed over every pair that mentions its sentence. Syntax errors score -1.
// Output follows dataset sentence order, then candidate index.
std::vector<CandidateScore> score_candidates(const metrics::Dataset& d, const metrics::EprAtKResult& detail);

struct LossConfig {
  double margin = 0.01;       // Delta
  double mixing_rate = 10.0;  // lambda; carried for trainers, not applied here
};

struct RankedCandidate {
  std::optional<double> logprob;
  long score = 0;
  std::size_t index = 0;
};

// Sorts by score (desc), logprob (desc), index (asc) and sums
// max(p_j - p_i + margin * (j - i), 0) over all positions i < j.
double brio_loss(const std::vector<RankedCandidate>& candidates, const LossConfig& config = {});

// One JSON line per sentence:
//   {"sentence_id", "text", "candidates": [{"index", "fol", "score", "logprob"}]}
// candidates in brio_loss order; logprob is null when absent.
std::string ranked_training_jsonl(const metrics::Dataset& d, const std::vector<CandidateScore>& scores);
void export_ranked_training_file(const metrics::Dataset& d, const std::vector<CandidateScore>& scores,
                                 const std::string& path);

}  // namespace epf::scoring
