#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "epf/error.hpp"
#include "epf/fol/formula.hpp"

namespace epf::arbitrariness {

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

// Distinct predicate names (arity ignored) over the whole corpus divided by
// the number of sentences, one formula per sentence.
double unique_predicates_per_sentence(const std::vector<fol::Formula>& formulas_by_sentence);

struct ArityHistogram {
  std::string predicate;
  std::map<std::size_t, std::size_t> counts;  // arity -> atom occurrences
};

// Shannon entropy of the arity distribution, in bits.
double arity_entropy(const ArityHistogram& hist);

// One histogram per predicate name, counting every atom occurrence.
std::vector<ArityHistogram> arity_histograms(const std::vector<fol::Formula>& formulas);

struct ArityRow {
  ArityHistogram histogram;
  std::size_t occurrences = 0;
  double entropy = 0;
};

struct ArityReport {
  double mean_entropy = 0;           // unweighted over predicate names
  double weighted_mean_entropy = 0;  // weighted by occurrences
  std::vector<ArityRow> table;       // entropy descending, then name
};

ArityReport corpus_arity_report(const std::vector<fol::Formula>& formulas);

}  // namespace epf::arbitrariness
