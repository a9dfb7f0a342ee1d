#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "epf/fol/formula.hpp"

namespace epf::prover {

enum class BruteForceVerdict { kEntailed, kCountermodel, kInapplicable };

const char* to_string(BruteForceVerdict v);

struct BruteForceResult {
  BruteForceVerdict verdict = BruteForceVerdict::kInapplicable;
  // Ground atom text -> truth value, filled for countermodels.
  std::map<std::string, bool> countermodel;
  std::vector<std::string> domain;
  std::string reason;
};

struct BruteForceOptions {
  std::size_t domain_size = 0;
  std::uint64_t max_interpretations = std::uint64_t{1} << 24;
};

// Decides premises |= hypothesis by enumerating every interpretation of the
// predicates over a finite domain that names each constant by itself. The
// domain holds the problem constants plus fresh elements, at least as many as
// the skolem constants of premises & -hypothesis, so the search covers a
// Herbrand model whenever one exists. Formulas are evaluated directly, not
// through clause form. Inapplicable when skolemization would need function
// symbols, when the input has function symbols, or past the interpretation cap.
BruteForceResult brute_force_entails(const std::vector<fol::Formula>& premises,
                                     const fol::Formula& hypothesis,
                                     const BruteForceOptions& options = {});

}  // namespace epf::prover
