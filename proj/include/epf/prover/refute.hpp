#pragma once

#include <chrono>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "epf/prover/clause.hpp"

namespace epf::prover {

struct ResourceBudget {
  std::chrono::milliseconds timeout{1000};
  std::size_t max_generated = 50000;
  std::size_t max_clauses_per_formula = 10000;
};

enum class ProofStatus { kProved, kSaturated, kTimeout, kResourceLimit };

const char* to_string(ProofStatus s);

enum class InferenceRule { kInput, kResolution, kFactoring };

// One node of the refutation DAG. For resolution, literal_indices holds the
// resolved literal of each parent; for factoring, the two merged literals of
// the single parent.
struct DerivationStep {
  std::size_t id = 0;
  Clause clause;
  InferenceRule rule = InferenceRule::kInput;
  std::vector<std::size_t> parents;
  std::vector<std::size_t> literal_indices;
  bool from_goal = false;
};

struct ProverStatistics {
  std::size_t generated = 0;
  std::size_t kept = 0;
  std::size_t given = 0;
  std::chrono::microseconds elapsed{0};
};

struct ProofVerdict {
  ProofStatus status = ProofStatus::kSaturated;
  // Origins of premise clauses among the derivation leaves (proved only).
  std::set<std::string> used_premises;
  bool goal_used = false;
  // Topologically ordered; the last step is the empty clause (proved only).
  std::vector<DerivationStep> derivation;
  ProverStatistics stats;
};

// Given-clause saturation with binary resolution, factoring, tautology
// deletion and forward/backward subsumption. Unification uses the occurs
// check. Selection picks the lightest passive clause four times out of five
// and the oldest otherwise, so runs are deterministic for equal inputs.
ProofVerdict refute(const std::vector<Clause>& premise_clauses,
                    const std::vector<Clause>& negated_goal_clauses,
                    const ResourceBudget& budget = {});

// Re-checks every inference of a proved verdict with an independent unifier:
// each resolvent/factor must be a variant of the recorded clause and the
// chain must end in the empty clause. Returns an empty string when valid,
// otherwise a description of the first bad step.
std::string check_derivation(const ProofVerdict& verdict);

}  // namespace epf::prover
