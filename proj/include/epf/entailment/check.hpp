#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epf/error.hpp"
#include "epf/fol/formula.hpp"
#include "epf/prover/refute.hpp"

namespace epf::entailment {

enum class Label { kEntailment, kContradiction };

enum class Reason { kOk, kVocabularyViolation, kNotProved, kPremisesUnused, kProverTimeout };

const char* to_string(Label l);
const char* to_string(Reason r);
Label parse_label(const std::string& text);  // throws Error on unknown labels
Reason parse_reason(const std::string& text);

class InvalidQuery : public Error {
 public:
  using Error::Error;
};

class ExternalProverError : public Error {
 public:
  using Error::Error;
};

struct Premise {
  std::string id;
  fol::Formula formula;
};

struct EntailmentQuery {
  std::vector<Premise> premises;
  fol::Formula hypothesis;
  Label label = Label::kEntailment;
};

struct CheckResult {
  bool preserved = false;
  Reason reason = Reason::kNotProved;
  std::set<std::string> used_premises;
  std::optional<prover::ProofVerdict> verdict;  // internal backend only
  std::size_t prover_calls = 0;
};

// The internal resolution prover, or an external command that reads a TPTP
// file (appended as its last argument) and answers in SZS format. The
// command string is split on whitespace.
struct Backend {
  enum class Kind { kInternal, kExternal };
  Kind kind = Kind::kInternal;
  std::string command;

  static Backend internal() { return {}; }
  static Backend external(std::string command) { return {Kind::kExternal, std::move(command)}; }
};

// hypothesis for entailment, Not(hypothesis) for contradiction.
fol::Formula goal_of(const EntailmentQuery& q);

// Rejects empty premise lists, duplicate ids and open formulas, then merges
// structurally identical premises under the first id that carries them.
EntailmentQuery canonical_query(const EntailmentQuery& q);

// Gated check: the goal may only use predicates (name and arity), constants
// and function symbols found in the premises, the prover must refute
// premises & -goal, and every premise must take part in that proof.
CheckResult check_entailment(const EntailmentQuery& q, const Backend& backend = Backend::internal(),
                             const prover::ResourceBudget& budget = {});

CheckResult check_external(const EntailmentQuery& q, const std::string& prover_command,
                           const prover::ResourceBudget& budget = {});

// TPTP problem handed to external provers: premises become axioms ax1..axN
// in order, the goal is the conjecture "goal".
std::string tptp_problem(const EntailmentQuery& q);

struct SzsOutcome {
  std::string status;                // empty when no status line was printed
  std::set<std::string> axioms;      // axiom names referenced in the proof block
  bool has_proof_block = false;
};

// Scans prover output for "SZS status <S>" and the "SZS output start/end"
// block. Inside the block, names of fof axiom statements and the second
// argument of file(...) annotations count as references.
SzsOutcome parse_szs(const std::string& output);

}  // namespace epf::entailment
