#include "epf/entailment/tptp_prover.hpp"

#include <optional>

#include "epf/fol/syntax.hpp"
#include "epf/fol/tptp.hpp"

namespace epf::entailment {

namespace {

std::string cnf_term(const fol::Term& t) {
  if (t.args.empty()) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) out += (i ? "," : "") + cnf_term(t.args[i]);
  return out + ")";
}

std::string cnf_clause(const prover::Clause& c) {
  if (c.empty()) return "$false";
  std::string out;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    const auto& l = c.literals[i];
    if (i) out += " | ";
    if (!l.positive) out += "~";
    out += l.predicate;
    if (!l.args.empty()) {
      out += "(";
      for (std::size_t k = 0; k < l.args.size(); ++k) out += (k ? "," : "") + cnf_term(l.args[k]);
      out += ")";
    }
  }
  return out;
}

}  // namespace

int tptp_prove(std::string_view problem, const std::string& file_name,
               const prover::ResourceBudget& budget, std::ostream& out) {
  std::vector<fol::TptpStatement> statements;
  try {
    statements = fol::read_tptp(problem);
  } catch (const fol::SyntaxError& e) {
    out << "% " << e.what() << "\n% SZS status SyntaxError for " << file_name << "\n";
    return 1;
  }

  std::optional<fol::Formula> conjecture;
  prover::ClausifyContext ctx(budget.max_clauses_per_formula);
  for (const auto& s : statements) ctx.reserve(s.formula);
  std::vector<prover::Clause> axioms, negated;
  try {
    for (const auto& s : statements) {
      if (s.role == fol::TptpRole::kConjecture) {
        conjecture = conjecture ? fol::Formula::conjunction(*conjecture, s.formula) : s.formula;
        continue;
      }
      auto cs = prover::clausify(s.formula, s.name, ctx);
      axioms.insert(axioms.end(), cs.begin(), cs.end());
    }
    if (conjecture) negated = prover::clausify(fol::Formula::negation(*conjecture), "conjecture", ctx);
  } catch (const prover::ResourceLimit&) {
    out << "% SZS status ResourceOut for " << file_name << "\n";
    return 0;
  }

  const auto verdict = prover::refute(axioms, negated, budget);
  const char* status = "GaveUp";
  switch (verdict.status) {
    case prover::ProofStatus::kProved:
      status = conjecture ? "Theorem" : "Unsatisfiable";
      break;
    case prover::ProofStatus::kSaturated:
      status = conjecture ? "CounterSatisfiable" : "Satisfiable";
      break;
    case prover::ProofStatus::kTimeout:
      status = "Timeout";
      break;
    case prover::ProofStatus::kResourceLimit:
      status = "ResourceOut";
      break;
  }
  out << "% SZS status " << status << " for " << file_name << "\n";
  if (verdict.status != prover::ProofStatus::kProved) return 0;

  out << "% SZS output start CNFRefutation for " << file_name << "\n";
  for (const auto& step : verdict.derivation) {
    out << "cnf(c" << step.id << ", ";
    if (step.rule == prover::InferenceRule::kInput) {
      if (step.from_goal) {
        out << "negated_conjecture, (" << cnf_clause(step.clause)
            << "), inference(negated_conjecture, [status(cth)], [])).\n";
      } else {
        out << "axiom, (" << cnf_clause(step.clause) << "), file('" << file_name << "', "
            << step.clause.origin << ")).\n";
      }
      continue;
    }
    out << "plain, (" << cnf_clause(step.clause) << "), inference("
        << (step.rule == prover::InferenceRule::kResolution ? "resolution" : "factoring")
        << ", [status(thm)], [";
    for (std::size_t i = 0; i < step.parents.size(); ++i) out << (i ? ", " : "") << "c" << step.parents[i];
    out << "])).\n";
  }
  out << "% SZS output end CNFRefutation for " << file_name << "\n";
  return 0;
}

}  // namespace epf::entailment
