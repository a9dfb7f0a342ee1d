#include "epf/entailment/check.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

#include "epf/fol/syntax.hpp"
#include "epf/fol/tptp.hpp"
#include "process.hpp"

namespace epf::entailment {

const char* to_string(Label l) { return l == Label::kEntailment ? "entailment" : "contradiction"; }

const char* to_string(Reason r) {
  switch (r) {
    case Reason::kOk:
      return "ok";
    case Reason::kVocabularyViolation:
      return "vocabulary_violation";
    case Reason::kNotProved:
      return "not_proved";
    case Reason::kPremisesUnused:
      return "premises_unused";
    case Reason::kProverTimeout:
      return "prover_timeout";
  }
  return "unknown";
}

Label parse_label(const std::string& text) {
  if (text == "entailment") return Label::kEntailment;
  if (text == "contradiction") return Label::kContradiction;
  throw Error("unknown label '" + text + "'");
}

Reason parse_reason(const std::string& text) {
  for (Reason r : {Reason::kOk, Reason::kVocabularyViolation, Reason::kNotProved, Reason::kPremisesUnused,
                   Reason::kProverTimeout}) {
    if (text == to_string(r)) return r;
  }
  throw Error("unknown reason '" + text + "'");
}

fol::Formula goal_of(const EntailmentQuery& q) {
  return q.label == Label::kEntailment ? q.hypothesis : fol::Formula::negation(q.hypothesis);
}

EntailmentQuery canonical_query(const EntailmentQuery& q) {
  if (q.premises.empty()) throw InvalidQuery("query has no premises");
  auto closed = [](const fol::Formula& f, const std::string& what) {
    const auto free = fol::free_variables(f);
    if (!free.empty()) throw InvalidQuery(what + " has free variable " + *free.begin());
  };
  closed(q.hypothesis, "hypothesis");
  EntailmentQuery out{{}, q.hypothesis, q.label};
  std::set<std::string> ids;
  for (const auto& p : q.premises) {
    if (!ids.insert(p.id).second) throw InvalidQuery("duplicate premise id " + p.id);
    closed(p.formula, "premise " + p.id);
    bool seen = false;
    for (const auto& kept : out.premises) seen = seen || kept.formula == p.formula;
    if (!seen) out.premises.push_back(p);
  }
  return out;
}

namespace {

std::set<std::string> all_ids(const EntailmentQuery& q) {
  std::set<std::string> ids;
  for (const auto& p : q.premises) ids.insert(p.id);
  return ids;
}

CheckResult finish_proved(const EntailmentQuery& q, std::set<std::string> used) {
  CheckResult r;
  r.prover_calls = 1;
  r.used_premises = std::move(used);
  r.preserved = r.used_premises == all_ids(q);
  r.reason = r.preserved ? Reason::kOk : Reason::kPremisesUnused;
  return r;
}

CheckResult check_internal(const EntailmentQuery& q, const fol::Formula& goal,
                           const prover::ResourceBudget& budget) {
  prover::ClausifyContext ctx(budget.max_clauses_per_formula);
  for (const auto& p : q.premises) ctx.reserve(p.formula);
  ctx.reserve(goal);
  CheckResult timeout;
  timeout.prover_calls = 1;
  timeout.reason = Reason::kProverTimeout;
  std::vector<prover::Clause> premise_clauses, goal_clauses;
  try {
    for (const auto& p : q.premises) {
      auto cs = prover::clausify(p.formula, p.id, ctx);
      premise_clauses.insert(premise_clauses.end(), cs.begin(), cs.end());
    }
    goal_clauses = prover::clausify(fol::Formula::negation(goal), "goal", ctx);
  } catch (const prover::ResourceLimit&) {
    return timeout;
  }
  auto verdict = prover::refute(premise_clauses, goal_clauses, budget);
  CheckResult r;
  switch (verdict.status) {
    case prover::ProofStatus::kProved:
      r = finish_proved(q, verdict.used_premises);
      break;
    case prover::ProofStatus::kSaturated:
      r.prover_calls = 1;
      r.reason = Reason::kNotProved;
      break;
    case prover::ProofStatus::kTimeout:
    case prover::ProofStatus::kResourceLimit:
      r = timeout;
      break;
  }
  r.verdict = std::move(verdict);
  return r;
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    std::string pattern = (std::filesystem::temp_directory_path() / "epf-XXXXXX.p").string();
    const int fd = mkstemps(pattern.data(), 2);
    if (fd < 0) throw ExternalProverError("cannot create temporary problem file");
    close(fd);
    path_ = pattern;
    std::ofstream(path_) << contents;
  }
  ~TempFile() {
    std::error_code ignored;
    std::filesystem::remove(path_, ignored);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

CheckResult check_command(const EntailmentQuery& q, const std::string& command,
                          const prover::ResourceBudget& budget) {
  std::vector<std::string> argv;
  std::istringstream words(command);
  for (std::string w; words >> w;) argv.push_back(w);
  if (argv.empty()) throw ExternalProverError("empty prover command");

  TempFile problem(tptp_problem(q));
  argv.push_back(problem.path());
  const auto run = detail::run_process(argv, budget.timeout);

  CheckResult timeout;
  timeout.prover_calls = 1;
  timeout.reason = Reason::kProverTimeout;
  if (run.timed_out) return timeout;

  const SzsOutcome szs = parse_szs(run.output);
  if (szs.status.empty()) {
    throw ExternalProverError("'" + command + "' exited with code " + std::to_string(run.exit_code) +
                              " without an SZS status");
  }
  static const std::set<std::string> proved = {"Theorem", "Unsatisfiable", "ContradictoryAxioms"};
  static const std::set<std::string> refuted = {"CounterSatisfiable", "Satisfiable"};
  static const std::set<std::string> gave_up = {"Timeout", "ResourceOut", "MemoryOut", "GaveUp",
                                                "Unknown", "Incomplete"};
  if (refuted.contains(szs.status)) {
    CheckResult r;
    r.prover_calls = 1;
    r.reason = Reason::kNotProved;
    return r;
  }
  if (gave_up.contains(szs.status)) return timeout;
  if (!proved.contains(szs.status)) {
    throw ExternalProverError("unexpected SZS status " + szs.status + " from '" + command + "'");
  }

  std::set<std::string> used;
  for (std::size_t i = 0; i < q.premises.size(); ++i) {
    if (szs.axioms.contains("ax" + std::to_string(i + 1))) used.insert(q.premises[i].id);
  }
  if (used.empty()) {
    // Unparseable proof: counted as not preserved rather than aborting the run.
    std::cerr << "epf: warning: unparseable proof from '" << command << "': SZS " << szs.status
              << " without axiom references\n";
  }
  return finish_proved(q, std::move(used));
}

}  // namespace

std::string tptp_problem(const EntailmentQuery& q) {
  fol::TptpSymbolTable table;
  std::string out;
  for (std::size_t i = 0; i < q.premises.size(); ++i) {
    out += fol::to_tptp(q.premises[i].formula, fol::TptpRole::kAxiom, "ax" + std::to_string(i + 1), table);
    out += '\n';
  }
  out += fol::to_tptp(goal_of(q), fol::TptpRole::kConjecture, "goal", table);
  out += '\n';
  return out;
}

SzsOutcome parse_szs(const std::string& output) {
  static const std::regex status_re(R"(SZS status\s+([A-Za-z]+))");
  static const std::regex fof_re(R"(fof\(\s*([a-z][A-Za-z0-9_]*)\s*,\s*axiom\b)");
  static const std::regex file_re(R"(file\(\s*'[^']*'\s*,\s*([a-z][A-Za-z0-9_]*)\s*\))");

  SzsOutcome out;
  bool in_block = false;
  std::istringstream lines(output);
  for (std::string line; std::getline(lines, line);) {
    std::smatch m;
    if (out.status.empty() && std::regex_search(line, m, status_re)) {
      out.status = m[1];
      continue;
    }
    if (line.find("SZS output start") != std::string::npos) {
      in_block = out.has_proof_block = true;
      continue;
    }
    if (line.find("SZS output end") != std::string::npos) {
      in_block = false;
      continue;
    }
    if (!in_block) continue;
    for (const auto* re : {&fof_re, &file_re}) {
      for (std::sregex_iterator it(line.begin(), line.end(), *re), end; it != end; ++it) {
        out.axioms.insert((*it)[1]);
      }
    }
  }
  return out;
}

CheckResult check_entailment(const EntailmentQuery& q, const Backend& backend,
                             const prover::ResourceBudget& budget) {
  const EntailmentQuery cq = canonical_query(q);
  const fol::Formula goal = goal_of(cq);

  fol::Vocabulary premise_vocab;
  for (const auto& p : cq.premises) premise_vocab.merge(fol::signatures(p.formula));
  if (!fol::signatures(goal).subset_of(premise_vocab)) {
    CheckResult r;
    r.reason = Reason::kVocabularyViolation;
    return r;
  }
  if (backend.kind == Backend::Kind::kExternal) return check_command(cq, backend.command, budget);
  return check_internal(cq, goal, budget);
}

CheckResult check_external(const EntailmentQuery& q, const std::string& prover_command,
                           const prover::ResourceBudget& budget) {
  return check_entailment(q, Backend::external(prover_command), budget);
}

}  // namespace epf::entailment
