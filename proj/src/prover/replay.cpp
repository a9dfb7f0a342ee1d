#include <map>
#include <optional>

#include "epf/prover/refute.hpp"

namespace epf::prover {

namespace {

using fol::Term;
using Bindings = std::map<std::string, Term>;

const Term& walk(const Term& t, const Bindings& b) {
  const Term* p = &t;
  while (p->is_variable()) {
    auto it = b.find(p->name);
    if (it == b.end()) break;
    p = &it->second;
  }
  return *p;
}

bool occurs(const std::string& v, const Term& t, const Bindings& b) {
  const Term& w = walk(t, b);
  if (w.is_variable()) return w.name == v;
  for (const auto& a : w.args) {
    if (occurs(v, a, b)) return true;
  }
  return false;
}

bool unify(const Term& x, const Term& y, Bindings& b) {
  const Term a = walk(x, b);
  const Term c = walk(y, b);
  if (a.is_variable() && c.is_variable() && a.name == c.name) return true;
  if (a.is_variable()) {
    if (occurs(a.name, c, b)) return false;
    b[a.name] = c;
    return true;
  }
  if (c.is_variable()) return unify(c, a, b);
  if (a.kind != c.kind || a.name != c.name || a.args.size() != c.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!unify(a.args[i], c.args[i], b)) return false;
  }
  return true;
}

Term resolve_term(const Term& t, const Bindings& b) {
  const Term& w = walk(t, b);
  if (w.is_variable()) return w;
  Term out = w;
  for (auto& a : out.args) a = resolve_term(a, b);
  return out;
}

Literal substitute(const Literal& l, const Bindings& b) {
  Literal out{l.positive, l.predicate, {}};
  for (const auto& a : l.args) out.args.push_back(resolve_term(a, b));
  return out;
}

Term prefix_vars(const Term& t, const std::string& prefix) {
  if (t.is_variable()) return Term::variable(prefix + t.name);
  Term out = t;
  for (auto& a : out.args) a = prefix_vars(a, prefix);
  return out;
}

bool match_term(const Term& p, const Term& t, Bindings& b) {
  if (p.is_variable()) {
    auto it = b.find(p.name);
    if (it != b.end()) return it->second == t;
    b.emplace(p.name, t);
    return true;
  }
  if (p.kind != t.kind || p.name != t.name || p.args.size() != t.args.size()) return false;
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    if (!match_term(p.args[i], t.args[i], b)) return false;
  }
  return true;
}

bool embeds(const Clause& c, const Clause& d, std::size_t k, Bindings& b) {
  if (k == c.literals.size()) return true;
  const Literal& p = c.literals[k];
  for (const auto& t : d.literals) {
    if (t.positive != p.positive || t.predicate != p.predicate || t.args.size() != p.args.size()) {
      continue;
    }
    Bindings trial = b;
    bool ok = true;
    for (std::size_t i = 0; ok && i < p.args.size(); ++i) ok = match_term(p.args[i], t.args[i], trial);
    if (ok && embeds(c, d, k + 1, trial)) return true;
  }
  return false;
}

bool variants(const Clause& a, const Clause& b) {
  if (a.literals.size() != b.literals.size()) return false;
  Bindings x, y;
  return embeds(a, b, 0, x) && embeds(b, a, 0, y);
}

std::optional<Clause> resolvent(const Clause& left, const Clause& right, std::size_t i,
                                std::size_t j) {
  if (i >= left.literals.size() || j >= right.literals.size()) return std::nullopt;
  Clause renamed = right;
  for (auto& l : renamed.literals) {
    for (auto& a : l.args) a = prefix_vars(a, "r_");
  }
  const Literal& a = left.literals[i];
  const Literal& c = renamed.literals[j];
  if (a.positive == c.positive || a.predicate != c.predicate || a.args.size() != c.args.size()) {
    return std::nullopt;
  }
  Bindings b;
  for (std::size_t k = 0; k < a.args.size(); ++k) {
    if (!unify(a.args[k], c.args[k], b)) return std::nullopt;
  }
  Clause out;
  for (std::size_t k = 0; k < left.literals.size(); ++k) {
    if (k != i) out.literals.push_back(substitute(left.literals[k], b));
  }
  for (std::size_t k = 0; k < renamed.literals.size(); ++k) {
    if (k != j) out.literals.push_back(substitute(renamed.literals[k], b));
  }
  normalize(out);
  return out;
}

std::optional<Clause> factor(const Clause& parent, std::size_t i, std::size_t j) {
  if (i >= parent.literals.size() || j >= parent.literals.size() || i == j) return std::nullopt;
  const Literal& a = parent.literals[i];
  const Literal& c = parent.literals[j];
  if (a.positive != c.positive || a.predicate != c.predicate || a.args.size() != c.args.size()) {
    return std::nullopt;
  }
  Bindings b;
  for (std::size_t k = 0; k < a.args.size(); ++k) {
    if (!unify(a.args[k], c.args[k], b)) return std::nullopt;
  }
  Clause out;
  for (std::size_t k = 0; k < parent.literals.size(); ++k) {
    if (k != j) out.literals.push_back(substitute(parent.literals[k], b));
  }
  normalize(out);
  return out;
}

}  // namespace

std::string check_derivation(const ProofVerdict& verdict) {
  if (verdict.status != ProofStatus::kProved) return "verdict is not a proof";
  if (verdict.derivation.empty()) return "empty derivation";
  if (!verdict.derivation.back().clause.empty()) return "derivation does not end in the empty clause";

  std::map<std::size_t, const DerivationStep*> by_id;
  for (const auto& step : verdict.derivation) {
    const std::string where = "step " + std::to_string(step.id) + ": ";
    for (std::size_t p : step.parents) {
      if (!by_id.contains(p)) return where + "parent " + std::to_string(p) + " not derived earlier";
    }
    std::optional<Clause> expected;
    switch (step.rule) {
      case InferenceRule::kInput:
        if (!step.parents.empty()) return where + "input clause with parents";
        break;
      case InferenceRule::kResolution:
        if (step.parents.size() != 2 || step.literal_indices.size() != 2) {
          return where + "malformed resolution";
        }
        expected = resolvent(by_id[step.parents[0]]->clause, by_id[step.parents[1]]->clause,
                             step.literal_indices[0], step.literal_indices[1]);
        if (!expected) return where + "parents do not resolve on the recorded literals";
        break;
      case InferenceRule::kFactoring:
        if (step.parents.size() != 1 || step.literal_indices.size() != 2) {
          return where + "malformed factoring";
        }
        expected = factor(by_id[step.parents[0]]->clause, step.literal_indices[0],
                          step.literal_indices[1]);
        if (!expected) return where + "recorded literals do not unify";
        break;
    }
    if (expected && !variants(*expected, step.clause)) {
      return where + "recorded clause '" + print_clause(step.clause) + "' differs from '" +
             print_clause(*expected) + "'";
    }
    by_id[step.id] = &step;
  }
  return {};
}

}  // namespace epf::prover
