#include "epf/fol/formula.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace epf::fol {

Term Term::variable(std::string name) { return Term{Kind::kVariable, std::move(name), {}}; }

Term Term::constant(std::string name) { return Term{Kind::kConstant, std::move(name), {}}; }

Term Term::function(std::string name, std::vector<Term> args) {
  if (args.empty()) return constant(std::move(name));
  return Term{Kind::kFunction, std::move(name), std::move(args)};
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                b.args.end());
}

bool is_binary(Connective c) {
  return c == Connective::kAnd || c == Connective::kOr || c == Connective::kImplies ||
         c == Connective::kIff;
}

bool is_quantifier(Connective c) { return c == Connective::kForAll || c == Connective::kExists; }

Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(
      Node{Connective::kAtom, std::move(predicate), std::move(args), {}, {}}));
}

Formula Formula::negation(Formula operand) {
  return Formula(std::make_shared<const Node>(Node{Connective::kNot, {}, {}, {}, {std::move(operand)}}));
}

Formula Formula::binary(Connective c, Formula lhs, Formula rhs) {
  assert(is_binary(c));
  return Formula(
      std::make_shared<const Node>(Node{c, {}, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return binary(Connective::kAnd, std::move(lhs), std::move(rhs));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return binary(Connective::kOr, std::move(lhs), std::move(rhs));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return binary(Connective::kImplies, std::move(lhs), std::move(rhs));
}

Formula Formula::equivalence(Formula lhs, Formula rhs) {
  return binary(Connective::kIff, std::move(lhs), std::move(rhs));
}

Formula Formula::quantified(Connective c, std::vector<std::string> vars, Formula body) {
  assert(is_quantifier(c));
  assert(!vars.empty());
  return Formula(
      std::make_shared<const Node>(Node{c, {}, {}, std::move(vars), {std::move(body)}}));
}

Formula Formula::forall(std::vector<std::string> vars, Formula body) {
  return quantified(Connective::kForAll, std::move(vars), std::move(body));
}

Formula Formula::exists(std::vector<std::string> vars, Formula body) {
  return quantified(Connective::kExists, std::move(vars), std::move(body));
}

Formula Formula::conjunction(const std::vector<Formula>& parts) {
  assert(!parts.empty());
  Formula result = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) result = conjunction(result, parts[i]);
  return result;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.args == y.args && x.vars == y.vars &&
         x.children == y.children;
}

std::size_t Formula::depth() const {
  std::size_t deepest = 0;
  for (const auto& child : node_->children) deepest = std::max(deepest, child.depth() + 1);
  return deepest;
}

void Vocabulary::merge(const Vocabulary& other) {
  predicates.insert(other.predicates.begin(), other.predicates.end());
  constants.insert(other.constants.begin(), other.constants.end());
  functions.insert(other.functions.begin(), other.functions.end());
}

bool Vocabulary::subset_of(const Vocabulary& other) const {
  return std::includes(other.predicates.begin(), other.predicates.end(), predicates.begin(),
                       predicates.end()) &&
         std::includes(other.constants.begin(), other.constants.end(), constants.begin(),
                       constants.end()) &&
         std::includes(other.functions.begin(), other.functions.end(), functions.begin(),
                       functions.end());
}

namespace {

void collect_term(const Term& t, Vocabulary& out) {
  switch (t.kind) {
    case Term::Kind::kVariable:
      return;
    case Term::Kind::kConstant:
      out.constants.insert(t.name);
      return;
    case Term::Kind::kFunction:
      out.functions.insert({t.name, t.args.size()});
      for (const auto& a : t.args) collect_term(a, out);
      return;
  }
}

void collect(const Formula& f, Vocabulary& out) {
  switch (f.kind()) {
    case Connective::kAtom:
      out.predicates.insert({f.predicate(), f.args().size()});
      for (const auto& a : f.args()) collect_term(a, out);
      return;
    case Connective::kNot:
      collect(f.operand(), out);
      return;
    case Connective::kForAll:
    case Connective::kExists:
      collect(f.body(), out);
      return;
    default:
      collect(f.lhs(), out);
      collect(f.rhs(), out);
      return;
  }
}

void free_in_term(const Term& t, const std::multiset<std::string>& bound,
                  std::set<std::string>& out) {
  if (t.is_variable()) {
    if (!bound.contains(t.name)) out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) free_in_term(a, bound, out);
}

void free_in(const Formula& f, std::multiset<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::kAtom:
      for (const auto& a : f.args()) free_in_term(a, bound, out);
      return;
    case Connective::kNot:
      free_in(f.operand(), bound, out);
      return;
    case Connective::kForAll:
    case Connective::kExists: {
      std::vector<std::multiset<std::string>::iterator> added;
      for (const auto& v : f.vars()) added.push_back(bound.insert(v));
      free_in(f.body(), bound, out);
      for (auto it : added) bound.erase(it);
      return;
    }
    default:
      free_in(f.lhs(), bound, out);
      free_in(f.rhs(), bound, out);
      return;
  }
}

}  // namespace

Vocabulary signatures(const Formula& f) {
  Vocabulary v;
  collect(f, v);
  return v;
}

std::set<std::string> free_variables(const Formula& f) {
  std::multiset<std::string> bound;
  std::set<std::string> out;
  free_in(f, bound, out);
  return out;
}

}  // namespace epf::fol
