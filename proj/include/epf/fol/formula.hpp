#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace epf::fol {

// A first-order term. Zero-argument functions are always represented as
// constants.
struct Term {
  enum class Kind { kVariable, kConstant, kFunction };

  Kind kind = Kind::kConstant;
  std::string name;
  std::vector<Term> args;

  static Term variable(std::string name);
  static Term constant(std::string name);
  static Term function(std::string name, std::vector<Term> args);

  bool is_variable() const { return kind == Kind::kVariable; }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
};

enum class Connective { kAtom, kNot, kAnd, kOr, kImplies, kIff, kForAll, kExists };

bool is_binary(Connective c);
bool is_quantifier(Connective c);

// Immutable FOL syntax tree with shared structure. Copies are cheap.
class Formula {
 public:
  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula negation(Formula operand);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);
  static Formula binary(Connective c, Formula lhs, Formula rhs);
  static Formula forall(std::vector<std::string> vars, Formula body);
  static Formula exists(std::vector<std::string> vars, Formula body);
  static Formula quantified(Connective c, std::vector<std::string> vars, Formula body);

  // Left-nested conjunction of one or more formulas.
  static Formula conjunction(const std::vector<Formula>& parts);

  Connective kind() const { return node_->kind; }

  // Atom accessors.
  const std::string& predicate() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }

  // Negation operand.
  const Formula& operand() const { return node_->children[0]; }

  // Binary operands.
  const Formula& lhs() const { return node_->children[0]; }
  const Formula& rhs() const { return node_->children[1]; }

  // Quantifier accessors.
  const std::vector<std::string>& vars() const { return node_->vars; }
  const Formula& body() const { return node_->children[0]; }

  // Structural equality.
  friend bool operator==(const Formula& a, const Formula& b);

  // Number of connectives/quantifiers on the longest root-to-atom path.
  std::size_t depth() const;

 private:
  struct Node {
    Connective kind;
    std::string name;
    std::vector<Term> args;
    std::vector<std::string> vars;
    std::vector<Formula> children;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct PredicateSignature {
  std::string name;
  std::size_t arity = 0;

  friend auto operator<=>(const PredicateSignature&, const PredicateSignature&) = default;
};

// Non-logical symbols of a formula. Function symbols share the signature type
// with predicates.
struct Vocabulary {
  std::set<PredicateSignature> predicates;
  std::set<std::string> constants;
  std::set<PredicateSignature> functions;

  void merge(const Vocabulary& other);
  bool subset_of(const Vocabulary& other) const;

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

Vocabulary signatures(const Formula& f);

// Variables occurring free in f, sorted.
std::set<std::string> free_variables(const Formula& f);

}  // namespace epf::fol
