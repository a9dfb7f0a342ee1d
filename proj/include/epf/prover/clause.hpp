#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "epf/error.hpp"
#include "epf/fol/formula.hpp"

namespace epf::prover {

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

struct Literal {
  bool positive = true;
  std::string predicate;
  std::vector<fol::Term> args;

  friend auto operator<=>(const Literal&, const Literal&) = default;
  friend bool operator==(const Literal&, const Literal&) = default;
};

// A disjunction of literals, sorted and free of duplicates. Variables are
// named X1, X2, ... in order of first occurrence. An empty literal list is the
// contradiction.
struct Clause {
  std::vector<Literal> literals;
  std::string origin = "derived";
  std::vector<std::size_t> parents;

  bool empty() const { return literals.empty(); }
};

std::string print_clause(const Clause& c);

// Shared state for clausifying the formulas of one problem. Skolem symbols are
// named sk1, sk2, ... skipping any name reserved by the problem vocabulary.
class ClausifyContext {
 public:
  explicit ClausifyContext(std::size_t max_clauses_per_formula = 10000)
      : max_clauses_(max_clauses_per_formula) {}

  // Keeps skolem names clear of every symbol in f.
  void reserve(const fol::Formula& f);
  void reserve(const std::string& name) { reserved_.insert(name); }

  std::string fresh_skolem();
  std::size_t max_clauses() const { return max_clauses_; }
  std::size_t skolem_count() const { return counter_; }

 private:
  std::set<std::string> reserved_;
  std::size_t counter_ = 0;
  std::size_t max_clauses_;
};

// Equisatisfiable clause form of a closed formula: implications and
// equivalences are expanded, negations pushed to atoms, existentials replaced
// by skolem terms over the enclosing universal variables they depend on, and
// disjunctions distributed over conjunctions. Tautologies are dropped.
// Throws ResourceLimit past the context's clause bound.
std::vector<Clause> clausify(const fol::Formula& f, const std::string& origin,
                             ClausifyContext& context);
std::vector<Clause> clausify(const fol::Formula& f, const std::string& origin);

// Rename variables to X1.. by first occurrence, then sort and deduplicate.
void normalize(Clause& c);

bool is_tautology(const Clause& c);

}  // namespace epf::prover
