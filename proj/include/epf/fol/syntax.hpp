#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>

#include "epf/error.hpp"
#include "epf/fol/formula.hpp"

namespace epf::fol {

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position);

  // Byte offset into the parsed text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class FreeVariableError : public Error {
 public:
  explicit FreeVariableError(std::set<std::string> variables);

  const std::set<std::string>& variables() const { return variables_; }

 private:
  std::set<std::string> variables_;
};

// Parses the surface syntax:
//
//   -P(x)  ~P(x)         negation
//   A & B                conjunction
//   A | B                disjunction
//   A -> B   A >> B      implication (right associative)
//   A <-> B              equivalence
//   all x y. F           universal, scope extends maximally to the right
//   exists x. F          existential
//
// Precedence, tightest first: negation, &, |, then -> / <->. The result is a
// closed sentence; unbound variables raise FreeVariableError. A term
// identifier is a variable when an enclosing quantifier binds it. Unbound
// identifiers shaped like a variable (one letter from u to z, optional
// digits) are free variables; every other unbound identifier is a constant.
Formula parse_formula(std::string_view text);

// Canonical printer. parse_formula(print_formula(f)) == f for every closed f
// whose quantifiers bind one variable each.
std::string print_formula(const Formula& f);

std::string print_term(const Term& t);

// True for identifiers matching [A-Za-z][A-Za-z0-9_]*.
bool is_identifier(std::string_view s);

}  // namespace epf::fol
