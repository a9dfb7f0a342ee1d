#pragma once

#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "epf/error.hpp"
#include "epf/fol/formula.hpp"

namespace epf::fol {

enum class TptpRole { kAxiom, kConjecture };

class MangleCollision : public Error {
 public:
  using Error::Error;
};

// Maps source identifiers onto TPTP words. Predicates, functions and
// constants get their first letter lower-cased; variables get it upper-cased.
// Distinct source symbols never share a TPTP word: a clash is resolved with a
// "_N" suffix in order of first appearance, or reported as MangleCollision
// when suffixing is disabled. One table should serve a whole problem so the
// mapping stays consistent across its statements.
class TptpSymbolTable {
 public:
  enum class SymbolKind { kPredicate, kFunction, kConstant };
  enum class Policy { kSuffix, kStrict };

  explicit TptpSymbolTable(Policy policy = Policy::kSuffix) : policy_(policy) {}

  const std::string& symbol(SymbolKind kind, const std::string& name, std::size_t arity);
  const std::string& variable(const std::string& name);

  // Source name for a mangled symbol or variable; empty when unknown.
  std::string source_symbol(const std::string& tptp_word) const;
  std::string source_variable(const std::string& tptp_word) const;

 private:
  using Key = std::tuple<SymbolKind, std::string, std::size_t>;

  std::string claim(std::string base, std::map<std::string, std::string>& reverse,
                    const std::string& source);

  Policy policy_;
  std::map<Key, std::string> symbols_;
  std::map<std::string, std::string> variables_;
  std::map<std::string, std::string> reverse_symbols_;
  std::map<std::string, std::string> reverse_variables_;
};

// TPTP FOF text of f alone, e.g. "! [X] : (h(X) => m(X))".
std::string tptp_formula(const Formula& f, TptpSymbolTable& table);

// One statement "fof(name, axiom|conjecture, <formula>)."; name must be a
// TPTP lower word.
std::string to_tptp(const Formula& f, TptpRole role, const std::string& name,
                    TptpSymbolTable& table);
std::string to_tptp(const Formula& f, TptpRole role, const std::string& name);

struct TptpStatement {
  std::string name;
  TptpRole role;
  Formula formula;
};

// Reads the FOF fragment without equality: fof(name, role, formula).
// Roles other than conjecture are read as axioms; comments are skipped.
// Variables map to Term variables, functors of arity zero to constants.
std::vector<TptpStatement> read_tptp(std::string_view text);

}  // namespace epf::fol
