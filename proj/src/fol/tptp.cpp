#include "epf/fol/tptp.hpp"

#include <cctype>
#include <utility>

#include "epf/fol/syntax.hpp"

namespace epf::fol {

namespace {

bool is_lower_word(std::string_view s) {
  return is_identifier(s) && std::islower(static_cast<unsigned char>(s[0]));
}

}  // namespace

std::string TptpSymbolTable::claim(std::string base, std::map<std::string, std::string>& reverse,
                                   const std::string& source) {
  if (!reverse.contains(base)) {
    reverse.emplace(base, source);
    return base;
  }
  if (policy_ == Policy::kStrict) {
    throw MangleCollision("identifiers '" + reverse.at(base) + "' and '" + source +
                          "' both map to TPTP word '" + base + "'");
  }
  for (int n = 1;; ++n) {
    std::string candidate = base + "_" + std::to_string(n);
    if (!reverse.contains(candidate)) {
      reverse.emplace(candidate, source);
      return candidate;
    }
  }
}

const std::string& TptpSymbolTable::symbol(SymbolKind kind, const std::string& name,
                                           std::size_t arity) {
  Key key{kind, name, arity};
  if (auto it = symbols_.find(key); it != symbols_.end()) return it->second;
  std::string base = name;
  base[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(base[0])));
  return symbols_.emplace(key, claim(std::move(base), reverse_symbols_, name)).first->second;
}

const std::string& TptpSymbolTable::variable(const std::string& name) {
  if (auto it = variables_.find(name); it != variables_.end()) return it->second;
  std::string base = name;
  base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
  return variables_.emplace(name, claim(std::move(base), reverse_variables_, name))
      .first->second;
}

std::string TptpSymbolTable::source_symbol(const std::string& tptp_word) const {
  auto it = reverse_symbols_.find(tptp_word);
  return it == reverse_symbols_.end() ? std::string() : it->second;
}

std::string TptpSymbolTable::source_variable(const std::string& tptp_word) const {
  auto it = reverse_variables_.find(tptp_word);
  return it == reverse_variables_.end() ? std::string() : it->second;
}

namespace {

using SymbolKind = TptpSymbolTable::SymbolKind;

void write_term(const Term& t, TptpSymbolTable& table, std::string& out) {
  switch (t.kind) {
    case Term::Kind::kVariable:
      out += table.variable(t.name);
      return;
    case Term::Kind::kConstant:
      out += table.symbol(SymbolKind::kConstant, t.name, 0);
      return;
    case Term::Kind::kFunction:
      out += table.symbol(SymbolKind::kFunction, t.name, t.args.size());
      out += '(';
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ',';
        write_term(t.args[i], table, out);
      }
      out += ')';
      return;
  }
}

const char* tptp_connective(Connective c) {
  switch (c) {
    case Connective::kAnd:
      return " & ";
    case Connective::kOr:
      return " | ";
    case Connective::kImplies:
      return " => ";
    case Connective::kIff:
      return " <=> ";
    default:
      return "";
  }
}

void write(const Formula& f, TptpSymbolTable& table, bool nested, std::string& out) {
  switch (f.kind()) {
    case Connective::kAtom:
      out += table.symbol(SymbolKind::kPredicate, f.predicate(), f.args().size());
      if (!f.args().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) out += ',';
          write_term(f.args()[i], table, out);
        }
        out += ')';
      }
      return;
    case Connective::kNot:
      out += "~ ";
      write(f.operand(), table, true, out);
      return;
    case Connective::kForAll:
    case Connective::kExists:
      out += f.kind() == Connective::kForAll ? "! [" : "? [";
      for (std::size_t i = 0; i < f.vars().size(); ++i) {
        if (i) out += ',';
        out += table.variable(f.vars()[i]);
      }
      out += "] : ";
      write(f.body(), table, true, out);
      return;
    default:
      if (nested) out += '(';
      write(f.lhs(), table, true, out);
      out += tptp_connective(f.kind());
      write(f.rhs(), table, true, out);
      if (nested) out += ')';
      return;
  }
}

}  // namespace

std::string tptp_formula(const Formula& f, TptpSymbolTable& table) {
  std::string out;
  write(f, table, false, out);
  return out;
}

std::string to_tptp(const Formula& f, TptpRole role, const std::string& name,
                    TptpSymbolTable& table) {
  if (!is_lower_word(name)) throw Error("invalid TPTP statement name '" + name + "'");
  return "fof(" + name + ", " + (role == TptpRole::kAxiom ? "axiom" : "conjecture") + ", " +
         tptp_formula(f, table) + ").";
}

std::string to_tptp(const Formula& f, TptpRole role, const std::string& name) {
  TptpSymbolTable table;
  return to_tptp(f, role, name, table);
}

namespace {

class TptpReader {
 public:
  explicit TptpReader(std::string_view text) : s_(text) {}

  std::vector<TptpStatement> statements() {
    std::vector<TptpStatement> out;
    skip();
    while (i_ < s_.size()) {
      const std::string kw = word();
      if (kw != "fof") fail("only fof statements are supported, got '" + kw + "'");
      expect('(');
      std::string name = statement_name();
      expect(',');
      const std::string role = word();
      expect(',');
      Formula f = formula();
      if (peek() == ',') skip_annotations();
      expect(')');
      expect('.');
      if (!free_.empty()) throw FreeVariableError(free_);
      out.push_back({std::move(name),
                     role == "conjecture" ? TptpRole::kConjecture : TptpRole::kAxiom,
                     std::move(f)});
      skip();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, i_); }

  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else if (s_.substr(i_, 2) == "/*") {
        const auto end = s_.find("*/", i_ + 2);
        if (end == std::string_view::npos) fail("unterminated comment");
        i_ = end + 2;
      } else {
        return;
      }
    }
  }

  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }

  bool accept(std::string_view op) {
    skip();
    if (s_.substr(i_, op.size()) != op) return false;
    i_ += op.size();
    return true;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  std::string word() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      ++i_;
    }
    if (start == i_) fail("expected word");
    return std::string(s_.substr(start, i_ - start));
  }

  std::string statement_name() {
    if (peek() == '\'') {
      const std::size_t start = ++i_;
      while (i_ < s_.size() && s_[i_] != '\'') ++i_;
      if (i_ == s_.size()) fail("unterminated quoted name");
      return std::string(s_.substr(start, i_++ - start));
    }
    return word();
  }

  void skip_annotations() {
    int depth = 0;
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (c == '\'') {
        ++i_;
        while (i_ < s_.size() && s_[i_] != '\'') ++i_;
      } else if (c == '(' || c == '[') {
        ++depth;
      } else if (c == ')' || c == ']') {
        if (depth == 0) return;
        --depth;
      }
      ++i_;
    }
    fail("unterminated annotations");
  }

  Formula formula() {
    Formula lhs = unitary();
    if (accept("<=>")) return Formula::equivalence(lhs, unitary());
    if (accept("=>")) return Formula::implication(lhs, unitary());
    if (accept("<~>")) return Formula::negation(Formula::equivalence(lhs, unitary()));
    if (accept("<=")) return Formula::implication(unitary(), lhs);
    if (accept("~|")) return Formula::negation(Formula::disjunction(lhs, unitary()));
    if (accept("~&")) return Formula::negation(Formula::conjunction(lhs, unitary()));
    if (peek() == '&') {
      while (accept("&")) lhs = Formula::conjunction(lhs, unitary());
    } else if (peek() == '|') {
      while (accept("|")) lhs = Formula::disjunction(lhs, unitary());
    }
    return lhs;
  }

  Formula unitary() {
    const char c = peek();
    if (c == '(') {
      ++i_;
      Formula f = formula();
      expect(')');
      return f;
    }
    if (c == '~') {
      ++i_;
      return Formula::negation(unitary());
    }
    if (c == '!' || c == '?') {
      ++i_;
      const Connective kind = c == '!' ? Connective::kForAll : Connective::kExists;
      expect('[');
      std::vector<std::string> vars{word()};
      while (peek() == ',') {
        ++i_;
        vars.push_back(word());
      }
      expect(']');
      expect(':');
      const std::size_t mark = bound_.size();
      bound_.insert(bound_.end(), vars.begin(), vars.end());
      Formula body = unitary();
      bound_.resize(mark);
      return Formula::quantified(kind, std::move(vars), std::move(body));
    }
    if (c == '$') fail("defined predicates are not supported");
    std::string name = word();
    if (!std::islower(static_cast<unsigned char>(name[0]))) fail("expected predicate");
    std::vector<Term> args;
    if (peek() == '(') args = arguments();
    if ((peek() == '=' && s_.substr(i_, 2) != "=>") || s_.substr(i_, 2) == "!=") {
      fail("equality is not supported");
    }
    return Formula::atom(std::move(name), std::move(args));
  }

  std::vector<Term> arguments() {
    expect('(');
    std::vector<Term> args{term()};
    while (peek() == ',') {
      ++i_;
      args.push_back(term());
    }
    expect(')');
    return args;
  }

  Term term() {
    std::string name = word();
    if (std::isupper(static_cast<unsigned char>(name[0]))) {
      bool bound = false;
      for (const auto& v : bound_) bound = bound || v == name;
      if (!bound) free_.insert(name);
      return Term::variable(std::move(name));
    }
    if (peek() == '(') return Term::function(std::move(name), arguments());
    return Term::constant(std::move(name));
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::vector<std::string> bound_;
  std::set<std::string> free_;
};

}  // namespace

std::vector<TptpStatement> read_tptp(std::string_view text) { return TptpReader(text).statements(); }

}  // namespace epf::fol
