#include "epf/fol/syntax.hpp"

#include <cctype>
#include <utility>
#include <vector>

namespace epf::fol {

SyntaxError::SyntaxError(const std::string& message, std::size_t position)
    : Error("syntax error at " + std::to_string(position) + ": " + message), position_(position) {}

namespace {

std::string join(const std::set<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

FreeVariableError::FreeVariableError(std::set<std::string> variables)
    : Error("free variables: " + join(variables)), variables_(std::move(variables)) {}

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

namespace {

enum class Tok { kIdent, kLParen, kRParen, kComma, kDot, kNot, kAnd, kOr, kImplies, kIff, kEnd };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::kIdent, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    auto starts = [&](std::string_view op) { return s.substr(i, op.size()) == op; };
    if (starts("<->")) {
      out.push_back({Tok::kIff, s.substr(i, 3), i});
      i += 3;
    } else if (starts("->") || starts(">>")) {
      out.push_back({Tok::kImplies, s.substr(i, 2), i});
      i += 2;
    } else if (c == '-' || c == '~') {
      out.push_back({Tok::kNot, s.substr(i, 1), i++});
    } else if (c == '&') {
      out.push_back({Tok::kAnd, s.substr(i, 1), i++});
    } else if (c == '|') {
      out.push_back({Tok::kOr, s.substr(i, 1), i++});
    } else if (c == '(') {
      out.push_back({Tok::kLParen, s.substr(i, 1), i++});
    } else if (c == ')') {
      out.push_back({Tok::kRParen, s.substr(i, 1), i++});
    } else if (c == ',') {
      out.push_back({Tok::kComma, s.substr(i, 1), i++});
    } else if (c == '.') {
      out.push_back({Tok::kDot, s.substr(i, 1), i++});
    } else if (c == '=') {
      throw SyntaxError("equality is not supported", i);
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({Tok::kEnd, {}, s.size()});
  return out;
}

bool variable_shaped(std::string_view name) {
  if (name.empty() || name[0] < 'u' || name[0] > 'z') return false;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  }
  return true;
}

bool is_keyword(std::string_view s) { return s == "all" || s == "exists"; }

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Formula parse() {
    Formula f = formula();
    if (peek().kind != Tok::kEnd) fail("unexpected '" + std::string(peek().text) + "'");
    if (!free_.empty()) throw FreeVariableError(free_);
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(peek().kind == Tok::kEnd ? msg + " (at end of input)" : msg, peek().pos);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    ++pos_;
  }

  // formula := disjunction (('->' | '<->') formula)?
  Formula formula() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::kImplies) {
      next();
      return Formula::implication(std::move(lhs), formula());
    }
    if (peek().kind == Tok::kIff) {
      next();
      return Formula::equivalence(std::move(lhs), formula());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (peek().kind == Tok::kOr) {
      next();
      f = Formula::disjunction(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (peek().kind == Tok::kAnd) {
      next();
      f = Formula::conjunction(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    if (peek().kind == Tok::kNot) {
      next();
      return Formula::negation(unary());
    }
    if (peek().kind == Tok::kIdent && is_keyword(peek().text)) return quantifier();
    return primary();
  }

  Formula quantifier() {
    const Connective kind = next().text == "all" ? Connective::kForAll : Connective::kExists;
    std::vector<std::string> vars;
    while (peek().kind == Tok::kIdent && !is_keyword(peek().text)) {
      vars.emplace_back(next().text);
    }
    if (vars.empty()) fail("expected variable after quantifier");
    expect(Tok::kDot, "'.' after quantified variables");
    const std::size_t mark = bound_.size();
    bound_.insert(bound_.end(), vars.begin(), vars.end());
    Formula body = formula();
    bound_.resize(mark);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = Formula::quantified(kind, {*it}, std::move(body));
    }
    return body;
  }

  Formula primary() {
    if (peek().kind == Tok::kLParen) {
      next();
      Formula f = formula();
      expect(Tok::kRParen, "')'");
      return f;
    }
    if (peek().kind != Tok::kIdent) fail("expected formula");
    std::string name(next().text);
    if (peek().kind != Tok::kLParen) return Formula::atom(std::move(name));
    return Formula::atom(std::move(name), arguments());
  }

  std::vector<Term> arguments() {
    expect(Tok::kLParen, "'('");
    std::vector<Term> args;
    args.push_back(term());
    while (peek().kind == Tok::kComma) {
      next();
      args.push_back(term());
    }
    expect(Tok::kRParen, "')' after arguments");
    return args;
  }

  Term term() {
    if (peek().kind != Tok::kIdent || is_keyword(peek().text)) fail("expected term");
    std::string name(next().text);
    if (peek().kind == Tok::kLParen) return Term::function(std::move(name), arguments());
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
      if (*it == name) return Term::variable(std::move(name));
    }
    if (variable_shaped(name)) {
      free_.insert(name);
      return Term::variable(std::move(name));
    }
    return Term::constant(std::move(name));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
  std::set<std::string> free_;
};

const char* symbol(Connective c) {
  switch (c) {
    case Connective::kAnd:
      return " & ";
    case Connective::kOr:
      return " | ";
    case Connective::kImplies:
      return " -> ";
    case Connective::kIff:
      return " <-> ";
    default:
      return "";
  }
}

bool is_unit(const Formula& f) {
  return f.kind() == Connective::kAtom || f.kind() == Connective::kNot;
}

void print(const Formula& f, std::string& out);

void print_wrapped(const Formula& f, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(f, out);
  if (wrap) out += ')';
}

void print(const Formula& f, std::string& out) {
  const Connective k = f.kind();
  switch (k) {
    case Connective::kAtom:
      out += f.predicate();
      if (!f.args().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) out += ", ";
          out += print_term(f.args()[i]);
        }
        out += ')';
      }
      return;
    case Connective::kNot:
      out += '-';
      print_wrapped(f.operand(), !is_unit(f.operand()), out);
      return;
    case Connective::kForAll:
    case Connective::kExists:
      out += k == Connective::kForAll ? "all" : "exists";
      for (const auto& v : f.vars()) out += ' ' + v;
      out += ". ";
      print_wrapped(f.body(), is_binary(f.body().kind()), out);
      return;
    default: {
      const bool associative = k == Connective::kAnd || k == Connective::kOr;
      const bool left_chain = associative && f.lhs().kind() == k;
      print_wrapped(f.lhs(), !is_unit(f.lhs()) && !left_chain, out);
      out += symbol(k);
      print_wrapped(f.rhs(), !is_unit(f.rhs()), out);
      return;
    }
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string print_term(const Term& t) {
  if (t.args.empty()) return t.name;
  std::string out = t.name + '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += print_term(t.args[i]);
  }
  return out + ')';
}

std::string print_formula(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

}  // namespace epf::fol
