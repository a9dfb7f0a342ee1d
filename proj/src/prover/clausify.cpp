#include "epf/prover/clause.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "epf/fol/syntax.hpp"

namespace epf::prover {

using fol::Connective;
using fol::Formula;
using fol::Term;

void ClausifyContext::reserve(const Formula& f) {
  const auto vocab = fol::signatures(f);
  for (const auto& p : vocab.predicates) reserved_.insert(p.name);
  for (const auto& fn : vocab.functions) reserved_.insert(fn.name);
  reserved_.insert(vocab.constants.begin(), vocab.constants.end());
}

std::string ClausifyContext::fresh_skolem() {
  for (;;) {
    std::string name = "sk" + std::to_string(++counter_);
    if (!reserved_.contains(name)) {
      reserved_.insert(name);
      return name;
    }
  }
}

namespace {

struct Nnf {
  enum class Kind { kLit, kAnd, kOr, kAll, kEx };

  Kind kind;
  Literal lit;
  std::string var;
  std::vector<Nnf> kids;
};

Nnf leaf(Literal lit) { return {Nnf::Kind::kLit, std::move(lit), {}, {}}; }
Nnf node(Nnf::Kind k, Nnf a, Nnf b) { return {k, {}, {}, {std::move(a), std::move(b)}}; }
Nnf quant(Nnf::Kind k, std::string var, Nnf body) { return {k, {}, std::move(var), {std::move(body)}}; }

class NnfBuilder {
 public:
  Nnf build(const Formula& f, bool positive) {
    using K = Nnf::Kind;
    switch (f.kind()) {
      case Connective::kAtom: {
        std::vector<Term> args;
        for (const auto& a : f.args()) args.push_back(rename(a));
        return leaf({positive, f.predicate(), std::move(args)});
      }
      case Connective::kNot:
        return build(f.operand(), !positive);
      case Connective::kAnd:
        return node(positive ? K::kAnd : K::kOr, build(f.lhs(), positive), build(f.rhs(), positive));
      case Connective::kOr:
        return node(positive ? K::kOr : K::kAnd, build(f.lhs(), positive), build(f.rhs(), positive));
      case Connective::kImplies:
        return node(positive ? K::kOr : K::kAnd, build(f.lhs(), !positive),
                    build(f.rhs(), positive));
      case Connective::kIff:
        if (positive) {
          return node(K::kAnd, node(K::kOr, build(f.lhs(), false), build(f.rhs(), true)),
                      node(K::kOr, build(f.lhs(), true), build(f.rhs(), false)));
        }
        return node(K::kOr, node(K::kAnd, build(f.lhs(), true), build(f.rhs(), false)),
                    node(K::kAnd, build(f.lhs(), false), build(f.rhs(), true)));
      case Connective::kForAll:
      case Connective::kExists: {
        const bool universal = (f.kind() == Connective::kForAll) == positive;
        std::vector<std::pair<std::string, std::string>> saved;
        std::vector<std::string> fresh;
        for (const auto& v : f.vars()) {
          auto it = env_.find(v);
          saved.emplace_back(v, it == env_.end() ? std::string() : it->second);
          fresh.push_back("V" + std::to_string(++counter_));
          env_[v] = fresh.back();
        }
        Nnf body = build(f.body(), positive);
        for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
          if (it->second.empty()) {
            env_.erase(it->first);
          } else {
            env_[it->first] = it->second;
          }
        }
        for (auto it = fresh.rbegin(); it != fresh.rend(); ++it) {
          body = quant(universal ? K::kAll : K::kEx, *it, std::move(body));
        }
        return body;
      }
    }
    return {};
  }

 private:
  Term rename(const Term& t) {
    if (t.is_variable()) {
      auto it = env_.find(t.name);
      return Term::variable(it == env_.end() ? t.name : it->second);
    }
    Term out = t;
    for (auto& a : out.args) a = rename(a);
    return out;
  }

  std::map<std::string, std::string> env_;
  std::size_t counter_ = 0;
};

void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) term_vars(a, out);
}

void nnf_vars(const Nnf& n, std::set<std::string>& out) {
  if (n.kind == Nnf::Kind::kLit) {
    for (const auto& a : n.lit.args) term_vars(a, out);
    return;
  }
  for (const auto& k : n.kids) nnf_vars(k, out);
}

Term substitute(const Term& t, const std::map<std::string, Term>& subst) {
  if (t.is_variable()) {
    auto it = subst.find(t.name);
    return it == subst.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = substitute(a, subst);
  return out;
}

class Skolemizer {
 public:
  explicit Skolemizer(ClausifyContext& ctx) : ctx_(ctx) {}

  // Drops quantifiers; existential variables become skolem terms.
  Nnf run(const Nnf& n) {
    switch (n.kind) {
      case Nnf::Kind::kLit: {
        Nnf out = n;
        for (auto& a : out.lit.args) a = substitute(a, subst_);
        return out;
      }
      case Nnf::Kind::kAnd:
      case Nnf::Kind::kOr:
        return node(n.kind, run(n.kids[0]), run(n.kids[1]));
      case Nnf::Kind::kAll: {
        universals_.push_back(n.var);
        Nnf body = run(n.kids[0]);
        universals_.pop_back();
        return body;
      }
      case Nnf::Kind::kEx: {
        std::set<std::string> raw;
        nnf_vars(n.kids[0], raw);
        std::set<std::string> occurring;
        for (const auto& v : raw) term_vars(substitute(Term::variable(v), subst_), occurring);
        std::vector<Term> deps;
        for (const auto& u : universals_) {
          if (occurring.contains(u)) deps.push_back(Term::variable(u));
        }
        subst_[n.var] = Term::function(ctx_.fresh_skolem(), std::move(deps));
        Nnf body = run(n.kids[0]);
        subst_.erase(n.var);
        return body;
      }
    }
    return {};
  }

 private:
  ClausifyContext& ctx_;
  std::vector<std::string> universals_;
  std::map<std::string, Term> subst_;
};

using LitSet = std::vector<Literal>;

std::vector<LitSet> to_cnf(const Nnf& n, std::size_t bound) {
  switch (n.kind) {
    case Nnf::Kind::kLit:
      return {{n.lit}};
    case Nnf::Kind::kAnd: {
      auto lhs = to_cnf(n.kids[0], bound);
      auto rhs = to_cnf(n.kids[1], bound);
      if (lhs.size() + rhs.size() > bound) {
        throw ResourceLimit("clause form exceeds " + std::to_string(bound) + " clauses");
      }
      lhs.insert(lhs.end(), std::make_move_iterator(rhs.begin()), std::make_move_iterator(rhs.end()));
      return lhs;
    }
    case Nnf::Kind::kOr: {
      auto lhs = to_cnf(n.kids[0], bound);
      auto rhs = to_cnf(n.kids[1], bound);
      if (lhs.size() * rhs.size() > bound) {
        throw ResourceLimit("clause form exceeds " + std::to_string(bound) + " clauses");
      }
      std::vector<LitSet> out;
      out.reserve(lhs.size() * rhs.size());
      for (const auto& a : lhs) {
        for (const auto& b : rhs) {
          LitSet c = a;
          c.insert(c.end(), b.begin(), b.end());
          out.push_back(std::move(c));
        }
      }
      return out;
    }
    default:
      return {};
  }
}

void rename_term(Term& t, std::map<std::string, std::string>& names) {
  if (t.is_variable()) {
    auto [it, inserted] = names.try_emplace(t.name, "");
    if (inserted) it->second = "X" + std::to_string(names.size());
    t.name = it->second;
    return;
  }
  for (auto& a : t.args) rename_term(a, names);
}

}  // namespace

void normalize(Clause& c) {
  std::map<std::string, std::string> names;
  for (auto& lit : c.literals) {
    for (auto& a : lit.args) rename_term(a, names);
  }
  std::sort(c.literals.begin(), c.literals.end());
  c.literals.erase(std::unique(c.literals.begin(), c.literals.end()), c.literals.end());
}

bool is_tautology(const Clause& c) {
  for (const auto& a : c.literals) {
    if (!a.positive) continue;
    for (const auto& b : c.literals) {
      if (!b.positive && a.predicate == b.predicate && a.args == b.args) return true;
    }
  }
  return false;
}

std::vector<Clause> clausify(const Formula& f, const std::string& origin, ClausifyContext& context) {
  const Nnf nnf = NnfBuilder().build(f, true);
  const Nnf matrix = Skolemizer(context).run(nnf);
  std::vector<Clause> out;
  for (auto& lits : to_cnf(matrix, context.max_clauses())) {
    Clause c{std::move(lits), origin, {}};
    normalize(c);
    if (!is_tautology(c)) out.push_back(std::move(c));
  }
  return out;
}

std::vector<Clause> clausify(const Formula& f, const std::string& origin) {
  ClausifyContext context;
  context.reserve(f);
  return clausify(f, origin, context);
}

namespace {

std::string print_literal(const Literal& l) {
  std::string out = l.positive ? "" : "-";
  out += l.predicate;
  if (!l.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < l.args.size(); ++i) {
      if (i) out += ", ";
      out += fol::print_term(l.args[i]);
    }
    out += ')';
  }
  return out;
}

}  // namespace

std::string print_clause(const Clause& c) {
  if (c.literals.empty()) return "$false";
  std::string out;
  for (const auto& l : c.literals) {
    if (!out.empty()) out += " | ";
    out += print_literal(l);
  }
  return out;
}

}  // namespace epf::prover
