#include "epf/prover/herbrand.hpp"

#include <map>

#include "epf/prover/clause.hpp"

namespace epf::prover {

const char* to_string(BruteForceVerdict v) {
  switch (v) {
    case BruteForceVerdict::kEntailed:
      return "entailed";
    case BruteForceVerdict::kCountermodel:
      return "countermodel";
    case BruteForceVerdict::kInapplicable:
      return "inapplicable";
  }
  return "unknown";
}

namespace {

using fol::Connective;
using fol::Formula;

bool has_function(const fol::Term& t) { return t.kind == fol::Term::Kind::kFunction; }

// Formula compiled against a fixed domain: atom arguments are either domain
// elements (>= 0) or variable slots (< 0, slot = -arg - 1).
struct Compiled {
  Connective kind = Connective::kAtom;
  std::size_t base = 0;
  std::vector<int> args;
  int slot = 0;
  std::vector<Compiled> kids;
};

class Evaluator {
 public:
  Evaluator(std::size_t domain, std::uint64_t interpretation)
      : domain_(domain), bits_(interpretation) {}

  bool eval(const Compiled& c, std::vector<int>& env) const {
    switch (c.kind) {
      case Connective::kAtom: {
        std::size_t offset = 0;
        for (int a : c.args) offset = offset * domain_ + static_cast<std::size_t>(a >= 0 ? a : env[-a - 1]);
        return (bits_ >> (c.base + offset)) & 1U;
      }
      case Connective::kNot:
        return !eval(c.kids[0], env);
      case Connective::kAnd:
        return eval(c.kids[0], env) && eval(c.kids[1], env);
      case Connective::kOr:
        return eval(c.kids[0], env) || eval(c.kids[1], env);
      case Connective::kImplies:
        return !eval(c.kids[0], env) || eval(c.kids[1], env);
      case Connective::kIff:
        return eval(c.kids[0], env) == eval(c.kids[1], env);
      case Connective::kForAll:
      case Connective::kExists: {
        const bool universal = c.kind == Connective::kForAll;
        const int saved = env[c.slot];
        bool result = universal;
        for (std::size_t e = 0; e < domain_; ++e) {
          env[c.slot] = static_cast<int>(e);
          if (eval(c.kids[0], env) != universal) {
            result = !universal;
            break;
          }
        }
        env[c.slot] = saved;
        return result;
      }
    }
    return false;
  }

 private:
  std::size_t domain_;
  std::uint64_t bits_;
};

class Compiler {
 public:
  Compiler(const std::map<std::string, int>& elements,
           const std::map<fol::PredicateSignature, std::size_t>& bases)
      : elements_(elements), bases_(bases) {}

  Compiled compile(const Formula& f) {
    Compiled c;
    c.kind = f.kind();
    switch (f.kind()) {
      case Connective::kAtom:
        c.base = bases_.at({f.predicate(), f.args().size()});
        for (const auto& a : f.args()) {
          if (a.is_variable()) {
            c.args.push_back(-lookup(a.name) - 1);
          } else {
            c.args.push_back(elements_.at(a.name));
          }
        }
        return c;
      case Connective::kNot:
        c.kids.push_back(compile(f.operand()));
        return c;
      case Connective::kForAll:
      case Connective::kExists: {
        // Multi-variable quantifiers become nested single-slot nodes.
        const std::size_t mark = scope_.size();
        std::vector<int> slots;
        for (const auto& v : f.vars()) {
          slots.push_back(static_cast<int>(slot_count_++));
          scope_.emplace_back(v, slots.back());
        }
        Compiled body = compile(f.body());
        scope_.resize(mark);
        for (auto it = slots.rbegin(); it != slots.rend(); ++it) {
          Compiled q;
          q.kind = f.kind();
          q.slot = *it;
          q.kids.push_back(std::move(body));
          body = std::move(q);
        }
        return body;
      }
      default:
        c.kids.push_back(compile(f.lhs()));
        c.kids.push_back(compile(f.rhs()));
        return c;
    }
  }

  std::size_t slot_count() const { return slot_count_; }

 private:
  int lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    throw std::logic_error("free variable " + name);
  }

  const std::map<std::string, int>& elements_;
  const std::map<fol::PredicateSignature, std::size_t>& bases_;
  std::vector<std::pair<std::string, int>> scope_;
  std::size_t slot_count_ = 0;
};

bool clauses_have_functions(const std::vector<Clause>& clauses) {
  for (const auto& c : clauses) {
    for (const auto& l : c.literals) {
      for (const auto& a : l.args) {
        if (has_function(a)) return true;
      }
    }
  }
  return false;
}

}  // namespace

BruteForceResult brute_force_entails(const std::vector<Formula>& premises, const Formula& hypothesis,
                                     const BruteForceOptions& options) {
  BruteForceResult result;
  fol::Vocabulary vocab = fol::signatures(hypothesis);
  for (const auto& p : premises) vocab.merge(fol::signatures(p));
  if (!vocab.functions.empty()) {
    result.reason = "function symbols in input";
    return result;
  }

  // Clause form only tells how many witnesses existentials need.
  ClausifyContext ctx;
  for (const auto& p : premises) ctx.reserve(p);
  ctx.reserve(hypothesis);
  try {
    std::vector<Clause> all;
    for (const auto& p : premises) {
      auto cs = clausify(p, "p", ctx);
      all.insert(all.end(), cs.begin(), cs.end());
    }
    auto goal = clausify(Formula::negation(hypothesis), "goal", ctx);
    all.insert(all.end(), goal.begin(), goal.end());
    if (clauses_have_functions(all)) {
      result.reason = "skolemization introduces function symbols";
      return result;
    }
  } catch (const ResourceLimit& e) {
    result.reason = e.what();
    return result;
  }

  std::map<std::string, int> elements;
  for (const auto& c : vocab.constants) {
    elements.emplace(c, static_cast<int>(result.domain.size()));
    result.domain.push_back(c);
  }
  const std::size_t wanted =
      std::max({options.domain_size, vocab.constants.size() + ctx.skolem_count(), std::size_t{1}});
  for (std::size_t n = 1; result.domain.size() < wanted; ++n) {
    const std::string fresh = "e" + std::to_string(n);
    if (elements.contains(fresh)) continue;
    elements.emplace(fresh, static_cast<int>(result.domain.size()));
    result.domain.push_back(fresh);
  }
  const std::size_t d = result.domain.size();

  std::map<fol::PredicateSignature, std::size_t> bases;
  std::vector<std::pair<fol::PredicateSignature, std::size_t>> layout;
  std::size_t atoms = 0;
  for (const auto& sig : vocab.predicates) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < sig.arity; ++i) {
      count *= d;
      if (count > 64) break;
    }
    bases.emplace(sig, atoms);
    layout.emplace_back(sig, atoms);
    atoms += count;
    if (atoms > 62) break;
  }
  if (atoms > 62 || (std::uint64_t{1} << atoms) > options.max_interpretations) {
    result.reason = "too many interpretations";
    return result;
  }

  Compiler compiler(elements, bases);
  std::vector<Compiled> compiled_premises;
  for (const auto& p : premises) compiled_premises.push_back(compiler.compile(p));
  const Compiled compiled_goal = compiler.compile(hypothesis);
  std::vector<int> env(compiler.slot_count() + 1, 0);

  const std::uint64_t total = std::uint64_t{1} << atoms;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    Evaluator ev(d, bits);
    bool model = true;
    for (const auto& p : compiled_premises) {
      if (!ev.eval(p, env)) {
        model = false;
        break;
      }
    }
    if (!model || ev.eval(compiled_goal, env)) continue;

    result.verdict = BruteForceVerdict::kCountermodel;
    for (const auto& [sig, base] : layout) {
      std::size_t count = 1;
      for (std::size_t i = 0; i < sig.arity; ++i) count *= d;
      for (std::size_t k = 0; k < count; ++k) {
        std::string text = sig.name;
        if (sig.arity > 0) {
          std::vector<std::string> args(sig.arity);
          std::size_t rest = k;
          for (std::size_t i = sig.arity; i-- > 0;) {
            args[i] = result.domain[rest % d];
            rest /= d;
          }
          text += '(';
          for (std::size_t i = 0; i < args.size(); ++i) text += (i ? ", " : "") + args[i];
          text += ')';
        }
        result.countermodel[text] = (bits >> (base + k)) & 1U;
      }
    }
    return result;
  }
  result.verdict = BruteForceVerdict::kEntailed;
  return result;
}

}  // namespace epf::prover
