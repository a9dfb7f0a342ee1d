#include "epf/prover/refute.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>

namespace epf::prover {

const char* to_string(ProofStatus s) {
  switch (s) {
    case ProofStatus::kProved:
      return "proved";
    case ProofStatus::kSaturated:
      return "saturated";
    case ProofStatus::kTimeout:
      return "timeout";
    case ProofStatus::kResourceLimit:
      return "resource_limit";
  }
  return "unknown";
}

namespace {

// Internal term: sym >= 0 is a function symbol, sym < 0 encodes variable -sym-1.
struct T {
  int sym = 0;
  std::vector<T> args;

  bool is_var() const { return sym < 0; }
  int var() const { return -sym - 1; }
  static T variable(int v) { return T{-v - 1, {}}; }

  friend bool operator==(const T&, const T&) = default;
  friend std::strong_ordering operator<=>(const T& a, const T& b) {
    if (auto c = a.sym <=> b.sym; c != 0) return c;
    return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                  b.args.end());
  }
};

struct Lit {
  bool positive = true;
  int pred = 0;
  std::vector<T> args;

  friend auto operator<=>(const Lit&, const Lit&) = default;
  friend bool operator==(const Lit&, const Lit&) = default;
};

struct IClause {
  std::vector<Lit> lits;
  int nvars = 0;
  std::size_t weight = 0;
  std::uint64_t mask = 0;
  InferenceRule rule = InferenceRule::kInput;
  std::vector<std::size_t> parents;
  std::vector<std::size_t> lit_idx;
  const Clause* input = nullptr;
  bool from_goal = false;
  bool alive = true;
};

class Symbols {
 public:
  int pred(const std::string& name, std::size_t arity) { return intern(preds_, pred_names_, name, arity); }
  int func(const std::string& name, std::size_t arity) { return intern(funcs_, func_names_, name, arity); }
  const std::string& pred_name(int id) const { return pred_names_[id]; }
  const std::string& func_name(int id) const { return func_names_[id]; }

 private:
  using Key = std::pair<std::string, std::size_t>;
  static int intern(std::map<Key, int>& m, std::vector<std::string>& names, const std::string& name,
                    std::size_t arity) {
    auto [it, inserted] = m.try_emplace({name, arity}, static_cast<int>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  }

  std::map<Key, int> preds_, funcs_;
  std::vector<std::string> pred_names_, func_names_;
};

class Subst {
 public:
  explicit Subst(int n) : bindings_(static_cast<std::size_t>(n)) {}

  bool unify(const T& x, const T& y) {
    const T& a = walk(x);
    const T& b = walk(y);
    if (a.is_var() && b.is_var() && a.var() == b.var()) return true;
    if (a.is_var()) return bind(a.var(), b);
    if (b.is_var()) return bind(b.var(), a);
    if (a.sym != b.sym || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (!unify(a.args[i], b.args[i])) return false;
    }
    return true;
  }

  T apply(const T& t) const {
    const T& w = walk(t);
    if (w.is_var()) return w;
    T out{w.sym, {}};
    out.args.reserve(w.args.size());
    for (const auto& a : w.args) out.args.push_back(apply(a));
    return out;
  }

 private:
  const T& walk(const T& t) const {
    const T* p = &t;
    while (p->is_var() && bindings_[p->var()]) p = &*bindings_[p->var()];
    return *p;
  }

  bool occurs(int v, const T& t) const {
    const T& w = walk(t);
    if (w.is_var()) return w.var() == v;
    for (const auto& a : w.args) {
      if (occurs(v, a)) return true;
    }
    return false;
  }

  bool bind(int v, const T& t) {
    if (occurs(v, t)) return false;
    T copy = t;
    bindings_[v] = std::move(copy);
    return true;
  }

  std::vector<std::optional<T>> bindings_;
};

T shift(const T& t, int offset) {
  if (t.is_var()) return T::variable(t.var() + offset);
  T out{t.sym, {}};
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(shift(a, offset));
  return out;
}

std::size_t term_weight(const T& t) {
  std::size_t w = 1;
  for (const auto& a : t.args) w += term_weight(a);
  return w;
}

void rename(T& t, std::map<int, int>& names) {
  if (t.is_var()) {
    auto [it, inserted] = names.try_emplace(t.var(), static_cast<int>(names.size()));
    t = T::variable(it->second);
    return;
  }
  for (auto& a : t.args) rename(a, names);
}

void finish(IClause& c) {
  std::map<int, int> names;
  for (auto& l : c.lits) {
    for (auto& a : l.args) rename(a, names);
  }
  std::sort(c.lits.begin(), c.lits.end());
  c.lits.erase(std::unique(c.lits.begin(), c.lits.end()), c.lits.end());
  c.nvars = static_cast<int>(names.size());
  c.weight = 0;
  c.mask = 0;
  for (const auto& l : c.lits) {
    c.weight += 1;
    for (const auto& a : l.args) c.weight += term_weight(a);
    c.mask |= std::uint64_t{1} << ((static_cast<unsigned>(l.pred) * 2 + (l.positive ? 1 : 0)) % 64);
  }
}

bool tautology(const IClause& c) {
  for (std::size_t i = 0; i + 1 < c.lits.size(); ++i) {
    for (std::size_t j = i + 1; j < c.lits.size(); ++j) {
      const Lit& a = c.lits[i];
      const Lit& b = c.lits[j];
      if (a.positive != b.positive && a.pred == b.pred && a.args == b.args) return true;
    }
  }
  return false;
}

// One-way matching: binds variables of the pattern only.
class Matcher {
 public:
  Matcher(const IClause& general, const IClause& specific)
      : c_(general), d_(specific), bindings_(static_cast<std::size_t>(general.nvars)) {}

  bool run() { return extend(0); }

 private:
  bool match(const T& p, const T& t) {
    if (p.is_var()) {
      auto& slot = bindings_[p.var()];
      if (slot) return *slot == t;
      slot = t;
      trail_.push_back(p.var());
      return true;
    }
    if (p.sym != t.sym || p.args.size() != t.args.size()) return false;
    for (std::size_t i = 0; i < p.args.size(); ++i) {
      if (!match(p.args[i], t.args[i])) return false;
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      bindings_[trail_.back()].reset();
      trail_.pop_back();
    }
  }

  bool extend(std::size_t k) {
    if (k == c_.lits.size()) return true;
    const Lit& p = c_.lits[k];
    for (const Lit& t : d_.lits) {
      if (t.positive != p.positive || t.pred != p.pred) continue;
      const std::size_t mark = trail_.size();
      bool ok = true;
      for (std::size_t i = 0; ok && i < p.args.size(); ++i) ok = match(p.args[i], t.args[i]);
      if (ok && extend(k + 1)) return true;
      undo(mark);
    }
    return false;
  }

  const IClause& c_;
  const IClause& d_;
  std::vector<std::optional<T>> bindings_;
  std::vector<int> trail_;
};

bool subsumes(const IClause& c, const IClause& d) {
  if (c.lits.size() > d.lits.size() || (c.mask & ~d.mask) != 0) return false;
  return Matcher(c, d).run();
}

class Engine {
 public:
  explicit Engine(const ResourceBudget& budget)
      : budget_(budget),
        start_(std::chrono::steady_clock::now()),
        deadline_(start_ + budget.timeout) {}

  ProofVerdict run(const std::vector<Clause>& premises, const std::vector<Clause>& goal) {
    for (const auto& c : premises) add_input(c, false);
    for (const auto& c : goal) add_input(c, true);
    ProofStatus status = proof_ ? ProofStatus::kProved : saturate();
    ProofVerdict v;
    v.status = status;
    if (status == ProofStatus::kProved) extract(v);
    v.stats.generated = generated_;
    v.stats.kept = store_.size();
    v.stats.given = given_count_;
    v.stats.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start_);
    return v;
  }

 private:
  T convert(const fol::Term& t, std::map<std::string, int>& vars) {
    if (t.is_variable()) {
      auto [it, inserted] = vars.try_emplace(t.name, static_cast<int>(vars.size()));
      return T::variable(it->second);
    }
    T out{symbols_.func(t.name, t.args.size()), {}};
    for (const auto& a : t.args) out.args.push_back(convert(a, vars));
    return out;
  }

  fol::Term export_term(const T& t) const {
    if (t.is_var()) return fol::Term::variable("X" + std::to_string(t.var() + 1));
    std::vector<fol::Term> args;
    for (const auto& a : t.args) args.push_back(export_term(a));
    return fol::Term::function(symbols_.func_name(t.sym), std::move(args));
  }

  Clause export_clause(const IClause& c) const {
    Clause out;
    for (const auto& l : c.lits) {
      Literal lit{l.positive, symbols_.pred_name(l.pred), {}};
      for (const auto& a : l.args) lit.args.push_back(export_term(a));
      out.literals.push_back(std::move(lit));
    }
    out.origin = c.input ? c.input->origin : "derived";
    out.parents = c.parents;
    return out;
  }

  void add_input(const Clause& c, bool from_goal) {
    IClause ic;
    std::map<std::string, int> vars;
    for (const auto& l : c.literals) {
      Lit lit{l.positive, symbols_.pred(l.predicate, l.args.size()), {}};
      for (const auto& a : l.args) lit.args.push_back(convert(a, vars));
      ic.lits.push_back(std::move(lit));
    }
    ic.input = &c;
    ic.from_goal = from_goal;
    finish(ic);
    if (proof_) return;
    keep(std::move(ic), true);
  }

  bool out_of_time() const { return std::chrono::steady_clock::now() >= deadline_; }

  // Stores a new clause unless it is redundant. Returns false on proof.
  bool keep(IClause c, bool input) {
    if (!input) ++generated_;
    if (c.lits.empty()) {
      store_.push_back(std::move(c));
      proof_ = store_.size() - 1;
      return false;
    }
    if (tautology(c)) return true;
    for (std::size_t id : active_) {
      if (store_[id].alive && subsumes(store_[id], c)) return true;
    }
    for (const auto& [w, id] : by_weight_) {
      if (subsumes(store_[id], c)) return true;
    }
    store_.push_back(std::move(c));
    const std::size_t id = store_.size() - 1;
    by_weight_.insert({store_[id].weight, id});
    by_age_.insert(id);
    return true;
  }

  std::size_t select() {
    std::size_t id;
    if (selections_++ % 5 == 4) {
      id = *by_age_.begin();
      by_weight_.erase({store_[id].weight, id});
    } else {
      id = by_weight_.begin()->second;
      by_weight_.erase(by_weight_.begin());
    }
    by_age_.erase(id);
    return id;
  }

  void kill(std::size_t id) {
    IClause& c = store_[id];
    if (!c.alive) return;
    c.alive = false;
    by_weight_.erase({c.weight, id});
    by_age_.erase(id);
  }

  ProofStatus saturate() {
    while (!by_age_.empty()) {
      if (out_of_time()) return ProofStatus::kTimeout;
      const std::size_t given = select();
      ++given_count_;

      bool redundant = false;
      for (std::size_t id : active_) {
        if (store_[id].alive && subsumes(store_[id], store_[given])) {
          redundant = true;
          break;
        }
      }
      if (redundant) {
        store_[given].alive = false;
        continue;
      }
      for (std::size_t id : active_) {
        if (store_[id].alive && subsumes(store_[given], store_[id])) kill(id);
      }
      std::vector<std::size_t> doomed;
      for (const auto& [w, id] : by_weight_) {
        if (subsumes(store_[given], store_[id])) doomed.push_back(id);
      }
      for (std::size_t id : doomed) kill(id);
      std::erase_if(active_, [&](std::size_t id) { return !store_[id].alive; });
      active_.push_back(given);

      if (!infer(given)) return ProofStatus::kProved;
      if (generated_ > budget_.max_generated) return ProofStatus::kResourceLimit;
    }
    return ProofStatus::kSaturated;
  }

  // Returns false once the empty clause is derived.
  bool infer(std::size_t given) {
    {
      const IClause g = store_[given];
      for (std::size_t i = 0; i < g.lits.size(); ++i) {
        for (std::size_t j = i + 1; j < g.lits.size(); ++j) {
          if (g.lits[i].positive != g.lits[j].positive || g.lits[i].pred != g.lits[j].pred) continue;
          Subst s(g.nvars);
          if (!unify_args(s, g.lits[i], g.lits[j])) continue;
          IClause f;
          for (std::size_t k = 0; k < g.lits.size(); ++k) {
            if (k != j) f.lits.push_back(apply(s, g.lits[k]));
          }
          f.rule = InferenceRule::kFactoring;
          f.parents = {given};
          f.lit_idx = {i, j};
          finish(f);
          if (!keep(std::move(f), false)) return false;
        }
      }
    }
    const std::vector<std::size_t> partners = active_;
    for (std::size_t other : partners) {
      if (!store_[other].alive && other != given) continue;
      if (!resolve(given, other)) return false;
      if ((generated_ & 63) == 0 && out_of_time()) return true;
    }
    return true;
  }

  static bool unify_args(Subst& s, const Lit& a, const Lit& b) {
    for (std::size_t k = 0; k < a.args.size(); ++k) {
      if (!s.unify(a.args[k], b.args[k])) return false;
    }
    return true;
  }

  static Lit apply(const Subst& s, const Lit& l) {
    Lit out{l.positive, l.pred, {}};
    for (const auto& a : l.args) out.args.push_back(s.apply(a));
    return out;
  }

  bool resolve(std::size_t gi, std::size_t oi) {
    const IClause g = store_[gi];
    const IClause o = store_[oi];
    std::vector<Lit> shifted;
    for (const auto& l : o.lits) {
      Lit s{l.positive, l.pred, {}};
      for (const auto& a : l.args) s.args.push_back(shift(a, g.nvars));
      shifted.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < g.lits.size(); ++i) {
      for (std::size_t j = 0; j < shifted.size(); ++j) {
        if (g.lits[i].positive == shifted[j].positive || g.lits[i].pred != shifted[j].pred) continue;
        Subst s(g.nvars + o.nvars);
        if (!unify_args(s, g.lits[i], shifted[j])) continue;
        IClause r;
        for (std::size_t k = 0; k < g.lits.size(); ++k) {
          if (k != i) r.lits.push_back(apply(s, g.lits[k]));
        }
        for (std::size_t k = 0; k < shifted.size(); ++k) {
          if (k != j) r.lits.push_back(apply(s, shifted[k]));
        }
        r.rule = InferenceRule::kResolution;
        r.parents = {gi, oi};
        r.lit_idx = {i, j};
        finish(r);
        if (!keep(std::move(r), false)) return false;
      }
    }
    return true;
  }

  void extract(ProofVerdict& v) const {
    std::vector<bool> seen(store_.size(), false);
    std::vector<std::size_t> stack{*proof_};
    while (!stack.empty()) {
      const std::size_t id = stack.back();
      stack.pop_back();
      if (seen[id]) continue;
      seen[id] = true;
      for (std::size_t p : store_[id].parents) stack.push_back(p);
    }
    for (std::size_t id = 0; id < store_.size(); ++id) {
      if (!seen[id]) continue;
      const IClause& c = store_[id];
      DerivationStep step;
      step.id = id;
      step.clause = export_clause(c);
      step.rule = c.rule;
      step.parents = c.parents;
      step.literal_indices = c.lit_idx;
      step.from_goal = c.from_goal;
      if (c.rule == InferenceRule::kInput) {
        if (c.from_goal) {
          v.goal_used = true;
        } else {
          v.used_premises.insert(c.input->origin);
        }
      }
      v.derivation.push_back(std::move(step));
    }
  }

  ResourceBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point deadline_;
  Symbols symbols_;
  std::vector<IClause> store_;
  std::set<std::pair<std::size_t, std::size_t>> by_weight_;
  std::set<std::size_t> by_age_;
  std::vector<std::size_t> active_;
  std::optional<std::size_t> proof_;
  std::size_t generated_ = 0;
  std::size_t given_count_ = 0;
  std::size_t selections_ = 0;
};

}  // namespace

ProofVerdict refute(const std::vector<Clause>& premise_clauses,
                    const std::vector<Clause>& negated_goal_clauses, const ResourceBudget& budget) {
  return Engine(budget).run(premise_clauses, negated_goal_clauses);
}

}  // namespace epf::prover
