#include "epf/metrics/verdict_cache.hpp"

#include <set>

#include "epf/fol/syntax.hpp"

namespace epf::metrics {

using entailment::CheckResult;

CheckResult VerdictCache::get(const std::string& key, const std::function<CheckResult()>& compute) {
  std::promise<CheckResult> promise;
  std::shared_future<CheckResult> existing;
  {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      ++hits_;
      existing = it->second;
    } else {
      entries_.emplace(key, promise.get_future().share());
    }
  }
  if (existing.valid()) return existing.get();

  CheckResult result;
  try {
    result = compute();
  } catch (...) {
    // Later requests see the same failure instead of blocking forever.
    promise.set_exception(std::current_exception());
    throw;
  }
  result.verdict.reset();
  {
    std::lock_guard lock(mu_);
    prover_calls_ += result.prover_calls;
    if (listener_) listener_(key, result);
  }
  promise.set_value(result);
  return result;
}

void VerdictCache::preload(const std::string& key, CheckResult result) {
  std::promise<CheckResult> ready;
  result.verdict.reset();
  ready.set_value(std::move(result));
  std::lock_guard lock(mu_);
  entries_.insert_or_assign(key, ready.get_future().share());
}

void VerdictCache::set_listener(Listener listener) {
  std::lock_guard lock(mu_);
  listener_ = std::move(listener);
}

std::size_t VerdictCache::prover_calls() const {
  std::lock_guard lock(mu_);
  return prover_calls_;
}

std::size_t VerdictCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

std::size_t VerdictCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

entailment::EntailmentQuery CachedChecker::canonical(const entailment::EntailmentQuery& q) const {
  std::map<std::string, fol::Formula> sorted;
  for (const auto& p : q.premises) sorted.emplace(fol::print_formula(p.formula), p.formula);
  entailment::EntailmentQuery out{{}, entailment::goal_of(q), entailment::Label::kEntailment};
  for (const auto& [text, f] : sorted) out.premises.push_back({"p" + std::to_string(out.premises.size() + 1), f});
  return out;
}

std::string CachedChecker::key(const entailment::EntailmentQuery& q) const {
  const auto c = canonical(q);
  std::string k = backend_.kind == entailment::Backend::Kind::kInternal ? "internal" : "external:" + backend_.command;
  k += "|timeout_ms=" + std::to_string(budget_.timeout.count());
  k += "|max_generated=" + std::to_string(budget_.max_generated);
  k += "|max_cnf=" + std::to_string(budget_.max_clauses_per_formula);
  for (const auto& p : c.premises) k += "|premise=" + fol::print_formula(p.formula);
  k += "|goal=" + fol::print_formula(c.hypothesis);
  return k;
}

CheckResult CachedChecker::check(const entailment::EntailmentQuery& q) {
  const auto c = canonical(q);
  const std::string k = key(q);
  if (observer_) observer_(k, c);
  return cache_.get(k, [&] { return entailment::check_entailment(c, backend_, budget_); });
}

std::string CachedChecker::tptp(const entailment::EntailmentQuery& q) const {
  return entailment::tptp_problem(canonical(q));
}

}  // namespace epf::metrics
