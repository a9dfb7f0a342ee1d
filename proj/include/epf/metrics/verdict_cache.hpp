#pragma once

#include <cstddef>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <string>

#include "epf/entailment/check.hpp"

namespace epf::metrics {

// Shared, thread-safe memo of gated checks. A key is computed at most once:
// concurrent requests for a key in flight wait on the first computation.
class VerdictCache {
 public:
  using Listener = std::function<void(const std::string& key, const entailment::CheckResult&)>;

  entailment::CheckResult get(const std::string& key,
                              const std::function<entailment::CheckResult()>& compute);

  // Seeds a result without counting a prover call (verdict store replay).
  void preload(const std::string& key, entailment::CheckResult result);

  // Invoked once per newly computed key, serialized under the cache lock.
  void set_listener(Listener listener);

  std::size_t prover_calls() const;
  std::size_t hits() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_future<entailment::CheckResult>> entries_;
  Listener listener_;
  std::size_t prover_calls_ = 0;
  std::size_t hits_ = 0;
};

// Canonical form of a check: premises become the sorted, distinct printed
// formulas with ids p1..pN, the hypothesis becomes the goal (negated for
// contradiction pairs). Queries with equal keys get equal verdicts.
class CachedChecker {
 public:
  CachedChecker(entailment::Backend backend, prover::ResourceBudget budget, VerdictCache& cache)
      : backend_(std::move(backend)), budget_(budget), cache_(cache) {}

  std::string key(const entailment::EntailmentQuery& q) const;
  entailment::CheckResult check(const entailment::EntailmentQuery& q);

  // Problem text an external prover would receive for q, in canonical form.
  std::string tptp(const entailment::EntailmentQuery& q) const;

  // Called on every check with the key and the canonical query, before the
  // cache is consulted. Must be thread-safe when checks run concurrently.
  using Observer = std::function<void(const std::string& key, const entailment::EntailmentQuery& canonical)>;
  void set_observer(Observer observer) { observer_ = std::move(observer); }

  VerdictCache& cache() { return cache_; }

 private:
  entailment::EntailmentQuery canonical(const entailment::EntailmentQuery& q) const;

  entailment::Backend backend_;
  prover::ResourceBudget budget_;
  VerdictCache& cache_;
  Observer observer_;
};

}  // namespace epf::metrics
