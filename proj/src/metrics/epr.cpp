#include "epf/metrics/epr.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <set>
#include <thread>

namespace epf::metrics {

const char* to_string(OracleStatus s) { return s == OracleStatus::kExact ? "exact" : "lower_bound"; }

namespace {

// Runs job(i) for i in [0, n) on up to `workers` threads; rethrows the first
// failure after all threads stop.
template <typename Job>
void parallel_for(std::size_t n, std::size_t workers, Job job) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

entailment::EntailmentQuery make_query(const Pair& p, const std::vector<const Candidate*>& picks) {
  entailment::EntailmentQuery q{{}, *picks.back()->formula, p.label};
  for (std::size_t i = 0; i + 1 < picks.size(); ++i) {
    q.premises.push_back({"p" + std::to_string(i + 1), *picks[i]->formula});
  }
  return q;
}

std::vector<const Sentence*> sentences_of(const Dataset& d, const Pair& p) {
  std::vector<const Sentence*> out;
  for (const auto& id : p.sentence_ids()) {
    const Sentence& s = d.sentence(id);
    if (s.candidates.empty()) throw MissingCandidate("sentence " + id + " of pair " + p.id + " has no candidates");
    out.push_back(&s);
  }
  return out;
}

}  // namespace

Ratio epr(const Dataset& d, CachedChecker& checker, std::size_t workers, std::vector<Top1Outcome>* outcomes) {
  std::vector<Top1Outcome> results(d.pairs().size());
  parallel_for(d.pairs().size(), workers, [&](std::size_t i) {
    const Pair& p = d.pairs()[i];
    Top1Outcome& out = results[i];
    out.pair_id = p.id;
    std::vector<const Candidate*> picks;
    for (const Sentence* s : sentences_of(d, p)) picks.push_back(&top1(*s));
    bool broken = false;
    for (const Candidate* c : picks) {
      out.combination.push_back(c->index);
      broken = broken || c->syntax_error();
    }
    if (broken) {
      out.reason = "syntax_error";
      return;
    }
    const auto r = checker.check(make_query(p, picks));
    out.preserved = r.preserved;
    out.reason = entailment::to_string(r.reason);
  });
  Ratio ratio{0, results.size()};
  for (const auto& r : results) ratio.numerator += r.preserved;
  if (outcomes) *outcomes = std::move(results);
  return ratio;
}

EprAtKResult epr_at_k(const Dataset& d, std::size_t k, CachedChecker& checker, bool exhaustive,
                      std::size_t workers) {
  if (k == 0) throw Error("k must be at least 1");
  EprAtKResult result;
  result.k = k;
  result.exhaustive = exhaustive;
  result.pairs.resize(d.pairs().size());
  parallel_for(d.pairs().size(), workers, [&](std::size_t i) {
    const Pair& p = d.pairs()[i];
    PairDetail& detail = result.pairs[i];
    detail.pair_id = p.id;
    std::vector<std::vector<const Candidate*>> lists;
    for (const Sentence* s : sentences_of(d, p)) lists.push_back(top_k(*s, k));

    std::vector<std::size_t> pos(lists.size(), 0);
    std::vector<const Candidate*> picks(lists.size());
    for (;;) {
      bool broken = false;
      for (std::size_t j = 0; j < lists.size(); ++j) {
        picks[j] = lists[j][pos[j]];
        broken = broken || picks[j]->syntax_error();
      }
      if (broken) {
        ++detail.syntax_error_skipped;
      } else {
        ++detail.combinations_checked;
        if (checker.check(make_query(p, picks)).preserved) {
          Combination c;
          for (const Candidate* pick : picks) c.push_back(pick->index);
          detail.preserving.push_back(std::move(c));
          if (!exhaustive) return;
        }
      }
      // Odometer with the first sentence most significant.
      std::size_t j = lists.size();
      while (j > 0 && ++pos[j - 1] == lists[j - 1].size()) pos[--j] = 0;
      if (j == 0) return;
    }
  });
  result.ratio.denominator = result.pairs.size();
  for (const auto& p : result.pairs) result.ratio.numerator += !p.preserving.empty();
  return result;
}

namespace {

// Branch and bound over one group of pairs connected through shared
// sentences. Tuples stay alive while consistent with the partial selection;
// the bound counts pairs that still have a live tuple.
class OracleSearch {
 public:
  struct PairData {
    std::vector<std::size_t> slots;  // sentence per tuple position
    std::vector<Combination> tuples;
  };

  OracleSearch(std::vector<PairData> pairs, std::vector<std::size_t> order, std::vector<std::size_t> seed,
               std::size_t sentence_count, std::chrono::steady_clock::time_point deadline)
      : pairs_(std::move(pairs)), order_(std::move(order)), deadline_(deadline) {
    uses_.resize(sentence_count);
    domains_.resize(sentence_count);
    for (std::size_t b = 0; b < pairs_.size(); ++b) {
      alive_.emplace_back(pairs_[b].tuples.size(), true);
      live_count_.push_back(pairs_[b].tuples.size());
      possible_ += !pairs_[b].tuples.empty();
      for (std::size_t t = 0; t < pairs_[b].tuples.size(); ++t) {
        for (std::size_t pos = 0; pos < pairs_[b].slots.size(); ++pos) {
          const std::size_t s = pairs_[b].slots[pos];
          uses_[s].push_back({b, t, pos});
          domains_[s].insert(pairs_[b].tuples[t][pos]);
        }
      }
    }
    best_selection_ = seed;
    best_ = satisfied_by(seed);
    current_ = seed;
  }

  // Returns false when the deadline cut the search short.
  bool run() {
    search(0);
    return !timed_out_;
  }

  std::size_t best() const { return best_; }
  const std::vector<std::size_t>& selection() const { return best_selection_; }
  std::size_t nodes() const { return nodes_; }

 private:
  struct Use {
    std::size_t pair, tuple, pos;
  };
  struct Kill {
    std::size_t pair, tuple;
  };

  std::size_t satisfied_by(const std::vector<std::size_t>& sel) const {
    std::size_t n = 0;
    for (const auto& p : pairs_) {
      n += std::any_of(p.tuples.begin(), p.tuples.end(), [&](const Combination& t) {
        for (std::size_t pos = 0; pos < t.size(); ++pos) {
          if (sel[p.slots[pos]] != t[pos]) return false;
        }
        return true;
      });
    }
    return n;
  }

  void assign(std::size_t s, std::size_t v, std::vector<Kill>& trail) {
    for (const Use& u : uses_[s]) {
      if (!alive_[u.pair][u.tuple] || pairs_[u.pair].tuples[u.tuple][u.pos] == v) continue;
      alive_[u.pair][u.tuple] = false;
      trail.push_back({u.pair, u.tuple});
      if (--live_count_[u.pair] == 0) --possible_;
    }
  }

  void undo(std::vector<Kill>& trail) {
    for (const Kill& k : trail) {
      alive_[k.pair][k.tuple] = true;
      if (live_count_[k.pair]++ == 0) ++possible_;
    }
    trail.clear();
  }

  void search(std::size_t depth) {
    if (timed_out_) return;
    if ((++nodes_ & 1023) == 1 && std::chrono::steady_clock::now() >= deadline_) {
      timed_out_ = true;
      return;
    }
    if (possible_ <= best_) return;
    if (depth == order_.size()) {
      best_ = possible_;
      best_selection_ = current_;
      return;
    }
    const std::size_t s = order_[depth];
    // Values backed by more live tuples first; ties by lower index.
    std::vector<std::pair<std::size_t, std::size_t>> ranked;
    for (std::size_t v : domains_[s]) {
      std::size_t support = 0;
      for (const Use& u : uses_[s]) support += alive_[u.pair][u.tuple] && pairs_[u.pair].tuples[u.tuple][u.pos] == v;
      ranked.emplace_back(support, v);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Kill> trail;
    const std::size_t saved = current_[s];
    for (const auto& [support, v] : ranked) {
      current_[s] = v;
      assign(s, v, trail);
      search(depth + 1);
      undo(trail);
      if (timed_out_ || possible_ <= best_) break;
    }
    current_[s] = saved;
  }

  std::vector<PairData> pairs_;
  std::vector<std::size_t> order_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<std::vector<Use>> uses_;
  std::vector<std::set<std::size_t>> domains_;
  std::vector<std::vector<bool>> alive_;
  std::vector<std::size_t> live_count_;
  std::size_t possible_ = 0;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_selection_;
  std::size_t best_ = 0;
  std::size_t nodes_ = 0;
  bool timed_out_ = false;
};

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

OracleResult epr_at_k_oracle(const Dataset& d, const EprAtKResult& detail, std::chrono::milliseconds time_limit) {
  if (!detail.exhaustive) throw Error("the oracle needs exhaustive per-pair detail");
  if (detail.pairs.size() != d.pairs().size()) throw Error("detail does not match the dataset");
  const auto deadline = std::chrono::steady_clock::now() + time_limit;

  // Sentences referenced by pairs, numbered densely.
  std::map<std::string, std::size_t> number;
  std::vector<const Sentence*> sentences;
  std::vector<std::vector<std::size_t>> slots(d.pairs().size());
  for (std::size_t b = 0; b < d.pairs().size(); ++b) {
    for (const auto& id : d.pairs()[b].sentence_ids()) {
      auto [it, inserted] = number.try_emplace(id, sentences.size());
      if (inserted) sentences.push_back(&d.sentence(id));
      slots[b].push_back(it->second);
    }
  }
  std::vector<std::size_t> seed;
  for (const Sentence* s : sentences) seed.push_back(top1(*s).index);

  // Pairs without preserving combinations can never succeed; the rest are
  // grouped by shared sentences and solved independently.
  std::vector<std::size_t> parent(sentences.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t b = 0; b < slots.size(); ++b) {
    if (detail.pairs[b].preserving.empty()) continue;
    for (std::size_t s : slots[b]) parent[find_root(parent, s)] = find_root(parent, slots[b][0]);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t b = 0; b < slots.size(); ++b) {
    if (!detail.pairs[b].preserving.empty()) groups[find_root(parent, slots[b][0])].push_back(b);
  }

  OracleResult result;
  result.ratio.denominator = d.pairs().size();
  std::vector<std::size_t> selection = seed;
  for (const auto& [root, members] : groups) {
    std::vector<OracleSearch::PairData> data;
    std::map<std::size_t, std::size_t> degree;
    for (std::size_t b : members) {
      data.push_back({slots[b], detail.pairs[b].preserving});
      for (std::size_t s : std::set<std::size_t>(slots[b].begin(), slots[b].end())) ++degree[s];
    }
    std::vector<std::size_t> order;
    for (const auto& [s, deg] : degree) order.push_back(s);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (degree[a] != degree[b]) return degree[a] > degree[b];
      return sentences[a]->id < sentences[b]->id;
    });
    OracleSearch search(std::move(data), order, seed, sentences.size(), deadline);
    if (!search.run()) result.status = OracleStatus::kLowerBound;
    result.ratio.numerator += search.best();
    result.nodes += search.nodes();
    for (std::size_t s : order) selection[s] = search.selection()[s];
  }
  for (std::size_t s = 0; s < sentences.size(); ++s) result.selection[sentences[s]->id] = selection[s];
  return result;
}

}  // namespace epf::metrics
