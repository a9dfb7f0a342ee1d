#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>
#include <tuple>

#include "epf/harness/ingest.hpp"
#include "epf/metrics/epr.hpp"
#include "support/synthetic.hpp"

using namespace epf;
using namespace epf::metrics;

namespace {

const std::string kFixtures = EPF_FIXTURE_DIR;

struct Run {
  VerdictCache cache;
  CachedChecker checker{entailment::Backend::internal(), {}, cache};
};

// Independent reference implementations, written without the library's
// ranking, odometer or cache.

std::vector<std::size_t> reference_top_k(const Sentence& s, std::size_t k) {
  std::vector<std::tuple<bool, double, std::size_t>> keys;
  for (const auto& c : s.candidates) keys.emplace_back(!c.logprob, c.logprob ? -*c.logprob : 0.0, c.index);
  std::sort(keys.begin(), keys.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, keys.size()); ++i) out.push_back(std::get<2>(keys[i]));
  std::sort(out.begin(), out.end());
  return out;
}

const Candidate& candidate(const Sentence& s, std::size_t index) {
  for (const auto& c : s.candidates) {
    if (c.index == index) return c;
  }
  throw std::logic_error("no candidate");
}

bool check_direct(const Dataset& d, const Pair& p, const Combination& combo) {
  const auto ids = p.sentence_ids();
  std::vector<const Candidate*> picks;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    picks.push_back(&candidate(d.sentence(ids[i]), combo[i]));
    if (picks.back()->syntax_error()) return false;
  }
  entailment::EntailmentQuery q{{}, *picks.back()->formula, p.label};
  for (std::size_t i = 0; i + 1 < picks.size(); ++i) {
    q.premises.push_back({"p" + std::to_string(i + 1), *picks[i]->formula});
  }
  return entailment::check_entailment(q).preserved;
}

std::set<Combination> reference_preserving(const Dataset& d, const Pair& p, std::size_t k) {
  std::vector<std::vector<std::size_t>> lists;
  for (const auto& id : p.sentence_ids()) lists.push_back(reference_top_k(d.sentence(id), k));
  std::set<Combination> out;
  Combination combo;
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == lists.size()) {
      if (check_direct(d, p, combo)) out.insert(combo);
      return;
    }
    for (std::size_t v : lists[depth]) {
      combo.push_back(v);
      self(self, depth + 1);
      combo.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Best number of successful pairs over every selection of one top-k
// candidate per sentence.
std::size_t brute_force_oracle(const Dataset& d, const std::vector<std::set<Combination>>& preserving,
                               std::size_t k) {
  std::vector<std::string> ids;
  for (const auto& p : d.pairs()) {
    for (const auto& id : p.sentence_ids()) {
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
  }
  std::vector<std::vector<std::size_t>> domains;
  for (const auto& id : ids) domains.push_back(reference_top_k(d.sentence(id), k));
  std::map<std::string, std::size_t> pick;
  std::size_t best = 0;
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == ids.size()) {
      std::size_t n = 0;
      for (std::size_t b = 0; b < d.pairs().size(); ++b) {
        Combination c;
        for (const auto& id : d.pairs()[b].sentence_ids()) c.push_back(pick[id]);
        n += preserving[b].count(c);
      }
      best = std::max(best, n);
      return;
    }
    for (std::size_t v : domains[depth]) {
      pick[ids[depth]] = v;
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
  return best;
}

std::size_t selection_successes(const Dataset& d, const EprAtKResult& detail,
                                const std::map<std::string, std::size_t>& selection) {
  std::size_t n = 0;
  for (std::size_t b = 0; b < d.pairs().size(); ++b) {
    Combination c;
    for (const auto& id : d.pairs()[b].sentence_ids()) c.push_back(selection.at(id));
    const auto& pres = detail.pairs[b].preserving;
    n += std::find(pres.begin(), pres.end(), c) != pres.end();
  }
  return n;
}

}  // namespace

TEST_CASE("worked example: top-1 fails, top-k recovers both pairs, one selection serves one pair") {
  const Dataset d = harness::ingest(kFixtures + "/shared_premise.jsonl");
  Run run;
  std::vector<Top1Outcome> outcomes;
  CHECK(epr(d, run.checker, 1, &outcomes) == Ratio{0, 2});
  const auto at_k = epr_at_k(d, 3, run.checker, true);
  CHECK(at_k.ratio == Ratio{2, 2});
  const auto oracle = epr_at_k_oracle(d, at_k);
  CHECK(oracle.ratio == Ratio{1, 2});
  CHECK(oracle.status == OracleStatus::kExact);
  CHECK(selection_successes(d, at_k, oracle.selection) == 1);

  REQUIRE(outcomes.size() == 2);
  CHECK(outcomes[0].combination == Combination{1, 1, 1});
  CHECK_FALSE(outcomes[0].preserved);
  // s2 needs candidate 2 for pair a and candidate 3 for pair b.
  CHECK(at_k.pairs[0].preserving == std::vector<Combination>{{1, 2, 1}});
  CHECK(at_k.pairs[1].preserving == std::vector<Combination>{{3, 1, 1}});
}

TEST_CASE("top-k ranks by logprob, breaks ties by index, puts missing logprobs last") {
  Sentence s{"s", "", {}};
  auto add = [&](std::size_t index, std::optional<double> lp) {
    Candidate c;
    c.index = index;
    c.logprob = lp;
    s.candidates.push_back(c);
  };
  add(1, std::nullopt);
  add(2, -0.5);
  add(3, -0.1);
  add(4, -0.5);
  CHECK(top1(s).index == 3);
  auto indices = [](const std::vector<const Candidate*>& cs) {
    std::vector<std::size_t> out;
    for (const auto* c : cs) out.push_back(c->index);
    return out;
  };
  CHECK(indices(top_k(s, 2)) == std::vector<std::size_t>{2, 3});
  CHECK(indices(top_k(s, 3)) == std::vector<std::size_t>{2, 3, 4});
  CHECK(indices(top_k(s, 10)) == std::vector<std::size_t>{1, 2, 3, 4});

  Sentence tie{"t", "", {}};
  for (std::size_t i = 1; i <= 3; ++i) {
    Candidate c;
    c.index = i;
    c.logprob = -1.0;
    tie.candidates.push_back(c);
  }
  CHECK(top1(tie).index == 1);
}

TEST_CASE("k = 1 reproduces top-1 epr") {
  testing::SyntheticDatasets gen(11);
  for (int i = 0; i < 30; ++i) {
    const Dataset d = gen.next();
    Run run;
    CHECK(epr_at_k(d, 1, run.checker, true).ratio == epr(d, run.checker));
  }
}

TEST_CASE("top-1 syntax errors fail the pair without a prover call") {
  const Dataset d = harness::ingest(kFixtures + "/scoring.jsonl");
  Run run;
  std::vector<Top1Outcome> outcomes;
  CHECK(epr(d, run.checker, 1, &outcomes) == Ratio{0, 1});
  CHECK(outcomes[0].reason == "syntax_error");
  CHECK(run.cache.prover_calls() == 0);
  CHECK(run.cache.size() == 0);

  const auto at_k = epr_at_k(d, 3, run.checker, true);
  // 1 of the 3 p1 candidates and 1 of the 3 p2 candidates are broken.
  CHECK(at_k.pairs[0].combinations_checked == 2 * 2 * 3);
  CHECK(at_k.pairs[0].syntax_error_skipped == 27 - 12);
}

TEST_CASE("pairs over sentences without candidates are rejected") {
  Dataset d;
  d.add_sentence({"s1", "", {}});
  Sentence s2{"s2", "", {}};
  Candidate c;
  c.index = 1;
  c.text = "P(a)";
  c.formula = fol::parse_formula("P(a)");
  s2.candidates.push_back(c);
  d.add_sentence(s2);
  d.add_pair({"b", {"s1"}, "s2", entailment::Label::kEntailment});
  Run run;
  CHECK_THROWS_AS(epr(d, run.checker), MissingCandidate);
  CHECK_THROWS_AS(epr_at_k(d, 2, run.checker, false), MissingCandidate);
  CHECK_THROWS_AS(d.sentence("nope"), MissingCandidate);
}

TEST_CASE("epr@k matches an uncached enumeration of every combination") {
  testing::SyntheticOptions opt;
  opt.min_pairs = opt.max_pairs = 3;
  testing::SyntheticDatasets gen(23, opt);
  for (int i = 0; i < 20; ++i) {
    const Dataset d = gen.next();
    for (std::size_t k : {1u, 2u, 3u}) {
      Run run;
      const auto exhaustive = epr_at_k(d, k, run.checker, true);
      const auto early = epr_at_k(d, k, run.checker, false);
      std::size_t expected = 0;
      for (std::size_t b = 0; b < d.pairs().size(); ++b) {
        const auto ref = reference_preserving(d, d.pairs()[b], k);
        const auto& got = exhaustive.pairs[b].preserving;
        CHECK(std::set<Combination>(got.begin(), got.end()) == ref);
        CHECK(std::is_sorted(got.begin(), got.end()));
        if (!ref.empty()) {
          ++expected;
          // early exit stops at the lexicographically first success
          REQUIRE(early.pairs[b].preserving.size() == 1);
          CHECK(early.pairs[b].preserving[0] == *ref.begin());
        }
      }
      CHECK(exhaustive.ratio == Ratio{expected, d.pairs().size()});
      CHECK(early.ratio == exhaustive.ratio);
    }
  }
}

TEST_CASE("oracle equals exhaustive selection search and sits between epr and epr@k") {
  testing::SyntheticDatasets gen(37);
  std::size_t strict_below = 0, strict_above = 0;
  for (int i = 0; i < 60; ++i) {
    const Dataset d = gen.next();
    const std::size_t k = 1 + i % 3;
    Run run;
    const Ratio top1 = epr(d, run.checker);
    const auto at_k = epr_at_k(d, k, run.checker, true);
    const auto oracle = epr_at_k_oracle(d, at_k);
    CHECK(oracle.status == OracleStatus::kExact);
    CHECK(top1.numerator <= oracle.ratio.numerator);
    CHECK(oracle.ratio.numerator <= at_k.ratio.numerator);
    CHECK(selection_successes(d, at_k, oracle.selection) == oracle.ratio.numerator);

    std::vector<std::set<Combination>> pres;
    for (const auto& p : at_k.pairs) pres.emplace_back(p.preserving.begin(), p.preserving.end());
    CHECK(brute_force_oracle(d, pres, k) == oracle.ratio.numerator);
    strict_below += top1.numerator < oracle.ratio.numerator;
    strict_above += oracle.ratio.numerator < at_k.ratio.numerator;
  }
  // The generator should exercise both gaps, not just equalities.
  CHECK(strict_below > 0);
  CHECK(strict_above > 0);
}

TEST_CASE("without shared sentences the oracle equals epr@k") {
  testing::SyntheticOptions opt;
  opt.share_sentences = false;
  testing::SyntheticDatasets gen(41, opt);
  for (int i = 0; i < 20; ++i) {
    const Dataset d = gen.next();
    Run run;
    const auto at_k = epr_at_k(d, 3, run.checker, true);
    CHECK(epr_at_k_oracle(d, at_k).ratio == at_k.ratio);
  }
}

TEST_CASE("adding a candidate never lowers the oracle") {
  testing::SyntheticDatasets gen(53);
  const auto& pool = testing::synthetic_pool();
  for (int i = 0; i < 25; ++i) {
    const Dataset d = gen.next();
    Run run;
    const auto before = epr_at_k_oracle(d, epr_at_k(d, 16, run.checker, true));

    Dataset grown;
    for (auto s : d.sentences()) {
      if (s.id == d.sentences()[i % d.sentences().size()].id) {
        Candidate c;
        c.index = s.candidates.size() + 1;
        c.text = pool[i % pool.size()];
        c.formula = fol::parse_formula(c.text);
        c.logprob = -5.0;
        s.candidates.push_back(c);
      }
      grown.add_sentence(s);
    }
    for (const auto& p : d.pairs()) grown.add_pair(p);
    const auto after = epr_at_k_oracle(grown, epr_at_k(grown, 16, run.checker, true));
    CHECK(after.ratio.numerator >= before.ratio.numerator);
  }
}

TEST_CASE("oracle needs exhaustive detail") {
  const Dataset d = harness::ingest(kFixtures + "/shared_premise.jsonl");
  Run run;
  CHECK_THROWS_AS(epr_at_k_oracle(d, epr_at_k(d, 3, run.checker, false)), Error);
}

TEST_CASE("an exhausted time limit keeps the top-1 selection as a lower bound") {
  const Dataset d = harness::ingest(kFixtures + "/shared_premise.jsonl");
  Run run;
  const auto at_k = epr_at_k(d, 3, run.checker, true);
  const auto cut = epr_at_k_oracle(d, at_k, std::chrono::milliseconds(0));
  CHECK(cut.status == OracleStatus::kLowerBound);
  CHECK(cut.ratio.numerator >= epr(d, run.checker).numerator);
  CHECK(cut.ratio.numerator <= at_k.ratio.numerator);
  CHECK(selection_successes(d, at_k, cut.selection) == cut.ratio.numerator);
}

TEST_CASE("each distinct query reaches the prover at most once") {
  testing::SyntheticDatasets gen(61);
  for (int i = 0; i < 10; ++i) {
    const Dataset d = gen.next();
    Run run;
    epr(d, run.checker);
    const auto first = epr_at_k(d, 3, run.checker, true);
    const std::size_t calls = run.cache.prover_calls();
    CHECK(calls <= run.cache.size());
    const auto again = epr_at_k(d, 3, run.checker, true);
    CHECK(run.cache.prover_calls() == calls);
    CHECK(again.ratio == first.ratio);
  }
}

TEST_CASE("premise order and duplicates share a cache entry") {
  Run run;
  const auto f = [](const char* s) { return fol::parse_formula(s); };
  entailment::EntailmentQuery a{{{"x", f("P(a)")}, {"y", f("all x. (P(x) -> Q(x))")}}, f("Q(a)"),
                                entailment::Label::kEntailment};
  entailment::EntailmentQuery b{{{"q", f("all x. (P(x) -> Q(x))")}, {"r", f("P(a)")}, {"s", f("P(a)")}}, f("Q(a)"),
                                entailment::Label::kEntailment};
  entailment::EntailmentQuery c{{{"q", f("all x. (P(x) -> Q(x))")}, {"r", f("P(a)")}}, f("-Q(a)"),
                                entailment::Label::kContradiction};
  CHECK(run.checker.key(a) == run.checker.key(b));
  CHECK(run.checker.key(a) != run.checker.key(c));
  CHECK(run.checker.check(a).preserved);
  CHECK(run.checker.check(b).preserved);
  CHECK(run.cache.prover_calls() == 1);

  VerdictCache other;
  prover::ResourceBudget tight;
  tight.timeout = std::chrono::milliseconds(5);
  CachedChecker different(entailment::Backend::internal(), tight, other);
  CHECK(different.key(a) != run.checker.key(a));
}

TEST_CASE("concurrent requests for one key compute it once") {
  VerdictCache cache;
  std::atomic<int> computed{0};
  std::vector<std::thread> threads;
  std::vector<bool> results(16);
  for (int t = 0; t < 16; ++t) {
    threads.emplace_back([&, t] {
      results[t] = cache.get("key", [&] {
                          ++computed;
                          std::this_thread::sleep_for(std::chrono::milliseconds(20));
                          entailment::CheckResult r;
                          r.preserved = true;
                          r.prover_calls = 1;
                          return r;
                        }).preserved;
    });
  }
  for (auto& t : threads) t.join();
  CHECK(computed == 1);
  CHECK(cache.prover_calls() == 1);
  CHECK(cache.hits() == 15);
  CHECK(std::all_of(results.begin(), results.end(), [](bool b) { return b; }));
}

TEST_CASE("worker threads give the same results as one") {
  testing::SyntheticDatasets gen(71);
  for (int i = 0; i < 10; ++i) {
    const Dataset d = gen.next();
    Run serial, parallel;
    std::vector<Top1Outcome> o1, o4;
    CHECK(epr(d, serial.checker, 1, &o1) == epr(d, parallel.checker, 4, &o4));
    for (std::size_t b = 0; b < o1.size(); ++b) {
      CHECK(o1[b].reason == o4[b].reason);
      CHECK(o1[b].combination == o4[b].combination);
    }
    const auto a = epr_at_k(d, 3, serial.checker, true, 1);
    const auto b = epr_at_k(d, 3, parallel.checker, true, 4);
    CHECK(a.ratio == b.ratio);
    for (std::size_t p = 0; p < a.pairs.size(); ++p) CHECK(a.pairs[p].preserving == b.pairs[p].preserving);
    CHECK(serial.cache.prover_calls() == parallel.cache.prover_calls());
  }
}
