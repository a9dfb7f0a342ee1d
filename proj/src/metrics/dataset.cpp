#include "epf/metrics/dataset.hpp"

#include <algorithm>

namespace epf::metrics {

std::vector<std::string> Pair::sentence_ids() const {
  std::vector<std::string> ids = premises;
  ids.push_back(hypothesis);
  return ids;
}

void Dataset::add_sentence(Sentence s) {
  std::sort(s.candidates.begin(), s.candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.index < b.index; });
  auto [it, inserted] = by_id_.try_emplace(s.id, sentences_.size());
  if (!inserted) throw Error("duplicate sentence id " + s.id);
  sentences_.push_back(std::move(s));
}

void Dataset::add_pair(Pair p) { pairs_.push_back(std::move(p)); }

const Sentence* Dataset::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &sentences_[it->second];
}

const Sentence& Dataset::sentence(const std::string& id) const {
  const Sentence* s = find(id);
  if (!s) throw MissingCandidate("unknown sentence " + id);
  return *s;
}

std::vector<const Candidate*> top_k(const Sentence& s, std::size_t k) {
  std::vector<const Candidate*> ranked;
  for (const auto& c : s.candidates) ranked.push_back(&c);
  std::stable_sort(ranked.begin(), ranked.end(), [](const Candidate* a, const Candidate* b) {
    if (a->logprob.has_value() != b->logprob.has_value()) return a->logprob.has_value();
    if (a->logprob && *a->logprob != *b->logprob) return *a->logprob > *b->logprob;
    return a->index < b->index;
  });
  if (ranked.size() > k) ranked.resize(k);
  std::sort(ranked.begin(), ranked.end(),
            [](const Candidate* a, const Candidate* b) { return a->index < b->index; });
  return ranked;
}

const Candidate& top1(const Sentence& s) {
  auto best = top_k(s, 1);
  if (best.empty()) throw MissingCandidate("sentence " + s.id + " has no candidates");
  return *best.front();
}

}  // namespace epf::metrics
