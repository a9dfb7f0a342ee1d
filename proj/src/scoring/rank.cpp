#include "epf/scoring/rank.hpp"

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

namespace epf::scoring {

std::vector<CandidateScore> score_candidates(const metrics::Dataset& d, const metrics::EprAtKResult& detail) {
  if (!detail.exhaustive) throw MissingDetail("scores need exhaustive (non early-exit) detail");
  std::map<std::pair<std::string, std::size_t>, long> counts;
  for (std::size_t b = 0; b < d.pairs().size(); ++b) {
    const auto& pair = d.pairs()[b];
    if (b >= detail.pairs.size() || detail.pairs[b].pair_id != pair.id) {
      throw MissingDetail("no detail for pair " + pair.id);
    }
    const auto ids = pair.sentence_ids();
    for (const auto& combo : detail.pairs[b].preserving) {
      for (std::size_t pos = 0; pos < ids.size(); ++pos) ++counts[{ids[pos], combo[pos]}];
    }
  }
  std::vector<CandidateScore> out;
  for (const auto& s : d.sentences()) {
    for (const auto& c : s.candidates) {
      long score = -1;
      if (!c.syntax_error()) {
        auto it = counts.find({s.id, c.index});
        score = it == counts.end() ? 0 : it->second;
      }
      out.push_back({s.id, c.index, score});
    }
  }
  return out;
}

namespace {

bool ranks_before(const RankedCandidate& a, const RankedCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  const double pa = a.logprob.value_or(-HUGE_VAL), pb = b.logprob.value_or(-HUGE_VAL);
  if (pa != pb) return pa > pb;
  return a.index < b.index;
}

}  // namespace

double brio_loss(const std::vector<RankedCandidate>& candidates, const LossConfig& config) {
  std::vector<RankedCandidate> sorted = candidates;
  for (const auto& c : sorted) {
    if (!c.logprob) throw MissingLogprob("candidate " + std::to_string(c.index) + " has no logprob");
  }
  std::stable_sort(sorted.begin(), sorted.end(), ranks_before);
  double loss = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      loss += std::max(*sorted[j].logprob - *sorted[i].logprob + config.margin * static_cast<double>(j - i), 0.0);
    }
  }
  return loss;
}

std::string ranked_training_jsonl(const metrics::Dataset& d, const std::vector<CandidateScore>& scores) {
  std::map<std::pair<std::string, std::size_t>, long> by_key;
  for (const auto& s : scores) by_key[{s.sentence_id, s.index}] = s.score;
  std::string out;
  for (const auto& s : d.sentences()) {
    std::vector<std::pair<RankedCandidate, const metrics::Candidate*>> ranked;
    for (const auto& c : s.candidates) {
      auto it = by_key.find({s.id, c.index});
      if (it == by_key.end()) throw MissingDetail("no score for " + s.id + " candidate " + std::to_string(c.index));
      ranked.push_back({{c.logprob, it->second, c.index}, &c});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return ranks_before(a.first, b.first); });
    nlohmann::ordered_json cands = nlohmann::ordered_json::array();
    for (const auto& [r, c] : ranked) {
      nlohmann::ordered_json entry;
      entry["index"] = c->index;
      entry["fol"] = c->text;
      entry["score"] = r.score;
      entry["logprob"] = c->logprob ? nlohmann::ordered_json(*c->logprob) : nlohmann::ordered_json(nullptr);
      cands.push_back(std::move(entry));
    }
    nlohmann::ordered_json record;
    record["sentence_id"] = s.id;
    record["text"] = s.text;
    record["candidates"] = std::move(cands);
    out += record.dump() + "\n";
  }
  return out;
}

void export_ranked_training_file(const metrics::Dataset& d, const std::vector<CandidateScore>& scores,
                                 const std::string& path) {
  const std::string text = ranked_training_jsonl(d, scores);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path + ": " + std::strerror(errno));
  f << text;
  f.flush();
  if (!f) throw Error("cannot write " + path + ": " + std::strerror(errno));
}

}  // namespace epf::scoring
