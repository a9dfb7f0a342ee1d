#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epf/entailment/check.hpp"
#include "epf/error.hpp"
#include "epf/fol/formula.hpp"

namespace epf::metrics {

class MissingCandidate : public Error {
 public:
  using Error::Error;
};

struct Candidate {
  std::size_t index = 1;  // 1-based, unique within its sentence
  std::string text;       // source FOL string
  std::optional<fol::Formula> formula;  // empty for syntax errors
  std::optional<double> logprob;        // length-normalized

  bool syntax_error() const { return !formula.has_value(); }
};

struct Sentence {
  std::string id;
  std::string text;
  std::vector<Candidate> candidates;  // ascending index
};

struct Pair {
  std::string id;
  std::vector<std::string> premises;
  std::string hypothesis;
  entailment::Label label = entailment::Label::kEntailment;

  // premises..., hypothesis
  std::vector<std::string> sentence_ids() const;
};

class Dataset {
 public:
  void add_sentence(Sentence s);
  void add_pair(Pair p);

  const std::vector<Sentence>& sentences() const { return sentences_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  const Sentence* find(const std::string& id) const;
  const Sentence& sentence(const std::string& id) const;  // throws MissingCandidate

 private:
  std::vector<Sentence> sentences_;
  std::vector<Pair> pairs_;
  std::map<std::string, std::size_t> by_id_;
};

// Candidates ranked by logprob (highest first, missing logprobs last), ties
// by lower index; the first k of them, returned in ascending index order.
std::vector<const Candidate*> top_k(const Sentence& s, std::size_t k);
const Candidate& top1(const Sentence& s);  // throws MissingCandidate

}  // namespace epf::metrics
