#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "epf/error.hpp"
#include "epf/metrics/dataset.hpp"

namespace epf::harness {

class SchemaError : public Error {
 public:
  SchemaError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DanglingReference : public Error {
 public:
  explicit DanglingReference(std::vector<std::string> ids);
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

// JSONL dataset, one object per line discriminated by "kind":
//   {"kind": "sentence", "sentence_id": s, "text": t}
//   {"kind": "candidate", "sentence_id": s, "index": j, "fol": string|null,
//    "logprob": number|null, "syntax_error": bool}
//   {"kind": "pair", "pair_id": b, "premises": [s...], "hypothesis": s,
//    "label": "entailment"|"contradiction"}
// Records may come in any order; blank lines are skipped. Candidate indices
// must be dense from 1 per sentence. A candidate whose fol is null, fails to
// parse, or has free variables is kept as a syntax error; "logprob",
// "syntax_error" and "label" are optional (label defaults to entailment).
metrics::Dataset ingest(const std::string& path);
metrics::Dataset ingest_text(std::string_view text, const std::string& source = "<input>");

}  // namespace epf::harness
