#include "epf/harness/ingest.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "epf/fol/syntax.hpp"

namespace epf::harness {

SchemaError::SchemaError(const std::string& source, std::size_t line, const std::string& message)
    : Error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string join(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
  return out;
}

}  // namespace

DanglingReference::DanglingReference(std::vector<std::string> ids)
    : Error("dangling references to undeclared sentences: " + join(ids)), ids_(std::move(ids)) {}

namespace {

using nlohmann::json;

class RecordReader {
 public:
  RecordReader(const json& j, const std::string& source, std::size_t line)
      : j_(j), source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& message) const { throw SchemaError(source_, line_, message); }

  std::string string(const char* field) const {
    auto it = j_.find(field);
    if (it == j_.end() || !it->is_string()) fail(std::string("field \"") + field + "\" must be a string");
    return it->get<std::string>();
  }

  bool has(const char* field) const {
    auto it = j_.find(field);
    return it != j_.end() && !it->is_null();
  }

  const json& at(const char* field) const { return j_.at(field); }

 private:
  const json& j_;
  const std::string& source_;
  std::size_t line_;
};

struct PendingCandidate {
  std::size_t line;
  metrics::Candidate candidate;
};

}  // namespace

metrics::Dataset ingest_text(std::string_view text, const std::string& source) {
  std::vector<std::pair<std::size_t, metrics::Sentence>> sentences;
  std::map<std::string, std::vector<PendingCandidate>> candidates;
  std::vector<std::pair<std::size_t, metrics::Pair>> pairs;

  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError(source, line_no, "record must be a JSON object");
    RecordReader r(j, source, line_no);
    const std::string kind = r.string("kind");
    if (kind == "sentence") {
      sentences.push_back({line_no, {r.string("sentence_id"), r.has("text") ? r.string("text") : "", {}}});
    } else if (kind == "candidate") {
      PendingCandidate pc{line_no, {}};
      const auto& index = j.find("index");
      if (index == j.end() || !index->is_number_integer() || index->get<long long>() < 1) {
        r.fail("field \"index\" must be an integer >= 1");
      }
      pc.candidate.index = index->get<std::size_t>();
      if (r.has("logprob")) {
        if (!r.at("logprob").is_number()) r.fail("field \"logprob\" must be a number or null");
        pc.candidate.logprob = r.at("logprob").get<double>();
      }
      bool marked = false;
      if (r.has("syntax_error")) {
        if (!r.at("syntax_error").is_boolean()) r.fail("field \"syntax_error\" must be a boolean");
        marked = r.at("syntax_error").get<bool>();
      }
      if (r.has("fol")) {
        pc.candidate.text = r.string("fol");
        if (!marked) {
          try {
            pc.candidate.formula = fol::parse_formula(pc.candidate.text);
          } catch (const fol::SyntaxError&) {
          } catch (const fol::FreeVariableError&) {
          }
        }
      }
      candidates[r.string("sentence_id")].push_back(std::move(pc));
    } else if (kind == "pair") {
      metrics::Pair p;
      p.id = r.string("pair_id");
      if (!j.contains("premises") || !j["premises"].is_array() || j["premises"].empty()) {
        r.fail("field \"premises\" must be a non-empty array of sentence ids");
      }
      for (const auto& id : j["premises"]) {
        if (!id.is_string()) r.fail("premise ids must be strings");
        p.premises.push_back(id.get<std::string>());
      }
      p.hypothesis = r.string("hypothesis");
      if (r.has("label")) {
        const std::string label = r.string("label");
        if (label != "entailment" && label != "contradiction") r.fail("unknown label \"" + label + "\"");
        p.label = entailment::parse_label(label);
      }
      pairs.push_back({line_no, std::move(p)});
    } else {
      r.fail("unknown record kind \"" + kind + "\"");
    }
  }

  metrics::Dataset d;
  std::set<std::string> declared;
  for (auto& [line, s] : sentences) {
    if (!declared.insert(s.id).second) throw SchemaError(source, line, "duplicate sentence_id " + s.id);
    auto it = candidates.find(s.id);
    if (it != candidates.end()) {
      std::set<std::size_t> seen;
      for (auto& pc : it->second) {
        if (!seen.insert(pc.candidate.index).second) {
          throw SchemaError(source, pc.line, "duplicate candidate index " + std::to_string(pc.candidate.index) +
                                                 " for sentence " + s.id);
        }
      }
      for (auto& pc : it->second) {
        if (pc.candidate.index > it->second.size()) {
          throw SchemaError(source, pc.line, "candidate indices of sentence " + s.id + " are not dense from 1");
        }
        s.candidates.push_back(std::move(pc.candidate));
      }
    }
  }

  std::set<std::string> dangling;
  for (const auto& [id, list] : candidates) {
    if (!declared.contains(id)) dangling.insert(id);
  }
  std::set<std::string> pair_ids;
  for (const auto& [line, p] : pairs) {
    if (!pair_ids.insert(p.id).second) throw SchemaError(source, line, "duplicate pair_id " + p.id);
    for (const auto& id : p.sentence_ids()) {
      if (!declared.contains(id)) dangling.insert(id);
    }
  }
  if (!dangling.empty()) throw DanglingReference({dangling.begin(), dangling.end()});

  for (auto& [line, s] : sentences) d.add_sentence(std::move(s));
  for (auto& [line, p] : pairs) d.add_pair(std::move(p));
  return d;
}

metrics::Dataset ingest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read dataset " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return ingest_text(s.str(), path);
}

}  // namespace epf::harness
