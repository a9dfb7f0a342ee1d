#include "epf/harness/verdict_store.hpp"

#include <json.hpp>

#include <cstdio>

namespace epf::harness {

std::string VerdictStore::hash(const std::string& key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::size_t VerdictStore::load_into(metrics::VerdictCache& cache) {
  std::ifstream in(path_);
  if (!in) return 0;
  std::size_t loaded = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const std::string key = j.at("key").get<std::string>();
      if (j.at("hash").get<std::string>() != hash(key)) throw Error("hash mismatch");
      const auto& r = j.at("result");
      entailment::CheckResult result;
      result.preserved = r.at("preserved").get<bool>();
      result.reason = entailment::parse_reason(r.at("reason").get<std::string>());
      result.used_premises = r.at("used_premises").get<std::set<std::string>>();
      result.prover_calls = r.at("prover_calls").get<std::size_t>();
      cache.preload(key, std::move(result));
      ++loaded;
    } catch (const std::exception&) {
      ++skipped_;
    }
  }
  return loaded;
}

void VerdictStore::attach(metrics::VerdictCache& cache) {
  cache.set_listener([this](const std::string& key, const entailment::CheckResult& r) { append(key, r); });
}

void VerdictStore::append(const std::string& key, const entailment::CheckResult& result) {
  nlohmann::ordered_json r;
  r["preserved"] = result.preserved;
  r["reason"] = entailment::to_string(result.reason);
  r["used_premises"] = result.used_premises;
  r["prover_calls"] = result.prover_calls;
  nlohmann::ordered_json record;
  record["hash"] = hash(key);
  record["key"] = key;
  record["result"] = std::move(r);

  std::lock_guard lock(mu_);
  if (!out_.is_open()) {
    out_.open(path_, std::ios::app);
    if (!out_) throw Error("cannot open verdict store " + path_);
  }
  out_ << record.dump() << '\n';
  out_.flush();
  if (!out_) throw Error("cannot write verdict store " + path_);
}

}  // namespace epf::harness
