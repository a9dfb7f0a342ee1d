#pragma once

#include <cstdint>
#include <fstream>
#include <mutex>
#include <string>

#include "epf/metrics/verdict_cache.hpp"

namespace epf::harness {

// Append-only JSONL file of {"hash", "key", "result"} records, flushed one
// record at a time so an interrupted run keeps every finished verdict.
class VerdictStore {
 public:
  explicit VerdictStore(std::string path) : path_(std::move(path)) {}

  // Seeds the cache with every stored record and returns how many were read.
  // Unreadable lines (such as a record cut short by a crash) are skipped.
  std::size_t load_into(metrics::VerdictCache& cache);

  // Appends every newly computed verdict of the cache to the file.
  void attach(metrics::VerdictCache& cache);

  void append(const std::string& key, const entailment::CheckResult& result);

  std::size_t skipped() const { return skipped_; }
  const std::string& path() const { return path_; }

  static std::string hash(const std::string& key);  // FNV-1a 64, hex

 private:
  std::string path_;
  std::ofstream out_;
  std::mutex mu_;
  std::size_t skipped_ = 0;
};

}  // namespace epf::harness
