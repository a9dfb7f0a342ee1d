#include "epf/arbitrariness/arity.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace epf::arbitrariness {

namespace {

void count_atoms(const fol::Formula& f, std::map<std::string, ArityHistogram>& out) {
  switch (f.kind()) {
    case fol::Connective::kAtom: {
      auto& h = out[f.predicate()];
      h.predicate = f.predicate();
      ++h.counts[f.args().size()];
      return;
    }
    case fol::Connective::kNot:
      count_atoms(f.operand(), out);
      return;
    case fol::Connective::kForAll:
    case fol::Connective::kExists:
      count_atoms(f.body(), out);
      return;
    default:
      count_atoms(f.lhs(), out);
      count_atoms(f.rhs(), out);
  }
}

}  // namespace

double unique_predicates_per_sentence(const std::vector<fol::Formula>& formulas_by_sentence) {
  if (formulas_by_sentence.empty()) throw EmptyCorpus("no sentences");
  std::set<std::string> names;
  for (const auto& f : formulas_by_sentence) {
    for (const auto& sig : fol::signatures(f).predicates) names.insert(sig.name);
  }
  return static_cast<double>(names.size()) / static_cast<double>(formulas_by_sentence.size());
}

double arity_entropy(const ArityHistogram& hist) {
  std::size_t total = 0;
  for (const auto& [arity, n] : hist.counts) total += n;
  double h = 0;
  for (const auto& [arity, n] : hist.counts) {
    if (n == 0) continue;
    const double p = static_cast<double>(n) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h == 0 ? 0.0 : h;  // no negative zero
}

std::vector<ArityHistogram> arity_histograms(const std::vector<fol::Formula>& formulas) {
  std::map<std::string, ArityHistogram> by_name;
  for (const auto& f : formulas) count_atoms(f, by_name);
  std::vector<ArityHistogram> out;
  for (auto& [name, h] : by_name) out.push_back(std::move(h));
  return out;
}

ArityReport corpus_arity_report(const std::vector<fol::Formula>& formulas) {
  ArityReport report;
  std::size_t total = 0;
  for (auto& h : arity_histograms(formulas)) {
    ArityRow row{std::move(h), 0, 0};
    for (const auto& [arity, n] : row.histogram.counts) row.occurrences += n;
    row.entropy = arity_entropy(row.histogram);
    report.mean_entropy += row.entropy;
    report.weighted_mean_entropy += row.entropy * static_cast<double>(row.occurrences);
    total += row.occurrences;
    report.table.push_back(std::move(row));
  }
  if (report.table.empty()) throw EmptyCorpus("no predicate occurrences");
  report.mean_entropy /= static_cast<double>(report.table.size());
  report.weighted_mean_entropy /= static_cast<double>(total);
  std::stable_sort(report.table.begin(), report.table.end(),
                   [](const ArityRow& a, const ArityRow& b) { return a.entropy > b.entropy; });
  return report;
}

}  // namespace epf::arbitrariness
