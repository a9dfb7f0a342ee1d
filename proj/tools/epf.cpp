#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "epf/entailment/check.hpp"
#include "epf/entailment/tptp_prover.hpp"
#include "epf/fol/syntax.hpp"
#include "epf/fol/tptp.hpp"
#include "epf/harness/eval.hpp"
#include "epf/harness/ingest.hpp"

namespace {

using nlohmann::json;
using namespace epf;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json vocabulary_json(const fol::Vocabulary& v) {
  json preds = json::array(), funcs = json::array();
  for (const auto& p : v.predicates) preds.push_back(p.name + "/" + std::to_string(p.arity));
  for (const auto& f : v.functions) funcs.push_back(f.name + "/" + std::to_string(f.arity));
  return {{"predicates", preds}, {"constants", v.constants}, {"functions", funcs}};
}

struct ProverFlags {
  std::string backend = "internal";
  std::string prover_cmd;
  long timeout_ms = 1000;

  void add(CLI::App* app) {
    app->add_option("--backend", backend, "internal or external")->check(CLI::IsMember({"internal", "external"}));
    app->add_option("--prover-cmd", prover_cmd, "external prover command; the problem file is appended");
    app->add_option("--prover-timeout-ms", timeout_ms, "per-query prover budget")->check(CLI::NonNegativeNumber);
  }

  entailment::Backend backend_config() const {
    if (backend == "internal") return entailment::Backend::internal();
    if (prover_cmd.empty()) throw CLI::ValidationError("--prover-cmd", "required with --backend external");
    return entailment::Backend::external(prover_cmd);
  }

  prover::ResourceBudget budget() const {
    prover::ResourceBudget b;
    b.timeout = std::chrono::milliseconds(timeout_ms);
    return b;
  }
};

struct EvalFlags {
  std::string dataset;
  std::string out_dir = "epf-out";
  std::string name;
  std::size_t k = 16;
  double oracle_time_limit_s = 600;
  bool no_oracle = false;
  bool exhaustive = false;
  bool emit_scores = false;
  std::string emit_tptp_dir;
  std::size_t workers = 1;
  std::string verdict_store;
  ProverFlags prover;

  void add(CLI::App* app, bool full) {
    app->add_option("dataset", dataset, "JSONL dataset")->required()->check(CLI::ExistingFile);
    app->add_option("--k", k, "candidates per sentence")->check(CLI::PositiveNumber);
    app->add_option("--workers", workers, "concurrent pair evaluations")->check(CLI::PositiveNumber);
    app->add_option("--verdict-store", verdict_store, "append-only verdict file reused across runs");
    prover.add(app);
    if (!full) return;
    app->add_option("-o,--out", out_dir, "output directory");
    app->add_option("--name", name, "dataset name for summary.csv (default: file stem)");
    app->add_option("--oracle-time-limit", oracle_time_limit_s, "oracle budget in seconds")
        ->check(CLI::NonNegativeNumber);
    app->add_flag("--no-oracle", no_oracle, "skip the oracle (allows early exit in EPR@K)");
    app->add_flag("--exhaustive", exhaustive, "enumerate every combination");
    app->add_flag("--emit-scores", emit_scores, "score candidates and write ranked.jsonl");
    app->add_option("--emit-tptp-dir", emit_tptp_dir, "write each distinct query as a .p file");
  }

  harness::EvalConfig config() const {
    harness::EvalConfig c;
    c.k = k;
    c.backend = prover.backend_config();
    c.budget = prover.budget();
    c.oracle_time_limit = std::chrono::milliseconds(static_cast<long long>(oracle_time_limit_s * 1000));
    c.oracle = !no_oracle;
    c.exhaustive = exhaustive;
    c.emit_scores = emit_scores;
    c.emit_tptp_dir = emit_tptp_dir;
    c.workers = workers;
    c.verdict_store = verdict_store;
    return c;
  }
};

int cmd_eval(const EvalFlags& flags) {
  const auto dataset = harness::ingest(flags.dataset);
  const auto report = harness::run_eval(dataset, flags.config());
  const std::string name =
      flags.name.empty() ? std::filesystem::path(flags.dataset).stem().string() : flags.name;
  harness::write_outputs(report, dataset, name, flags.out_dir);
  std::cout << harness::summary_csv(report, name);
  std::cerr << "epf: " << harness::stats_json(report.stats).dump() << "\n";
  if (!report.ordering_holds()) {
    std::cerr << "epf: metric ordering epr <= oracle <= epr@k violated\n";
    return 3;
  }
  return 0;
}

int cmd_export_ranked(const EvalFlags& flags, const std::string& out) {
  const auto dataset = harness::ingest(flags.dataset);
  auto config = flags.config();
  config.oracle = false;
  config.emit_scores = true;
  const auto report = harness::run_eval(dataset, config);
  scoring::export_ranked_training_file(dataset, *report.scores, out);
  std::cerr << "epf: " << harness::stats_json(report.stats).dump() << "\n";
  return 0;
}

int cmd_arbitrariness(const std::string& dataset_path, const std::string& formulas_path, bool csv) {
  std::vector<fol::Formula> formulas;
  if (!formulas_path.empty()) {
    std::istringstream lines(read_file(formulas_path));
    for (std::string line; std::getline(lines, line);) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) formulas.push_back(fol::parse_formula(line));
    }
  } else {
    const auto dataset = harness::ingest(dataset_path);
    for (const auto& s : dataset.sentences()) {
      if (s.candidates.empty()) continue;
      const auto& c = metrics::top1(s);
      if (c.formula) formulas.push_back(*c.formula);
    }
  }
  const double unique = arbitrariness::unique_predicates_per_sentence(formulas);
  const auto report = arbitrariness::corpus_arity_report(formulas);
  if (csv) {
    std::cout << "predicate,occurrences,arities,entropy\n";
    for (const auto& row : report.table) {
      std::string arities;
      for (const auto& [a, n] : row.histogram.counts) {
        arities += (arities.empty() ? "" : ";") + std::to_string(a) + ":" + std::to_string(n);
      }
      std::cout << row.histogram.predicate << "," << row.occurrences << "," << arities << "," << row.entropy << "\n";
    }
    return 0;
  }
  nlohmann::ordered_json out;
  out["sentences"] = formulas.size();
  out["unique_predicates_per_sentence"] = unique;
  out["mean_arity_entropy"] = report.mean_entropy;
  out["weighted_mean_arity_entropy"] = report.weighted_mean_entropy;
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (const auto& row : report.table) {
    nlohmann::ordered_json e;
    e["predicate"] = row.histogram.predicate;
    e["occurrences"] = row.occurrences;
    nlohmann::ordered_json counts;
    for (const auto& [a, n] : row.histogram.counts) counts[std::to_string(a)] = n;
    e["arities"] = counts;
    e["entropy"] = row.entropy;
    table.push_back(e);
  }
  out["predicates"] = table;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_parse(const std::vector<std::string>& formulas, bool tptp) {
  int status = 0;
  std::vector<std::string> inputs = formulas;
  if (inputs.empty()) {
    for (std::string line; std::getline(std::cin, line);) {
      if (!line.empty()) inputs.push_back(line);
    }
  }
  for (const auto& text : inputs) {
    json out = {{"input", text}};
    try {
      const auto f = fol::parse_formula(text);
      out["formula"] = fol::print_formula(f);
      out["signatures"] = vocabulary_json(fol::signatures(f));
      if (tptp) out["tptp"] = fol::to_tptp(f, fol::TptpRole::kAxiom, "s");
    } catch (const fol::SyntaxError& e) {
      out["error"] = e.what();
      out["position"] = e.position();
      status = 1;
    } catch (const fol::FreeVariableError& e) {
      out["error"] = e.what();
      status = 1;
    }
    std::cout << out.dump() << "\n";
  }
  return status;
}

int cmd_prove(const std::vector<std::string>& premises, const std::string& hypothesis,
              const std::string& label, const ProverFlags& flags, bool tptp) {
  entailment::EntailmentQuery q{{}, fol::parse_formula(hypothesis), entailment::parse_label(label)};
  for (std::size_t i = 0; i < premises.size(); ++i) {
    q.premises.push_back({"p" + std::to_string(i + 1), fol::parse_formula(premises[i])});
  }
  if (tptp) {
    std::cout << entailment::tptp_problem(entailment::canonical_query(q));
    return 0;
  }
  const auto r = entailment::check_entailment(q, flags.backend_config(), flags.budget());
  json out = {{"preserved", r.preserved},
              {"reason", entailment::to_string(r.reason)},
              {"used_premises", r.used_premises}};
  if (r.verdict) {
    out["status"] = prover::to_string(r.verdict->status);
    json steps = json::array();
    for (const auto& s : r.verdict->derivation) steps.push_back(prover::print_clause(s.clause));
    out["derivation"] = steps;
  }
  std::cout << out.dump(2) << "\n";
  return r.preserved ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entailment-preserving FOL toolkit"};
  app.require_subcommand(1);

  auto* parse = app.add_subcommand("parse", "parse formulas (arguments or stdin lines) and print canonical forms");
  std::vector<std::string> parse_inputs;
  bool parse_tptp = false;
  parse->add_option("formula", parse_inputs);
  parse->add_flag("--tptp", parse_tptp, "also print the TPTP FOF statement");

  auto* prove = app.add_subcommand("prove", "run the gated entailment check on one query");
  std::vector<std::string> premises;
  std::string hypothesis, label = "entailment";
  bool prove_tptp = false;
  ProverFlags prove_flags;
  prove->add_option("-p,--premise", premises, "premise formula (repeatable)")->required();
  prove->add_option("-y,--hypothesis", hypothesis, "hypothesis formula")->required();
  prove->add_option("--label", label)->check(CLI::IsMember({"entailment", "contradiction"}));
  prove->add_flag("--tptp", prove_tptp, "print the TPTP problem instead of proving");
  prove_flags.add(prove);

  auto* tptp = app.add_subcommand("tptp-prove", "SZS-speaking prover over a TPTP FOF file");
  std::string tptp_file;
  long tptp_timeout_ms = 1000;
  tptp->add_option("file", tptp_file)->required();
  tptp->add_option("--timeout-ms", tptp_timeout_ms)->check(CLI::NonNegativeNumber);

  auto* eval = app.add_subcommand("eval", "EPR, EPR@K and EPR@K-Oracle over a dataset");
  EvalFlags eval_flags;
  eval_flags.add(eval, true);

  auto* metrics_cmd = app.add_subcommand("metrics", "corpus diagnostics");
  metrics_cmd->require_subcommand(1);
  auto* arb = metrics_cmd->add_subcommand("arbitrariness", "unique predicate names per sentence and arity entropy");
  std::string arb_dataset, arb_formulas;
  bool arb_csv = false;
  auto* arb_ds = arb->add_option("dataset", arb_dataset, "JSONL dataset (top-1 candidates are measured)")
                     ->check(CLI::ExistingFile);
  arb->add_option("--formulas", arb_formulas, "plain file, one formula per sentence per line")
      ->check(CLI::ExistingFile)
      ->excludes(arb_ds);
  arb->add_flag("--csv", arb_csv, "print the per-predicate table as CSV");

  auto* ranked = app.add_subcommand("export-ranked", "score every candidate and write the ranked training file");
  EvalFlags ranked_flags;
  std::string ranked_out = "ranked.jsonl";
  ranked_flags.add(ranked, false);
  ranked->add_option("-o,--out", ranked_out, "output JSONL path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse) return cmd_parse(parse_inputs, parse_tptp);
    if (*prove) return cmd_prove(premises, hypothesis, label, prove_flags, prove_tptp);
    if (*eval) return cmd_eval(eval_flags);
    if (*ranked) return cmd_export_ranked(ranked_flags, ranked_out);
    if (*arb) {
      if (arb_dataset.empty() && arb_formulas.empty()) throw Error("give a dataset or --formulas");
      return cmd_arbitrariness(arb_dataset, arb_formulas, arb_csv);
    }
    if (*tptp) {
      prover::ResourceBudget budget;
      budget.timeout = std::chrono::milliseconds(tptp_timeout_ms);
      return entailment::tptp_prove(read_file(tptp_file), tptp_file, budget, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "epf: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
