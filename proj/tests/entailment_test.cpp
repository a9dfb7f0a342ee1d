#include <doctest.h>

#include <chrono>

#include "epf/entailment/check.hpp"
#include "epf/fol/syntax.hpp"
#include "support/bundles.hpp"
#include "support/random_instances.hpp"
#include "support/tptp_check.hpp"

using namespace epf;
using namespace epf::entailment;

namespace {

fol::Formula f(const std::string& text) { return fol::parse_formula(text); }

EntailmentQuery query(const std::vector<std::string>& premises, const std::string& hypothesis,
                      Label label = Label::kEntailment) {
  EntailmentQuery q{{}, f(hypothesis), label};
  for (std::size_t i = 0; i < premises.size(); ++i) q.premises.push_back({"p" + std::to_string(i + 1), f(premises[i])});
  return q;
}

EntailmentQuery query(const testing::Bundle& b) { return query(b.premises, b.hypothesis); }

const std::string kFakes = std::string(EPF_SOURCE_DIR) + "/tests/fakes/";
const std::string kSzsProver = std::string(EPF_BINARY) + " tptp-prove";

prover::ResourceBudget with_timeout(long ms) {
  prover::ResourceBudget b;
  b.timeout = std::chrono::milliseconds(ms);
  return b;
}

}  // namespace

TEST_CASE("spurious entailment is filtered by the used-premise gate") {
  auto q = query({"P(c)", "all x. (-Q(x) -> (R(x) & -R(x)))"}, "Q(c)");

  // The raw prover succeeds.
  prover::ClausifyContext ctx;
  std::vector<prover::Clause> ps;
  for (const auto& p : q.premises) {
    auto cs = prover::clausify(p.formula, p.id, ctx);
    ps.insert(ps.end(), cs.begin(), cs.end());
  }
  auto raw = prover::refute(ps, prover::clausify(fol::Formula::negation(q.hypothesis), "goal", ctx));
  REQUIRE(raw.status == prover::ProofStatus::kProved);

  auto r = check_entailment(q);
  CHECK_FALSE(r.preserved);
  CHECK(r.reason == Reason::kPremisesUnused);
  CHECK(r.used_premises == std::set<std::string>{"p2"});
  CHECK(r.prover_calls == 1);
}

TEST_CASE("vocabulary gate runs before any prover call") {
  for (const auto& h : {"Q(a)", "P(b)", "P(a, a)", "P(f(a))", "exists x. Q(x)"}) {
    CAPTURE(h);
    auto r = check_entailment(query({"P(a)"}, h));
    CHECK(r.reason == Reason::kVocabularyViolation);
    CHECK_FALSE(r.preserved);
    CHECK(r.prover_calls == 0);
    CHECK_FALSE(r.verdict.has_value());
    // A prover that would fail loudly is never launched.
    auto ext = check_entailment(query({"P(a)"}, h), Backend::external("sh " + kFakes + "exit_without_status.sh"));
    CHECK(ext.reason == Reason::kVocabularyViolation);
  }
  // Skolem witnesses are not vocabulary: the gate only reads source formulas.
  CHECK(check_entailment(query({"exists x. P(x)"}, "exists y. P(y)")).reason == Reason::kOk);
  // The gate applies to the negated goal of a contradiction pair as well.
  CHECK(check_entailment(query({"P(a)"}, "Q(a)", Label::kContradiction)).reason ==
        Reason::kVocabularyViolation);
}

TEST_CASE("worked translation bundles") {
  for (const auto& b : testing::iter5_bundles()) {
    CAPTURE(b.name);
    auto r = check_entailment(query(b));
    CHECK(r.preserved);
    CHECK(r.reason == Reason::kOk);
    CHECK(r.used_premises == std::set<std::string>{"p1", "p2"});
    CHECK(testing::TptpSyntaxChecker::check(tptp_problem(query(b))) == std::nullopt);
  }
  auto r = check_entailment(query(testing::bundle(testing::iter0_bundles(), "eQASC_536")));
  CHECK_FALSE(r.preserved);
  CHECK(r.reason == Reason::kVocabularyViolation);
}

TEST_CASE("verdict reasons") {
  auto saturated = check_entailment(query({"P(a)", "Q(b)"}, "P(b)"));
  CHECK(saturated.reason == Reason::kNotProved);
  CHECK(saturated.prover_calls == 1);

  // Strict rule: a tautological premise is never used, so the pair fails.
  auto taut = check_entailment(query({"P(a)", "all x. (P(x) -> Q(x))", "R(a) | -R(a)"}, "Q(a)"));
  CHECK(taut.reason == Reason::kPremisesUnused);

  prover::ResourceBudget tiny;
  tiny.max_generated = 3;
  auto limited = check_entailment(
      query({"P(zero)", "all x. (P(x) -> P(s(x)))", "all x. (P(x) -> Q(x))"}, "Q(s(s(s(zero))))"),
      Backend::internal(), tiny);
  CHECK(limited.reason == Reason::kProverTimeout);
}

TEST_CASE("contradiction label proves the negated hypothesis") {
  auto q = query({"all x. (Cat(x) -> -Dog(x))", "Cat(tom)"}, "Dog(tom)", Label::kContradiction);
  auto r = check_entailment(q);
  CHECK(r.preserved);
  CHECK(goal_of(q) == fol::Formula::negation(q.hypothesis));
  CHECK_FALSE(check_entailment(query({"all x. (Cat(x) -> -Dog(x))", "Cat(tom)"}, "Dog(tom)")).preserved);

  testing::InstanceGenerator gen(7);
  for (int i = 0; i < 150; ++i) {
    const auto inst = gen.next();
    EntailmentQuery contra{{}, inst.hypothesis, Label::kContradiction};
    for (std::size_t k = 0; k < inst.premises.size(); ++k) {
      contra.premises.push_back({"p" + std::to_string(k + 1), inst.premises[k]});
    }
    EntailmentQuery flipped = contra;
    flipped.label = Label::kEntailment;
    flipped.hypothesis = fol::Formula::negation(inst.hypothesis);
    const auto a = check_entailment(contra);
    const auto b = check_entailment(flipped);
    CHECK(a.preserved == b.preserved);
    CHECK(a.reason == b.reason);
    CHECK(a.used_premises == b.used_premises);
  }
}

TEST_CASE("identical premises merge under the first id") {
  auto q = query({"P(a)", "all x. (P(x) -> Q(x))", "P(a)"}, "Q(a)");
  CHECK(canonical_query(q).premises.size() == 2);
  auto r = check_entailment(q);
  CHECK(r.preserved);
  CHECK(r.used_premises == std::set<std::string>{"p1", "p2"});
}

TEST_CASE("malformed queries") {
  EntailmentQuery empty{{}, f("P(a)"), Label::kEntailment};
  CHECK_THROWS_AS(check_entailment(empty), InvalidQuery);
  CHECK_THROWS_AS(check_external(empty, "sh " + kFakes + "exit_without_status.sh"), InvalidQuery);
  auto dup = query({"P(a)", "Q(a)"}, "P(a)");
  dup.premises[1].id = "p1";
  CHECK_THROWS_AS(check_entailment(dup), InvalidQuery);
  CHECK_THROWS_AS(parse_label("neutral"), Error);
}

TEST_CASE("parse_szs reads status and axiom references") {
  const std::string vampire = R"(% Running in auto input_syntax mode. Trying TPTP
% Refutation found. Thanks to Tanya!
% SZS status Theorem for problem
% SZS output start Proof for problem
fof(f1,axiom,(
  ! [X0] : (man(X0) => mortal(X0))),
  file('/tmp/problem.p',ax1)).
fof(f2,axiom,(
  man(socrates)),
  file('/tmp/problem.p',ax2)).
fof(f3,conjecture,(
  mortal(socrates)),
  file('/tmp/problem.p',goal)).
% SZS output end Proof for problem
fof(ax3, axiom, stray).
)";
  auto s = parse_szs(vampire);
  CHECK(s.status == "Theorem");
  CHECK(s.has_proof_block);
  CHECK(s.axioms.contains("ax1"));
  CHECK(s.axioms.contains("ax2"));
  CHECK_FALSE(s.axioms.contains("ax3"));

  auto plain = parse_szs("% SZS status CounterSatisfiable for x\n");
  CHECK(plain.status == "CounterSatisfiable");
  CHECK_FALSE(plain.has_proof_block);
  CHECK(parse_szs("nothing here").status.empty());
}

TEST_CASE("external backend through the SZS prover") {
  for (const auto& b : testing::iter5_bundles()) {
    CAPTURE(b.name);
    auto r = check_external(query(b), kSzsProver);
    CHECK(r.preserved);
    CHECK(r.used_premises == std::set<std::string>{"p1", "p2"});
    CHECK_FALSE(r.verdict.has_value());
  }
  auto spurious = check_external(query({"P(c)", "all x. (-Q(x) -> (R(x) & -R(x)))"}, "Q(c)"), kSzsProver);
  CHECK(spurious.reason == Reason::kPremisesUnused);
  CHECK(spurious.used_premises == std::set<std::string>{"p2"});
  CHECK(check_external(query({"P(a)", "Q(b)"}, "P(b)"), kSzsProver).reason == Reason::kNotProved);
}

TEST_CASE("backends agree on definitive verdicts") {
  std::vector<EntailmentQuery> queries;
  for (const auto& set : {testing::iter0_bundles(), testing::iter5_bundles()}) {
    for (const auto& b : set) queries.push_back(query(b));
  }
  testing::InstanceGenerator gen(99);
  for (int i = 0; i < 40; ++i) {
    const auto inst = gen.next();
    EntailmentQuery q{{}, inst.hypothesis, Label::kEntailment};
    for (std::size_t k = 0; k < inst.premises.size(); ++k) q.premises.push_back({"p" + std::to_string(k + 1), inst.premises[k]});
    queries.push_back(q);
  }
  for (const auto& q : queries) {
    const auto in = check_entailment(q);
    const auto ex = check_external(q, kSzsProver, with_timeout(5000));
    if (in.reason == Reason::kProverTimeout || ex.reason == Reason::kProverTimeout) continue;
    CHECK(in.preserved == ex.preserved);
    CHECK(in.reason == ex.reason);
  }
}

TEST_CASE("external prover failures") {
  const auto q = query(testing::bundle(testing::iter5_bundles(), "eQASC_536"));
  CHECK(check_external(q, kSzsProver, with_timeout(0)).reason == Reason::kProverTimeout);

  const auto start = std::chrono::steady_clock::now();
  auto slow = check_external(q, "sh " + kFakes + "sleeper.sh", with_timeout(200));
  CHECK(slow.reason == Reason::kProverTimeout);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(5));

  CHECK_THROWS_AS(check_external(q, "sh " + kFakes + "exit_without_status.sh"), ExternalProverError);
  CHECK_THROWS_AS(check_external(q, "/nonexistent/prover"), ExternalProverError);

  auto bare = check_external(q, "sh " + kFakes + "theorem_without_proof.sh");
  CHECK_FALSE(bare.preserved);
  CHECK(bare.reason == Reason::kPremisesUnused);

  CHECK(check_external(q, "sh " + kFakes + "counter_satisfiable.sh").reason == Reason::kNotProved);
}
