#include <doctest.h>

#include <string>

#include "epf/fol/formula.hpp"
#include "epf/fol/syntax.hpp"
#include "epf/fol/tptp.hpp"
#include "support/bundles.hpp"
#include "support/random_formulas.hpp"
#include "support/tptp_check.hpp"

using epf::fol::Connective;
using epf::fol::Formula;
using epf::fol::Term;

namespace {

Formula atom(const std::string& p, std::vector<Term> args = {}) {
  return Formula::atom(p, std::move(args));
}
Term var(const std::string& n) { return Term::variable(n); }
Term con(const std::string& n) { return Term::constant(n); }

}  // namespace

TEST_CASE("parse: worked examples") {
  using epf::fol::parse_formula;
  CHECK(parse_formula("all x. (Harp(x) -> Instrument(x))") ==
        Formula::forall({"x"}, Formula::implication(atom("Harp", {var("x")}),
                                                    atom("Instrument", {var("x")}))));
  CHECK(parse_formula("Planet(mars)") == atom("Planet", {con("mars")}));

  try {
    parse_formula("P(x)");
    FAIL("expected FreeVariableError");
  } catch (const epf::fol::FreeVariableError& e) {
    CHECK(e.variables() == std::set<std::string>{"x"});
  }
}

TEST_CASE("parse: precedence matrix") {
  using epf::fol::parse_formula;
  const Formula a = atom("A", {con("c")});
  const Formula b = atom("B", {con("c")});
  const Formula c = atom("C", {con("c")});
  const Formula d = atom("D", {con("c")});

  CHECK(parse_formula("A(c) & B(c) | C(c)") ==
        Formula::disjunction(Formula::conjunction(a, b), c));
  CHECK(parse_formula("A(c) | B(c) & C(c)") ==
        Formula::disjunction(a, Formula::conjunction(b, c)));
  CHECK(parse_formula("-A(c) & B(c)") == Formula::conjunction(Formula::negation(a), b));
  CHECK(parse_formula("A(c) | B(c) -> C(c)") ==
        Formula::implication(Formula::disjunction(a, b), c));
  CHECK(parse_formula("A(c) -> B(c) -> C(c)") ==
        Formula::implication(a, Formula::implication(b, c)));
  CHECK(parse_formula("A(c) <-> B(c) & C(c)") ==
        Formula::equivalence(a, Formula::conjunction(b, c)));
  CHECK(parse_formula("(A(c) -> B(c)) -> C(c)") ==
        Formula::implication(Formula::implication(a, b), c));
  CHECK(parse_formula("A(c) & B(c) & C(c) & D(c)") ==
        Formula::conjunction(Formula::conjunction(Formula::conjunction(a, b), c), d));
  CHECK(parse_formula("-(A(c) | B(c))") == Formula::negation(Formula::disjunction(a, b)));

  const Formula px = atom("P", {var("x")});
  const Formula qx = atom("Q", {var("x")});
  // Quantifier scope extends to the right.
  CHECK(parse_formula("A(c) & all x. P(x) | Q(x)") ==
        Formula::conjunction(a, Formula::forall({"x"}, Formula::disjunction(px, qx))));
  CHECK(parse_formula("-all x. P(x) & Q(x)") ==
        Formula::negation(Formula::forall({"x"}, Formula::conjunction(px, qx))));
}

TEST_CASE("parse: aliases, sugar and errors") {
  using epf::fol::parse_formula;
  CHECK(parse_formula("~P(c) >> Q(c)") == parse_formula("-P(c) -> Q(c)"));
  CHECK(parse_formula("all x y. R(x, y)") ==
        Formula::forall({"x"}, Formula::forall({"y"}, atom("R", {var("x"), var("y")}))));
  CHECK(parse_formula("exists x y. R(x, y)") == parse_formula("exists x. exists y. R(x, y)"));
  CHECK(parse_formula("Rains") == atom("Rains"));
  CHECK(parse_formula("all person. Mortal(person)") ==
        Formula::forall({"person"}, atom("Mortal", {var("person")})));
  CHECK(parse_formula("Loves(f(john), mary)") ==
        atom("Loves", {Term::function("f", {con("john")}), con("mary")}));

  try {
    parse_formula("P(c) & c = d");
    FAIL("expected SyntaxError");
  } catch (const epf::fol::SyntaxError& e) {
    CHECK(e.position() == 9);
  }
  CHECK_THROWS_AS(parse_formula("P("), epf::fol::SyntaxError);
  CHECK_THROWS_AS(parse_formula("all . P(c)"), epf::fol::SyntaxError);
  CHECK_THROWS_AS(parse_formula("P(c) Q(c)"), epf::fol::SyntaxError);
  CHECK_THROWS_AS(parse_formula(""), epf::fol::SyntaxError);
  CHECK_THROWS_AS(parse_formula("P(c) # Q(c)"), epf::fol::SyntaxError);
  CHECK_THROWS_AS(parse_formula("all x. R(x, y2)"), epf::fol::FreeVariableError);
}

TEST_CASE("print: canonical form") {
  using epf::fol::print_formula;
  CHECK(print_formula(atom("Planet", {con("mars")})) == "Planet(mars)");
  CHECK(print_formula(Formula::forall(
            {"x"}, Formula::implication(atom("H", {var("x")}), atom("M", {var("x")})))) ==
        "all x. (H(x) -> M(x))");
  CHECK(print_formula(atom("Loves", {con("john"), con("mary")})) == "Loves(john, mary)");
  CHECK(print_formula(epf::fol::parse_formula("-all x. P(x)")) == "-(all x. P(x))");
  CHECK(print_formula(epf::fol::parse_formula("A(c) & B(c) & C(c)")) == "A(c) & B(c) & C(c)");
}

TEST_CASE("print/parse round trip on worked translations") {
  using namespace epf::testing;
  for (const auto* set : {&iter5_bundles(), &iter0_bundles()}) {
    for (const auto& b : *set) {
      std::vector<std::string> all = b.premises;
      all.push_back(b.hypothesis);
      for (const auto& text : all) {
        const Formula f = epf::fol::parse_formula(text);
        CAPTURE(text);
        CHECK(epf::fol::parse_formula(epf::fol::print_formula(f)) == f);
      }
    }
  }
}

TEST_CASE("property: parse(print(f)) == f for random formulas up to depth 6") {
  epf::testing::GeneratorOptions opts;
  opts.functions = true;
  epf::testing::FormulaGenerator gen(20241016, opts);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = gen.next();
    REQUIRE(f.depth() <= 6);
    const std::string text = epf::fol::print_formula(f);
    CAPTURE(text);
    REQUIRE(epf::fol::parse_formula(text) == f);
  }
}

TEST_CASE("signatures") {
  using epf::fol::PredicateSignature;
  using epf::fol::signatures;
  auto v = signatures(atom("Loves", {con("john"), con("mary")}));
  CHECK(v.predicates == std::set<PredicateSignature>{{"Loves", 2}});
  CHECK(v.constants == std::set<std::string>{"john", "mary"});

  v = signatures(epf::fol::parse_formula("all x. (Mammal(x) -> (Teeth(x) & Digestive(x)))"));
  CHECK(v.predicates == std::set<PredicateSignature>{{"Mammal", 1}, {"Teeth", 1}, {"Digestive", 1}});
  CHECK(v.constants.empty());

  v = signatures(epf::fol::parse_formula("all x. (Block(x) -> Block(x, sunlight))"));
  CHECK(v.predicates == std::set<PredicateSignature>{{"Block", 1}, {"Block", 2}});
  CHECK(v.constants == std::set<std::string>{"sunlight"});
}

namespace {

// Union of the signatures of the immediate subformulas plus the node's own
// contribution.
epf::fol::Vocabulary by_induction(const Formula& f) {
  epf::fol::Vocabulary v;
  switch (f.kind()) {
    case Connective::kAtom:
      return epf::fol::signatures(f);
    case Connective::kNot:
      return by_induction(f.operand());
    case Connective::kForAll:
    case Connective::kExists:
      return by_induction(f.body());
    default:
      v = by_induction(f.lhs());
      v.merge(by_induction(f.rhs()));
      return v;
  }
}

}  // namespace

TEST_CASE("property: signatures is the union over subformulas") {
  epf::testing::GeneratorOptions opts;
  opts.functions = true;
  epf::testing::FormulaGenerator gen(7, opts);
  for (int i = 0; i < 500; ++i) {
    const Formula f = gen.next();
    REQUIRE(epf::fol::signatures(f) == by_induction(f));
  }
}

TEST_CASE("to_tptp: statements") {
  using epf::fol::TptpRole;
  using epf::fol::to_tptp;
  CHECK(to_tptp(atom("Planet", {con("mars")}), TptpRole::kAxiom, "p1") ==
        "fof(p1, axiom, planet(mars)).");
  CHECK(to_tptp(Formula::forall({"x"}, Formula::implication(atom("H", {var("x")}),
                                                            atom("M", {var("x")}))),
                TptpRole::kConjecture, "h") == "fof(h, conjecture, ! [X] : (h(X) => m(X))).");
  CHECK(to_tptp(epf::fol::parse_formula("-P(c) | (Q(c) <-> R(c, c))"), TptpRole::kAxiom, "a") ==
        "fof(a, axiom, ~ p(c) | (q(c) <=> r(c,c))).");
  CHECK_THROWS_AS(to_tptp(atom("P"), TptpRole::kAxiom, "Bad"), epf::Error);
}

TEST_CASE("to_tptp: mangling keeps distinct symbols apart") {
  using epf::fol::TptpRole;
  using epf::fol::TptpSymbolTable;
  TptpSymbolTable table;
  const auto f = epf::fol::parse_formula("all x. (Block(x) -> Block(x, sunlight) & block(x))");
  const std::string s = epf::fol::to_tptp(f, TptpRole::kAxiom, "p1", table);
  CHECK(s == "fof(p1, axiom, ! [X] : (block(X) => (block_1(X,sunlight) & block_2(X)))).");
  CHECK(table.source_symbol("block_1") == "Block");
  CHECK(table.source_symbol("block_2") == "block");
  CHECK(table.source_variable("X") == "x");
  CHECK_FALSE(epf::testing::TptpSyntaxChecker::check(s).has_value());

  TptpSymbolTable strict(TptpSymbolTable::Policy::kStrict);
  CHECK_THROWS_AS(epf::fol::to_tptp(f, TptpRole::kAxiom, "p1", strict), epf::fol::MangleCollision);
}

TEST_CASE("to_tptp: worked bundles pass the independent syntax check") {
  using epf::fol::TptpRole;
  for (const auto* set : {&epf::testing::iter5_bundles(), &epf::testing::iter0_bundles()}) {
    for (const auto& b : *set) {
      epf::fol::TptpSymbolTable table;
      std::string problem;
      for (std::size_t i = 0; i < b.premises.size(); ++i) {
        problem += epf::fol::to_tptp(epf::fol::parse_formula(b.premises[i]), TptpRole::kAxiom,
                                     "p" + std::to_string(i + 1), table) +
                   "\n";
      }
      problem += epf::fol::to_tptp(epf::fol::parse_formula(b.hypothesis), TptpRole::kConjecture,
                                   "h", table) +
                 "\n";
      CAPTURE(problem);
      CHECK_FALSE(epf::testing::TptpSyntaxChecker::check(problem).has_value());
      CHECK(epf::fol::read_tptp(problem).size() == b.premises.size() + 1);
    }
  }
}

TEST_CASE("property: TPTP output of random formulas is well formed and reads back") {
  epf::testing::GeneratorOptions opts;
  opts.functions = true;
  epf::testing::FormulaGenerator gen(99, opts);
  for (int i = 0; i < 500; ++i) {
    const Formula f = gen.next();
    epf::fol::TptpSymbolTable table;
    const std::string s = epf::fol::to_tptp(f, epf::fol::TptpRole::kAxiom, "f", table);
    CAPTURE(s);
    REQUIRE_FALSE(epf::testing::TptpSyntaxChecker::check(s).has_value());
    const auto back = epf::fol::read_tptp(s);
    REQUIRE(back.size() == 1);
    // Same text again under a fresh table: the reader preserved the structure.
    epf::fol::TptpSymbolTable again;
    REQUIRE(epf::fol::to_tptp(back[0].formula, epf::fol::TptpRole::kAxiom, "f", again) == s);
  }
}

TEST_CASE("read_tptp: connectives and annotations") {
  const auto stmts = epf::fol::read_tptp(
      "% comment\n"
      "fof(a1, axiom, ! [X,Y] : (p(X) <= q(Y)), file('x.p', a1)).\n"
      "fof(g, conjecture, ? [X] : ~ (p(X) ~| q(X))).\n");
  REQUIRE(stmts.size() == 2);
  CHECK(stmts[0].role == epf::fol::TptpRole::kAxiom);
  CHECK(stmts[1].role == epf::fol::TptpRole::kConjecture);
  CHECK(stmts[0].formula.vars() == std::vector<std::string>{"X", "Y"});
  CHECK_THROWS_AS(epf::fol::read_tptp("fof(a, axiom, p(X))."), epf::fol::FreeVariableError);
  CHECK_THROWS_AS(epf::fol::read_tptp("fof(a, axiom, a = b)."), epf::fol::SyntaxError);
}
