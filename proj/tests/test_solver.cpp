#include "poskb/solver.hpp"

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <random>

using namespace poskb;

namespace {

ClauseSet from_texts(const Vocabulary& v, const std::vector<const char*>& texts) {
  ClauseSet cs(v);
  for (const char* t : texts) {
    for (const Clause& c : to_cnf(parse_formula(t, v), v)) cs.add(c);
  }
  return cs;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("clause sets drop duplicate clauses") {
    Vocabulary v({"a", "b"});
    ClauseSet cs(v);
    cs.add(*Clause::make({{0, true}, {1, false}}));
    cs.add(*Clause::make({{1, false}, {0, true}}));  // same literal set
    CHECK(cs.size() == 1);
  }

  TEST_CASE("finds models and detects contradictions") {
    auto v = fixtures::health_vocab();

    auto contradictory =
        from_texts(v, {"Gardener -> !HayFever", "Coughs -> HayFever", "Gardener", "Coughs"});
    CHECK(!is_satisfiable(contradictory).has_value());

    auto consistent = from_texts(v, {"Gardener -> !HayFever", "Coughs -> HayFever", "Gardener"});
    auto model = is_satisfiable(consistent);
    REQUIRE(model.has_value());
    for (const Clause& c : consistent.clauses()) CHECK(evaluate(c, *model));

    // The empty clause set is satisfied by the all-false world.
    ClauseSet empty(v);
    auto w = is_satisfiable(empty);
    REQUIRE(w.has_value());
    CHECK(w->bits() == 0);

    ClauseSet falsum(v);
    falsum.add(Clause::make_empty());
    CHECK(!is_satisfiable(falsum).has_value());
  }

  TEST_CASE("satisfiability is deterministic") {
    auto v = fixtures::birds_vocab();
    auto cs = from_texts(v, {"Bird | Flies", "!Bird | !Flies"});
    auto a = is_satisfiable(cs);
    auto b = is_satisfiable(cs);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->bits() == b->bits());
  }

  TEST_CASE("entailment") {
    auto v = fixtures::health_vocab();
    auto base = from_texts(v, {"Gardener -> !HayFever", "HayFever"});
    CHECK(entails(base, parse_formula("!Gardener", v)));
    CHECK(!entails(base, parse_formula("Coughs", v)));
    CHECK(entails(base, parse_formula("true", v)));
    CHECK(entails(base, parse_formula("HayFever | Coughs", v)));

    // An unsatisfiable base entails everything.
    auto broken = from_texts(v, {"Gardener", "!Gardener"});
    CHECK(entails(broken, parse_formula("false", v)));

    // Nothing but tautologies follows from the empty base.
    ClauseSet empty(v);
    CHECK(!entails(empty, parse_formula("Gardener", v)));
    CHECK(entails(empty, parse_formula("Gardener | !Gardener", v)));

    // Clause goals agree with formula goals.
    CHECK(entails(base, *Clause::make({{0, false}})));
    CHECK(!entails(base, *Clause::make({{2, true}})));
  }

  TEST_CASE("counts models over the full vocabulary") {
    auto v = fixtures::birds_vocab();
    CHECK(count_models(ClauseSet(v)) == 8);
    CHECK(count_models(from_texts(v, {"Bird"})) == 4);
    CHECK(count_models(from_texts(v, {"Bird & Antarctic & Flies"})) == 1);
    CHECK(count_models(from_texts(v, {"Bird | Flies"})) == 6);
    CHECK(count_models(from_texts(v, {"Bird", "!Bird"})) == 0);

    ClauseSet falsum(v);
    falsum.add(Clause::make_empty());
    CHECK(count_models(falsum) == 0);

    // Atoms not mentioned anywhere still multiply the count.
    Vocabulary wide({"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"});
    CHECK(count_models(from_texts(wide, {"a & !b"})) == 256);
  }

  TEST_CASE("agrees with the truth-table oracle on random clause sets") {
    std::mt19937 rng(101);
    for (int round = 0; round < 300; ++round) {
      std::uniform_int_distribution<std::size_t> n_atoms(1, 9);
      auto v = oracle::small_vocab(n_atoms(rng));
      auto cs = oracle::random_clause_set(rng, v, 12, 4);

      auto model = is_satisfiable(cs);
      CHECK(model.has_value() == oracle::tt_satisfiable(cs));
      if (model) {
        for (const Clause& c : cs.clauses()) REQUIRE(evaluate(c, *model));
      }
      CHECK(count_models(cs) == oracle::tt_count(cs));

      Formula goal = oracle::random_formula(rng, v, 3);
      CHECK(entails(cs, goal) == oracle::tt_entails(cs, goal));
    }
  }

  TEST_CASE("adding a clause never increases the model count") {
    std::mt19937 rng(202);
    auto v = oracle::small_vocab(7);
    for (int round = 0; round < 100; ++round) {
      auto cs = oracle::random_clause_set(rng, v, 6, 3);
      BigInt before = count_models(cs);
      ClauseSet extended(v, cs.clauses());
      extended.add(oracle::random_clause(rng, v, 3));
      CHECK(count_models(extended) <= before);
    }
  }

  TEST_CASE("exports dimacs") {
    auto v = fixtures::birds_vocab();
    auto cs = from_texts(v, {"Bird -> Flies", "!Antarctic"});
    CHECK(to_dimacs(cs) == "p cnf 3 2\n-1 3 0\n-2 0\n");
    CHECK(to_dimacs(ClauseSet(v)) == "p cnf 3 0\n");
  }
}
