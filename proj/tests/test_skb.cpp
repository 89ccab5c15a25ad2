#include "poskb/skb.hpp"

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "poskb/errors.hpp"

#include <random>
#include <sstream>

using namespace poskb;

namespace {

StratifiedKB make_kb(const Vocabulary& v,
                     const std::vector<std::pair<const char*, Rational>>& entries,
                     bool probabilistic = false) {
  std::vector<std::pair<Formula, Rational>> parsed;
  for (const auto& [text, w] : entries) parsed.emplace_back(parse_formula(text, v), w);
  return StratifiedKB(v, std::move(parsed), probabilistic);
}

std::vector<std::string> rendered(const StratifiedKB& kb) {
  std::vector<std::string> out;
  for (const WeightedEntry& e : kb.entries()) out.push_back(render_formula(e.formula));
  return out;
}

// The six-entry worked base after exact pruning, as saved text.
const char* kPrunedBirds =
    "@atoms Bird, Antarctic, Flies\n"
    "@spkb true\n"
    "# @prune 2 used 1\n"
    "# @prune 4 used 0, 2\n"
    "1 :: !Bird | Antarctic | Flies\n"
    "1 :: !Bird | !Antarctic | !Flies\n"
    "0.9375 :: !Bird | !Antarctic\n"
    "0.875 :: Bird | !Flies\n"
    "0.8125 :: !Bird\n"
    "0.75 :: Bird | Flies\n";

}  // namespace

TEST_SUITE("skb") {
  TEST_CASE("construction validates and deduplicates") {
    Vocabulary v({"a", "b"});
    CHECK_THROWS_AS(make_kb(v, {{"a", Rational(0)}}), InvalidWeightError);
    CHECK_THROWS_AS(make_kb(v, {{"a", Rational(9, 8)}}), InvalidWeightError);
    CHECK_THROWS_AS(make_kb(v, {{"a", Rational(-1, 2)}}), InvalidWeightError);

    // Same clause at the same weight collapses (literal order ignored);
    // the same clause at a different weight is a distinct entry.
    auto kb = make_kb(v, {{"a | b", {1, 2}}, {"b | a", {1, 2}}, {"a | b", {3, 4}}});
    CHECK(kb.size() == 2);
    CHECK(!kb.dirty());
    CHECK(!kb.is_probabilistic());
  }

  TEST_CASE("possibility is one minus the strongest violated weight") {
    StratifiedKB kb = fixtures::birds_kb();
    auto v = kb.vocab();
    auto pi = [&](std::uint64_t bits) { return kb.possibility(World(v, bits)); };
    // bits: Bird = 1, Antarctic = 2, Flies = 4.
    CHECK(pi(0b000) == Rational(1, 4));
    CHECK(pi(0b010) == Rational(1, 4));
    CHECK(pi(0b100) == Rational(1, 8));
    CHECK(pi(0b110) == Rational(1, 8));
    CHECK(pi(0b001) == Rational(0));
    CHECK(pi(0b101) == Rational(3, 16));
    CHECK(pi(0b011) == Rational(1, 16));
    CHECK(pi(0b111) == Rational(0));

    CHECK_THROWS_AS(kb.possibility(World(Vocabulary({"x"}), 0)), Error);

    // A world violating nothing has possibility 1.
    StratifiedKB health = fixtures::health_kb();
    CHECK(health.possibility(World(health.vocab(), 0b000)) == Rational(1));
  }

  TEST_CASE("stratification groups by descending weight") {
    auto s = fixtures::birds_kb().stratify();
    CHECK(s.levels() == 5);
    CHECK(s.weights() == std::vector<Rational>{Rational(1), Rational(15, 16), Rational(7, 8),
                                               Rational(13, 16), Rational(3, 4)});
    REQUIRE(s.strata().size() == 5);
    CHECK(s.strata()[0] == std::vector<std::size_t>{0, 1});
    CHECK(s.strata()[1] == std::vector<std::size_t>{2});
    CHECK(s.strata()[4] == std::vector<std::size_t>{5});
    CHECK(s.cumulative_entries(0) == 2);
    CHECK(s.cumulative_entries(1) == 3);
    CHECK(s.cumulative_entries(4) == 6);
    CHECK(s.cumulative_set(0).size() == 2);
    CHECK(s.cumulative_set(4).size() == 6);
    CHECK_THROWS_AS(s.cumulative_set(5), InvalidIndexError);

    // The hardest cumulative level of this base is satisfiable, the full
    // base is not (it rejects every world a little).
    CHECK(is_satisfiable(s.cumulative_set(0)).has_value());
    CHECK(!is_satisfiable(s.cumulative_set(4)).has_value());
  }

  TEST_CASE("exact pruning reproduces the worked compression") {
    StratifiedKB kb = fixtures::birds_kb();
    StratifiedKB pruned = kb.prune_exact();

    REQUIRE(pruned.size() == 6);
    CHECK(rendered(pruned) ==
          std::vector<std::string>{"!Bird | Antarctic | Flies", "!Bird | !Antarctic | !Flies",
                                   "!Bird | !Antarctic", "Bird | !Flies", "!Bird", "Bird | Flies"});
    CHECK(pruned.entries()[2].support == std::vector<std::uint32_t>{1});
    CHECK(pruned.entries()[4].support == std::vector<std::uint32_t>{0, 2});
    CHECK(pruned.entries()[0].support.empty());
    CHECK(pruned.entries()[5].support.empty());
    CHECK(pruned.is_probabilistic());
    CHECK(!pruned.dirty());

    CHECK(kb_to_string(pruned) == kPrunedBirds);
    CHECK(equal_possibility(kb, pruned));

    // Pruning is idempotent.
    CHECK(kb_to_string(pruned.prune_exact()) == kPrunedBirds);
  }

  TEST_CASE("pruning removes entries entailed by their stratum") {
    Vocabulary v({"a", "b"});

    SUBCASE("within one level") {
      auto kb = make_kb(v, {{"a", {1, 2}}, {"a | b", {1, 2}}});
      auto pruned = kb.prune_exact();
      CHECK(rendered(pruned) == std::vector<std::string>{"a"});
    }
    SUBCASE("across levels, stronger entries count") {
      auto kb = make_kb(v, {{"a", Rational(1)}, {"a | b", {1, 2}}});
      auto pruned = kb.prune_exact();
      CHECK(rendered(pruned) == std::vector<std::string>{"a"});
      CHECK(equal_possibility(kb, pruned));
    }
    SUBCASE("weaker entries do not count") {
      auto kb = make_kb(v, {{"a", {1, 2}}, {"a | b", Rational(1)}});
      CHECK(kb.prune_exact().size() == 2);
    }
  }

  TEST_CASE("pruning strengthens clauses literal by literal") {
    Vocabulary v({"a", "b"});
    auto kb = make_kb(v, {{"!a", {9, 10}}, {"a | b", {8, 10}}});
    auto pruned = kb.prune_exact();
    REQUIRE(pruned.size() == 2);
    CHECK(rendered(pruned) == std::vector<std::string>{"!a", "b"});
    CHECK(pruned.entries()[1].support == std::vector<std::uint32_t>{0});
    CHECK(pruned.entries()[1].strengthened());
    CHECK(equal_possibility(kb, pruned));
  }

  TEST_CASE("pruning rejects non-clausal entries") {
    Vocabulary v({"a", "b"});
    auto kb = make_kb(v, {{"a & b", {1, 2}}});
    CHECK_THROWS_AS(kb.prune_exact(), NotClausalError);
  }

  TEST_CASE("pruning preserves possibility on random bases") {
    std::mt19937 rng(404);
    for (int round = 0; round < 200; ++round) {
      std::uniform_int_distribution<std::size_t> n_atoms(1, 8);
      auto v = oracle::small_vocab(n_atoms(rng));
      StratifiedKB kb = oracle::random_clause_kb(rng, v, 10);
      StratifiedKB pruned = kb.prune_exact();
      REQUIRE(pruned.size() <= kb.size());
      REQUIRE(equal_possibility(kb, pruned));
      // Fixpoint: pruning again changes nothing.
      REQUIRE(kb_to_string(pruned.prune_exact()) == kb_to_string(pruned));
    }
  }

  TEST_CASE("merging top levels") {
    StratifiedKB kb = fixtures::birds_kb();

    SUBCASE("to four levels") {
      StratifiedKB merged = kb.merge_top_levels(4);
      auto s = merged.stratify();
      CHECK(s.weights() == std::vector<Rational>{Rational(1), Rational(7, 8), Rational(13, 16),
                                                 Rational(3, 4)});
      // The 15/16 entry was lifted to 1; everything else is untouched.
      CHECK(merged.entries()[2].weight == Rational(1));
      CHECK(merged.entries()[3].weight == Rational(7, 8));
      CHECK(!merged.is_probabilistic());
      // Worlds at the merged level drop to 1 - top; others keep their value.
      CHECK(merged.possibility(World(kb.vocab(), 0b011)) == Rational(0));   // was 1/16
      CHECK(merged.possibility(World(kb.vocab(), 0b101)) == Rational(3, 16));
      CHECK(merged.possibility(World(kb.vocab(), 0b000)) == Rational(1, 4));
    }
    SUBCASE("to one level") {
      StratifiedKB merged = kb.merge_top_levels(1);
      CHECK(merged.stratify().levels() == 1);
      CHECK(merged.stratify().weights() == std::vector<Rational>{Rational(1)});
    }
    SUBCASE("identity when nothing merges") {
      StratifiedKB merged = kb.merge_top_levels(5);
      CHECK(kb_to_string(merged) == kb_to_string(kb));
      CHECK(merged.is_probabilistic());  // untouched, still exact
    }
    SUBCASE("range checks") {
      CHECK_THROWS_AS(kb.merge_top_levels(0), InvalidLevelsError);
      CHECK_THROWS_AS(kb.merge_top_levels(6), InvalidLevelsError);
    }
    SUBCASE("merging can collapse duplicates") {
      Vocabulary v({"a", "b"});
      auto two = make_kb(v, {{"a | b", Rational(1)}, {"a | b", {1, 2}}});
      StratifiedKB merged = two.merge_top_levels(1);
      CHECK(merged.size() == 1);
    }
  }

  TEST_CASE("merging only lifts possibilities at merged levels") {
    std::mt19937 rng(505);
    for (int round = 0; round < 120; ++round) {
      std::uniform_int_distribution<std::size_t> n_atoms(1, 6);
      auto v = oracle::small_vocab(n_atoms(rng));
      StratifiedKB kb = oracle::random_clause_kb(rng, v, 8);
      auto s = kb.stratify();
      std::uniform_int_distribution<std::size_t> pick(1, s.levels());
      std::size_t target = pick(rng);
      StratifiedKB merged = kb.merge_top_levels(target);

      const Rational top = s.weights().front();
      const Rational threshold = s.weights()[s.levels() - target];
      for (std::uint64_t bits = 0; bits < oracle::world_count(v); ++bits) {
        World w(v, bits);
        Rational before = kb.possibility(w);
        Rational after = merged.possibility(w);
        if (Rational(1) - before >= threshold) {
          REQUIRE(after == Rational(1) - top);
        } else {
          REQUIRE(after == before);
        }
      }
    }
  }

  TEST_CASE("implication reading of the compact base") {
    StratifiedKB kb = fixtures::birds_kb_compact();
    auto imps = kb.to_implications();
    REQUIRE(imps.size() == 5);
    CHECK(render_formula(imps[0].first) == "Bird & !Antarctic -> Flies");
    CHECK(imps[0].second == Rational(1));
    CHECK(render_formula(imps[1].first) == "Bird & Antarctic -> !Flies");
    CHECK(imps[1].second == Rational(1));
    CHECK(render_formula(imps[2].first) == "Bird -> !Antarctic");
    CHECK(imps[2].second == Rational(15, 16));
    CHECK(render_formula(imps[3].first) == "Flies -> Bird");
    CHECK(imps[3].second == Rational(7, 8));
    CHECK(render_formula(imps[4].first) == "!Bird");
    CHECK(imps[4].second == Rational(13, 16));
  }

  TEST_CASE("implication reading keeps entries with no entailed consequent") {
    Vocabulary v({"a", "b"});
    auto kb = make_kb(v, {{"!a", {9, 10}}, {"!b", {8, 10}}, {"a | b", {1, 2}}});
    auto imps = kb.to_implications();
    REQUIRE(imps.size() == 3);
    CHECK(render_formula(imps[0].first) == "!a");
    CHECK(render_formula(imps[1].first) == "!b");
    CHECK(render_formula(imps[2].first) == "a | b");  // neither direction holds
  }

  TEST_CASE("removing an entry warns about dependent strengthenings") {
    StratifiedKB pruned = fixtures::birds_kb().prune_exact();

    SUBCASE("dependent removal") {
      auto result = pruned.remove_entry(1);
      CHECK(result.kb.size() == 5);
      CHECK(result.kb.dirty());
      CHECK(!result.kb.is_probabilistic());
      REQUIRE(result.warnings.size() == 1);
      CHECK(result.warnings[0] ==
            "entry '!Bird | !Antarctic' (weight 0.9375) was strengthened using the removed "
            "entry; re-run prune to restore exactness");
    }
    SUBCASE("independent removal") {
      auto result = pruned.remove_entry(5);
      CHECK(result.kb.size() == 5);
      CHECK(result.warnings.empty());
    }
    SUBCASE("out of range") {
      CHECK_THROWS_AS(pruned.remove_entry(6), InvalidIndexError);
    }
  }

  TEST_CASE("swapping certainty weights") {
    StratifiedKB kb = fixtures::health_kb();

    SUBCASE("self swap is the identity") {
      StratifiedKB same = kb.swap_certainty(0, 0);
      CHECK(kb_to_string(same) == kb_to_string(kb));
      CHECK(!same.dirty());
    }
    SUBCASE("swap exchanges the weights and marks the base dirty") {
      StratifiedKB swapped = kb.swap_certainty(0, 1);
      CHECK(swapped.entries()[0].weight == Rational(8, 10));
      CHECK(swapped.entries()[1].weight == Rational(9, 10));
      CHECK(swapped.dirty());
      CHECK(!swapped.is_probabilistic());
      // A world violating only the first entry now scores differently.
      World w(kb.vocab(), 0b011);  // Gardener, HayFever, no cough
      CHECK(kb.possibility(w) == Rational(1, 10));
      CHECK(swapped.possibility(w) == Rational(1, 5));
    }
    SUBCASE("swaps that create duplicates collapse them") {
      Vocabulary v({"x", "y"});
      auto dup = make_kb(v, {{"x", {1, 2}}, {"x", {3, 4}}, {"y", {1, 2}}});
      StratifiedKB swapped = dup.swap_certainty(1, 2);
      CHECK(swapped.size() == 2);  // (x, 1/2) twice collapses
    }
    SUBCASE("out of range") {
      CHECK_THROWS_AS(kb.swap_certainty(0, 2), InvalidIndexError);
    }
  }

  TEST_CASE("distribution validation") {
    CHECK(fixtures::birds_kb().validate_spkb() == Rational(1));
    CHECK(fixtures::birds_kb_compact().validate_spkb() == Rational(5, 2));
    CHECK(fixtures::health_kb().validate_spkb() == Rational(23, 5));
    CHECK_THROWS_AS(fixtures::birds_kb().validate_spkb(2), VocabTooLargeError);
  }

  TEST_CASE("possibility equality of bases") {
    CHECK(equal_possibility(fixtures::birds_kb(), fixtures::birds_kb()));
    CHECK(!equal_possibility(fixtures::birds_kb(), fixtures::birds_kb_compact()));
    CHECK_THROWS_AS(equal_possibility(fixtures::birds_kb(), fixtures::health_kb()), Error);
    CHECK_THROWS_AS(equal_possibility(fixtures::birds_kb(), fixtures::birds_kb(), 2),
                    VocabTooLargeError);
  }

  TEST_CASE("text format round trips") {
    SUBCASE("plain base") {
      StratifiedKB kb = fixtures::birds_kb();
      std::string text = kb_to_string(kb);
      CHECK(text ==
            "@atoms Bird, Antarctic, Flies\n"
            "@spkb true\n"
            "1 :: !Bird | Antarctic | Flies\n"
            "1 :: !Bird | !Antarctic | !Flies\n"
            "0.9375 :: !Bird | !Antarctic | Flies\n"
            "0.875 :: Bird | !Flies\n"
            "0.8125 :: !Bird | Antarctic | !Flies\n"
            "0.75 :: Bird | Flies\n");
      std::istringstream in(text);
      StratifiedKB loaded = load_kb(in);
      CHECK(kb_to_string(loaded) == text);
      CHECK(loaded.is_probabilistic());
      CHECK(!loaded.dirty());
    }
    SUBCASE("pruned base keeps provenance") {
      std::istringstream in(kPrunedBirds);
      StratifiedKB loaded = load_kb(in);
      CHECK(kb_to_string(loaded) == kPrunedBirds);
      CHECK(loaded.entries()[2].support == std::vector<std::uint32_t>{1});
      CHECK(loaded.entries()[4].support == std::vector<std::uint32_t>{0, 2});
    }
    SUBCASE("dirty marker survives") {
      StratifiedKB dirty = fixtures::health_kb().swap_certainty(0, 1);
      std::string text = kb_to_string(dirty);
      CHECK(text.find("# @dirty\n") != std::string::npos);
      std::istringstream in(text);
      CHECK(load_kb(in).dirty());
    }
    SUBCASE("fractional weights, comments, blank lines, CRLF") {
      std::istringstream in(
          "@atoms a, b\r\n"
          "\r\n"
          "# a comment\n"
          "@spkb false\n"
          "3/4 :: a -> b\n"
          "0.5 :: ! b\n");
      StratifiedKB kb = load_kb(in);
      REQUIRE(kb.size() == 2);
      CHECK(kb.entries()[0].weight == Rational(3, 4));
      CHECK(render_formula(kb.entries()[0].formula) == "a -> b");
      CHECK(kb.entries()[1].weight == Rational(1, 2));
      CHECK(!kb.is_probabilistic());
    }
    SUBCASE("duplicates collapse on load with provenance remapped") {
      std::istringstream in(
          "@atoms a, b\n"
          "# @prune 2 used 1\n"
          "0.5 :: a\n"
          "0.5 :: a\n"
          "0.5 :: b\n");
      StratifiedKB kb = load_kb(in);
      REQUIRE(kb.size() == 2);
      CHECK(kb.entries()[1].support == std::vector<std::uint32_t>{0});
    }
    SUBCASE("empty base round trips") {
      std::istringstream in("@atoms a\n");
      StratifiedKB kb = load_kb(in);
      CHECK(kb.size() == 0);
      CHECK(kb_to_string(kb) == "@atoms a\n@spkb false\n");
    }
  }

  TEST_CASE("text format errors carry line numbers") {
    auto load = [](const char* text) {
      std::istringstream in(text);
      return load_kb(in);
    };
    CHECK_THROWS_WITH_AS(load(""), doctest::Contains("missing @atoms"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("0.5 :: a\n"), doctest::Contains("line 1"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\n@atoms b\n"), doctest::Contains("duplicate @atoms"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\n@spkb maybe\n"), doctest::Contains("true or false"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\njust text\n"), doctest::Contains("expected 'weight :: formula'"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\n1.5 :: a\n"), doctest::Contains("outside (0, 1]"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\n0 :: a\n"), doctest::Contains("line 2"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\nx :: a\n"), doctest::Contains("line 2"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\n0.5 :: q\n"), doctest::Contains("unknown atom"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\n0.5 :: a &\n"), doctest::Contains("line 2"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\n# @prune 1 used\n0.5 :: a\n"), doctest::Contains("line 2"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\n# @prune nope used 0\n0.5 :: a\n"), doctest::Contains("line 2"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a\n# @prune 5 used 0\n0.5 :: a\n"), doctest::Contains("references entry 5"), KbFormatError);
    CHECK_THROWS_WITH_AS(load("@atoms a, a\n0.5 :: a\n"), doctest::Contains("line 1"), KbFormatError);
    CHECK_THROWS_AS(load_kb_file("/nonexistent/base.kb"), KbFormatError);
  }
}
