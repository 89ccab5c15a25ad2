#pragma once

// Shared worked examples. All expected values in the test suites were
// derived by hand from these definitions (possibility tables, model
// counts, stratifications) and are frozen here as construction code.

#include "poskb/det.hpp"
#include "poskb/formula.hpp"
#include "poskb/skb.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fixtures {

// --- Birds: a three-atom density estimation example -----------------------

inline poskb::Vocabulary birds_vocab() {
  return poskb::Vocabulary({"Bird", "Antarctic", "Flies"});
}

// 16 observations whose greedy tree is exactly birds_tree().
inline std::string birds_csv() {
  std::string out = "Bird,Antarctic,Flies\n";
  auto rows = [&](const char* row, int n) {
    for (int i = 0; i < n; ++i) out += std::string(row) + "\n";
  };
  rows("0,0,0", 4);
  rows("0,1,0", 4);
  rows("0,0,1", 2);
  rows("0,1,1", 2);
  rows("1,0,1", 3);
  rows("1,1,0", 1);
  return out;
}

// Root splits Bird; the no-bird side splits Flies; the bird side splits
// Antarctic and then Flies on both halves.
inline poskb::DensityTree birds_tree() {
  using T = poskb::DensityTree;
  using poskb::Rational;
  auto leaf = [](long num, long den) { return T::leaf(Rational(num, den)); };
  auto no_bird = T::internal(2, leaf(1, 4), leaf(1, 8));
  auto bird_polar = T::internal(2, leaf(1, 16), leaf(0, 1));
  auto bird_temperate = T::internal(2, leaf(0, 1), leaf(3, 16));
  auto bird = T::internal(1, bird_temperate, bird_polar);
  return poskb::DensityTree(birds_vocab(), T::internal(0, no_bird, bird));
}

// The compiled stratified base of birds_tree(), strongest entries first.
inline poskb::StratifiedKB birds_kb() {
  using poskb::Rational;
  auto v = birds_vocab();
  auto f = [&](const char* text) { return poskb::parse_formula(text, v); };
  std::vector<std::pair<poskb::Formula, Rational>> entries{
      {f("!Bird | Antarctic | Flies"), Rational(1)},
      {f("!Bird | !Antarctic | !Flies"), Rational(1)},
      {f("!Bird | !Antarctic | Flies"), Rational(15, 16)},
      {f("Bird | !Flies"), Rational(7, 8)},
      {f("!Bird | Antarctic | !Flies"), Rational(13, 16)},
      {f("Bird | Flies"), Rational(3, 4)},
  };
  return poskb::StratifiedKB(v, std::move(entries), /*probabilistic=*/true);
}

// The compact five-entry rendering of the same example used in the
// documentation of the pruning step (it drops the weakest stratum, so it
// is close to but not possibility-equivalent with birds_kb()).
inline poskb::StratifiedKB birds_kb_compact() {
  using poskb::Rational;
  auto v = birds_vocab();
  auto f = [&](const char* text) { return poskb::parse_formula(text, v); };
  std::vector<std::pair<poskb::Formula, Rational>> entries{
      {f("!Bird | Antarctic | Flies"), Rational(1)},
      {f("!Bird | !Antarctic | !Flies"), Rational(1)},
      {f("!Bird | !Antarctic"), Rational(15, 16)},
      {f("Bird | !Flies"), Rational(7, 8)},
      {f("!Bird"), Rational(13, 16)},
  };
  return poskb::StratifiedKB(v, std::move(entries), /*probabilistic=*/false);
}

// --- Health: a hand-written ordinal base (not probabilistic) ---------------

inline poskb::Vocabulary health_vocab() {
  return poskb::Vocabulary({"Gardener", "HayFever", "Coughs"});
}

inline poskb::StratifiedKB health_kb() {
  using poskb::Rational;
  auto v = health_vocab();
  auto f = [&](const char* text) { return poskb::parse_formula(text, v); };
  std::vector<std::pair<poskb::Formula, Rational>> entries{
      {f("Gardener -> !HayFever"), Rational(9, 10)},
      {f("Coughs -> HayFever"), Rational(8, 10)},
  };
  return poskb::StratifiedKB(v, std::move(entries), /*probabilistic=*/false);
}

}  // namespace fixtures
