#pragma once

#include "poskb/formula.hpp"
#include "poskb/rational.hpp"
#include "poskb/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace poskb {

/// One weighted formula of a stratified base. The weight is a necessity
/// lower bound in (0, 1]; weight 1 entries are hard constraints.
struct WeightedEntry {
  Formula formula = Formula::make_true();
  Rational weight;

  /// CNF of the formula (True contributes no clause, False the empty one).
  std::vector<Clause> cnf;

  /// Stable identity within this base; survives pruning and edits.
  std::uint32_t id = 0;

  /// Pruning provenance: ids of the entries whose clauses were used to
  /// strengthen this one. Empty for untouched entries.
  std::vector<std::uint32_t> support;

  /// The single-clause normal form, when the formula is clausal.
  std::optional<Clause> clause() const {
    if (cnf.size() == 1) return cnf.front();
    return std::nullopt;
  }
  bool strengthened() const { return !support.empty(); }
};

/// View of a base grouped by distinct weight, strongest first.
class Stratification {
 public:
  /// Distinct weights, strictly descending.
  const std::vector<Rational>& weights() const { return weights_; }
  std::size_t levels() const { return weights_.size(); }

  /// Entry indices per weight, in base order.
  const std::vector<std::vector<std::size_t>>& strata() const { return strata_; }

  /// Clauses of every entry with weight >= weights()[level]. Cumulative:
  /// level 0 holds only the hardest stratum, the last level the whole base.
  ClauseSet cumulative_set(std::size_t level) const;

  /// Number of entries covered by cumulative level `level`.
  std::size_t cumulative_entries(std::size_t level) const;

 private:
  friend class StratifiedKB;
  Stratification(Vocabulary vocab) : vocab_(std::move(vocab)) {}
  Vocabulary vocab_;
  std::vector<Rational> weights_;
  std::vector<std::vector<std::size_t>> strata_;
  std::vector<std::vector<Clause>> cumulative_;  // clause lists per level
  std::vector<std::size_t> cumulative_entries_;
};

/// Stratified possibilistic knowledge base: weighted formulas over a
/// fixed vocabulary. The induced possibility of a world is
///   1 - max{ weight of a violated entry }   (1 if nothing is violated).
/// The probabilistic flag marks bases whose possibilities sum to 1 over
/// all worlds, which is what licenses exact marginals; operations that can
/// break that property clear the flag.
class StratifiedKB {
 public:
  StratifiedKB(Vocabulary vocab, std::vector<std::pair<Formula, Rational>> entries,
               bool probabilistic = false);

  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<WeightedEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool is_probabilistic() const { return probabilistic_; }

  /// Set after destructive edits; cleared only by reconstruction.
  bool dirty() const { return dirty_; }

  Rational possibility(const World& w) const;

  Stratification stratify() const;

  /// Exact compression: removes entries entailed by the rest of their
  /// cumulative stratum and drops clause literals whose removal is entailed
  /// by the stratum (weakest-bound literal first, i.e. right to left).
  /// Runs to fixpoint, strongest stratum first. The induced possibility
  /// distribution is preserved exactly; strengthened entries record the
  /// supporting entry ids. Requires every entry to be clausal.
  StratifiedKB prune_exact() const;

  /// Collapses the strongest strata so that `target_levels` distinct
  /// weights remain; merged entries take the strongest weight present.
  /// Worlds with a possibility of 1 - (a merged weight) may drop to
  /// 1 - (the strongest merged weight); every other possibility is
  /// unchanged. Clears the probabilistic flag unless nothing merges.
  StratifiedKB merge_top_levels(std::size_t target_levels) const;

  /// Reads each clausal entry as an implication: candidate consequents are
  /// tried positive literals first, rightmost first, then negative
  /// literals, rightmost first, and the first consequent that is
  /// MAP-entailed by the base under the negated remainder as evidence is
  /// chosen. Entries with no such consequent (and unit or empty clauses)
  /// stay as they are. Purely a presentation; weights are untouched.
  std::vector<std::pair<Formula, Rational>> to_implications() const;

  struct EditResult;  // defined after the class: holds a StratifiedKB

  /// Removes the entry at `index` (0-based). Warns about surviving entries
  /// whose pruning support mentions the removed entry. Marks the result
  /// dirty and clears the probabilistic flag.
  EditResult remove_entry(std::size_t index) const;

  /// Exchanges the weights of entries i and j. i == j is the identity.
  /// Otherwise marks the result dirty and clears the probabilistic flag.
  StratifiedKB swap_certainty(std::size_t i, std::size_t j) const;

  /// Sum of possibilities over all 2^n worlds (1 iff the base is a valid
  /// possibilistic counterpart of a probability distribution). Refuses
  /// vocabularies over `max_atoms` atoms.
  Rational validate_spkb(std::size_t max_atoms = 20) const;

 private:
  StratifiedKB() = default;
  friend StratifiedKB load_kb(std::istream& in);

  static StratifiedKB from_parts(Vocabulary vocab, std::vector<WeightedEntry> entries,
                                 bool probabilistic, bool dirty);

  Vocabulary vocab_ = Vocabulary(std::vector<std::string>{});
  std::vector<WeightedEntry> entries_;
  bool probabilistic_ = false;
  bool dirty_ = false;
};

struct StratifiedKB::EditResult {
  StratifiedKB kb;
  std::vector<std::string> warnings;
};

/// True iff both bases induce pointwise-equal possibility distributions
/// (exhaustive check; refuses vocabularies over max_atoms atoms or
/// mismatched vocabularies).
bool equal_possibility(const StratifiedKB& a, const StratifiedKB& b, std::size_t max_atoms = 20);

/// Knowledge-base text format:
///   @atoms Bird, Antarctic, Flies
///   @spkb true
///   # @prune 2 used 0, 1        (pruning provenance, entry indices)
///   0.9375 :: !Bird | !Antarctic
/// One `weight :: formula` line per entry; weights decimal or n/d in
/// (0, 1]; '#' lines are comments ('# @' comments carry metadata); blank
/// lines ignored. Loading a file saved by save_kb restores provenance,
/// flags and entry order exactly.
StratifiedKB load_kb(std::istream& in);
StratifiedKB load_kb_file(const std::string& path);
void save_kb(const StratifiedKB& kb, std::ostream& out);
std::string kb_to_string(const StratifiedKB& kb);

}  // namespace poskb
