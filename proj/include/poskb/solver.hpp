#pragma once

#include "poskb/formula.hpp"
#include "poskb/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace poskb {

/// A set of clauses over one vocabulary. Duplicate clauses (as literal
/// sets) are dropped on construction/insertion; tautologies can never be
/// represented by Clause in the first place.
class ClauseSet {
 public:
  explicit ClauseSet(Vocabulary vocab) : vocab_(std::move(vocab)) {}
  ClauseSet(Vocabulary vocab, const std::vector<Clause>& clauses);

  void add(const Clause& c);
  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }

 private:
  Vocabulary vocab_;
  std::vector<Clause> clauses_;
};

/// Counts individual satisfiability checks, for query instrumentation.
struct SatCallCounter {
  int calls = 0;
};

/// DPLL with unit propagation and pure-literal elimination. Branching is
/// deterministic: lowest unassigned vocabulary index first, true before
/// false; unconstrained atoms default to false. Returns a satisfying world
/// or nullopt. The empty clause set yields the all-false world.
std::optional<World> is_satisfiable(const ClauseSet& cs, SatCallCounter* counter = nullptr);

/// cs entails goal iff cs plus the CNF of !goal is unsatisfiable.
bool entails(const ClauseSet& cs, const Formula& goal);

/// cs entails a clause (slightly cheaper than the Formula overload).
bool entails(const ClauseSet& cs, const Clause& goal);

/// Exact number of models over the full vocabulary (atoms that appear in
/// no clause still double the count). DPLL-based: unit propagation, no
/// pure-literal rule (it is unsound for counting), and branches whose
/// clauses are all satisfied contribute 2^(number of unassigned atoms).
BigInt count_models(const ClauseSet& cs);

/// DIMACS CNF text; atom i becomes variable i+1, clauses and literals in
/// set order.
std::string to_dimacs(const ClauseSet& cs);

}  // namespace poskb
