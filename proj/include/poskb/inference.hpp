#pragma once

#include "poskb/rational.hpp"
#include "poskb/skb.hpp"
#include "poskb/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace poskb {

/// Outcome of MAP-consistency computation. `base` is the consistent
/// sub-base used for entailment: every entry clause whose weight lies
/// strictly above `cutoff`, plus the evidence clauses (the evidence is
/// never dropped).
struct MapResult {
  Rational cutoff;
  ClauseSet base;
  bool entailed = false;

  /// Satisfiability checks spent finding the cutoff (the evidence check
  /// plus a binary search over candidate cutoffs).
  int sat_calls = 0;
};

/// One level of a top-theta answer: the stratum weight, the probability
/// mass theta of the models covered down to that level (relative to the
/// evidence), and whether the query holds in all of them.
struct TopThetaResult {
  Rational weight;
  Rational theta;
  bool entailed = false;
};

/// Finds the minimal cutoff w in {0} union {entry weights} such that the
/// entry clauses with weight strictly above w, together with the evidence,
/// are satisfiable; binary search, at most ceil(log2(k+1)) + 1
/// satisfiability checks for k distinct entry weights. Throws
/// InconsistentEvidenceError if the evidence alone is unsatisfiable.
MapResult map_cutoff(const StratifiedKB& kb, const Formula& evidence);

/// MAP entailment: does the consistent base under `evidence` entail
/// `query`? (Equivalently: does the query hold in every most-plausible
/// evidence world?)
MapResult map_entails(const StratifiedKB& kb, const Formula& evidence, const Formula& query);

/// Levels strictly above the MAP cutoff, weakest first, with exact
/// cumulative probability mass theta_l = M(level l and up) / M(evidence).
/// Model counts are taken over the full vocabulary.
std::vector<TopThetaResult> top_theta_levels(const StratifiedKB& kb, const Formula& evidence);

/// The widest level whose models all satisfy `query`, i.e. the largest
/// theta such that the top-theta worlds entail it; nullopt when no level
/// entails the query.
std::optional<TopThetaResult> top_theta_entails(const StratifiedKB& kb, const Formula& evidence,
                                                const Formula& query);

/// Exact probability of `query` under the distribution encoded by a
/// probabilistic base:
///   P(query) = M_1 + sum_i (1 - w_i) * (M_{i+1} - M_i)
/// over the base's distinct weights w_1 < ... < w_k, where M_i counts the
/// models of the clauses of weight >= w_i together with the query and
/// M_{k+1} counts the models of the query alone (the M_1 term carries the
/// query worlds that violate nothing). Throws NotProbabilisticError unless
/// the base is flagged probabilistic.
Rational marginal(const StratifiedKB& kb, const Formula& query);

/// Line-oriented reports used by the command-line front end.
std::string render_map_report(const MapResult& r);
std::string render_top_report(const std::optional<TopThetaResult>& r);
std::string render_marginal_report(const Rational& value);

}  // namespace poskb
