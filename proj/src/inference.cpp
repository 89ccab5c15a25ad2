#include "poskb/inference.hpp"

#include <algorithm>
#include <set>

namespace poskb {

namespace {

struct WClause {
  Clause clause;
  Rational weight;
};

std::vector<WClause> weighted_clauses(const StratifiedKB& kb) {
  std::vector<WClause> out;
  for (const WeightedEntry& e : kb.entries()) {
    for (const Clause& c : e.cnf) out.push_back(WClause{c, e.weight});
  }
  return out;
}

ClauseSet clauses_above(const Vocabulary& vocab, const std::vector<WClause>& all,
                        const Rational& w) {
  ClauseSet cs(vocab);
  for (const WClause& x : all) {
    if (x.weight > w) cs.add(x.clause);
  }
  return cs;
}

ClauseSet clauses_at_least(const Vocabulary& vocab, const std::vector<WClause>& all,
                           const Rational& w) {
  ClauseSet cs(vocab);
  for (const WClause& x : all) {
    if (x.weight >= w) cs.add(x.clause);
  }
  return cs;
}

}  // namespace

MapResult map_cutoff(const StratifiedKB& kb, const Formula& evidence) {
  const Vocabulary& vocab = kb.vocab();
  SatCallCounter counter;

  auto evid_cnf = to_cnf(evidence, vocab);
  if (!is_satisfiable(ClauseSet(vocab, evid_cnf), &counter))
    throw InconsistentEvidenceError("evidence '" + render_formula(evidence) +
                                    "' is unsatisfiable");

  auto all = weighted_clauses(kb);

  // Only entry strata are ever dropped; the evidence stays in every base.
  auto with_evidence = [&](const Rational& w) {
    ClauseSet cs = clauses_above(vocab, all, w);
    for (const Clause& c : evid_cnf) cs.add(c);
    return cs;
  };

  std::set<Rational> distinct;
  for (const WClause& x : all) distinct.insert(x.weight);
  std::vector<Rational> candidates{0};
  candidates.insert(candidates.end(), distinct.begin(), distinct.end());  // ascending

  // Dropping strata only adds models, so consistency is monotone in the
  // cutoff and the minimal consistent one is found by binary search. The
  // top candidate needs no check: above the strongest weight only the
  // evidence is left, and it was just checked. Total: at most
  // ceil(log2(k+1)) checks plus the evidence check.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (is_satisfiable(with_evidence(candidates[mid]), &counter))
      hi = mid;
    else
      lo = mid + 1;
  }

  MapResult result{candidates[lo], with_evidence(candidates[lo]), false, 0};
  result.sat_calls = counter.calls;
  return result;
}

MapResult map_entails(const StratifiedKB& kb, const Formula& evidence, const Formula& query) {
  MapResult result = map_cutoff(kb, evidence);
  result.entailed = entails(result.base, query);
  return result;
}

std::vector<TopThetaResult> top_theta_levels(const StratifiedKB& kb, const Formula& evidence) {
  const Vocabulary& vocab = kb.vocab();
  MapResult mc = map_cutoff(kb, evidence);

  auto evid_cnf = to_cnf(evidence, vocab);
  auto all = weighted_clauses(kb);
  for (const Clause& c : evid_cnf) all.push_back(WClause{c, 1});

  std::set<Rational> distinct;
  for (const WClause& x : all) {
    if (x.weight > mc.cutoff) distinct.insert(x.weight);
  }

  const BigInt evidence_models = count_models(ClauseSet(vocab, evid_cnf));
  std::vector<TopThetaResult> out;
  for (const Rational& w : distinct) {  // ascending: weakest level first
    BigInt covered = count_models(clauses_at_least(vocab, all, w));
    out.push_back(TopThetaResult{w, Rational(covered, evidence_models), false});
  }
  return out;
}

std::optional<TopThetaResult> top_theta_entails(const StratifiedKB& kb, const Formula& evidence,
                                                const Formula& query) {
  const Vocabulary& vocab = kb.vocab();
  auto levels = top_theta_levels(kb, evidence);

  auto evid_cnf = to_cnf(evidence, vocab);
  auto all = weighted_clauses(kb);
  for (const Clause& c : evid_cnf) all.push_back(WClause{c, 1});

  // Level sets grow as levels weaken (toward the front), so entailment
  // holds on a prefix; report the weakest level in it — the largest world
  // coverage theta at which the query still holds everywhere.
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    if (entails(clauses_at_least(vocab, all, it->weight), query)) {
      TopThetaResult r = *it;
      r.entailed = true;
      return r;
    }
  }
  return std::nullopt;
}

Rational marginal(const StratifiedKB& kb, const Formula& query) {
  if (!kb.is_probabilistic())
    throw NotProbabilisticError(
        "marginals need a probabilistic base (@spkb true); this base is not flagged");
  const Vocabulary& vocab = kb.vocab();

  auto query_cnf = to_cnf(query, vocab);
  auto all = weighted_clauses(kb);
  std::set<Rational> distinct;
  for (const WeightedEntry& e : kb.entries()) distinct.insert(e.weight);
  std::vector<Rational> weights(distinct.begin(), distinct.end());  // ascending

  if (weights.empty())  // degenerate base: uniform possibility 1
    return Rational(count_models(ClauseSet(vocab, query_cnf)),
                    pow2(static_cast<unsigned>(vocab.size())));

  // M_i = models of (clauses of weight >= w_i, plus the query);
  // M_{k+1} = models of the query alone. A query world whose strongest
  // violated weight is w_i has probability 1 - w_i and is counted once in
  // M_{i+1} - M_i; worlds violating nothing have probability 1 and are
  // exactly the M_1 models, so
  //   P(query) = M_1 + sum_i (1 - w_i) * (M_{i+1} - M_i).
  const std::size_t k = weights.size();
  std::vector<BigInt> m(k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    ClauseSet cs = clauses_at_least(vocab, all, weights[i]);
    for (const Clause& c : query_cnf) cs.add(c);
    m[i] = count_models(cs);
  }
  m[k] = count_models(ClauseSet(vocab, query_cnf));

  Rational total(m[0]);
  for (std::size_t i = 0; i < k; ++i) total += (Rational(1) - weights[i]) * Rational(m[i + 1] - m[i]);
  return total;
}

// --- Reports --------------------------------------------------------------

std::string render_map_report(const MapResult& r) {
  std::string out = std::string("verdict: ") + (r.entailed ? "entailed" : "not-entailed") + "\n";
  out += "cutoff: " + format_rational(r.cutoff) + "\n";
  out += "base:\n";
  for (const Clause& c : r.base.clauses()) {
    out += "  " + render_formula(clause_to_formula(c, r.base.vocab())) + "\n";
  }
  return out;
}

std::string render_top_report(const std::optional<TopThetaResult>& r) {
  if (!r || !r->entailed) return "verdict: not-entailed\n";
  std::string out = "verdict: entailed\n";
  out += "level: " + format_rational(r->weight) + "\n";
  out += "theta: " + format_fraction(r->theta) + " (" + format_percent(r->theta) + ")\n";
  return out;
}

std::string render_marginal_report(const Rational& value) {
  std::string decimal = format_rational(value);
  if (decimal.find('/') != std::string::npos) {
    // No finite decimal form; give a six-digit approximation.
    BigInt scaled = boost::multiprecision::numerator(value) * 1000000 /
                    boost::multiprecision::denominator(value);
    Rational approx(scaled, 1000000);
    decimal = "~" + format_rational(approx);
  }
  return "marginal: " + format_fraction(value) + " (" + decimal + ")\n";
}

}  // namespace poskb
