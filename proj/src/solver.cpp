#include "poskb/solver.hpp"

#include <algorithm>
#include <set>

namespace poskb {

ClauseSet::ClauseSet(Vocabulary vocab, const std::vector<Clause>& clauses)
    : vocab_(std::move(vocab)) {
  for (const Clause& c : clauses) add(c);
}

void ClauseSet::add(const Clause& c) {
  for (const Literal& l : c.literals()) {
    if (l.atom >= vocab_.size()) throw Error("clause literal outside vocabulary");
  }
  for (const Clause& have : clauses_) {
    if (have == c) return;
  }
  clauses_.push_back(c);
}

namespace {

constexpr signed char kUnassigned = -1;

// Shared DPLL core. Assignments are per-branch copies; at this project's
// problem sizes (<= 64 atoms, small clause sets) plain rescanning beats
// any bookkeeping cleverness worth maintaining.
struct Dpll {
  const std::vector<Clause>& clauses;
  std::size_t atom_count;

  // Unit propagation to fixpoint. Returns false on conflict.
  bool propagate(std::vector<signed char>& assign) const {
    bool progress = true;
    while (progress) {
      progress = false;
      for (const Clause& c : clauses) {
        const Literal* unit = nullptr;
        bool satisfied = false;
        int unassigned = 0;
        for (const Literal& l : c.literals()) {
          signed char v = assign[l.atom];
          if (v == kUnassigned) {
            ++unassigned;
            unit = &l;
          } else if ((v == 1) == l.positive) {
            satisfied = true;
            break;
          }
        }
        if (satisfied) continue;
        if (unassigned == 0) return false;  // all literals false
        if (unassigned == 1) {
          assign[unit->atom] = unit->positive ? 1 : 0;
          progress = true;
        }
      }
    }
    return true;
  }

  bool clause_satisfied(const Clause& c, const std::vector<signed char>& assign) const {
    for (const Literal& l : c.literals()) {
      if (assign[l.atom] == (l.positive ? 1 : 0)) return true;
    }
    return false;
  }

  bool all_satisfied(const std::vector<signed char>& assign) const {
    for (const Clause& c : clauses) {
      if (!clause_satisfied(c, assign)) return false;
    }
    return true;
  }

  // Assigns atoms that occur with a single polarity across the clauses not
  // yet satisfied. Sound for satisfiability only, never used for counting.
  bool assign_pure_literals(std::vector<signed char>& assign) const {
    // polarity mask per atom: bit0 positive occurrence, bit1 negative
    std::vector<unsigned char> seen(atom_count, 0);
    for (const Clause& c : clauses) {
      if (clause_satisfied(c, assign)) continue;
      for (const Literal& l : c.literals()) {
        if (assign[l.atom] == kUnassigned) seen[l.atom] |= l.positive ? 1 : 2;
      }
    }
    bool any = false;
    for (std::size_t a = 0; a < atom_count; ++a) {
      if (seen[a] == 1 || seen[a] == 2) {
        assign[a] = seen[a] == 1 ? 1 : 0;
        any = true;
      }
    }
    return any;
  }

  bool solve(std::vector<signed char> assign) const {
    while (true) {
      if (!propagate(assign)) return false;
      if (all_satisfied(assign)) {
        model = assign;
        return true;
      }
      if (!assign_pure_literals(assign)) break;
    }
    // Branch on the lowest unassigned atom, true first.
    std::size_t pick = atom_count;
    for (std::size_t a = 0; a < atom_count; ++a) {
      if (assign[a] == kUnassigned) {
        pick = a;
        break;
      }
    }
    if (pick == atom_count) return false;  // fully assigned yet unsatisfied
    auto branch = assign;
    branch[pick] = 1;
    if (solve(branch)) return true;
    branch = std::move(assign);
    branch[pick] = 0;
    return solve(branch);
  }

  BigInt count(std::vector<signed char> assign) const {
    if (!propagate(assign)) return 0;
    std::size_t pick = atom_count;
    for (const Clause& c : clauses) {
      if (clause_satisfied(c, assign)) continue;
      for (const Literal& l : c.literals()) {
        if (assign[l.atom] == kUnassigned && l.atom < pick) pick = l.atom;
      }
    }
    if (pick == atom_count) {
      // Every clause satisfied: remaining atoms are free.
      unsigned free = 0;
      for (std::size_t a = 0; a < atom_count; ++a) {
        if (assign[a] == kUnassigned) ++free;
      }
      return pow2(free);
    }
    auto branch = assign;
    branch[pick] = 1;
    BigInt total = count(branch);
    branch = std::move(assign);
    branch[pick] = 0;
    total += count(branch);
    return total;
  }

  mutable std::vector<signed char> model;
};

}  // namespace

std::optional<World> is_satisfiable(const ClauseSet& cs, SatCallCounter* counter) {
  if (counter) ++counter->calls;
  Dpll dpll{cs.clauses(), cs.vocab().size()};
  if (!dpll.solve(std::vector<signed char>(cs.vocab().size(), kUnassigned))) return std::nullopt;
  std::uint64_t bits = 0;
  for (std::size_t a = 0; a < dpll.model.size(); ++a) {
    if (dpll.model[a] == 1) bits |= std::uint64_t{1} << a;  // unassigned -> false
  }
  return World(cs.vocab(), bits);
}

bool entails(const ClauseSet& cs, const Formula& goal) {
  ClauseSet question(cs.vocab(), cs.clauses());
  for (const Clause& c : to_cnf(Formula::negate(goal), cs.vocab())) question.add(c);
  return !is_satisfiable(question).has_value();
}

bool entails(const ClauseSet& cs, const Clause& goal) {
  ClauseSet question(cs.vocab(), cs.clauses());
  for (const Literal& l : goal.literals()) question.add(*Clause::make({l.complement()}));
  return !is_satisfiable(question).has_value();
}

BigInt count_models(const ClauseSet& cs) {
  for (const Clause& c : cs.clauses()) {
    if (c.empty()) return 0;
  }
  Dpll dpll{cs.clauses(), cs.vocab().size()};
  return dpll.count(std::vector<signed char>(cs.vocab().size(), kUnassigned));
}

std::string to_dimacs(const ClauseSet& cs) {
  std::string out = "p cnf " + std::to_string(cs.vocab().size()) + " " +
                    std::to_string(cs.clauses().size()) + "\n";
  for (const Clause& c : cs.clauses()) {
    for (const Literal& l : c.literals()) {
      if (!l.positive) out += '-';
      out += std::to_string(l.atom + 1);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

}  // namespace poskb
