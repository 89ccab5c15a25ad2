#pragma once

#include "poskb/errors.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace poskb {

/// Ordered list of distinct atom names. Atom order is significant: it fixes
/// world bit layout, solver branching order and report rendering. Cheap to
/// copy (shared immutable state).
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> atoms);

  /// [A-Za-z_][A-Za-z0-9_]*, not a keyword (true/false).
  static bool valid_atom_name(std::string_view name);

  std::size_t size() const { return data_->atoms.size(); }
  const std::vector<std::string>& atoms() const { return data_->atoms; }
  const std::string& name(std::size_t index) const { return data_->atoms.at(index); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const Vocabulary& other) const;
  bool operator!=(const Vocabulary& other) const { return !(*this == other); }

 private:
  struct Data {
    std::vector<std::string> atoms;
    std::map<std::string, std::size_t, std::less<>> index;
  };
  std::shared_ptr<const Data> data_;
};

/// Truth assignment over a vocabulary, packed as a bit pattern:
/// atom i corresponds to bit i (atom 0 is the least significant bit).
/// Vocabularies are capped at 64 atoms so a world always fits a word.
class World {
 public:
  World(Vocabulary vocab, std::uint64_t bits);

  bool value(std::size_t atom_index) const;
  bool value(std::string_view atom) const;  // throws UnknownAtomError
  World with(std::size_t atom_index, bool v) const;

  std::uint64_t bits() const { return bits_; }
  const Vocabulary& vocab() const { return vocab_; }

 private:
  Vocabulary vocab_;
  std::uint64_t bits_;
};

enum class FormulaKind { True, False, Atom, Not, And, Or, Implies };

/// Immutable propositional formula. Connectives: ! & | -> with n-ary
/// And/Or. Structurally shared; cheap to copy.
class Formula {
 public:
  static Formula make_true();
  static Formula make_false();
  static Formula atom(std::string name);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> parts);  // n >= 1
  static Formula disj(std::vector<Formula> parts);  // n >= 1
  static Formula implies(Formula antecedent, Formula consequent);

  FormulaKind kind() const { return node_->kind; }
  const std::string& atom_name() const;                  // Atom only
  const std::vector<Formula>& children() const;           // Not/And/Or/Implies

  /// Structural equality.
  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  struct Node {
    FormulaKind kind;
    std::string atom;
    std::vector<Formula> kids;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses formula text against a vocabulary.
/// Grammar (loosest to tightest): `->` (right-associative), `|`, `&`, `!`;
/// parentheses; keywords `true` / `false`; atom names from the vocabulary.
/// Throws ParseError (with character offset) or UnknownAtomError.
Formula parse_formula(std::string_view text, const Vocabulary& vocab);

/// Canonical text with minimal parentheses; parse(render(f)) is logically
/// equivalent to f (and structurally identical for parser-produced trees).
std::string render_formula(const Formula& f);

/// Truth value under a world. Every atom in f must be in the world's
/// vocabulary (UnknownAtomError otherwise).
bool evaluate(const Formula& f, const World& w);

/// Atom index plus polarity. `positive` means the atom itself.
struct Literal {
  std::size_t atom;
  bool positive;

  Literal complement() const { return {atom, !positive}; }
  bool operator==(const Literal& o) const { return atom == o.atom && positive == o.positive; }
  bool operator!=(const Literal& o) const { return !(*this == o); }
  bool operator<(const Literal& o) const {
    return atom != o.atom ? atom < o.atom : positive < o.positive;
  }
};

/// Disjunction of literals. Never contains duplicate literals and is never
/// tautological (no atom in both polarities); the empty clause is falsum.
/// Literal order is preserved from construction (first occurrence wins) and
/// matters only for display; equality is set equality.
class Clause {
 public:
  /// nullopt iff the literals form a tautology.
  static std::optional<Clause> make(const std::vector<Literal>& literals);
  static Clause make_empty() { return Clause({}); }

  const std::vector<Literal>& literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }
  bool empty() const { return literals_.empty(); }
  bool contains(Literal l) const;

  /// Copy with the literal at `position` removed.
  Clause without(std::size_t position) const;

  /// Literals sorted by (atom, polarity) — the canonical key.
  std::vector<Literal> sorted() const;

  bool operator==(const Clause& o) const;  // set equality
  bool operator!=(const Clause& o) const { return !(*this == o); }

  /// Set inclusion of literals.
  bool subset_of(const Clause& o) const;

 private:
  explicit Clause(std::vector<Literal> lits) : literals_(std::move(lits)) {}
  std::vector<Literal> literals_;
};

/// Conjunctive normal form by negation push-down and distribution (no
/// auxiliary atoms, so models are preserved exactly). Tautological clauses
/// and duplicate clauses are dropped. True yields {}, False yields {empty}.
std::vector<Clause> to_cnf(const Formula& f, const Vocabulary& vocab);

/// Empty clause renders as falsum, a unit clause as its literal, anything
/// longer as a disjunction (literal order preserved).
Formula clause_to_formula(const Clause& c, const Vocabulary& vocab);

bool evaluate(const Clause& c, const World& w);

}  // namespace poskb
