#include "poskb/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

namespace poskb {

// --- Vocabulary -----------------------------------------------------------

Vocabulary::Vocabulary(std::vector<std::string> atoms) {
  if (atoms.size() > 64) throw Error("vocabulary too large (at most 64 atoms supported)");
  auto data = std::make_shared<Data>();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!valid_atom_name(atoms[i])) throw Error("invalid atom name '" + atoms[i] + "'");
    if (!data->index.emplace(atoms[i], i).second)
      throw Error("duplicate atom name '" + atoms[i] + "'");
  }
  data->atoms = std::move(atoms);
  data_ = std::move(data);
}

bool Vocabulary::valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  if (name == "true" || name == "false") return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  for (char c : name.substr(1)) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view name) const {
  auto it = data_->index.find(name);
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

bool Vocabulary::operator==(const Vocabulary& other) const {
  return data_ == other.data_ || data_->atoms == other.data_->atoms;
}

// --- World ------------------------------------------------------------------

World::World(Vocabulary vocab, std::uint64_t bits) : vocab_(std::move(vocab)), bits_(bits) {
  if (vocab_.size() < 64) bits_ &= (std::uint64_t{1} << vocab_.size()) - 1;
}

bool World::value(std::size_t atom_index) const {
  if (atom_index >= vocab_.size()) throw Error("atom index out of range");
  return (bits_ >> atom_index) & 1;
}

bool World::value(std::string_view atom) const {
  auto idx = vocab_.index_of(atom);
  if (!idx) throw UnknownAtomError(std::string(atom));
  return value(*idx);
}

World World::with(std::size_t atom_index, bool v) const {
  if (atom_index >= vocab_.size()) throw Error("atom index out of range");
  std::uint64_t bits = bits_;
  if (v)
    bits |= std::uint64_t{1} << atom_index;
  else
    bits &= ~(std::uint64_t{1} << atom_index);
  return World(vocab_, bits);
}

// --- Formula ----------------------------------------------------------------

Formula Formula::make_true() {
  static const auto node = std::make_shared<const Node>(Node{FormulaKind::True, {}, {}});
  return Formula(node);
}

Formula Formula::make_false() {
  static const auto node = std::make_shared<const Node>(Node{FormulaKind::False, {}, {}});
  return Formula(node);
}

Formula Formula::atom(std::string name) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Atom, std::move(name), {}}));
}

Formula Formula::negate(Formula f) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Not, {}, {std::move(f)}}));
}

Formula Formula::conj(std::vector<Formula> parts) {
  if (parts.empty()) throw Error("empty conjunction");
  if (parts.size() == 1) return parts.front();
  return Formula(std::make_shared<const Node>(Node{FormulaKind::And, {}, std::move(parts)}));
}

Formula Formula::disj(std::vector<Formula> parts) {
  if (parts.empty()) throw Error("empty disjunction");
  if (parts.size() == 1) return parts.front();
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Or, {}, std::move(parts)}));
}

Formula Formula::implies(Formula antecedent, Formula consequent) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Implies, {}, {std::move(antecedent), std::move(consequent)}}));
}

const std::string& Formula::atom_name() const {
  if (node_->kind != FormulaKind::Atom) throw Error("atom_name on non-atom");
  return node_->atom;
}

const std::vector<Formula>& Formula::children() const { return node_->kids; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return true;
    case FormulaKind::Atom:
      return node_->atom == other.node_->atom;
    default:
      break;
  }
  if (node_->kids.size() != other.node_->kids.size()) return false;
  for (std::size_t i = 0; i < node_->kids.size(); ++i) {
    if (!(node_->kids[i] == other.node_->kids[i])) return false;
  }
  return true;
}

// --- Parser -----------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& vocab) : text_(text), vocab_(vocab) {}

  Formula run() {
    Formula f = parse_implies();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool eat_arrow() {
    skip_ws();
    if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
      pos_ += 2;
      return true;
    }
    return false;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (eat_arrow()) return Formula::implies(std::move(lhs), parse_implies());  // right-assoc
    return lhs;
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (eat('|')) parts.push_back(parse_and());
    return Formula::disj(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_unary()};
    while (eat('&')) parts.push_back(parse_unary());
    return Formula::conj(std::move(parts));
  }

  Formula parse_unary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "expected a formula");
    char c = text_[pos_];
    if (c == '!') {
      ++pos_;
      return Formula::negate(parse_unary());
    }
    if (c == '(') {
      ++pos_;
      Formula inner = parse_implies();
      skip_ws();
      if (!eat(')')) throw ParseError(pos_, "expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string_view word = text_.substr(start, pos_ - start);
      if (word == "true") return Formula::make_true();
      if (word == "false") return Formula::make_false();
      if (!vocab_.index_of(word)) throw UnknownAtomError(std::string(word));
      return Formula::atom(std::string(word));
    }
    throw ParseError(pos_, "expected a formula");
  }

  std::string_view text_;
  const Vocabulary& vocab_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text, const Vocabulary& vocab) {
  return Parser(text, vocab).run();
}

// --- Rendering --------------------------------------------------------------

namespace {

// Binding strength; higher binds tighter. Implies is lowest, atoms highest.
int precedence(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Implies:
      return 0;
    case FormulaKind::Or:
      return 1;
    case FormulaKind::And:
      return 2;
    case FormulaKind::Not:
      return 3;
    default:
      return 4;
  }
}

void render(const Formula& f, int min_prec, std::string& out) {
  const bool parens = precedence(f) < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case FormulaKind::True:
      out += "true";
      break;
    case FormulaKind::False:
      out += "false";
      break;
    case FormulaKind::Atom:
      out += f.atom_name();
      break;
    case FormulaKind::Not:
      out += '!';
      render(f.children()[0], 3, out);
      break;
    case FormulaKind::And:
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += " & ";
        render(f.children()[i], 2, out);
      }
      break;
    case FormulaKind::Or:
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += " | ";
        render(f.children()[i], 1, out);
      }
      break;
    case FormulaKind::Implies:
      // Right-associative: the antecedent needs parens if it is itself
      // an implication; the consequent never does.
      render(f.children()[0], 1, out);
      out += " -> ";
      render(f.children()[1], 0, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string render_formula(const Formula& f) {
  std::string out;
  render(f, 0, out);
  return out;
}

// --- Evaluation -------------------------------------------------------------

bool evaluate(const Formula& f, const World& w) {
  switch (f.kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Atom:
      return w.value(f.atom_name());
    case FormulaKind::Not:
      return !evaluate(f.children()[0], w);
    case FormulaKind::And:
      for (const Formula& k : f.children())
        if (!evaluate(k, w)) return false;
      return true;
    case FormulaKind::Or:
      for (const Formula& k : f.children())
        if (evaluate(k, w)) return true;
      return false;
    case FormulaKind::Implies:
      return !evaluate(f.children()[0], w) || evaluate(f.children()[1], w);
  }
  throw Error("unreachable formula kind");
}

bool evaluate(const Clause& c, const World& w) {
  for (const Literal& l : c.literals()) {
    if (w.value(l.atom) == l.positive) return true;
  }
  return false;
}

// --- Clause -----------------------------------------------------------------

std::optional<Clause> Clause::make(const std::vector<Literal>& literals) {
  std::vector<Literal> kept;
  for (const Literal& l : literals) {
    bool dup = false;
    for (const Literal& k : kept) {
      if (k == l) {
        dup = true;
        break;
      }
      if (k.atom == l.atom) return std::nullopt;  // both polarities: tautology
    }
    if (!dup) kept.push_back(l);
  }
  return Clause(std::move(kept));
}

bool Clause::contains(Literal l) const {
  return std::find(literals_.begin(), literals_.end(), l) != literals_.end();
}

Clause Clause::without(std::size_t position) const {
  std::vector<Literal> lits = literals_;
  lits.erase(lits.begin() + static_cast<std::ptrdiff_t>(position));
  return Clause(std::move(lits));
}

std::vector<Literal> Clause::sorted() const {
  std::vector<Literal> lits = literals_;
  std::sort(lits.begin(), lits.end());
  return lits;
}

bool Clause::operator==(const Clause& o) const {
  return literals_.size() == o.literals_.size() && sorted() == o.sorted();
}

bool Clause::subset_of(const Clause& o) const {
  for (const Literal& l : literals_) {
    if (!o.contains(l)) return false;
  }
  return true;
}

// --- CNF --------------------------------------------------------------------

namespace {

using ClauseList = std::vector<Clause>;

void dedup(ClauseList& clauses) {
  std::set<std::vector<Literal>> seen;
  ClauseList out;
  for (Clause& c : clauses) {
    if (seen.insert(c.sorted()).second) out.push_back(std::move(c));
  }
  clauses = std::move(out);
}

// Clause set for the disjunction of two clause sets: pairwise merge,
// dropping tautologies. {} is verum and {empty} is falsum, so the
// identities x|true = true and x|false = x fall out of the cartesian
// product for free.
ClauseList combine_or(const ClauseList& a, const ClauseList& b) {
  ClauseList out;
  for (const Clause& ca : a) {
    for (const Clause& cb : b) {
      std::vector<Literal> merged = ca.literals();
      merged.insert(merged.end(), cb.literals().begin(), cb.literals().end());
      if (auto c = Clause::make(merged)) out.push_back(std::move(*c));
    }
  }
  dedup(out);
  return out;
}

ClauseList cnf(const Formula& f, bool positive, const Vocabulary& vocab) {
  switch (f.kind()) {
    case FormulaKind::True:
      return positive ? ClauseList{} : ClauseList{Clause::make_empty()};
    case FormulaKind::False:
      return positive ? ClauseList{Clause::make_empty()} : ClauseList{};
    case FormulaKind::Atom: {
      auto idx = vocab.index_of(f.atom_name());
      if (!idx) throw UnknownAtomError(f.atom_name());
      return {*Clause::make({Literal{*idx, positive}})};
    }
    case FormulaKind::Not:
      return cnf(f.children()[0], !positive, vocab);
    case FormulaKind::And:
    case FormulaKind::Or: {
      // And behaves conjunctively when positive, Or when negated.
      const bool conjunctive = (f.kind() == FormulaKind::And) == positive;
      if (conjunctive) {
        ClauseList out;
        for (const Formula& k : f.children()) {
          ClauseList part = cnf(k, positive, vocab);
          out.insert(out.end(), std::make_move_iterator(part.begin()),
                     std::make_move_iterator(part.end()));
        }
        dedup(out);
        return out;
      }
      ClauseList out{Clause::make_empty()};  // neutral element of |
      for (const Formula& k : f.children()) out = combine_or(out, cnf(k, positive, vocab));
      return out;
    }
    case FormulaKind::Implies: {
      const Formula& a = f.children()[0];
      const Formula& b = f.children()[1];
      if (positive) return combine_or(cnf(a, false, vocab), cnf(b, true, vocab));
      ClauseList out = cnf(a, true, vocab);
      ClauseList neg = cnf(b, false, vocab);
      out.insert(out.end(), std::make_move_iterator(neg.begin()),
                 std::make_move_iterator(neg.end()));
      dedup(out);
      return out;
    }
  }
  throw Error("unreachable formula kind");
}

}  // namespace

std::vector<Clause> to_cnf(const Formula& f, const Vocabulary& vocab) {
  return cnf(f, true, vocab);
}

Formula clause_to_formula(const Clause& c, const Vocabulary& vocab) {
  if (c.empty()) return Formula::make_false();
  std::vector<Formula> parts;
  parts.reserve(c.size());
  for (const Literal& l : c.literals()) {
    Formula a = Formula::atom(vocab.name(l.atom));
    parts.push_back(l.positive ? std::move(a) : Formula::negate(std::move(a)));
  }
  return Formula::disj(std::move(parts));
}

}  // namespace poskb
