#include "poskb/skb.hpp"

#include "poskb/inference.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace poskb {

// --- Stratification -----------------------------------------------------

ClauseSet Stratification::cumulative_set(std::size_t level) const {
  if (level >= weights_.size()) throw InvalidIndexError("stratum level out of range");
  return ClauseSet(vocab_, cumulative_[level]);
}

std::size_t Stratification::cumulative_entries(std::size_t level) const {
  if (level >= weights_.size()) throw InvalidIndexError("stratum level out of range");
  return cumulative_entries_[level];
}

// --- Construction ---------------------------------------------------------

namespace {

// Canonical duplicate key: the sorted literal set for clausal entries,
// the rendered text otherwise.
std::string duplicate_key(const WeightedEntry& e) {
  if (auto c = e.clause()) {
    std::string key = "c:";
    for (const Literal& l : c->sorted()) {
      key += l.positive ? '+' : '-';
      key += std::to_string(l.atom);
      key += ',';
    }
    return key;
  }
  return "f:" + render_formula(e.formula);
}

// Keep-first dedup by (key, weight). keep_map[i] gives the output index
// holding entry i's representative.
std::vector<WeightedEntry> dedup_entries(std::vector<WeightedEntry> entries,
                                         std::vector<std::size_t>* keep_map = nullptr) {
  std::map<std::pair<std::string, Rational>, std::size_t> seen;
  std::vector<WeightedEntry> out;
  if (keep_map) keep_map->assign(entries.size(), 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto key = std::make_pair(duplicate_key(entries[i]), entries[i].weight);
    auto [it, inserted] = seen.emplace(key, out.size());
    if (inserted) out.push_back(std::move(entries[i]));
    if (keep_map) (*keep_map)[i] = it->second;
  }
  return out;
}

void check_weight(const Rational& w) {
  if (w <= 0 || w > 1)
    throw InvalidWeightError("weight " + format_rational(w) + " outside (0, 1]");
}

}  // namespace

StratifiedKB::StratifiedKB(Vocabulary vocab, std::vector<std::pair<Formula, Rational>> entries,
                           bool probabilistic)
    : vocab_(std::move(vocab)), probabilistic_(probabilistic) {
  std::vector<WeightedEntry> built;
  built.reserve(entries.size());
  for (auto& [f, w] : entries) {
    check_weight(w);
    WeightedEntry e;
    e.formula = std::move(f);
    e.weight = std::move(w);
    e.cnf = to_cnf(e.formula, vocab_);
    built.push_back(std::move(e));
  }
  entries_ = dedup_entries(std::move(built));
  for (std::size_t i = 0; i < entries_.size(); ++i)
    entries_[i].id = static_cast<std::uint32_t>(i);
}

StratifiedKB StratifiedKB::from_parts(Vocabulary vocab, std::vector<WeightedEntry> entries,
                                      bool probabilistic, bool dirty) {
  StratifiedKB kb;
  kb.vocab_ = std::move(vocab);
  kb.entries_ = std::move(entries);
  kb.probabilistic_ = probabilistic;
  kb.dirty_ = dirty;
  return kb;
}

// --- Possibility ------------------------------------------------------------

Rational StratifiedKB::possibility(const World& w) const {
  if (w.vocab() != vocab_) throw Error("world vocabulary does not match the base");
  Rational worst = 0;
  for (const WeightedEntry& e : entries_) {
    if (e.weight > worst && !evaluate(e.formula, w)) worst = e.weight;
  }
  return Rational(1) - worst;
}

Stratification StratifiedKB::stratify() const {
  Stratification s(vocab_);
  std::set<Rational> distinct;
  for (const WeightedEntry& e : entries_) distinct.insert(e.weight);
  s.weights_.assign(distinct.rbegin(), distinct.rend());  // descending

  std::vector<Clause> running;
  std::size_t covered = 0;
  for (const Rational& w : s.weights_) {
    std::vector<std::size_t> stratum;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].weight == w) {
        stratum.push_back(i);
        running.insert(running.end(), entries_[i].cnf.begin(), entries_[i].cnf.end());
        ++covered;
      }
    }
    s.strata_.push_back(std::move(stratum));
    s.cumulative_.push_back(running);
    s.cumulative_entries_.push_back(covered);
  }
  return s;
}

// --- Exact pruning --------------------------------------------------------

namespace {

struct PruneItem {
  Clause clause;
  Rational weight;
  std::uint32_t id;
  std::set<std::uint32_t> support;
  Formula original_formula;
  Clause original_clause;
  bool alive = true;
  bool rewritten = false;
};

}  // namespace

StratifiedKB StratifiedKB::prune_exact() const {
  std::vector<PruneItem> items;
  items.reserve(entries_.size());
  for (const WeightedEntry& e : entries_) {
    auto c = e.clause();
    if (!c)
      throw NotClausalError("entry '" + render_formula(e.formula) +
                            "' does not normalize to a single clause");
    items.push_back(PruneItem{*c, e.weight, e.id,
                              std::set<std::uint32_t>(e.support.begin(), e.support.end()),
                              e.formula, *c});
  }

  // Indices of live items with weight >= lambda, optionally skipping one.
  auto cumulative = [&](const Rational& lambda, std::size_t skip) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i != skip && items[i].alive && items[i].weight >= lambda) out.push_back(i);
    }
    return out;
  };
  auto as_set = [&](const std::vector<std::size_t>& idxs) {
    ClauseSet cs(vocab_);
    for (std::size_t i : idxs) cs.add(items[i].clause);
    return cs;
  };
  // Greedily shrink a sufficient premise set; the result stays sufficient.
  auto minimize = [&](std::vector<std::size_t> pool, const Clause& target) {
    for (std::size_t i = 0; i < pool.size();) {
      std::vector<std::size_t> trial = pool;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      if (entails(as_set(trial), target))
        pool = std::move(trial);
      else
        ++i;
    }
    return pool;
  };

  constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);
  std::map<std::uint32_t, std::set<std::uint32_t>> deletion_support;

  bool changed = true;
  while (changed) {
    changed = false;
    std::set<Rational> distinct;
    for (const PruneItem& it : items)
      if (it.alive) distinct.insert(it.weight);

    for (auto wit = distinct.rbegin(); wit != distinct.rend(); ++wit) {  // strongest first
      const Rational& lambda = *wit;
      // Strengthening is sound only on a satisfiable stratum: if the
      // cumulative set is inconsistent it entails everything and would
      // license arbitrary literal drops. (The set's models never change
      // during pruning, so one check per stratum per pass suffices.)
      const bool stratum_sat = is_satisfiable(as_set(cumulative(lambda, kNoSkip))).has_value();

      for (std::size_t i = 0; i < items.size(); ++i) {
        if (!items[i].alive || items[i].weight != lambda) continue;

        // (a) Redundancy: entailed by the rest of its cumulative stratum.
        auto rest = cumulative(lambda, i);
        if (entails(as_set(rest), items[i].clause)) {
          items[i].alive = false;
          auto sup = minimize(rest, items[i].clause);
          auto& ids = deletion_support[items[i].id];
          for (std::size_t s : sup) ids.insert(items[s].id);
          changed = true;
          continue;
        }

        // (b) Literal strengthening: drop any literal whose removal is
        // entailed by the cumulative stratum (self included), trying the
        // rightmost literal first and restarting after each success.
        if (!stratum_sat) continue;
        bool again = true;
        while (again && items[i].clause.size() > 1) {
          again = false;
          auto full = cumulative(lambda, kNoSkip);
          for (std::size_t pos = items[i].clause.size(); pos-- > 0;) {
            Clause trimmed = items[i].clause.without(pos);
            if (!entails(as_set(full), trimmed)) continue;
            auto sup = minimize(full, trimmed);
            for (std::size_t s : sup) {
              if (items[s].id != items[i].id) items[i].support.insert(items[s].id);
            }
            items[i].clause = std::move(trimmed);
            items[i].rewritten = true;
            changed = true;
            again = true;
            break;
          }
        }
      }
    }
  }

  // Provenance closure: replace ids of deleted entries by the entries that
  // justified deleting them. A deleted entry's support only references
  // entries alive at its deletion, so the substitution terminates.
  auto close_support = [&](std::set<std::uint32_t> sup) {
    bool open = true;
    while (open) {
      open = false;
      for (auto it = sup.begin(); it != sup.end(); ++it) {
        auto del = deletion_support.find(*it);
        if (del != deletion_support.end()) {
          sup.erase(it);
          sup.insert(del->second.begin(), del->second.end());
          open = true;
          break;
        }
      }
    }
    return sup;
  };

  std::vector<WeightedEntry> out;
  for (PruneItem& it : items) {
    if (!it.alive) continue;
    WeightedEntry e;
    e.weight = it.weight;
    e.id = it.id;
    e.formula = it.rewritten ? clause_to_formula(it.clause, vocab_) : it.original_formula;
    e.cnf = {it.clause};
    auto sup = close_support(std::move(it.support));
    sup.erase(it.id);
    e.support.assign(sup.begin(), sup.end());
    out.push_back(std::move(e));
  }
  return from_parts(vocab_, std::move(out), probabilistic_, dirty_);
}

// --- Level merging ----------------------------------------------------------

StratifiedKB StratifiedKB::merge_top_levels(std::size_t target_levels) const {
  auto strat = stratify();
  const std::size_t k = strat.levels();
  if (target_levels < 1 || target_levels > k)
    throw InvalidLevelsError("target of " + std::to_string(target_levels) +
                             " levels outside [1, " + std::to_string(k) + "]");
  if (target_levels == k) return *this;

  const Rational top = strat.weights().front();
  const Rational threshold = strat.weights()[k - target_levels];  // weakest merged weight
  std::vector<WeightedEntry> out = entries_;
  for (WeightedEntry& e : out) {
    if (e.weight >= threshold) e.weight = top;
  }
  return from_parts(vocab_, dedup_entries(std::move(out)), /*probabilistic=*/false, dirty_);
}

// --- Implication reading ------------------------------------------------

std::vector<std::pair<Formula, Rational>> StratifiedKB::to_implications() const {
  std::vector<std::pair<Formula, Rational>> out;
  out.reserve(entries_.size());
  for (const WeightedEntry& e : entries_) {
    auto c = e.clause();
    if (!c || c->size() <= 1) {
      out.emplace_back(e.formula, e.weight);
      continue;
    }
    const auto& lits = c->literals();
    auto literal_formula = [&](const Literal& l) {
      Formula a = Formula::atom(vocab_.name(l.atom));
      return l.positive ? a : Formula::negate(a);
    };
    auto attempt = [&](std::size_t pos) -> std::optional<Formula> {
      std::vector<Formula> premise;
      for (std::size_t q = 0; q < lits.size(); ++q) {
        if (q != pos) premise.push_back(literal_formula(lits[q].complement()));
      }
      Formula antecedent = Formula::conj(std::move(premise));
      Formula consequent = literal_formula(lits[pos]);
      if (map_entails(*this, antecedent, consequent).entailed)
        return Formula::implies(antecedent, consequent);
      return std::nullopt;
    };
    std::optional<Formula> found;
    for (std::size_t pos = lits.size(); pos-- > 0 && !found;) {
      if (lits[pos].positive) found = attempt(pos);
    }
    for (std::size_t pos = lits.size(); pos-- > 0 && !found;) {
      if (!lits[pos].positive) found = attempt(pos);
    }
    out.emplace_back(found ? *found : e.formula, e.weight);
  }
  return out;
}

// --- Edits --------------------------------------------------------------

StratifiedKB::EditResult StratifiedKB::remove_entry(std::size_t index) const {
  if (index >= entries_.size())
    throw InvalidIndexError("entry index " + std::to_string(index) + " out of range (0.." +
                            std::to_string(entries_.size() ? entries_.size() - 1 : 0) + ")");
  const std::uint32_t removed = entries_[index].id;
  std::vector<WeightedEntry> out;
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i == index) continue;
    const WeightedEntry& e = entries_[i];
    if (std::find(e.support.begin(), e.support.end(), removed) != e.support.end()) {
      warnings.push_back("entry '" + render_formula(e.formula) + "' (weight " +
                         format_rational(e.weight) +
                         ") was strengthened using the removed entry; re-run prune to restore "
                         "exactness");
    }
    out.push_back(e);
  }
  return EditResult{from_parts(vocab_, std::move(out), /*probabilistic=*/false, /*dirty=*/true),
                    std::move(warnings)};
}

StratifiedKB StratifiedKB::swap_certainty(std::size_t i, std::size_t j) const {
  if (i >= entries_.size() || j >= entries_.size())
    throw InvalidIndexError("entry index out of range");
  if (i == j) return *this;
  std::vector<WeightedEntry> out = entries_;
  std::swap(out[i].weight, out[j].weight);
  return from_parts(vocab_, dedup_entries(std::move(out)), /*probabilistic=*/false,
                    /*dirty=*/true);
}

// --- Validation ---------------------------------------------------------

Rational StratifiedKB::validate_spkb(std::size_t max_atoms) const {
  if (vocab_.size() > max_atoms)
    throw VocabTooLargeError("refusing exhaustive check over " + std::to_string(vocab_.size()) +
                             " atoms (limit " + std::to_string(max_atoms) + ")");
  Rational sum = 0;
  const std::uint64_t worlds = std::uint64_t{1} << vocab_.size();
  for (std::uint64_t bits = 0; bits < worlds; ++bits) sum += possibility(World(vocab_, bits));
  return sum;
}

bool equal_possibility(const StratifiedKB& a, const StratifiedKB& b, std::size_t max_atoms) {
  if (a.vocab() != b.vocab()) throw Error("bases have different vocabularies");
  if (a.vocab().size() > max_atoms)
    throw VocabTooLargeError("refusing exhaustive check over " +
                             std::to_string(a.vocab().size()) + " atoms (limit " +
                             std::to_string(max_atoms) + ")");
  const std::uint64_t worlds = std::uint64_t{1} << a.vocab().size();
  for (std::uint64_t bits = 0; bits < worlds; ++bits) {
    World w(a.vocab(), bits);
    if (a.possibility(w) != b.possibility(w)) return false;
  }
  return true;
}

// --- Text format ----------------------------------------------------------

void save_kb(const StratifiedKB& kb, std::ostream& out) {
  out << "@atoms ";
  const auto& atoms = kb.vocab().atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out << ", ";
    out << atoms[i];
  }
  out << "\n@spkb " << (kb.is_probabilistic() ? "true" : "false") << "\n";
  if (kb.dirty()) out << "# @dirty\n";

  std::map<std::uint32_t, std::size_t> index_of_id;
  for (std::size_t i = 0; i < kb.entries().size(); ++i) index_of_id[kb.entries()[i].id] = i;
  for (std::size_t i = 0; i < kb.entries().size(); ++i) {
    const WeightedEntry& e = kb.entries()[i];
    std::vector<std::size_t> refs;
    for (std::uint32_t id : e.support) {
      auto it = index_of_id.find(id);
      if (it != index_of_id.end()) refs.push_back(it->second);
    }
    if (refs.empty()) continue;
    std::sort(refs.begin(), refs.end());
    out << "# @prune " << i << " used ";
    for (std::size_t r = 0; r < refs.size(); ++r) {
      if (r) out << ", ";
      out << refs[r];
    }
    out << "\n";
  }
  for (const WeightedEntry& e : kb.entries()) {
    out << format_rational(e.weight) << " :: " << render_formula(e.formula) << "\n";
  }
}

std::string kb_to_string(const StratifiedKB& kb) {
  std::ostringstream out;
  save_kb(kb, out);
  return out.str();
}

namespace {

std::string trim_view(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::size_t> parse_index_list(const std::string& text, std::size_t lineno) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    piece = trim_view(piece);
    if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos)
      throw KbFormatError("line " + std::to_string(lineno) + ": bad entry index '" + piece + "'");
    out.push_back(std::stoul(piece));
  }
  if (out.empty())
    throw KbFormatError("line " + std::to_string(lineno) + ": empty entry index list");
  return out;
}

}  // namespace

StratifiedKB load_kb(std::istream& in) {
  std::optional<Vocabulary> vocab;
  bool probabilistic = false;
  bool dirty = false;
  struct RawEntry {
    Formula formula;
    Rational weight;
    std::size_t lineno;
  };
  std::vector<RawEntry> raw;
  std::map<std::size_t, std::vector<std::size_t>> prune_refs;  // entry index -> used indices

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim_view(line);
    if (t.empty()) continue;

    if (t.rfind("@atoms", 0) == 0) {
      if (vocab) throw KbFormatError("line " + std::to_string(lineno) + ": duplicate @atoms");
      std::vector<std::string> names;
      std::istringstream rest(t.substr(6));
      std::string piece;
      while (std::getline(rest, piece, ',')) {
        piece = trim_view(piece);
        if (!piece.empty()) names.push_back(piece);
      }
      try {
        vocab.emplace(std::move(names));
      } catch (const Error& e) {
        throw KbFormatError("line " + std::to_string(lineno) + ": " + e.what());
      }
      continue;
    }
    if (t.rfind("@spkb", 0) == 0) {
      std::string v = trim_view(t.substr(5));
      if (v == "true")
        probabilistic = true;
      else if (v == "false")
        probabilistic = false;
      else
        throw KbFormatError("line " + std::to_string(lineno) + ": @spkb expects true or false");
      continue;
    }
    if (t[0] == '#') {
      std::string c = trim_view(t.substr(1));
      if (c == "@dirty") {
        dirty = true;
      } else if (c.rfind("@prune", 0) == 0) {
        std::string body = trim_view(c.substr(6));
        auto used_at = body.find("used");
        if (used_at == std::string::npos)
          throw KbFormatError("line " + std::to_string(lineno) + ": malformed @prune comment");
        auto target = parse_index_list(trim_view(body.substr(0, used_at)), lineno);
        if (target.size() != 1)
          throw KbFormatError("line " + std::to_string(lineno) + ": malformed @prune comment");
        auto used = parse_index_list(trim_view(body.substr(used_at + 4)), lineno);
        auto& refs = prune_refs[target[0]];
        refs.insert(refs.end(), used.begin(), used.end());
      }
      continue;  // ordinary comment
    }

    auto sep = line.find("::");
    if (sep == std::string::npos)
      throw KbFormatError("line " + std::to_string(lineno) + ": expected 'weight :: formula'");
    if (!vocab)
      throw KbFormatError("line " + std::to_string(lineno) + ": entry before @atoms header");
    Rational w;
    try {
      w = parse_rational(trim_view(line.substr(0, sep)));
    } catch (const InvalidWeightError& e) {
      throw KbFormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (w <= 0 || w > 1)
      throw KbFormatError("line " + std::to_string(lineno) + ": weight " + format_rational(w) +
                          " outside (0, 1]");
    try {
      raw.push_back(RawEntry{parse_formula(line.substr(sep + 2), *vocab), w, lineno});
    } catch (const Error& e) {
      throw KbFormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!vocab) throw KbFormatError("missing @atoms header");

  for (const auto& [target, used] : prune_refs) {
    if (target >= raw.size())
      throw KbFormatError("@prune references entry " + std::to_string(target) + " but only " +
                          std::to_string(raw.size()) + " entries are present");
    for (std::size_t u : used) {
      if (u >= raw.size())
        throw KbFormatError("@prune references entry " + std::to_string(u) + " but only " +
                            std::to_string(raw.size()) + " entries are present");
    }
  }

  std::vector<WeightedEntry> entries;
  entries.reserve(raw.size());
  for (auto& r : raw) {
    WeightedEntry e;
    e.formula = std::move(r.formula);
    e.weight = std::move(r.weight);
    e.cnf = to_cnf(e.formula, *vocab);
    entries.push_back(std::move(e));
  }
  // Duplicates collapse to their first occurrence; provenance references
  // follow the representative.
  std::vector<std::size_t> keep_map;
  entries = dedup_entries(std::move(entries), &keep_map);
  for (std::size_t i = 0; i < entries.size(); ++i)
    entries[i].id = static_cast<std::uint32_t>(i);
  for (const auto& [target, used] : prune_refs) {
    WeightedEntry& e = entries[keep_map[target]];
    std::set<std::uint32_t> sup(e.support.begin(), e.support.end());
    for (std::size_t u : used) {
      auto rep = static_cast<std::uint32_t>(keep_map[u]);
      if (rep != e.id) sup.insert(rep);
    }
    e.support.assign(sup.begin(), sup.end());
  }
  return StratifiedKB::from_parts(*vocab, std::move(entries), probabilistic, dirty);
}

StratifiedKB load_kb_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw KbFormatError("cannot open '" + path + "'");
  return load_kb(in);
}

}  // namespace poskb
