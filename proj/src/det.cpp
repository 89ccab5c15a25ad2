#include "poskb/det.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace poskb {

// --- CSV ----------------------------------------------------------------

namespace {

std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(trim_copy(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim_copy(cur));
  return out;
}

std::string chomp(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

DataSet load_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty csv: missing header row");
  auto names = split_fields(chomp(line), ',');
  std::optional<Vocabulary> vocab;
  try {
    vocab.emplace(names);
  } catch (const Error& e) {
    throw CsvError(std::string("bad header: ") + e.what());
  }

  std::vector<std::uint64_t> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = chomp(line);
    if (trim_copy(line).empty()) continue;
    auto cells = split_fields(line, ',');
    if (cells.size() != vocab->size())
      throw CsvError("line " + std::to_string(lineno) + ": expected " +
                     std::to_string(vocab->size()) + " cells, got " + std::to_string(cells.size()));
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i] == "1")
        bits |= std::uint64_t{1} << i;
      else if (cells[i] != "0")
        throw CsvError("line " + std::to_string(lineno) + ": cell '" + cells[i] +
                       "' is not 0 or 1");
    }
    rows.push_back(bits);
  }
  if (rows.empty()) throw CsvError("empty dataset: no observation rows");
  return DataSet{*vocab, std::move(rows)};
}

DataSet load_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path + "'");
  return load_csv(in);
}

// --- DensityTree ----------------------------------------------------------

DensityTree::NodePtr DensityTree::leaf(Rational p) {
  auto n = std::make_shared<Node>();
  n->p = std::move(p);
  return n;
}

DensityTree::NodePtr DensityTree::internal(std::size_t split_atom, NodePtr when_false,
                                           NodePtr when_true) {
  if (!when_false || !when_true) throw Error("internal node requires two children");
  auto n = std::make_shared<Node>();
  n->split_atom = split_atom;
  n->when_false = std::move(when_false);
  n->when_true = std::move(when_true);
  return n;
}

namespace {

void check_node(const DensityTree::Node& node, const Vocabulary& vocab, std::uint64_t used,
                unsigned depth, Rational& mass) {
  if (node.is_leaf()) {
    if (node.p < 0 || node.p > 1)
      throw TreeFormatError("leaf probability " + format_rational(node.p) + " outside [0, 1]");
    // Each leaf covers 2^(atoms - depth) worlds of probability p each.
    mass += node.p * Rational(pow2(static_cast<unsigned>(vocab.size()) - depth));
    return;
  }
  if (node.split_atom >= vocab.size()) throw TreeFormatError("split atom index out of range");
  std::uint64_t bit = std::uint64_t{1} << node.split_atom;
  if (used & bit)
    throw TreeFormatError("atom '" + vocab.name(node.split_atom) + "' split twice on one path");
  check_node(*node.when_false, vocab, used | bit, depth + 1, mass);
  check_node(*node.when_true, vocab, used | bit, depth + 1, mass);
}

}  // namespace

DensityTree::DensityTree(Vocabulary vocab, NodePtr root)
    : vocab_(std::move(vocab)), root_(std::move(root)) {
  if (!root_) throw TreeFormatError("tree has no root");
  Rational mass = 0;
  check_node(*root_, vocab_, 0, 0, mass);
  if (mass != 1)
    throw TreeFormatError("tree densities sum to " + format_rational(mass) + ", expected 1");
}

namespace {

std::size_t count_leaves(const DensityTree::Node& n) {
  if (n.is_leaf()) return 1;
  return count_leaves(*n.when_false) + count_leaves(*n.when_true);
}

unsigned node_depth(const DensityTree::Node& n) {
  if (n.is_leaf()) return 0;
  return 1 + std::max(node_depth(*n.when_false), node_depth(*n.when_true));
}

bool nodes_equal(const DensityTree::Node& a, const DensityTree::Node& b) {
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.p == b.p;
  return a.split_atom == b.split_atom && nodes_equal(*a.when_false, *b.when_false) &&
         nodes_equal(*a.when_true, *b.when_true);
}

}  // namespace

std::size_t DensityTree::leaf_count() const { return count_leaves(*root_); }

unsigned DensityTree::depth() const { return node_depth(*root_); }

Rational DensityTree::world_density(const World& w) const {
  if (w.vocab() != vocab_) throw Error("world vocabulary does not match the tree");
  const Node* n = root_.get();
  while (!n->is_leaf()) n = (w.value(n->split_atom) ? n->when_true : n->when_false).get();
  return n->p;
}

namespace {

void collect_branches(const DensityTree::Node& n, std::vector<Literal>& path,
                      std::vector<Branch>& out) {
  if (n.is_leaf()) {
    out.push_back(Branch{path, n.p});
    return;
  }
  path.push_back(Literal{n.split_atom, false});
  collect_branches(*n.when_false, path, out);
  path.back() = Literal{n.split_atom, true};
  collect_branches(*n.when_true, path, out);
  path.pop_back();
}

}  // namespace

std::vector<Branch> DensityTree::branches() const {
  std::vector<Branch> out;
  std::vector<Literal> path;
  collect_branches(*root_, path, out);
  return out;
}

bool DensityTree::operator==(const DensityTree& other) const {
  return vocab_ == other.vocab_ && nodes_equal(*root_, *other.root_);
}

// --- Learning ---------------------------------------------------------------

namespace {

DensityTree::NodePtr learn_node(const std::vector<std::uint64_t>& rows, unsigned depth,
                                std::uint64_t used, const DataSet& data, unsigned max_depth,
                                std::size_t min_leaf_rows) {
  const std::size_t n_atoms = data.vocab.size();
  const unsigned long long n = rows.size();

  if (depth < max_depth && rows.size() >= min_leaf_rows) {
    // The squared-error criterion at a fixed node reduces to maximizing
    // n_false^2 + n_true^2; strict improvement over no split means
    // 2 * (n_false^2 + n_true^2) > n^2, so an even split never wins.
    unsigned long long best_score = 0;
    std::size_t best_atom = n_atoms;
    for (std::size_t a = 0; a < n_atoms; ++a) {
      if (used & (std::uint64_t{1} << a)) continue;
      unsigned long long n1 = 0;
      for (std::uint64_t r : rows) n1 += (r >> a) & 1;
      unsigned long long n0 = n - n1;
      unsigned long long score = n0 * n0 + n1 * n1;
      if (best_atom == n_atoms || score > best_score) {  // ties keep the lowest atom
        best_score = score;
        best_atom = a;
      }
    }
    if (best_atom < n_atoms && 2 * best_score > n * n) {
      std::vector<std::uint64_t> rows_false, rows_true;
      for (std::uint64_t r : rows) ((r >> best_atom) & 1 ? rows_true : rows_false).push_back(r);
      std::uint64_t bit = std::uint64_t{1} << best_atom;
      return DensityTree::internal(
          best_atom,
          learn_node(rows_false, depth + 1, used | bit, data, max_depth, min_leaf_rows),
          learn_node(rows_true, depth + 1, used | bit, data, max_depth, min_leaf_rows));
    }
  }
  // p = (rows / N) / 2^(atoms - depth), exactly.
  Rational p(BigInt(rows.size()),
             BigInt(data.size()) * pow2(static_cast<unsigned>(n_atoms) - depth));
  return DensityTree::leaf(p);
}

}  // namespace

DensityTree learn_tree(const DataSet& data, unsigned max_depth, std::size_t min_leaf_rows) {
  if (data.rows.empty()) throw Error("cannot learn from an empty dataset");
  if (min_leaf_rows < 1) throw Error("min_leaf_rows must be at least 1");
  auto root = learn_node(data.rows, 0, 0, data, max_depth, min_leaf_rows);
  return DensityTree(data.vocab, std::move(root));
}

// --- Compilation ------------------------------------------------------------

StratifiedKB tree_to_skb(const DensityTree& tree) {
  std::vector<std::pair<Formula, Rational>> entries;
  for (const Branch& b : tree.branches()) {
    if (b.p == 1) continue;  // never-violated branch carries no information
    std::vector<Literal> lits;
    lits.reserve(b.path.size());
    for (const Literal& l : b.path) lits.push_back(l.complement());
    auto clause = Clause::make(lits);  // path atoms are distinct, never a tautology
    entries.emplace_back(clause_to_formula(*clause, tree.vocab()), Rational(1) - b.p);
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return StratifiedKB(tree.vocab(), std::move(entries), /*probabilistic=*/true);
}

// --- JSON persistence ---------------------------------------------------

namespace {

using Json = nlohmann::ordered_json;

Json node_to_json(const DensityTree::Node& n, const Vocabulary& vocab) {
  Json j;
  if (n.is_leaf()) {
    j["p"] = format_rational(n.p);
    return j;
  }
  j["split"] = vocab.name(n.split_atom);
  j["f"] = node_to_json(*n.when_false, vocab);
  j["t"] = node_to_json(*n.when_true, vocab);
  return j;
}

DensityTree::NodePtr node_from_json(const Json& j, const Vocabulary& vocab) {
  if (!j.is_object()) throw TreeFormatError("tree node must be an object");
  if (j.contains("p")) {
    if (!j["p"].is_string()) throw TreeFormatError("leaf probability must be a string rational");
    try {
      return DensityTree::leaf(parse_rational(j["p"].get<std::string>()));
    } catch (const InvalidWeightError& e) {
      throw TreeFormatError(e.what());
    }
  }
  if (!j.contains("split") || !j.contains("f") || !j.contains("t"))
    throw TreeFormatError("internal node needs 'split', 'f' and 't'");
  if (!j["split"].is_string()) throw TreeFormatError("'split' must be an atom name");
  auto idx = vocab.index_of(j["split"].get<std::string>());
  if (!idx) throw TreeFormatError("unknown split atom '" + j["split"].get<std::string>() + "'");
  return DensityTree::internal(*idx, node_from_json(j["f"], vocab),
                               node_from_json(j["t"], vocab));
}

}  // namespace

std::string tree_to_json(const DensityTree& tree) {
  Json doc;
  doc["atoms"] = tree.vocab().atoms();
  doc["root"] = node_to_json(*tree.root(), tree.vocab());
  return doc.dump(2) + "\n";
}

DensityTree tree_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw TreeFormatError(std::string("invalid json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("atoms") || !doc.contains("root"))
    throw TreeFormatError("tree document needs 'atoms' and 'root'");
  if (!doc["atoms"].is_array()) throw TreeFormatError("'atoms' must be an array of names");
  std::vector<std::string> names;
  for (const auto& a : doc["atoms"]) {
    if (!a.is_string()) throw TreeFormatError("'atoms' must be an array of names");
    names.push_back(a.get<std::string>());
  }
  std::optional<Vocabulary> vocab;
  try {
    vocab.emplace(std::move(names));
  } catch (const Error& e) {
    throw TreeFormatError(e.what());
  }
  return DensityTree(*vocab, node_from_json(doc["root"], *vocab));
}

DensityTree load_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TreeFormatError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return tree_from_json(buf.str());
}

}  // namespace poskb
