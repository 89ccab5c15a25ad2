#pragma once

#include "poskb/formula.hpp"
#include "poskb/rational.hpp"
#include "poskb/skb.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace poskb {

/// Rows of complete binary observations over a vocabulary, packed like
/// worlds (column i = bit i).
struct DataSet {
  Vocabulary vocab;
  std::vector<std::uint64_t> rows;

  std::size_t size() const { return rows.size(); }
};

/// CSV with a header row naming the atoms and one 0/1 cell per column.
/// Throws CsvError on malformed input or an empty body.
DataSet load_csv(std::istream& in);
DataSet load_csv_file(const std::string& path);

/// One root-to-leaf path: the conjunction of its edge literals, and the
/// per-world probability of the leaf cell.
struct Branch {
  std::vector<Literal> path;  // edge literals, root first
  Rational p;                 // probability of each world in the cell
};

/// Binary density estimation tree. Internal nodes split on an atom (at
/// most once per path); leaves carry the exact per-world probability of
/// their cell. Branch probabilities, each times its cell size, sum to 1.
class DensityTree {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    // Internal iff both children are set; split_atom is then the atom index.
    std::size_t split_atom = 0;
    NodePtr when_false, when_true;
    Rational p;  // leaves only

    bool is_leaf() const { return !when_false; }
  };

  static NodePtr leaf(Rational p);
  static NodePtr internal(std::size_t split_atom, NodePtr when_false, NodePtr when_true);

  /// Validates: split atoms in range and not repeated along a path, leaf
  /// probabilities in [0, 1], total mass exactly 1.
  DensityTree(Vocabulary vocab, NodePtr root);

  const Vocabulary& vocab() const { return vocab_; }
  const NodePtr& root() const { return root_; }
  std::size_t leaf_count() const;
  unsigned depth() const;

  /// The probability of a single world: its leaf's p.
  Rational world_density(const World& w) const;

  /// Branches in depth-first order, false edge before true edge.
  std::vector<Branch> branches() const;

  bool operator==(const DensityTree& other) const;

 private:
  Vocabulary vocab_;
  NodePtr root_;
};

/// Greedy learner. Splits minimize the integrated squared error estimate
///   J = -sum_leaves (n_leaf / N)^2 / vol(leaf),
/// which at a fixed node reduces to maximizing n_false^2 + n_true^2; a
/// split must improve J strictly (an even split never does). Ties pick
/// the lowest atom index. A node is split while its depth is below
/// max_depth, it holds at least min_leaf_rows rows, and some split
/// strictly improves. Leaf probability: (rows / N) / 2^(atoms - depth).
DensityTree learn_tree(const DataSet& data, unsigned max_depth, std::size_t min_leaf_rows = 1);

/// Compiles the tree into a stratified base: every branch with p < 1
/// yields the clause negating its path at weight 1 - p (so p = 0 gives a
/// hard constraint); p = 1 branches are dropped. Entries are ordered by
/// descending weight, ties in branch order. The result is flagged
/// probabilistic and induces exactly the tree's density as possibility.
StratifiedKB tree_to_skb(const DensityTree& tree);

/// JSON document: {"atoms": [...], "root": <node>} with internal nodes
/// {"split": "Atom", "f": <node>, "t": <node>} and leaves {"p": "3/16"}
/// (probabilities rendered as exact decimals when finite, n/d otherwise;
/// both forms load).
DensityTree tree_from_json(const std::string& text);
std::string tree_to_json(const DensityTree& tree);
DensityTree load_tree_file(const std::string& path);

}  // namespace poskb
