#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tnexp/leaf_set.hpp"
#include "tnexp/permutation.hpp"

namespace tnexp {

using VertexId = int;
inline constexpr VertexId kNoVertex = -1;

class TreeParseError : public std::invalid_argument {
 public:
  TreeParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Rooted full binary plane tree with leaves labelled 1..n from left to right.
///
/// Text form: "." is a leaf and "(AB)" a node with left subtree A and right
/// subtree B, e.g. "((..)(..))" for the perfect tree of depth 2. Vertices are
/// numbered in preorder, so the root is vertex 0. Each vertex carries its 0/1
/// path label (0 = left step, 1 = right step); leaf labels follow the
/// lexicographic order of these path labels.
class Tree {
 public:
  static Tree parse(std::string_view text);
  /// Perfect binary tree of the given depth (2^depth leaves).
  static Tree hierarchical(int depth);
  /// Left comb on n leaves: "(((..).).)" for n = 4.
  static Tree train_track(int leaves);

  int leaf_count() const { return leaf_count_; }
  int vertex_count() const { return static_cast<int>(nodes_.size()); }
  VertexId root() const { return 0; }

  bool is_leaf(VertexId v) const { return nodes_[v].left == kNoVertex; }
  VertexId left(VertexId v) const { return nodes_[v].left; }
  VertexId right(VertexId v) const { return nodes_[v].right; }
  VertexId parent(VertexId v) const { return nodes_[v].parent; }
  /// 1-based leaf label, 0 for internal nodes.
  int leaf_label(VertexId v) const { return nodes_[v].leaf; }
  VertexId leaf_vertex(int label) const { return leaf_vertices_[label - 1]; }
  int depth(VertexId v) const { return static_cast<int>(nodes_[v].path.size()); }
  /// "" for the root, otherwise the left/right steps from the root ("0110").
  const std::string& path_label(VertexId v) const { return nodes_[v].path; }
  /// Path label with the root written as "r"; used in exported identifiers.
  std::string vertex_name(VertexId v) const;

  /// 𝔡(v): leaves below (or equal to) v.
  LeafSet descendants(VertexId v) const { return nodes_[v].leaves; }
  /// 𝔞(v) = ℒ ∖ 𝔡(v)
  LeafSet anti_descendants(VertexId v) const { return nodes_[v].leaves.complement(leaf_count_); }
  LeafSet all_leaves() const { return LeafSet::full(leaf_count_); }

  /// Internal nodes in preorder.
  std::span<const VertexId> internal_nodes() const { return internal_; }
  /// a is an ancestor of v or a == v.
  bool is_ancestor_or_equal(VertexId a, VertexId v) const;

  /// Plane serialization; round-trips with parse().
  std::string to_string() const;
  /// Shape key: children ordered so the lexicographically smaller string is on the left.
  std::string canonical_string() const;
  /// Canonical plane representative and σ mapping each leaf of this tree to its
  /// label in the representative.
  std::pair<Tree, Permutation> canonicalize() const;
  /// Exchange left and right children everywhere; leaf ℓ becomes leaf n+1-ℓ.
  Tree mirrored() const;

  bool operator==(const Tree& other) const { return to_string() == other.to_string(); }

 private:
  struct Node {
    VertexId parent = kNoVertex;
    VertexId left = kNoVertex;
    VertexId right = kNoVertex;
    int leaf = 0;
    LeafSet leaves;
    std::string path;
  };

  Tree() = default;
  void finalize();
  std::string subtree_string(VertexId v) const;
  std::string canonical_subtree(VertexId v) const;

  std::vector<Node> nodes_;
  std::vector<VertexId> leaf_vertices_;
  std::vector<VertexId> internal_;
  int leaf_count_ = 0;
};

/// Heights per leaf, index ℓ-1 holds leaf ℓ.
struct LeafHeights {
  std::vector<int> height;       // 1s before the final 0 of the path label
  std::vector<int> dual_height;  // 0s before the final 1 of the path label
};

/// Number of 1s occurring before the last 0 of `label` (all 1s when it ends on 0).
int vertex_height(std::string_view label);
/// Number of 0s occurring before the last 1 of `label`.
int vertex_dual_height(std::string_view label);
LeafHeights heights(const Tree& tree);

/// One canonical plane representative per unordered shape, sorted by canonical
/// string. Supports 2 ≤ n ≤ 16.
std::vector<Tree> enumerate_shapes(int leaves);
/// Canonical strings only; cheaper when no Tree objects are needed.
std::vector<std::string> enumerate_shape_strings(int leaves);
/// Every plane tree on n leaves (Catalan many), sorted by serialization. 2 ≤ n ≤ 12.
std::vector<Tree> enumerate_plane_trees(int leaves);

}  // namespace tnexp
