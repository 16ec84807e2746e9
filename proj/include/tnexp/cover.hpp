#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tnexp/doad.hpp"
#include "tnexp/leaf_set.hpp"
#include "tnexp/permutation.hpp"
#include "tnexp/tree.hpp"

namespace tnexp {

/// Largest leaf count for which a full 2^n cover table is built.
inline constexpr int kCoverTableMaxLeaves = 24;

class CoverTableTooLarge : public std::length_error {
 public:
  explicit CoverTableTooLarge(int leaves)
      : std::length_error("cover table for " + std::to_string(leaves) + " leaves exceeds the " +
                          std::to_string(kCoverTableMaxLeaves) +
                          "-leaf cap; use the integer program (build_ip/solve_ip) instead") {}
};

/// n_S for every leaf subset S of one tree: the fewest doad sets whose union is S.
///
/// Built by subset dynamic programming over disjoint decompositions, always
/// splitting off a doad set that contains the lowest leaf of S. Minimal covers
/// of proper subsets are pairwise disjoint and the full leaf set is itself a
/// doad set, so nothing is lost. Entry ∅ is 0.
class CoverTable {
 public:
  explicit CoverTable(const Tree& tree);

  const Tree& tree() const { return tree_; }
  int leaf_count() const { return tree_.leaf_count(); }
  int count(LeafSet s) const { return counts_[s.bits()]; }
  int operator[](LeafSet s) const { return counts_[s.bits()]; }
  const std::vector<std::uint8_t>& counts() const { return counts_; }

  /// An optimal disjoint cover of S, reconstructed on demand. Listed by lowest
  /// covered leaf; at each step the smallest witness that still completes an
  /// optimal cover is taken, so the list is lexicographically smallest.
  std::vector<DoadWitness> witness(LeafSet s) const;

 private:
  Tree tree_;
  DoadFamily family_;
  // doads_containing_[ℓ-1]: family entries whose set contains leaf ℓ.
  std::vector<std::vector<const DoadEntry*>> doads_containing_;
  std::vector<std::uint8_t> counts_;
};

inline CoverTable build_cover_table(const Tree& tree) { return CoverTable(tree); }

/// Cover data for one internal node w of T'. Counts are n over the π-pullbacks
/// of 𝔡(w) and 𝔞(w); an empty side (𝔞(root)) is not available.
struct NodeCover {
  VertexId node = kNoVertex;
  LeafSet descendant_pullback;
  LeafSet anti_pullback;
  int descendant_count = 0;
  std::optional<int> anti_count;
  DoadSide chosen = DoadSide::descendant;
  std::vector<DoadWitness> witness;

  int best() const { return anti_count && *anti_count < descendant_count ? *anti_count : descendant_count; }
};

/// Every bound computed for one instance (T, T', π).
struct ExponentReport {
  std::string tree;
  std::string tree_prime;
  Permutation pi;
  /// c₀: max over internal nodes w of T' of the cheaper side.
  int cover_bound = 0;
  /// max { n_S : π(S) ∈ doad(T') }, the search recipe taken literally. Diagnostic only.
  int naive_max_bound = 0;
  std::vector<NodeCover> nodes;

  std::optional<int> trivial_bound;
  std::optional<int> poset_bound;
  std::optional<int> height_tt_bound;
  std::optional<int> plane_general_bound;
  std::optional<int> ilp_optimum;
};

/// Per-node cover exponent of T in T' under π, from a cover table of T.
/// Throws std::invalid_argument on leaf-count mismatch.
ExponentReport cover_exponent(const CoverTable& table, const Tree& tree_prime, const Permutation& pi,
                              bool with_witnesses = true);
ExponentReport cover_exponent(const Tree& tree, const Tree& tree_prime, const Permutation& pi,
                              bool with_witnesses = true);

/// max over internal nodes only, no report; the hot path of the exhaustive search.
int cover_bound(const CoverTable& table, const Tree& tree_prime, const Permutation& pi);

/// Positive dimension per vertex of a tree, indexed by VertexId.
using DimensionVector = std::vector<std::uint64_t>;

struct ProductCover {
  /// Saturates at UINT64_MAX.
  std::uint64_t product = 1;
  std::vector<DoadWitness> witness;
};

/// Minimum over doad covers of S of ∏ f(witness vertex). Exact: for proper S a
/// cheapest cover can be taken disjoint, and for S = ℒ two-set covers with
/// overlap are checked explicitly. Empty S costs 1 (the empty product).
ProductCover min_product_cover(const Tree& tree, const DimensionVector& f, LeafSet s);

struct NodeProduct {
  VertexId node = kNoVertex;
  DoadSide side = DoadSide::descendant;
  std::uint64_t product = 1;
  std::uint64_t allowed = 1;
  std::vector<DoadWitness> witness;
};

struct TrivialContainment {
  bool holds = false;
  /// First vertex of T' (preorder) whose cheapest product exceeds f'.
  std::optional<VertexId> violating_node;
  std::vector<NodeProduct> nodes;
  /// Set when `holds`: TNS(rT̄) ⊆ TNS(r^c T̄') for every r ∈ ℕ with c = cover bound.
  std::optional<int> all_r_exponent;
};

/// Checks every vertex of T' for a cover of 𝔡 or 𝔞 (pulled back by π) by doad
/// sets of T with ∏ f ≤ f'. Throws std::invalid_argument on bad dimensions.
TrivialContainment check_trivial_containment(const Tree& tree, const DimensionVector& f,
                                             const Tree& tree_prime, const DimensionVector& f_prime,
                                             const Permutation& pi);

}  // namespace tnexp
