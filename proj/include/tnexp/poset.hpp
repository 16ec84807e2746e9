#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "tnexp/leaf_set.hpp"
#include "tnexp/tree.hpp"

namespace tnexp {

/// Set of vertices of a tree (at most 63 vertices), bit v for vertex v.
class VertexSet {
 public:
  using Mask = std::uint64_t;

  constexpr VertexSet() = default;
  constexpr explicit VertexSet(Mask bits) : bits_(bits) {}
  static VertexSet all(const Tree& tree);
  static VertexSet of(std::initializer_list<VertexId> vertices);
  /// The leaf vertices carrying the labels in `leaves`.
  static VertexSet leaves_of(const Tree& tree, LeafSet leaves);

  constexpr Mask bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(VertexId v) const { return (bits_ >> v) & 1u; }
  std::vector<VertexId> vertices() const;

  constexpr VertexSet operator|(VertexSet o) const { return VertexSet(bits_ | o.bits_); }
  constexpr VertexSet operator&(VertexSet o) const { return VertexSet(bits_ & o.bits_); }
  constexpr VertexSet operator-(VertexSet o) const { return VertexSet(bits_ & ~o.bits_); }
  constexpr bool operator==(const VertexSet&) const = default;

 private:
  Mask bits_ = 0;
};

/// 𝒯_{≥S}: every vertex that is an ancestor of (or equal to) some element of S.
VertexSet up_set(const Tree& tree, VertexSet s);
/// 𝒯_{≤S}: every vertex that is a descendant of (or equal to) some element of S.
VertexSet down_set(const Tree& tree, VertexSet s);
/// Join of S in the descendant order. Throws std::invalid_argument on empty S.
VertexId lowest_common_ancestor(const Tree& tree, VertexSet s);
/// Number of elements of `p` that have no strict ancestor in `p`.
int maxima_count(const Tree& tree, VertexSet p);
/// The maximal elements themselves, in preorder.
std::vector<VertexId> maxima(const Tree& tree, VertexSet p);

struct PosetSummary {
  VertexSet up;
  VertexSet down;
  VertexId lca = kNoVertex;
};

/// Up-set, down-set and lca of a nonempty vertex set in one call.
PosetSummary poset_queries(const Tree& tree, VertexSet s);

}  // namespace tnexp
