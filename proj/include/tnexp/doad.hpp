#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tnexp/leaf_set.hpp"
#include "tnexp/tree.hpp"

namespace tnexp {

enum class DoadSide : std::uint8_t { descendant, anti_descendant };

/// A vertex together with the side (𝔡 or 𝔞) that produces a doad set.
struct DoadWitness {
  VertexId vertex = kNoVertex;
  DoadSide side = DoadSide::descendant;

  LeafSet set(const Tree& tree) const {
    return side == DoadSide::descendant ? tree.descendants(vertex) : tree.anti_descendants(vertex);
  }
  auto operator<=>(const DoadWitness&) const = default;
};

/// "d:0110" or "a:r"
std::string to_string(const Tree& tree, const DoadWitness& witness);

struct DoadEntry {
  LeafSet set;
  /// Every (vertex, side) producing `set`, sorted.
  std::vector<DoadWitness> witnesses;
};

/// The deduplicated nonempty doad sets of a tree, ordered by bit mask.
///
/// Contains 𝔡(v) for every vertex and 𝔞(v) for every non-root vertex; 𝔞(root) = ∅
/// is left out.
class DoadFamily {
 public:
  explicit DoadFamily(const Tree& tree);

  int leaf_count() const { return leaf_count_; }
  std::size_t size() const { return entries_.size(); }
  std::span<const DoadEntry> entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool contains(LeafSet s) const { return find(s) != nullptr; }
  const DoadEntry* find(LeafSet s) const;
  std::vector<LeafSet> sets() const;

 private:
  std::vector<DoadEntry> entries_;
  int leaf_count_ = 0;
};

inline DoadFamily doad_family(const Tree& tree) { return DoadFamily(tree); }

}  // namespace tnexp
