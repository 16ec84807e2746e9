#pragma once

#include <bit>
#include <vector>

#include "tnexp/doad.hpp"
#include "tnexp/tree.hpp"

namespace tnexp::testing {

// Trees used across suites.
inline constexpr const char* kLabelledSix = "((.(..))(.(..)))";
inline constexpr const char* kPairA = "((.((..).))(..))";
inline constexpr const char* kPairB = "(((.((..).)).).)";
inline constexpr const char* kEightLeaf = "((.(.((..).)))((..).))";
inline constexpr const char* kHt2 = "((..)(..))";
inline constexpr const char* kTt4 = "(((..).).)";

// Fewest doad sets of `tree` with union exactly `s`, overlaps allowed.
// Exhaustive over subsets of the doads inside s; fine up to ~20 candidates.
inline int brute_force_cover(const Tree& tree, LeafSet s) {
  if (s.empty()) return 0;
  std::vector<LeafSet::Mask> inside;
  for (const DoadEntry& e : DoadFamily(tree)) {
    if (e.set.subset_of(s)) inside.push_back(e.set.bits());
  }
  int best = 1 << 20;
  const std::uint64_t limit = std::uint64_t{1} << inside.size();
  for (std::uint64_t pick = 1; pick < limit; ++pick) {
    const int k = std::popcount(pick);
    if (k >= best) continue;
    LeafSet::Mask uni = 0;
    for (std::uint64_t rest = pick; rest != 0; rest &= rest - 1) uni |= inside[std::countr_zero(rest)];
    if (uni == s.bits()) best = k;
  }
  return best;
}

// Fewest descendant sets with union exactly s.
inline int descendant_only_cover(const Tree& tree, LeafSet s) {
  std::vector<LeafSet::Mask> inside;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.descendants(v).subset_of(s)) inside.push_back(tree.descendants(v).bits());
  }
  // Descendant sets are laminar, so the maximal ones inside s partition it.
  int count = 0;
  for (LeafSet::Mask d : inside) {
    bool maximal = true;
    for (LeafSet::Mask e : inside) {
      if (e != d && (d & ~e) == 0) maximal = false;
    }
    count += maximal;
  }
  LeafSet::Mask uni = 0;
  for (LeafSet::Mask d : inside) uni |= d;
  return uni == s.bits() ? count : -1;
}

}  // namespace tnexp::testing
