#include "tnexp/bounds.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "tnexp/poset.hpp"

namespace tnexp {

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::trivial: return "trivial";
    case BoundKind::poset: return "poset";
    case BoundKind::height_tt: return "height_tt";
    case BoundKind::plane_general: return "plane_general";
    case BoundKind::composed: return "composed";
    case BoundKind::cover: return "cover";
  }
  return "unknown";
}

BoundValue trivial_bound(int leaves) {
  if (leaves < 2) throw std::invalid_argument("trivial bound needs at least two leaves");
  BoundValue out;
  out.kind = BoundKind::trivial;
  out.value = leaves / 2;
  out.leaves = leaves;
  out.provenance = "singletons of the smaller side";
  return out;
}

int PosetTerms::min() const {
  return std::min({complement_by_descendants, set_by_descendants, set_via_anti, complement_via_anti});
}

int PosetTerms::argmin() const {
  const std::array<int, 4> terms{complement_by_descendants, set_by_descendants, set_via_anti,
                                 complement_via_anti};
  return static_cast<int>(std::min_element(terms.begin(), terms.end()) - terms.begin());
}

namespace {

struct TermSets {
  VertexSet complement_desc;  // maximal v with 𝔡(v) ⊆ ℒ∖S
  VertexSet set_desc;         // maximal v with 𝔡(v) ⊆ S
  VertexId set_anchor;        // lca(ℒ∖S)
  VertexSet set_below_anchor;
  VertexId complement_anchor;  // lca(S)
  VertexSet complement_below_anchor;
};

TermSets term_sets(const Tree& tree, LeafSet s) {
  const LeafSet rest = s.complement(tree.leaf_count());
  if (s.empty() || rest.empty()) throw std::invalid_argument("poset terms need a nontrivial leaf set");
  const VertexSet all = VertexSet::all(tree);
  const VertexSet s_leaves = VertexSet::leaves_of(tree, s);
  const VertexSet rest_leaves = VertexSet::leaves_of(tree, rest);
  const VertexSet above_s = up_set(tree, s_leaves);
  const VertexSet above_rest = up_set(tree, rest_leaves);

  TermSets out;
  out.complement_desc = all - above_s;
  out.set_desc = all - above_rest;
  out.set_anchor = lowest_common_ancestor(tree, rest_leaves);
  out.set_below_anchor = down_set(tree, VertexSet::of({out.set_anchor})) - above_rest;
  out.complement_anchor = lowest_common_ancestor(tree, s_leaves);
  out.complement_below_anchor = down_set(tree, VertexSet::of({out.complement_anchor})) - above_s;
  return out;
}

}  // namespace

PosetTerms poset_terms(const Tree& tree, LeafSet s) {
  const TermSets sets = term_sets(tree, s);
  PosetTerms out;
  out.complement_by_descendants = maxima_count(tree, sets.complement_desc);
  out.set_by_descendants = maxima_count(tree, sets.set_desc);
  out.set_via_anti = maxima_count(tree, sets.set_below_anchor) + 1;
  out.complement_via_anti = maxima_count(tree, sets.complement_below_anchor) + 1;
  return out;
}

PosetCover poset_cover(const Tree& tree, LeafSet s) {
  const TermSets sets = term_sets(tree, s);
  const PosetTerms terms = poset_terms(tree, s);
  PosetCover out;
  out.size = terms.min();
  auto add_descendants = [&](VertexSet p) {
    for (VertexId v : maxima(tree, p)) out.sets.push_back({v, DoadSide::descendant});
  };
  auto add_anti = [&](VertexId v) {
    if (v != tree.root()) out.sets.push_back({v, DoadSide::anti_descendant});
  };
  switch (terms.argmin()) {
    case 0:
      out.covers_complement = true;
      add_descendants(sets.complement_desc);
      break;
    case 1:
      add_descendants(sets.set_desc);
      break;
    case 2:
      add_anti(sets.set_anchor);
      add_descendants(sets.set_below_anchor);
      break;
    default:
      out.covers_complement = true;
      add_anti(sets.complement_anchor);
      add_descendants(sets.complement_below_anchor);
      break;
  }
  std::sort(out.sets.begin(), out.sets.end());
  return out;
}

BoundValue poset_bound(const Tree& tree, const Tree& tree_prime, const Permutation& pi) {
  if (tree.leaf_count() != tree_prime.leaf_count() || pi.size() != tree.leaf_count()) {
    throw std::invalid_argument("poset bound needs trees and permutation on the same leaf set");
  }
  const LeafSet all = tree.all_leaves();
  BoundValue out;
  out.kind = BoundKind::poset;
  out.value = 0;
  out.leaves = tree.leaf_count();
  out.source = tree.to_string();
  out.target = tree_prime.to_string();
  for (const DoadEntry& entry : DoadFamily(tree_prime)) {
    const LeafSet s = pi.preimage(entry.set);
    if (s.empty() || s == all) continue;
    const int value = poset_terms(tree, s).min();
    if (value > out.value) {
      out.value = value;
      out.provenance = "S=" + entry.set.to_string() + " of T' (" + to_string(tree_prime, entry.witnesses.front()) +
                       "), pulled back to " + s.to_string();
    }
  }
  return out;
}

std::vector<std::uint8_t> poset_term_table(const Tree& tree) {
  const int n = tree.leaf_count();
  if (n > 24) throw std::invalid_argument("poset term table supports at most 24 leaves");
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::uint8_t> out(size, 0);
  for (std::size_t s = 1; s + 1 < size; ++s) {
    out[s] = static_cast<std::uint8_t>(poset_terms(tree, LeafSet(static_cast<LeafSet::Mask>(s))).min());
  }
  return out;
}

BoundValue height_bound_tt(const Tree& tree) {
  const LeafHeights h = heights(tree);
  const int n = tree.leaf_count();
  int best = 0;
  int at = 1;
  for (int leaf = 1; leaf < n; ++leaf) {
    const int value = std::min(h.height[leaf - 1], h.dual_height[leaf]);
    if (value > best) {
      best = value;
      at = leaf;
    }
  }
  BoundValue out;
  out.kind = BoundKind::height_tt;
  out.value = 1 + best;
  out.leaves = n;
  out.source = tree.to_string();
  out.target = Tree::train_track(n).to_string();
  out.provenance = "leaf " + std::to_string(at) + ": min(h=" + std::to_string(h.height[at - 1]) +
                   ", h*=" + std::to_string(h.dual_height[at]) + ")";
  return out;
}

BoundValue train_track_universal_bound(int leaves) {
  BoundValue out;
  out.kind = BoundKind::plane_general;
  out.value = 2;
  out.leaves = leaves;
  out.source = Tree::train_track(leaves).to_string();
  out.provenance = "train track intervals";
  return out;
}

BoundValue plane_general_bound(const Tree& tree) {
  BoundValue out = compose_exponents(height_bound_tt(tree), train_track_universal_bound(tree.leaf_count()));
  out.kind = BoundKind::plane_general;
  return out;
}

BoundValue compose_exponents(const BoundValue& first, const BoundValue& second) {
  if (first.leaves != second.leaves) {
    throw std::invalid_argument("cannot compose exponents on different leaf counts");
  }
  if (!first.target.empty() && !second.source.empty() && first.target != second.source) {
    throw std::invalid_argument("incompatible chain: first bound targets '" + first.target +
                                "', second starts at '" + second.source + "'");
  }
  BoundValue out;
  out.kind = BoundKind::composed;
  out.value = first.value * second.value;
  out.leaves = first.leaves;
  out.source = first.source;
  out.target = second.target;
  out.provenance = "(" + to_string(first.kind) + " " + std::to_string(first.value) + ": " + first.provenance +
                   ") x (" + to_string(second.kind) + " " + std::to_string(second.value) + ": " +
                   second.provenance + ")";
  return out;
}

}  // namespace tnexp
