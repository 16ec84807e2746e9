#pragma once

#include <string>
#include <vector>

#include "tnexp/doad.hpp"
#include "tnexp/leaf_set.hpp"
#include "tnexp/permutation.hpp"
#include "tnexp/tree.hpp"

namespace tnexp {

enum class BoundKind { trivial, poset, height_tt, plane_general, composed, cover };

std::string to_string(BoundKind kind);

/// A certified containment exponent for `source` in `target` (plane
/// serializations; an empty target means "any tree on the same leaves").
struct BoundValue {
  BoundKind kind = BoundKind::trivial;
  int value = 1;
  int leaves = 0;
  std::string source;
  std::string target;
  /// Where the maximum was attained, or the chain for composed bounds.
  std::string provenance;
};

/// ⌊n/2⌋: cover the smaller side of every split by singletons.
BoundValue trivial_bound(int leaves);

/// The four structural cover sizes for a nontrivial S ⊆ ℒ in tree T:
///   complement_by_descendants = maxima(𝒱 ∖ 𝒯_{≥S})                     covers ℒ∖S
///   set_by_descendants        = maxima(𝒱 ∖ 𝒯_{≥ℒ∖S})                   covers S
///   set_via_anti              = maxima(𝒯_{≤lca(ℒ∖S)} ∖ 𝒯_{≥ℒ∖S}) + 1    covers S with 𝔞(lca(ℒ∖S))
///   complement_via_anti       = maxima(𝒯_{≤lca S} ∖ 𝒯_{≥S}) + 1        covers ℒ∖S with 𝔞(lca S)
struct PosetTerms {
  int complement_by_descendants = 0;
  int set_by_descendants = 0;
  int set_via_anti = 0;
  int complement_via_anti = 0;

  int min() const;
  /// 0..3 in declaration order; the first term attaining min().
  int argmin() const;
};

PosetTerms poset_terms(const Tree& tree, LeafSet s);

/// The covering realizing min() of the poset terms.
struct PosetCover {
  bool covers_complement = false;
  int size = 0;
  /// Doad sets of the cover; 𝔞(root) = ∅ is dropped, so may be one shorter than `size`.
  std::vector<DoadWitness> sets;
};

PosetCover poset_cover(const Tree& tree, LeafSet s);

/// max over nontrivial doad sets S of T' (pulled back by π) of min of the four terms.
BoundValue poset_bound(const Tree& tree, const Tree& tree_prime, const Permutation& pi);

/// Per-subset minimum of the poset terms, indexed by mask; 0 for ∅ and ℒ.
/// Lets the exhaustive search evaluate poset bounds by lookup (n ≤ 24).
std::vector<std::uint8_t> poset_term_table(const Tree& tree);

/// 1 + max_{ℓ<n} min(h_ℓ, h*_{ℓ+1}): exponent for T in the train track tree.
BoundValue height_bound_tt(const Tree& tree);

/// 2: exponent for the train track tree in any plane tree on n leaves.
BoundValue train_track_universal_bound(int leaves);

/// height_bound_tt(T) · 2: exponent for T in any plane tree, left-to-right identification.
BoundValue plane_general_bound(const Tree& tree);

/// e1 certifies T in T', e2 certifies T' in T''. Throws std::invalid_argument when
/// leaf counts differ or e1's target is not e2's source.
BoundValue compose_exponents(const BoundValue& first, const BoundValue& second);

}  // namespace tnexp
