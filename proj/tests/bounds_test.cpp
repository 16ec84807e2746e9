#include <gtest/gtest.h>

#include "support.hpp"
#include "tnexp/bounds.hpp"
#include "tnexp/cover.hpp"

using namespace tnexp;
using namespace tnexp::testing;

TEST(Trivial, Values) {
  EXPECT_EQ(trivial_bound(8).value, 4);
  EXPECT_EQ(trivial_bound(2).value, 1);
  EXPECT_EQ(trivial_bound(5).value, 2);
  EXPECT_EQ(trivial_bound(5).kind, BoundKind::trivial);
  EXPECT_THROW(trivial_bound(1), std::invalid_argument);
}

TEST(Poset, EightLeafTreeIntoTrainTrack) {
  const Tree t = Tree::parse(kEightLeaf);
  const BoundValue b = poset_bound(t, Tree::train_track(8), Permutation::identity(8));
  EXPECT_EQ(b.value, 3);
  // First attained at the prefix {1,2,3}; the leaf after it sits at 01101.
  EXPECT_EQ(t.path_label(t.leaf_vertex(4)), "01101");
  EXPECT_NE(b.provenance.find("{1,2,3}"), std::string::npos) << b.provenance;
}

TEST(Poset, SelfAndFourLeaf) {
  for (int n = 2; n <= 7; ++n) {
    for (const Tree& t : enumerate_plane_trees(n)) {
      EXPECT_EQ(poset_bound(t, t, Permutation::identity(n)).value, 1) << t.to_string();
    }
  }
  EXPECT_EQ(poset_bound(Tree::hierarchical(2), Tree::train_track(4), Permutation::identity(4)).value, 1);
  EXPECT_THROW(poset_bound(Tree::hierarchical(2), Tree::train_track(5), Permutation::identity(4)),
               std::invalid_argument);
}

TEST(Poset, TermsAreRealCovers) {
  // Each of the four terms describes an actual doad cover, so none can beat the DP.
  for (int n = 3; n <= 7; ++n) {
    for (const Tree& t : enumerate_plane_trees(n)) {
      const CoverTable table(t);
      for (LeafSet::Mask bits = 1; bits + 1 < (LeafSet::Mask{1} << n); ++bits) {
        const LeafSet s(bits);
        const LeafSet rest = s.complement(n);
        const PosetTerms terms = poset_terms(t, s);
        EXPECT_GE(terms.complement_by_descendants, table.count(rest));
        EXPECT_GE(terms.set_by_descendants, table.count(s));
        EXPECT_GE(terms.set_via_anti, table.count(s));
        EXPECT_GE(terms.complement_via_anti, table.count(rest));

        const PosetCover cover = poset_cover(t, s);
        LeafSet uni;
        for (const DoadWitness& w : cover.sets) uni = uni | w.set(t);
        EXPECT_EQ(uni, cover.covers_complement ? rest : s);
        EXPECT_LE(static_cast<int>(cover.sets.size()), cover.size);
      }
    }
  }
}

TEST(Poset, TermTableMatchesDirectEvaluation) {
  const Tree t = Tree::parse(kPairA);
  const auto table = poset_term_table(t);
  EXPECT_EQ(table[0], 0);
  EXPECT_EQ(table[63], 0);
  for (LeafSet::Mask s = 1; s < 63; ++s) EXPECT_EQ(table[s], poset_terms(t, LeafSet(s)).min());
}

TEST(Height, HierarchicalFamily) {
  const int expected[] = {1, 2, 2, 3};  // ⌈k/2⌉ for k = 2..5
  for (int k = 2; k <= 5; ++k) EXPECT_EQ(height_bound_tt(Tree::hierarchical(k)).value, expected[k - 2]) << k;
  EXPECT_EQ(height_bound_tt(Tree::hierarchical(3)).target, Tree::train_track(8).to_string());
}

TEST(Height, TrainTrackIsOne) {
  for (int n = 2; n <= 12; ++n) EXPECT_EQ(height_bound_tt(Tree::train_track(n)).value, 1);
}

TEST(Height, PrefixesCoveredByDescendants) {
  for (int n = 2; n <= 10; ++n) {
    for (const Tree& t : enumerate_plane_trees(n)) {
      const LeafHeights h = heights(t);
      for (int leaf = 1; leaf <= n; ++leaf) {
        EXPECT_LE(descendant_only_cover(t, LeafSet::interval(1, leaf)), 1 + h.height[leaf - 1]);
      }
    }
  }
}

TEST(Height, MirrorInvariant) {
  for (int n = 2; n <= 9; ++n) {
    for (const Tree& t : enumerate_plane_trees(n)) {
      EXPECT_EQ(height_bound_tt(t.mirrored()).value, height_bound_tt(t).value);
    }
  }
}

TEST(PlaneGeneral, Values) {
  EXPECT_EQ(plane_general_bound(Tree::parse(kPairA)).value, 4);
  for (int n = 2; n <= 8; ++n) EXPECT_EQ(plane_general_bound(Tree::train_track(n)).value, 2);
  EXPECT_EQ(plane_general_bound(Tree::hierarchical(3)).value, 4);
  const BoundValue b = plane_general_bound(Tree::hierarchical(3));
  EXPECT_EQ(b.kind, BoundKind::plane_general);
  EXPECT_TRUE(b.target.empty());
}

TEST(Compose, Values) {
  BoundValue a{BoundKind::height_tt, 2, 8, "x", "y", ""};
  BoundValue b{BoundKind::plane_general, 2, 8, "y", "", ""};
  const BoundValue c = compose_exponents(a, b);
  EXPECT_EQ(c.value, 4);
  EXPECT_EQ(c.kind, BoundKind::composed);
  EXPECT_EQ(c.source, "x");
  EXPECT_NE(c.provenance.find("height_tt"), std::string::npos);

  BoundValue one{BoundKind::cover, 1, 8, "x", "y", ""};
  BoundValue three{BoundKind::cover, 3, 8, "y", "z", ""};
  EXPECT_EQ(compose_exponents(one, three).value, 3);

  for (int n = 2; n <= 8; ++n) {
    for (const Tree& t : enumerate_plane_trees(n)) {
      EXPECT_EQ(compose_exponents(height_bound_tt(t), train_track_universal_bound(n)).value,
                plane_general_bound(t).value);
    }
  }
}

TEST(Compose, IncompatibleChains) {
  BoundValue a{BoundKind::cover, 1, 8, "x", "y", ""};
  BoundValue b{BoundKind::cover, 1, 8, "q", "z", ""};
  EXPECT_THROW(compose_exponents(a, b), std::invalid_argument);
  BoundValue c{BoundKind::cover, 1, 7, "y", "z", ""};
  EXPECT_THROW(compose_exponents(a, c), std::invalid_argument);
}

TEST(Ordering, CoverBelowStructuralBounds) {
  for (int n = 2; n <= 6; ++n) {
    const auto plane = enumerate_plane_trees(n);
    const Tree tt = Tree::train_track(n);
    for (const Tree& t : plane) {
      const CoverTable table(t);
      const int height = height_bound_tt(t).value;
      const int general = plane_general_bound(t).value;
      EXPECT_LE(cover_bound(table, tt, Permutation::identity(n)), height);
      for (const Tree& tp : plane) EXPECT_LE(cover_bound(table, tp, Permutation::identity(n)), general);
    }
  }
}
