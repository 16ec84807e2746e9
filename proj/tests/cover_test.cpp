#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "tnexp/cover.hpp"

using namespace tnexp;
using namespace tnexp::testing;

namespace {

LeafSet L(std::initializer_list<int> labels) { return LeafSet::from_labels(labels); }

}  // namespace

TEST(CoverTable, Examples) {
  const CoverTable ht2(Tree::hierarchical(2));
  EXPECT_EQ(ht2.count(L({2, 3})), 2);
  EXPECT_EQ(ht2.count(LeafSet()), 0);
  for (int leaf = 1; leaf <= 4; ++leaf) EXPECT_EQ(ht2.count(LeafSet::singleton(leaf)), 1);

  // Only singletons fit inside the middle interval of TT_8; its complement is two singletons.
  const CoverTable tt8(Tree::train_track(8));
  EXPECT_EQ(tt8.count(LeafSet::interval(2, 7)), 6);
  EXPECT_EQ(tt8.count(L({1, 8})), 2);
}

TEST(CoverTable, MatchesBruteForceUpToFiveLeaves) {
  for (int n = 2; n <= 5; ++n) {
    for (const Tree& t : enumerate_plane_trees(n)) {
      const CoverTable table(t);
      for (LeafSet::Mask s = 0; s < (LeafSet::Mask{1} << n); ++s) {
        EXPECT_EQ(table.count(LeafSet(s)), brute_force_cover(t, LeafSet(s))) << t.to_string() << " " << s;
      }
    }
  }
}

TEST(CoverTable, Invariants) {
  for (int n = 2; n <= 7; ++n) {
    for (const Tree& t : enumerate_plane_trees(n)) {
      const CoverTable table(t);
      const DoadFamily family(t);
      const LeafSet all = t.all_leaves();
      for (LeafSet::Mask bits = 1; bits < (LeafSet::Mask{1} << n); ++bits) {
        const LeafSet s(bits);
        const int count = table.count(s);
        EXPECT_GE(count, 1);
        EXPECT_LE(count, s.size());
        EXPECT_EQ(count == 1, family.contains(s));
        if (s != all) EXPECT_LE(std::min(count, table.count(s.complement(n))), n / 2);
      }
    }
  }
}

TEST(CoverTable, WitnessesAreDisjointOptimalCovers) {
  for (const Tree& t : enumerate_plane_trees(6)) {
    const CoverTable table(t);
    for (LeafSet::Mask bits = 1; bits < (LeafSet::Mask{1} << 6) - 1; ++bits) {
      const LeafSet s(bits);
      const auto w = table.witness(s);
      EXPECT_EQ(static_cast<int>(w.size()), table.count(s));
      LeafSet uni;
      for (const DoadWitness& x : w) {
        EXPECT_TRUE(uni.disjoint_from(x.set(t)));
        uni = uni | x.set(t);
      }
      EXPECT_EQ(uni, s);
    }
  }
}

TEST(CoverTable, RestrictingToDescendantsNeverHelps) {
  for (const Tree& t : enumerate_plane_trees(6)) {
    const CoverTable table(t);
    for (LeafSet::Mask bits = 1; bits < (LeafSet::Mask{1} << 6); ++bits) {
      EXPECT_LE(table.count(LeafSet(bits)), descendant_only_cover(t, LeafSet(bits)));
    }
  }
}

TEST(CoverTable, SizeGuard) {
  EXPECT_THROW(CoverTable(Tree::train_track(25)), CoverTableTooLarge);
  try {
    CoverTable table(Tree::train_track(25));
  } catch (const CoverTableTooLarge& e) {
    EXPECT_NE(std::string(e.what()).find("integer program"), std::string::npos);
  }
}

TEST(CoverExponent, Examples) {
  const Tree ht2 = Tree::hierarchical(2);
  const Tree tt4 = Tree::train_track(4);
  EXPECT_EQ(cover_exponent(ht2, tt4, Permutation::identity(4)).cover_bound, 1);
  EXPECT_EQ(cover_exponent(Tree::parse(kPairA), Tree::parse(kPairB), Permutation::identity(6)).cover_bound, 1);
  for (int n = 2; n <= 7; ++n) {
    for (const Tree& t : enumerate_plane_trees(n)) {
      EXPECT_EQ(cover_exponent(t, t, Permutation::identity(n)).cover_bound, 1);
    }
  }
}

TEST(CoverExponent, FourLeafInstancesSplitEightToSixteen) {
  // HT_2 and TT_4 share the single nontrivial split {1,2}|{3,4}; permutations that
  // pull it back to another 2|2 split need two doads on both sides.
  for (const Tree& a : enumerate_shapes(4)) {
    for (const Tree& b : enumerate_shapes(4)) {
      const CoverTable table(a);
      Permutation pi = Permutation::identity(4);
      int ones = 0;
      int twos = 0;
      do {
        const int c = cover_bound(table, b, pi);
        const LeafSet pulled = pi.preimage(L({1, 2}));
        const bool aligned = pulled == L({1, 2}) || pulled == L({3, 4});
        EXPECT_EQ(c, aligned ? 1 : 2) << pi.to_string();
        (c == 1 ? ones : twos)++;
      } while (pi.next());
      EXPECT_EQ(ones, 8);
      EXPECT_EQ(twos, 16);
    }
  }
}

TEST(CoverExponent, ReportBreakdown) {
  const ExponentReport r =
      cover_exponent(Tree::parse(kEightLeaf), Tree::train_track(8), Permutation::identity(8), true);
  EXPECT_EQ(r.cover_bound, 3);
  EXPECT_EQ(r.naive_max_bound, 3);
  ASSERT_EQ(r.nodes.size(), 7u);
  int best = 0;
  for (const NodeCover& node : r.nodes) {
    best = std::max(best, node.best());
    const LeafSet side = node.chosen == DoadSide::descendant ? node.descendant_pullback : node.anti_pullback;
    EXPECT_EQ(static_cast<int>(node.witness.size()), node.best());
    LeafSet uni;
    for (const DoadWitness& w : node.witness) uni = uni | w.set(Tree::parse(kEightLeaf));
    EXPECT_EQ(uni, side);
  }
  EXPECT_EQ(best, r.cover_bound);
  EXPECT_FALSE(r.nodes.front().anti_count.has_value());  // root of T'
}

TEST(CoverExponent, LeafMismatch) {
  EXPECT_THROW(cover_exponent(Tree::hierarchical(2), Tree::train_track(5), Permutation::identity(4)),
               std::invalid_argument);
  EXPECT_THROW(cover_exponent(Tree::hierarchical(2), Tree::train_track(4), Permutation::identity(5)),
               std::invalid_argument);
}

TEST(CoverExponent, MirrorWithReversalKeepsValue) {
  std::mt19937_64 rng(7);
  for (int n = 4; n <= 7; ++n) {
    const auto trees = enumerate_plane_trees(n);
    const Permutation rev = Permutation::reversal(n);
    for (const Tree& t : trees) {
      const CoverTable table(t);
      const CoverTable mirrored_table(t.mirrored());
      for (int k = 0; k < 6; ++k) {
        const Tree& tp = trees[rng() % trees.size()];
        std::vector<int> line(n);
        for (int i = 0; i < n; ++i) line[i] = i + 1;
        std::shuffle(line.begin(), line.end(), rng);
        const Permutation pi = Permutation::from_one_line(line);
        const int base = cover_bound(table, tp, pi);
        // Mirror T' only: its labels reverse, so compose π with the reversal.
        EXPECT_EQ(cover_bound(table, tp.mirrored(), rev.after(pi)), base);
        // Mirror both: conjugate π by the reversal.
        EXPECT_EQ(cover_bound(mirrored_table, tp.mirrored(), rev.after(pi).after(rev)), base);
      }
    }
  }
}

TEST(ProductCover, Examples) {
  const Tree ht2 = Tree::hierarchical(2);
  const DimensionVector ones(7, 1);
  for (LeafSet::Mask s = 1; s < 16; ++s) EXPECT_EQ(min_product_cover(ht2, ones, LeafSet(s)).product, 1u);
  const DimensionVector twos(7, 2);
  EXPECT_EQ(min_product_cover(ht2, twos, L({2, 3})).product, 4u);
  EXPECT_EQ(min_product_cover(ht2, twos, LeafSet()).product, 1u);

  DimensionVector f(7, 5);
  f[ht2.leaf_vertex(1)] = 3;  // {1} = 𝔡(leaf 1); {2,3,4} = 𝔞(leaf 1)
  const ProductCover c = min_product_cover(ht2, f, L({2, 3, 4}));
  EXPECT_EQ(c.product, 3u);
  ASSERT_EQ(c.witness.size(), 1u);
  EXPECT_EQ(c.witness.front().side, DoadSide::anti_descendant);
  EXPECT_THROW(min_product_cover(ht2, DimensionVector(7, 0), L({1})), std::invalid_argument);
  EXPECT_THROW(min_product_cover(ht2, DimensionVector(3, 1), L({1})), std::invalid_argument);
}

TEST(ProductCover, WholeLeafSet) {
  // ℒ is 𝔡(root) or 𝔡(v) ∪ 𝔞(v) for any other v.
  std::mt19937_64 rng(3);
  for (const Tree& t : enumerate_plane_trees(5)) {
    DimensionVector f(9);
    for (auto& x : f) x = 1 + rng() % 20;
    std::uint64_t expected = f[t.root()];
    for (VertexId v = 1; v < t.vertex_count(); ++v) expected = std::min(expected, f[v] * f[v]);
    EXPECT_EQ(min_product_cover(t, f, t.all_leaves()).product, expected);
  }
}

TEST(TrivialContainment, Examples) {
  const Tree ht2 = Tree::hierarchical(2);
  const Tree tt4 = Tree::train_track(4);
  const auto id = Permutation::identity(4);
  EXPECT_TRUE(check_trivial_containment(ht2, DimensionVector(7, 1), tt4, DimensionVector(7, 1), id).holds);

  const auto two = check_trivial_containment(ht2, DimensionVector(7, 2), tt4, DimensionVector(7, 2), id);
  EXPECT_TRUE(two.holds);
  EXPECT_EQ(two.all_r_exponent, 1);

  DimensionVector tight(7, 2);
  tight[2] = 1;
  const auto fail = check_trivial_containment(ht2, DimensionVector(7, 2), tt4, tight, id);
  EXPECT_FALSE(fail.holds);
  EXPECT_EQ(fail.violating_node, 2);
  EXPECT_FALSE(fail.all_r_exponent.has_value());
}

TEST(TrivialContainment, UnitDimensionsAlwaysContained) {
  for (const Tree& t : enumerate_plane_trees(5)) {
    for (const Tree& tp : enumerate_plane_trees(5)) {
      EXPECT_TRUE(check_trivial_containment(t, DimensionVector(9, 1), tp, DimensionVector(9, 1),
                                            Permutation::parse("31524", 5))
                      .holds);
    }
  }
}
