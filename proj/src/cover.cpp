#include "tnexp/cover.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace tnexp {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

void require_same_leaves(const Tree& tree, const Tree& tree_prime, const Permutation& pi) {
  if (tree.leaf_count() != tree_prime.leaf_count()) {
    throw std::invalid_argument("leaf count mismatch: " + std::to_string(tree.leaf_count()) + " vs " +
                                std::to_string(tree_prime.leaf_count()));
  }
  if (pi.size() != tree.leaf_count()) {
    throw std::invalid_argument("permutation has " + std::to_string(pi.size()) + " entries, trees have " +
                                std::to_string(tree.leaf_count()) + " leaves");
  }
}

}  // namespace

CoverTable::CoverTable(const Tree& tree) : tree_(tree), family_(tree) {
  const int n = tree.leaf_count();
  if (n > kCoverTableMaxLeaves) throw CoverTableTooLarge(n);

  doads_containing_.resize(static_cast<std::size_t>(n));
  std::vector<std::vector<LeafSet::Mask>> masks(static_cast<std::size_t>(n));
  for (const DoadEntry& entry : family_) {
    for (int label : entry.set.labels()) {
      doads_containing_[label - 1].push_back(&entry);
      masks[label - 1].push_back(entry.set.bits());
    }
  }

  const std::size_t size = std::size_t{1} << n;
  counts_.assign(size, 0);
  for (std::size_t s = 1; s < size; ++s) {
    const auto mask = static_cast<LeafSet::Mask>(s);
    const int low = std::countr_zero(mask);
    int best = std::numeric_limits<std::uint8_t>::max();
    for (LeafSet::Mask d : masks[low]) {
      if ((d & ~mask) == 0) best = std::min(best, 1 + counts_[mask & ~d]);
    }
    counts_[s] = static_cast<std::uint8_t>(best);
  }
}

std::vector<DoadWitness> CoverTable::witness(LeafSet s) const {
  std::vector<DoadWitness> out;
  while (!s.empty()) {
    const int need = count(s) - 1;
    const DoadEntry* pick = nullptr;
    for (const DoadEntry* entry : doads_containing_[s.lowest() - 1]) {
      if (!entry->set.subset_of(s) || count(s - entry->set) != need) continue;
      if (pick == nullptr || entry->witnesses.front() < pick->witnesses.front()) pick = entry;
    }
    out.push_back(pick->witnesses.front());
    s = s - pick->set;
  }
  return out;
}

ExponentReport cover_exponent(const CoverTable& table, const Tree& tree_prime, const Permutation& pi,
                              bool with_witnesses) {
  const Tree& tree = table.tree();
  require_same_leaves(tree, tree_prime, pi);

  ExponentReport report;
  report.tree = tree.to_string();
  report.tree_prime = tree_prime.to_string();
  report.pi = pi;
  for (VertexId w : tree_prime.internal_nodes()) {
    NodeCover node;
    node.node = w;
    node.descendant_pullback = pi.preimage(tree_prime.descendants(w));
    node.anti_pullback = pi.preimage(tree_prime.anti_descendants(w));
    node.descendant_count = table.count(node.descendant_pullback);
    if (!node.anti_pullback.empty()) node.anti_count = table.count(node.anti_pullback);
    node.chosen = (node.anti_count && *node.anti_count < node.descendant_count) ? DoadSide::anti_descendant
                                                                                  : DoadSide::descendant;
    if (with_witnesses) {
      node.witness = table.witness(node.chosen == DoadSide::descendant ? node.descendant_pullback
                                                                       : node.anti_pullback);
    }
    report.cover_bound = std::max(report.cover_bound, node.best());
    report.nodes.push_back(std::move(node));
  }
  for (const DoadEntry& entry : DoadFamily(tree_prime)) {
    report.naive_max_bound = std::max(report.naive_max_bound, table.count(pi.preimage(entry.set)));
  }
  return report;
}

ExponentReport cover_exponent(const Tree& tree, const Tree& tree_prime, const Permutation& pi,
                              bool with_witnesses) {
  require_same_leaves(tree, tree_prime, pi);
  return cover_exponent(CoverTable(tree), tree_prime, pi, with_witnesses);
}

int cover_bound(const CoverTable& table, const Tree& tree_prime, const Permutation& pi) {
  require_same_leaves(table.tree(), tree_prime, pi);
  int bound = 0;
  for (VertexId w : tree_prime.internal_nodes()) {
    const LeafSet anti = pi.preimage(tree_prime.anti_descendants(w));
    int best = table.count(pi.preimage(tree_prime.descendants(w)));
    if (!anti.empty()) best = std::min(best, table.count(anti));
    bound = std::max(bound, best);
  }
  return bound;
}

namespace {

struct WeightedDoad {
  LeafSet set;
  std::uint64_t weight;
  DoadWitness witness;
};

// Cheapest witness per doad set.
std::vector<WeightedDoad> weighted_doads(const Tree& tree, const DimensionVector& f) {
  if (static_cast<int>(f.size()) != tree.vertex_count()) {
    throw std::invalid_argument("dimension vector has " + std::to_string(f.size()) + " entries, tree has " +
                                std::to_string(tree.vertex_count()) + " vertices");
  }
  for (std::uint64_t value : f) {
    if (value == 0) throw std::invalid_argument("dimension vector must be positive");
  }
  std::vector<WeightedDoad> out;
  for (const DoadEntry& entry : DoadFamily(tree)) {
    WeightedDoad best{entry.set, kSaturated, entry.witnesses.front()};
    for (const DoadWitness& w : entry.witnesses) {
      if (f[w.vertex] < best.weight) best = {entry.set, f[w.vertex], w};
    }
    out.push_back(best);
  }
  return out;
}

class ProductSolver {
 public:
  explicit ProductSolver(std::vector<WeightedDoad> doads) : doads_(std::move(doads)) {}

  std::uint64_t solve(LeafSet s) {
    if (s.empty()) return 1;
    if (auto it = memo_.find(s.bits()); it != memo_.end()) return it->second;
    std::uint64_t best = kSaturated;
    for (const WeightedDoad& d : doads_) {
      if (!d.set.contains(s.lowest()) || !d.set.subset_of(s)) continue;
      best = std::min(best, saturating_mul(d.weight, solve(s - d.set)));
    }
    memo_.emplace(s.bits(), best);
    return best;
  }

  std::vector<DoadWitness> witness(LeafSet s) {
    std::vector<DoadWitness> out;
    while (!s.empty()) {
      const std::uint64_t target = solve(s);
      const WeightedDoad* pick = nullptr;
      for (const WeightedDoad& d : doads_) {
        if (!d.set.contains(s.lowest()) || !d.set.subset_of(s)) continue;
        if (saturating_mul(d.weight, solve(s - d.set)) != target) continue;
        if (pick == nullptr || d.witness < pick->witness) pick = &d;
      }
      out.push_back(pick->witness);
      s = s - pick->set;
    }
    return out;
  }

 private:
  std::vector<WeightedDoad> doads_;
  std::unordered_map<LeafSet::Mask, std::uint64_t> memo_;
};

}  // namespace

ProductCover min_product_cover(const Tree& tree, const DimensionVector& f, LeafSet s) {
  if (!s.subset_of(tree.all_leaves())) throw std::invalid_argument("leaf set outside the tree");
  auto doads = weighted_doads(tree, f);
  ProductSolver solver(doads);
  ProductCover out{solver.solve(s), solver.witness(s)};
  if (s == tree.all_leaves()) {
    // Overlapping two-set covers of ℒ are not reached by the disjoint recursion.
    for (std::size_t i = 0; i < doads.size(); ++i) {
      for (std::size_t j = i + 1; j < doads.size(); ++j) {
        if ((doads[i].set | doads[j].set) != s || doads[i].set.disjoint_from(doads[j].set)) continue;
        const std::uint64_t p = saturating_mul(doads[i].weight, doads[j].weight);
        if (p < out.product) {
          out.product = p;
          out.witness = {std::min(doads[i].witness, doads[j].witness),
                         std::max(doads[i].witness, doads[j].witness)};
        }
      }
    }
  }
  return out;
}

TrivialContainment check_trivial_containment(const Tree& tree, const DimensionVector& f,
                                             const Tree& tree_prime, const DimensionVector& f_prime,
                                             const Permutation& pi) {
  require_same_leaves(tree, tree_prime, pi);
  if (static_cast<int>(f_prime.size()) != tree_prime.vertex_count()) {
    throw std::invalid_argument("dimension vector f' does not match the second tree");
  }
  for (std::uint64_t value : f_prime) {
    if (value == 0) throw std::invalid_argument("dimension vector must be positive");
  }
  auto doads = weighted_doads(tree, f);
  ProductSolver solver(doads);

  TrivialContainment out;
  out.holds = true;
  for (VertexId v = 0; v < tree_prime.vertex_count(); ++v) {
    const LeafSet desc = pi.preimage(tree_prime.descendants(v));
    const LeafSet anti = pi.preimage(tree_prime.anti_descendants(v));
    NodeProduct node;
    node.node = v;
    node.allowed = f_prime[v];
    // min_product_cover handles ℒ with overlapping pairs; the solver alone is exact elsewhere.
    const ProductCover d = desc == tree.all_leaves() ? min_product_cover(tree, f, desc)
                                                     : ProductCover{solver.solve(desc), solver.witness(desc)};
    const ProductCover a{solver.solve(anti), solver.witness(anti)};
    if (a.product < d.product) {
      node.side = DoadSide::anti_descendant;
      node.product = a.product;
      node.witness = a.witness;
    } else {
      node.side = DoadSide::descendant;
      node.product = d.product;
      node.witness = d.witness;
    }
    if (node.product > node.allowed && out.holds) {
      out.holds = false;
      out.violating_node = v;
    }
    out.nodes.push_back(std::move(node));
  }
  if (out.holds && tree.leaf_count() <= kCoverTableMaxLeaves) {
    out.all_r_exponent = cover_bound(CoverTable(tree), tree_prime, pi);
  }
  return out;
}

}  // namespace tnexp
