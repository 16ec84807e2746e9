#include "tnexp/poset.hpp"

#include <stdexcept>

namespace tnexp {

VertexSet VertexSet::all(const Tree& tree) {
  const int n = tree.vertex_count();
  return VertexSet(n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1);
}

VertexSet VertexSet::of(std::initializer_list<VertexId> vertices) {
  Mask bits = 0;
  for (VertexId v : vertices) bits |= Mask{1} << v;
  return VertexSet(bits);
}

VertexSet VertexSet::leaves_of(const Tree& tree, LeafSet leaves) {
  Mask bits = 0;
  for (int label : leaves.labels()) bits |= Mask{1} << tree.leaf_vertex(label);
  return VertexSet(bits);
}

std::vector<VertexId> VertexSet::vertices() const {
  std::vector<VertexId> out;
  for (Mask rest = bits_; rest != 0; rest &= rest - 1) out.push_back(std::countr_zero(rest));
  return out;
}

VertexSet up_set(const Tree& tree, VertexSet s) {
  VertexSet::Mask out = 0;
  for (VertexId v : s.vertices()) {
    for (VertexId a = v; a != kNoVertex; a = tree.parent(a)) out |= VertexSet::Mask{1} << a;
  }
  return VertexSet(out);
}

VertexSet down_set(const Tree& tree, VertexSet s) {
  // Preorder: a vertex's parent has a smaller id, so one forward sweep suffices.
  VertexSet::Mask out = s.bits();
  for (VertexId v = 1; v < tree.vertex_count(); ++v) {
    if ((out >> tree.parent(v)) & 1u) out |= VertexSet::Mask{1} << v;
  }
  return VertexSet(out);
}

VertexId lowest_common_ancestor(const Tree& tree, VertexSet s) {
  if (s.empty()) throw std::invalid_argument("lowest common ancestor of an empty set");
  const auto members = s.vertices();
  VertexId lca = members.front();
  for (VertexId v : members) {
    while (!tree.is_ancestor_or_equal(lca, v)) lca = tree.parent(lca);
  }
  return lca;
}

std::vector<VertexId> maxima(const Tree& tree, VertexSet p) {
  std::vector<VertexId> out;
  for (VertexId v : p.vertices()) {
    bool dominated = false;
    for (VertexId a = tree.parent(v); a != kNoVertex && !dominated; a = tree.parent(a)) {
      dominated = p.contains(a);
    }
    if (!dominated) out.push_back(v);
  }
  return out;
}

int maxima_count(const Tree& tree, VertexSet p) { return static_cast<int>(maxima(tree, p).size()); }

PosetSummary poset_queries(const Tree& tree, VertexSet s) {
  return {up_set(tree, s), down_set(tree, s), lowest_common_ancestor(tree, s)};
}

}  // namespace tnexp
