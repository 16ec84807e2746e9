#include "tnexp/doad.hpp"

#include <algorithm>
#include <map>

namespace tnexp {

std::string to_string(const Tree& tree, const DoadWitness& witness) {
  return (witness.side == DoadSide::descendant ? "d:" : "a:") + tree.vertex_name(witness.vertex);
}

DoadFamily::DoadFamily(const Tree& tree) : leaf_count_(tree.leaf_count()) {
  std::map<LeafSet::Mask, std::vector<DoadWitness>> by_mask;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    by_mask[tree.descendants(v).bits()].push_back({v, DoadSide::descendant});
    const LeafSet anti = tree.anti_descendants(v);
    if (!anti.empty()) by_mask[anti.bits()].push_back({v, DoadSide::anti_descendant});
  }
  entries_.reserve(by_mask.size());
  for (auto& [mask, witnesses] : by_mask) {
    std::sort(witnesses.begin(), witnesses.end());
    entries_.push_back({LeafSet(mask), std::move(witnesses)});
  }
}

const DoadEntry* DoadFamily::find(LeafSet s) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                             [](const DoadEntry& e, LeafSet key) { return e.set < key; });
  return (it != entries_.end() && it->set == s) ? &*it : nullptr;
}

std::vector<LeafSet> DoadFamily::sets() const {
  std::vector<LeafSet> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.set);
  return out;
}

}  // namespace tnexp
