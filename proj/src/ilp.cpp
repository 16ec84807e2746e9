#include "tnexp/ilp.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "tnexp/cover.hpp"

namespace tnexp {

namespace {

const char* prefix(IpVarKind kind) {
  switch (kind) {
    case IpVarKind::objective: return "c";
    case IpVarKind::z_under: return "zu";
    case IpVarKind::z_over: return "zo";
    case IpVarKind::x_under: return "xu";
    case IpVarKind::x_over: return "xo";
    case IpVarKind::y_under: return "yu";
    case IpVarKind::y_over: return "yo";
  }
  return "?";
}

}  // namespace

int IpModel::find(const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

IpModel build_ip(const Tree& tree, const Tree& tree_prime, const Permutation& pi) {
  if (tree.leaf_count() != tree_prime.leaf_count() || pi.size() != tree.leaf_count()) {
    throw std::invalid_argument("integer program needs trees and permutation on the same leaf set");
  }
  IpModel model;
  model.leaf_count_ = tree.leaf_count();
  model.tree_ = tree.to_string();
  model.tree_prime_ = tree_prime.to_string();
  model.pi_ = pi;
  auto& vars = model.variables_;
  vars.push_back({IpVarKind::objective, kNoVertex, kNoVertex, LeafSet(), "c"});

  auto add = [&](IpVarKind kind, VertexId w, VertexId v, LeafSet set) {
    std::string name = std::string(prefix(kind)) + "_" + tree_prime.vertex_name(w);
    if (v != kNoVertex) name += "_" + tree.vertex_name(v);
    vars.push_back({kind, w, v, set, std::move(name)});
    return static_cast<int>(vars.size()) - 1;
  };

  for (VertexId w : tree_prime.internal_nodes()) {
    IpNode node;
    node.node = w;
    node.under_target = pi.preimage(tree_prime.descendants(w));
    node.over_target = pi.preimage(tree_prime.anti_descendants(w));
    node.z_under = add(IpVarKind::z_under, w, kNoVertex, LeafSet());
    if (node.over_target.empty()) {
      model.fixed_zero_.push_back({IpVarKind::z_over, w, kNoVertex});
    } else {
      node.z_over = add(IpVarKind::z_over, w, kNoVertex, LeafSet());
    }
    struct Family {
      IpVarKind kind;
      bool anti;
      bool over;
    };
    for (const Family fam : {Family{IpVarKind::x_under, false, false}, Family{IpVarKind::x_over, false, true},
                             Family{IpVarKind::y_under, true, false}, Family{IpVarKind::y_over, true, true}}) {
      const LeafSet target = fam.over ? node.over_target : node.under_target;
      for (VertexId v = 0; v < tree.vertex_count(); ++v) {
        const LeafSet set = fam.anti ? tree.anti_descendants(v) : tree.descendants(v);
        if (set.empty() || target.empty() || !set.subset_of(target)) {
          model.fixed_zero_.push_back({fam.kind, w, v});
          continue;
        }
        const int index = add(fam.kind, w, v, set);
        (fam.over ? node.over_candidates : node.under_candidates).push_back(index);
      }
    }
    model.nodes_.push_back(std::move(node));
  }

  auto& rows = model.rows_;
  auto name_of = [&](const char* tag, VertexId w) { return std::string(tag) + "_" + tree_prime.vertex_name(w); };
  for (const IpNode& node : model.nodes_) {
    IpRow row{name_of("side", node.node), RowGroup::side_choice, {{node.z_under, 1}}, RowSense::greater_equal, 1};
    if (node.z_over >= 0) row.terms.push_back({node.z_over, 1});
    rows.push_back(std::move(row));
  }
  auto cover_rows = [&](bool over) {
    for (const IpNode& node : model.nodes_) {
      const LeafSet target = over ? node.over_target : node.under_target;
      const auto& candidates = over ? node.over_candidates : node.under_candidates;
      for (int leaf : target.labels()) {
        IpRow row{name_of(over ? "co" : "cu", node.node) + "_l" + std::to_string(leaf),
                  over ? RowGroup::cover_over : RowGroup::cover_under,
                  {},
                  RowSense::greater_equal,
                  0};
        for (int var : candidates) {
          if (vars[var].set.contains(leaf)) row.terms.push_back({var, 1});
        }
        row.terms.push_back({over ? node.z_over : node.z_under, -1});
        rows.push_back(std::move(row));
      }
    }
  };
  cover_rows(false);
  cover_rows(true);
  for (bool over : {false, true}) {
    for (const IpNode& node : model.nodes_) {
      IpRow row{name_of(over ? "ko" : "ku", node.node),
                over ? RowGroup::cardinality_over : RowGroup::cardinality_under,
                {},
                RowSense::less_equal,
                0};
      for (int var : over ? node.over_candidates : node.under_candidates) row.terms.push_back({var, 1});
      row.terms.push_back({model.objective(), -1});
      rows.push_back(std::move(row));
    }
  }
  return model;
}

namespace {

class CoverSearch {
 public:
  CoverSearch(LeafSet target, const std::vector<LeafSet>& candidates) : target_(target.bits()) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto mask = candidates[i].bits();
      if (mask == 0 || (mask & ~target_) != 0) continue;
      if (std::find(sets_.begin(), sets_.end(), mask) != sets_.end()) continue;
      sets_.push_back(mask);
      index_.push_back(static_cast<int>(i));
    }
  }

  int run() {
    greedy();
    search(target_, 0);
    return best_;
  }
  std::vector<int> choice() const {
    std::vector<int> out;
    for (int k : best_choice_) out.push_back(index_[k]);
    std::sort(out.begin(), out.end());
    return out;
  }
  std::uint64_t nodes() const { return nodes_; }

 private:
  using Mask = LeafSet::Mask;

  void greedy() {
    Mask uncovered = target_;
    std::vector<int> picks;
    while (uncovered != 0) {
      int pick = -1;
      int gain = 0;
      for (std::size_t k = 0; k < sets_.size(); ++k) {
        const int g = std::popcount(sets_[k] & uncovered);
        if (g > gain) {
          gain = g;
          pick = static_cast<int>(k);
        }
      }
      if (pick < 0) return;  // infeasible: leave best_ unset
      picks.push_back(pick);
      uncovered &= ~sets_[pick];
    }
    best_ = static_cast<int>(picks.size());
    best_choice_ = picks;
  }

  void search(Mask uncovered, int depth) {
    ++nodes_;
    if (uncovered == 0) {
      if (best_ < 0 || depth < best_) {
        best_ = depth;
        best_choice_ = current_;
      }
      return;
    }
    int widest = 0;
    for (Mask s : sets_) widest = std::max(widest, std::popcount(s & uncovered));
    if (widest == 0) return;
    const int lower = (std::popcount(uncovered) + widest - 1) / widest;
    if (best_ >= 0 && depth + lower >= best_) return;

    // Branch on the uncovered leaf with the fewest candidate sets.
    int branch_leaf = -1;
    int fewest = 0;
    for (Mask rest = uncovered; rest != 0; rest &= rest - 1) {
      const Mask bit = rest & (~rest + 1);
      int count = 0;
      for (Mask s : sets_) count += (s & bit) != 0;
      if (branch_leaf < 0 || count < fewest) {
        branch_leaf = std::countr_zero(bit);
        fewest = count;
      }
    }
    if (fewest == 0) return;
    const Mask bit = Mask{1} << branch_leaf;
    std::vector<int> options;
    for (std::size_t k = 0; k < sets_.size(); ++k) {
      if (sets_[k] & bit) options.push_back(static_cast<int>(k));
    }
    std::stable_sort(options.begin(), options.end(), [&](int a, int b) {
      return std::popcount(sets_[a] & uncovered) > std::popcount(sets_[b] & uncovered);
    });
    for (int k : options) {
      current_.push_back(k);
      search(uncovered & ~sets_[k], depth + 1);
      current_.pop_back();
    }
  }

  Mask target_;
  std::vector<Mask> sets_;
  std::vector<int> index_;
  std::vector<int> current_;
  std::vector<int> best_choice_;
  int best_ = -1;
  std::uint64_t nodes_ = 0;
};

}  // namespace

int min_set_cover(LeafSet target, const std::vector<LeafSet>& candidates, std::vector<int>* chosen,
                  std::uint64_t* search_nodes) {
  CoverSearch search(target, candidates);
  const int best = search.run();
  if (chosen != nullptr) *chosen = best >= 0 ? search.choice() : std::vector<int>{};
  if (search_nodes != nullptr) *search_nodes += search.nodes();
  return best;
}

IpSolution solve_ip(const IpModel& model, const SolveOptions& options) {
  const auto& vars = model.variables();
  IpSolution solution;
  solution.values.assign(vars.size(), 0);

  std::optional<CoverTable> table;
  if (options.use_cover_table) table.emplace(Tree::parse(model.tree()));

  auto solve_side = [&](LeafSet target, const std::vector<int>& candidate_vars, std::vector<int>& chosen) {
    std::vector<LeafSet> sets;
    for (int var : candidate_vars) sets.push_back(vars[var].set);
    if (table) {
      // Map the table's optimal witnesses back onto model variables.
      chosen.clear();
      for (const DoadWitness& w : table->witness(target)) {
        const IpVarKind want_under = w.side == DoadSide::descendant ? IpVarKind::x_under : IpVarKind::y_under;
        const IpVarKind want_over = w.side == DoadSide::descendant ? IpVarKind::x_over : IpVarKind::y_over;
        for (int var : candidate_vars) {
          if (vars[var].vertex == w.vertex && (vars[var].kind == want_under || vars[var].kind == want_over)) {
            chosen.push_back(var);
            break;
          }
        }
      }
      return table->count(target);
    }
    std::vector<int> picked;
    const int best = min_set_cover(target, sets, &picked, &solution.search_nodes);
    chosen.clear();
    for (int k : picked) chosen.push_back(candidate_vars[k]);
    return best;
  };

  for (const IpNode& node : model.nodes()) {
    std::vector<int> under_choice;
    std::vector<int> over_choice;
    const int under = solve_side(node.under_target, node.under_candidates, under_choice);
    int over = -1;
    if (node.z_over >= 0) over = solve_side(node.over_target, node.over_candidates, over_choice);
    if (under < 0 && over < 0) throw std::logic_error("internal error: cover program infeasible at a node");
    const bool take_over = over >= 0 && (under < 0 || over < under);
    solution.values[take_over ? node.z_over : node.z_under] = 1;
    for (int var : take_over ? over_choice : under_choice) solution.values[var] = 1;
    solution.objective = std::max(solution.objective, take_over ? over : under);
  }
  solution.values[model.objective()] = solution.objective;
  return solution;
}

bool is_feasible(const IpModel& model, const std::vector<int>& values, std::string* why) {
  auto fail = [&](const std::string& message) {
    if (why != nullptr) *why = message;
    return false;
  };
  const auto& vars = model.variables();
  if (values.size() != vars.size()) return fail("assignment has the wrong length");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].kind == IpVarKind::objective) {
      if (values[i] < 0) return fail("negative objective variable");
    } else if (values[i] != 0 && values[i] != 1) {
      return fail("variable " + vars[i].name + " is not binary");
    }
  }
  for (const IpRow& row : model.rows()) {
    long lhs = 0;
    for (const IpTerm& term : row.terms) lhs += static_cast<long>(term.coefficient) * values[term.variable];
    const bool ok = row.sense == RowSense::greater_equal ? lhs >= row.rhs : lhs <= row.rhs;
    if (!ok) return fail("row " + row.name + " violated");
  }
  return true;
}

std::vector<int> assignment_from_covers(const IpModel& model, const std::vector<bool>& over,
                                        const std::vector<std::vector<DoadWitness>>& covers, int objective) {
  const auto& vars = model.variables();
  const auto& nodes = model.nodes();
  if (over.size() != nodes.size() || covers.size() != nodes.size()) {
    throw std::invalid_argument("one cover per internal node of T' is required");
  }
  std::vector<int> values(vars.size(), 0);
  values[model.objective()] = objective;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const IpNode& node = nodes[k];
    const int z = over[k] ? node.z_over : node.z_under;
    if (z < 0) throw std::invalid_argument("cover requested for an empty side");
    values[z] = 1;
    for (const DoadWitness& w : covers[k]) {
      IpVarKind kind;
      if (w.side == DoadSide::descendant) {
        kind = over[k] ? IpVarKind::x_over : IpVarKind::x_under;
      } else {
        kind = over[k] ? IpVarKind::y_over : IpVarKind::y_under;
      }
      int found = -1;
      for (int var : over[k] ? node.over_candidates : node.under_candidates) {
        if (vars[var].kind == kind && vars[var].vertex == w.vertex) found = var;
      }
      if (found < 0) throw std::invalid_argument("cover uses a set that is fixed to zero");
      values[found] = 1;
    }
  }
  return values;
}

std::vector<int> poset_certificate(const IpModel& model, const Tree& tree, int* objective) {
  std::vector<bool> over;
  std::vector<std::vector<DoadWitness>> covers;
  int worst = 0;
  for (const IpNode& node : model.nodes()) {
    if (node.over_target.empty()) {
      over.push_back(false);
      covers.push_back({{tree.root(), DoadSide::descendant}});
      worst = std::max(worst, 1);
      continue;
    }
    const PosetCover cover = poset_cover(tree, node.under_target);
    over.push_back(cover.covers_complement);
    covers.push_back(cover.sets);
    worst = std::max(worst, cover.size);
  }
  if (objective != nullptr) *objective = worst;
  return assignment_from_covers(model, over, covers, worst);
}

void export_lp(const IpModel& model, std::ostream& out) {
  const auto& vars = model.variables();
  out << "\\ Doad cover integer program\n";
  out << "\\ T  = " << model.tree() << "\n";
  out << "\\ T' = " << model.tree_prime() << "\n";
  out << "\\ pi = " << model.pi().to_string() << "\n";
  out << "Minimize\n obj: c\nSubject To\n";
  for (const IpRow& row : model.rows()) {
    out << " " << row.name << ":";
    int on_line = 0;
    bool first = true;
    for (const IpTerm& term : row.terms) {
      if (on_line == 8) {
        out << "\n   ";
        on_line = 0;
      }
      if (term.coefficient < 0) {
        out << " - ";
      } else if (!first) {
        out << " + ";
      } else {
        out << " ";
      }
      if (term.coefficient != 1 && term.coefficient != -1) out << std::abs(term.coefficient) << " ";
      out << vars[term.variable].name;
      first = false;
      ++on_line;
    }
    out << (row.sense == RowSense::greater_equal ? " >= " : " <= ") << row.rhs << "\n";
  }
  out << "General\n c\nBinary\n";
  for (const IpVariable& var : vars) {
    if (var.kind != IpVarKind::objective) out << " " << var.name << "\n";
  }
  out << "End\n";
}

void export_lp(const IpModel& model, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  export_lp(model, file);
  if (!file) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace tnexp
