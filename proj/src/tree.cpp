#include "tnexp/tree.hpp"

#include <algorithm>

namespace tnexp {

Tree Tree::parse(std::string_view text) {
  // Skip whitespace up front so positions in errors refer to the raw text.
  std::vector<std::pair<char, std::size_t>> tokens;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (c != '(' && c != ')' && c != '.') {
      throw TreeParseError(std::string("unexpected character '") + c + "'", i);
    }
    tokens.emplace_back(c, i);
  }
  if (tokens.empty()) throw TreeParseError("empty tree string", 0);

  Tree tree;
  // Open nodes awaiting children: (vertex id, children seen so far).
  std::vector<std::pair<VertexId, int>> open;
  int leaves = 0;
  bool done = false;

  auto attach = [&](VertexId child, std::size_t pos) {
    if (open.empty()) {
      if (done) throw TreeParseError("trailing input after complete tree", pos);
      done = true;
      return;
    }
    auto& [parent, seen] = open.back();
    if (seen == 2) throw TreeParseError("node with more than two children", pos);
    tree.nodes_[child].parent = parent;
    if (seen == 0) {
      tree.nodes_[parent].left = child;
    } else {
      tree.nodes_[parent].right = child;
    }
    ++seen;
  };

  for (const auto& [c, pos] : tokens) {
    if (done) throw TreeParseError("trailing input after complete tree", pos);
    if (c == '(') {
      const auto id = static_cast<VertexId>(tree.nodes_.size());
      tree.nodes_.push_back(Node{});
      if (!open.empty()) attach(id, pos);
      open.emplace_back(id, 0);
    } else if (c == '.') {
      if (++leaves > kMaxLeaves) {
        throw TreeParseError("more than " + std::to_string(kMaxLeaves) + " leaves", pos);
      }
      const auto id = static_cast<VertexId>(tree.nodes_.size());
      tree.nodes_.push_back(Node{});
      attach(id, pos);
    } else {
      if (open.empty()) throw TreeParseError("unbalanced ')'", pos);
      const auto [id, seen] = open.back();
      if (seen != 2) {
        throw TreeParseError(seen == 1 ? "node with only one child" : "empty parentheses", pos);
      }
      open.pop_back();
      if (open.empty()) done = true;
    }
  }
  if (!open.empty()) throw TreeParseError("unbalanced '(': missing ')'", text.size());
  if (leaves < 2) throw TreeParseError("a tree needs at least two leaves", 0);

  tree.finalize();
  return tree;
}

void Tree::finalize() {
  leaf_count_ = 0;
  leaf_vertices_.clear();
  internal_.clear();
  // Preorder numbering means parents precede children.
  for (VertexId v = 0; v < vertex_count(); ++v) {
    Node& node = nodes_[v];
    if (node.parent != kNoVertex) {
      const Node& up = nodes_[node.parent];
      node.path = up.path + (up.left == v ? '0' : '1');
    }
    if (node.left == kNoVertex) {
      node.leaf = ++leaf_count_;
      leaf_vertices_.push_back(v);
    } else {
      internal_.push_back(v);
    }
  }
  for (VertexId v = vertex_count() - 1; v >= 0; --v) {
    Node& node = nodes_[v];
    node.leaves = node.left == kNoVertex
                      ? LeafSet::singleton(node.leaf)
                      : nodes_[node.left].leaves | nodes_[node.right].leaves;
  }
}

Tree Tree::hierarchical(int depth) {
  if (depth < 1 || depth > 5) throw std::invalid_argument("hierarchical depth must be in 1..5");
  std::string s = ".";
  for (int k = 0; k < depth; ++k) s = "(" + s + s + ")";
  return parse(s);
}

Tree Tree::train_track(int leaves) {
  if (leaves < 2 || leaves > kMaxLeaves) {
    throw std::invalid_argument("train track size must be in 2.." + std::to_string(kMaxLeaves));
  }
  std::string s = ".";
  for (int k = 1; k < leaves; ++k) s = "(" + s + ".)";
  return parse(s);
}

std::string Tree::vertex_name(VertexId v) const {
  return nodes_[v].path.empty() ? std::string("r") : nodes_[v].path;
}

bool Tree::is_ancestor_or_equal(VertexId a, VertexId v) const {
  const std::string& pa = nodes_[a].path;
  const std::string& pv = nodes_[v].path;
  return pv.size() >= pa.size() && pv.compare(0, pa.size(), pa) == 0;
}

std::string Tree::subtree_string(VertexId v) const {
  if (is_leaf(v)) return ".";
  return "(" + subtree_string(nodes_[v].left) + subtree_string(nodes_[v].right) + ")";
}

std::string Tree::to_string() const { return subtree_string(root()); }

std::string Tree::canonical_subtree(VertexId v) const {
  if (is_leaf(v)) return ".";
  std::string a = canonical_subtree(nodes_[v].left);
  std::string b = canonical_subtree(nodes_[v].right);
  if (b < a) std::swap(a, b);
  return "(" + a + b + ")";
}

std::string Tree::canonical_string() const { return canonical_subtree(root()); }

std::pair<Tree, Permutation> Tree::canonicalize() const {
  // Leaf order of the canonical representative, as labels of this tree.
  std::vector<int> order;
  auto walk = [&](auto&& self, VertexId v) -> std::string {
    if (is_leaf(v)) {
      order.push_back(nodes_[v].leaf);
      return ".";
    }
    const std::size_t mark = order.size();
    std::string a = self(self, nodes_[v].left);
    const std::size_t mid = order.size();
    std::string b = self(self, nodes_[v].right);
    if (b < a) {
      std::swap(a, b);
      std::rotate(order.begin() + static_cast<std::ptrdiff_t>(mark),
                  order.begin() + static_cast<std::ptrdiff_t>(mid), order.end());
    }
    return "(" + a + b + ")";
  };
  Tree canonical = parse(walk(walk, root()));
  std::vector<int> sigma(static_cast<std::size_t>(leaf_count_));
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    sigma[order[pos] - 1] = static_cast<int>(pos) + 1;
  }
  return {std::move(canonical), Permutation::from_one_line(std::move(sigma))};
}

Tree Tree::mirrored() const {
  auto walk = [&](auto&& self, VertexId v) -> std::string {
    if (is_leaf(v)) return ".";
    return "(" + self(self, nodes_[v].right) + self(self, nodes_[v].left) + ")";
  };
  return parse(walk(walk, root()));
}

int vertex_height(std::string_view label) {
  const auto last_zero = label.rfind('0');
  if (last_zero == std::string_view::npos) return 0;
  return static_cast<int>(std::count(label.begin(), label.begin() + static_cast<std::ptrdiff_t>(last_zero), '1'));
}

int vertex_dual_height(std::string_view label) {
  const auto last_one = label.rfind('1');
  if (last_one == std::string_view::npos) return 0;
  return static_cast<int>(std::count(label.begin(), label.begin() + static_cast<std::ptrdiff_t>(last_one), '0'));
}

LeafHeights heights(const Tree& tree) {
  LeafHeights out;
  for (int label = 1; label <= tree.leaf_count(); ++label) {
    const std::string& path = tree.path_label(tree.leaf_vertex(label));
    out.height.push_back(vertex_height(path));
    out.dual_height.push_back(vertex_dual_height(path));
  }
  return out;
}

std::vector<std::string> enumerate_shape_strings(int leaves) {
  if (leaves < 2 || leaves > 16) throw std::invalid_argument("shape enumeration supports 2..16 leaves");
  std::vector<std::vector<std::string>> by_size(static_cast<std::size_t>(leaves) + 1);
  by_size[1] = {"."};
  for (int n = 2; n <= leaves; ++n) {
    auto& out = by_size[n];
    for (int a = 1; 2 * a <= n; ++a) {
      const auto& small = by_size[a];
      const auto& large = by_size[n - a];
      for (std::size_t i = 0; i < small.size(); ++i) {
        // Equal halves: take each unordered pair once.
        const std::size_t j0 = (2 * a == n) ? i : 0;
        for (std::size_t j = j0; j < large.size(); ++j) {
          const std::string& x = small[i];
          const std::string& y = large[j];
          out.push_back(x < y ? "(" + x + y + ")" : "(" + y + x + ")");
        }
      }
    }
    std::sort(out.begin(), out.end());
  }
  return by_size[leaves];
}

std::vector<Tree> enumerate_shapes(int leaves) {
  std::vector<Tree> out;
  for (const auto& s : enumerate_shape_strings(leaves)) out.push_back(Tree::parse(s));
  return out;
}

std::vector<Tree> enumerate_plane_trees(int leaves) {
  if (leaves < 2 || leaves > 12) throw std::invalid_argument("plane tree enumeration supports 2..12 leaves");
  std::vector<std::vector<std::string>> by_size(static_cast<std::size_t>(leaves) + 1);
  by_size[1] = {"."};
  for (int n = 2; n <= leaves; ++n) {
    for (int a = 1; a < n; ++a) {
      for (const auto& x : by_size[a]) {
        for (const auto& y : by_size[n - a]) by_size[n].push_back("(" + x + y + ")");
      }
    }
    std::sort(by_size[n].begin(), by_size[n].end());
  }
  std::vector<Tree> out;
  for (const auto& s : by_size[leaves]) out.push_back(Tree::parse(s));
  return out;
}

}  // namespace tnexp
