// tnexp: containment exponents between tree tensor networks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tnexp/bounds.hpp"
#include "tnexp/cover.hpp"
#include "tnexp/ilp.hpp"
#include "tnexp/search.hpp"
#include "tnexp/tns_verify.hpp"
#include "tnexp/tree.hpp"

using nlohmann::json;
using namespace tnexp;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// "ht:3", "HT_3", "tt:8", "TT_8" or a literal tree string.
Tree tree_arg(const std::string& text) {
  auto family = [&](const std::string& a, const std::string& b) -> std::optional<int> {
    for (const std::string& prefix : {a, b}) {
      if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
        const std::string rest = text.substr(prefix.size());
        if (rest.find_first_not_of("0123456789") != std::string::npos) throw UsageError("bad tree shorthand " + text);
        return std::stoi(rest);
      }
    }
    return std::nullopt;
  };
  if (auto k = family("ht:", "HT_")) return Tree::hierarchical(*k);
  if (auto n = family("tt:", "TT_")) return Tree::train_track(*n);
  return Tree::parse(text);
}

Permutation perm_arg(const std::string& text, int n) { return Permutation::parse(text, n); }

std::vector<std::uint64_t> number_list(const std::string& text, const std::string& what) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError(what + " must be a positive integer or a comma separated list");
    }
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw UsageError(what + " is empty");
  return out;
}

// A single value is broadcast to `size` entries.
std::vector<std::uint64_t> broadcast(const std::string& text, std::size_t size, const std::string& what) {
  auto values = number_list(text, what);
  if (values.size() == 1) values.assign(size, values.front());
  if (values.size() != size) {
    throw UsageError(what + " needs 1 or " + std::to_string(size) + " entries, got " + std::to_string(values.size()));
  }
  return values;
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

std::string witness_text(const Tree& tree, const std::vector<DoadWitness>& sets) {
  std::string out;
  for (const DoadWitness& w : sets) out += (out.empty() ? "" : " ") + to_string(tree, w);
  return out;
}

// ---- enumerate ----------------------------------------------------------

struct EnumerateArgs {
  int n = 4;
  bool plane = false;
  bool table = false;
};

int cmd_enumerate(const EnumerateArgs& a) {
  const auto trees = a.plane ? enumerate_plane_trees(a.n) : enumerate_shapes(a.n);
  if (a.table) {
    for (const Tree& t : trees) std::cout << t.to_string() << "\n";
    return 0;
  }
  json list = json::array();
  for (const Tree& t : trees) list.push_back(t.to_string());
  emit({{"n", a.n}, {"kind", a.plane ? "plane" : "shape"}, {"count", trees.size()}, {"trees", list}});
  return 0;
}

// ---- exponent -----------------------------------------------------------

struct ExponentArgs {
  std::string tree;
  std::string tree_prime;
  std::string perm = "id";
  bool witnesses = false;
  bool ip = false;
  bool table = false;
};

int cmd_exponent(const ExponentArgs& a) {
  const Tree t = tree_arg(a.tree);
  const Tree tp = tree_arg(a.tree_prime);
  if (t.leaf_count() != tp.leaf_count()) {
    throw std::invalid_argument("leaf mismatch: " + std::to_string(t.leaf_count()) + " vs " +
                                std::to_string(tp.leaf_count()));
  }
  const Permutation pi = perm_arg(a.perm, t.leaf_count());
  ExponentReport report = cover_exponent(t, tp, pi, a.witnesses);
  report.trivial_bound = trivial_bound(t.leaf_count()).value;
  report.poset_bound = poset_bound(t, tp, pi).value;
  if (pi.is_identity()) {
    if (tp == Tree::train_track(t.leaf_count())) report.height_tt_bound = height_bound_tt(t).value;
    report.plane_general_bound = plane_general_bound(t).value;
  }
  if (a.ip) report.ilp_optimum = solve_ip(build_ip(t, tp, pi)).objective;

  if (a.table) {
    std::cout << "T  = " << report.tree << "\nT' = " << report.tree_prime << "\npi = " << pi.to_string() << "\n";
    std::cout << "cover            " << report.cover_bound << "\n";
    std::cout << "naive max        " << report.naive_max_bound << "\n";
    std::cout << "poset            " << *report.poset_bound << "\n";
    std::cout << "trivial          " << *report.trivial_bound << "\n";
    if (report.height_tt_bound) std::cout << "height (TT)      " << *report.height_tt_bound << "\n";
    if (report.plane_general_bound) std::cout << "plane general    " << *report.plane_general_bound << "\n";
    if (report.ilp_optimum) std::cout << "ip optimum       " << *report.ilp_optimum << "\n";
    if (a.witnesses) {
      for (const NodeCover& node : report.nodes) {
        std::cout << "  " << tp.vertex_name(node.node) << ": " << node.best() << " via "
                  << (node.chosen == DoadSide::descendant ? "d " : "a ")
                  << (node.chosen == DoadSide::descendant ? node.descendant_pullback : node.anti_pullback).to_string()
                  << " = " << witness_text(t, node.witness) << "\n";
      }
    }
    return 0;
  }
  json doc = {{"tree", report.tree},
              {"tree_prime", report.tree_prime},
              {"pi", pi.to_string()},
              {"n", t.leaf_count()},
              {"cover_bound", report.cover_bound},
              {"naive_max_bound", report.naive_max_bound},
              {"poset_bound", *report.poset_bound},
              {"trivial_bound", *report.trivial_bound}};
  if (report.height_tt_bound) doc["height_tt_bound"] = *report.height_tt_bound;
  if (report.plane_general_bound) doc["plane_general_bound"] = *report.plane_general_bound;
  if (report.ilp_optimum) doc["ilp_optimum"] = *report.ilp_optimum;
  if (a.witnesses) {
    json nodes = json::array();
    for (const NodeCover& node : report.nodes) {
      json w = json::array();
      for (const DoadWitness& x : node.witness) w.push_back(to_string(t, x));
      nodes.push_back({{"node", tp.vertex_name(node.node)},
                       {"descendants", node.descendant_pullback.to_string()},
                       {"anti_descendants", node.anti_pullback.to_string()},
                       {"descendant_count", node.descendant_count},
                       {"anti_count", node.anti_count ? json(*node.anti_count) : json(nullptr)},
                       {"chosen", node.chosen == DoadSide::descendant ? "d" : "a"},
                       {"witness", w}});
    }
    doc["nodes"] = nodes;
  }
  emit(doc);
  return 0;
}

// ---- bounds -------------------------------------------------------------

struct BoundsArgs {
  std::string tree;
  std::string tree_prime;
  std::string perm = "id";
  bool table = false;
};

json bound_json(const BoundValue& b) {
  json out = {{"kind", to_string(b.kind)}, {"value", b.value}, {"provenance", b.provenance}};
  if (!b.target.empty()) out["target"] = b.target;
  return out;
}

int cmd_bounds(const BoundsArgs& a) {
  const Tree t = tree_arg(a.tree);
  std::vector<BoundValue> values{trivial_bound(t.leaf_count()), height_bound_tt(t), plane_general_bound(t)};
  if (!a.tree_prime.empty()) {
    const Tree tp = tree_arg(a.tree_prime);
    values.push_back(poset_bound(t, tp, perm_arg(a.perm, t.leaf_count())));
  }
  const LeafHeights h = heights(t);
  if (a.table) {
    std::cout << "T = " << t.to_string() << "\nheights";
    for (int x : h.height) std::cout << " " << x;
    std::cout << "\ndual heights";
    for (int x : h.dual_height) std::cout << " " << x;
    std::cout << "\n";
    for (const BoundValue& b : values) std::cout << to_string(b.kind) << " " << b.value << "  (" << b.provenance << ")\n";
    return 0;
  }
  json list = json::array();
  for (const BoundValue& b : values) list.push_back(bound_json(b));
  emit({{"tree", t.to_string()}, {"heights", h.height}, {"dual_heights", h.dual_height}, {"bounds", list}});
  return 0;
}

// ---- search -------------------------------------------------------------

struct SearchArgs {
  SearchOptions options;
  std::string csv;
  std::string json_path;
  bool table = false;
};

int cmd_search(const SearchArgs& a) {
  const SearchResult result = run_search(a.options);
  if (!a.csv.empty()) write_csv(result, a.csv);
  if (!a.json_path.empty()) write_json(result, std::filesystem::path(a.json_path));
  if (a.table) {
    std::cout << "n = " << result.leaves() << ", " << result.shapes().size() << " shapes, "
              << result.permutation_count() << (result.sampled() ? " sampled" : "") << " permutations, "
              << result.instance_count() << " instances\n";
    for (SearchColumn c : result.columns()) {
      std::cout << column_name(c) << " min over pi:\n";
      for (const auto& row : result.min_matrix(c)) {
        for (std::size_t k = 0; k < row.size(); ++k) std::cout << (k ? " " : "  ") << row[k];
        std::cout << "\n";
      }
    }
    return 0;
  }
  write_json(result, std::cout);
  return 0;
}

// ---- ip -----------------------------------------------------------------

struct IpArgs {
  std::string tree;
  std::string tree_prime;
  std::string perm = "id";
  bool solve = false;
  std::string export_path;
  bool table = false;
};

int cmd_ip(const IpArgs& a) {
  const Tree t = tree_arg(a.tree);
  const Tree tp = tree_arg(a.tree_prime);
  if (t.leaf_count() != tp.leaf_count()) throw std::invalid_argument("leaf mismatch");
  const IpModel model = build_ip(t, tp, perm_arg(a.perm, t.leaf_count()));
  if (!a.export_path.empty()) {
    if (a.export_path == "-") {
      export_lp(model, std::cout);
      return 0;
    }
    export_lp(model, std::filesystem::path(a.export_path));
  }
  std::optional<IpSolution> solution;
  if (a.solve) solution = solve_ip(model);
  if (a.table) {
    std::cout << model.variables().size() << " variables, " << model.rows().size() << " rows, "
              << model.fixed_zero().size() << " fixed to zero\n";
    if (solution) std::cout << "c* = " << solution->objective << "\n";
    return 0;
  }
  json doc = {{"tree", model.tree()},
              {"tree_prime", model.tree_prime()},
              {"pi", model.pi().to_string()},
              {"variables", model.variables().size()},
              {"rows", model.rows().size()},
              {"fixed_zero", model.fixed_zero().size()}};
  if (solution) {
    doc["c_star"] = solution->objective;
    json chosen = json::array();
    for (std::size_t i = 1; i < model.variables().size(); ++i) {
      if (solution->values[i] != 0) chosen.push_back(model.variables()[i].name);
    }
    doc["nonzero"] = chosen;
    doc["search_nodes"] = solution->search_nodes;
  }
  if (!a.export_path.empty()) doc["lp"] = a.export_path;
  emit(doc);
  return 0;
}

// ---- verify-ranks -------------------------------------------------------

struct VerifyArgs {
  std::string tree;
  std::string probe;
  std::string perm = "id";
  std::string dims = "2";
  std::string f = "1";
  std::string f_prime = "1";
  int r = 2;
  int trials = 10;
  std::uint64_t seed = 0;
  bool table = false;
};

int cmd_verify_ranks(const VerifyArgs& a) {
  const Tree t = tree_arg(a.tree);
  const Tree probe = a.probe.empty() ? t : tree_arg(a.probe);
  if (t.leaf_count() != probe.leaf_count()) throw std::invalid_argument("leaf mismatch");
  const Permutation pi = perm_arg(a.perm, t.leaf_count());
  NetworkSpec spec{t, {}, broadcast(a.f, static_cast<std::size_t>(t.vertex_count()), "--f"), a.r};
  for (std::uint64_t d : broadcast(a.dims, static_cast<std::size_t>(t.leaf_count()), "--dims")) {
    spec.leaf_dims.push_back(static_cast<int>(d));
  }
  const DimensionVector f_prime = broadcast(a.f_prime, static_cast<std::size_t>(probe.vertex_count()), "--fprime");

  const int c = cover_bound(CoverTable(t), probe, pi);
  const EmpiricalExponent e = empirical_exponent(spec, probe, pi, f_prime, a.trials, a.seed);
  bool all_within = true;
  json nodes = json::array();
  std::vector<std::uint64_t> bounds;
  for (const NodeExponent& node : e.nodes) {
    std::uint64_t bound = f_prime[node.node];
    for (int k = 0; k < c; ++k) bound *= static_cast<std::uint64_t>(a.r);
    bounds.push_back(bound);
    const bool within = static_cast<std::uint64_t>(node.max_rank) <= bound;
    all_within = all_within && within;
    nodes.push_back({{"node", probe.vertex_name(node.node)},
                     {"split", node.split.to_string()},
                     {"max_rank", node.max_rank},
                     {"bound", bound},
                     {"within", within},
                     {"empirical_exponent", node.exponent}});
  }
  if (a.table) {
    std::cout << "cover_bound " << c << ", r = " << a.r << ", seeds " << a.seed << ".."
              << a.seed + static_cast<std::uint64_t>(a.trials) - 1 << "\n";
    for (std::size_t k = 0; k < e.nodes.size(); ++k) {
      std::cout << "  " << probe.vertex_name(e.nodes[k].node) << " " << e.nodes[k].split.to_string() << " rank "
                << e.nodes[k].max_rank << " <= " << bounds[k] << (e.nodes[k].max_rank <= static_cast<int>(bounds[k]) ? "" : "  VIOLATED")
                << "\n";
    }
    std::cout << (all_within ? "all ranks within r^c f'" : "bound violated") << "\n";
    return 0;
  }
  json dims = json::array();
  for (int d : spec.leaf_dims) dims.push_back(d);
  emit({{"spec", {{"tree", t.to_string()}, {"leaf_dims", dims}, {"f", spec.f}, {"r", spec.r}}},
        {"probe", probe.to_string()},
        {"pi", pi.to_string()},
        {"f_prime", f_prime},
        {"seeds", e.seeds},
        {"cover_bound", c},
        {"nodes", nodes},
        {"max_empirical_exponent", e.max_exponent},
        {"transpose_consistent", e.transpose_consistent},
        {"resamples", e.resamples},
        {"all_within", all_within}});
  return 0;
}

// ---- check-reference ----------------------------------------------------

struct CheckArgs {
  std::string ours;
  std::string reference;
  std::string adapter;
  std::size_t keep = 20;
  bool table = false;
};

int cmd_check_reference(const CheckArgs& a) {
  const ReferenceAdapter adapter = a.adapter.empty() ? ReferenceAdapter{} : load_adapter(a.adapter);
  const DiffReport report = verify_against_reference(a.ours, a.reference, adapter, a.keep);
  auto text = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("-"); };
  if (a.table) {
    std::cout << report.compared << " compared, " << report.total() << " mismatches\n";
    for (const Mismatch& m : report.mismatches) {
      std::cout << "  " << m.shape_a << " " << m.shape_b << " " << m.permutation << ": ours " << text(m.ours)
                << ", reference " << text(m.theirs) << "\n";
    }
  } else {
    json list = json::array();
    for (const Mismatch& m : report.mismatches) {
      list.push_back({{"shape_a", m.shape_a},
                      {"shape_b", m.shape_b},
                      {"perm", m.permutation},
                      {"ours", m.ours ? json(*m.ours) : json(nullptr)},
                      {"reference", m.theirs ? json(*m.theirs) : json(nullptr)}});
    }
    emit({{"compared", report.compared}, {"mismatch_count", report.total()}, {"mismatches", list}});
  }
  return report.clean() ? 0 : 1;
}

int fail(const std::string& kind, const std::string& message, int code) {
  std::string line = message;
  for (char& ch : line) {
    if (ch == '\n') ch = ' ';
  }
  std::cerr << "error: " << kind << ": " << line << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Containment exponents between tree tensor networks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  EnumerateArgs enumerate;
  auto* sub_enum = app.add_subcommand("enumerate", "List tree shapes (or plane trees) with n leaves");
  sub_enum->add_option("--n", enumerate.n, "Leaf count")->required();
  sub_enum->add_flag("--plane", enumerate.plane, "All plane trees instead of unordered shapes");
  sub_enum->add_flag("--table", enumerate.table, "One tree per line");

  ExponentArgs exponent;
  auto* sub_exp = app.add_subcommand("exponent", "Cover exponent and bounds for T in T' under pi");
  sub_exp->add_option("tree", exponent.tree, "T")->required();
  sub_exp->add_option("tree_prime", exponent.tree_prime, "T'")->required();
  sub_exp->add_option("perm", exponent.perm, "Permutation: id, one-line digits or a comma list");
  sub_exp->add_flag("--witnesses", exponent.witnesses, "Per-node optimal covers");
  sub_exp->add_flag("--ip", exponent.ip, "Also solve the integer program");
  sub_exp->add_flag("--table", exponent.table, "Human-readable output");

  BoundsArgs bounds;
  auto* sub_bounds = app.add_subcommand("bounds", "Closed-form bounds for a tree");
  sub_bounds->add_option("tree", bounds.tree, "T")->required();
  sub_bounds->add_option("tree_prime", bounds.tree_prime, "T' (adds the poset bound)");
  sub_bounds->add_option("perm", bounds.perm, "Permutation for the poset bound");
  sub_bounds->add_flag("--table", bounds.table, "Human-readable output");

  SearchArgs search;
  auto* sub_search = app.add_subcommand("search", "All shape pairs and permutations for n leaves");
  sub_search->add_option("--n", search.options.leaves, "Leaf count")->required();
  sub_search->add_flag("--poset", search.options.poset, "Add the poset_bound column");
  sub_search->add_flag("--naive", search.options.naive, "Add the naive_max_bound column");
  sub_search->add_option("--sample", search.options.sample, "Sample this many permutations");
  sub_search->add_option("--seed", search.options.seed, "Seed for --sample");
  sub_search->add_option("--threads", search.options.threads, "Worker threads (default TNEXP_THREADS or 1)");
  sub_search->add_option("--csv", search.csv, "Write per-instance CSV here");
  sub_search->add_option("--json", search.json_path, "Write the JSON summary here");
  sub_search->add_flag("--table", search.table, "Human-readable summary");

  IpArgs ip;
  auto* sub_ip = app.add_subcommand("ip", "Build, solve or export the cover integer program");
  sub_ip->add_option("tree", ip.tree, "T")->required();
  sub_ip->add_option("tree_prime", ip.tree_prime, "T'")->required();
  sub_ip->add_option("perm", ip.perm, "Permutation");
  sub_ip->add_flag("--solve", ip.solve, "Solve to optimality");
  sub_ip->add_option("--export", ip.export_path, "Write CPLEX LP text here (- for stdout)");
  sub_ip->add_flag("--table", ip.table, "Human-readable output");

  VerifyArgs verify;
  auto* sub_verify = app.add_subcommand("verify-ranks", "Sample tensor network states and check flattening ranks");
  sub_verify->add_option("--tree", verify.tree, "Network tree T")->required();
  sub_verify->add_option("--probe", verify.probe, "Probe tree T' (default T)");
  sub_verify->add_option("--perm", verify.perm, "Permutation");
  sub_verify->add_option("--dims", verify.dims, "Leaf dimensions: one value or one per leaf");
  sub_verify->add_option("--f", verify.f, "Dimension vector of T: one value or one per vertex");
  sub_verify->add_option("--fprime", verify.f_prime, "Dimension vector of T'");
  sub_verify->add_option("--r", verify.r, "Scale r (>= 2)");
  sub_verify->add_option("--trials", verify.trials, "Samples");
  sub_verify->add_option("--seed", verify.seed, "First seed");
  sub_verify->add_flag("--table", verify.table, "Human-readable output");

  CheckArgs check;
  auto* sub_check = app.add_subcommand("check-reference", "Compare a search CSV with a reference table");
  sub_check->add_option("ours", check.ours, "CSV written by search")->required();
  sub_check->add_option("reference", check.reference, "Reference table")->required();
  sub_check->add_option("--adapter", check.adapter, "JSON column mapping for the reference");
  sub_check->add_option("--keep", check.keep, "Mismatches to list");
  sub_check->add_flag("--table", check.table, "Human-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    if (*sub_enum) return cmd_enumerate(enumerate);
    if (*sub_exp) return cmd_exponent(exponent);
    if (*sub_bounds) return cmd_bounds(bounds);
    if (*sub_search) return cmd_search(search);
    if (*sub_ip) return cmd_ip(ip);
    if (*sub_verify) return cmd_verify_ranks(verify);
    if (*sub_check) return cmd_check_reference(check);
  } catch (const TreeParseError& e) {
    return fail("parse", e.what(), 2);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), 2);
  } catch (const std::length_error& e) {
    return fail("limit", e.what(), 3);
  } catch (const std::invalid_argument& e) {
    return fail("invalid", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("io", e.what(), 4);
  }
  return 0;
}
