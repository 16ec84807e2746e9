#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tnexp/bounds.hpp"
#include "tnexp/doad.hpp"
#include "tnexp/leaf_set.hpp"
#include "tnexp/permutation.hpp"
#include "tnexp/tree.hpp"

namespace tnexp {

/// Variable families of the cover integer program. "under" refers to covering
/// 𝔡_{T'}(w), "over" to covering 𝔞_{T'}(w); x uses 𝔡_T(v), y uses 𝔞_T(v).
enum class IpVarKind : std::uint8_t { objective, z_under, z_over, x_under, x_over, y_under, y_over };

struct IpVariable {
  IpVarKind kind = IpVarKind::objective;
  VertexId node = kNoVertex;    // w in T'
  VertexId vertex = kNoVertex;  // v in T (x/y only)
  LeafSet set;                  // the T-side leaf set (x/y only), in T's labels
  std::string name;
};

/// A variable that the subset conditions force to zero; never registered.
struct FixedZero {
  IpVarKind kind = IpVarKind::x_under;
  VertexId node = kNoVertex;
  VertexId vertex = kNoVertex;
};

enum class RowGroup : std::uint8_t { side_choice, cover_under, cover_over, cardinality_under, cardinality_over };
enum class RowSense : std::uint8_t { greater_equal, less_equal };

struct IpTerm {
  int variable = 0;
  int coefficient = 1;
};

struct IpRow {
  std::string name;
  RowGroup group = RowGroup::side_choice;
  std::vector<IpTerm> terms;
  RowSense sense = RowSense::greater_equal;
  int rhs = 0;
};

/// Per internal node w of T': the two targets and their candidate variables.
struct IpNode {
  VertexId node = kNoVertex;
  LeafSet under_target;  // π⁻¹(𝔡_{T'}(w))
  LeafSet over_target;   // π⁻¹(𝔞_{T'}(w))
  int z_under = -1;
  int z_over = -1;       // -1 when 𝔞_{T'}(w) = ∅
  std::vector<int> under_candidates;
  std::vector<int> over_candidates;
};

/// min c subject to the five constraint groups of the cover program for (T, T', π):
///   z̲ʷ + z̄ʷ ≥ 1                            for every internal node w of T'
///   Σ x̲ʷᵥ[ℓ∈𝔡(v)] + Σ y̲ʷᵥ[ℓ∈𝔞(v)] ≥ z̲ʷ     for ℓ ∈ π⁻¹𝔡(w)
///   Σ x̄ʷᵥ[ℓ∈𝔡(v)] + Σ ȳʷᵥ[ℓ∈𝔞(v)] ≥ z̄ʷ     for ℓ ∈ π⁻¹𝔞(w)
///   Σᵥ (x̲ʷᵥ + y̲ʷᵥ) ≤ c,  Σᵥ (x̄ʷᵥ + ȳʷᵥ) ≤ c
/// x/y variables exist only for T-sets contained in their target; z̄ is absent
/// when 𝔞_{T'}(w) is empty.
class IpModel {
 public:
  int leaf_count() const { return leaf_count_; }
  const std::string& tree() const { return tree_; }
  const std::string& tree_prime() const { return tree_prime_; }
  const Permutation& pi() const { return pi_; }

  const std::vector<IpVariable>& variables() const { return variables_; }
  const std::vector<IpRow>& rows() const { return rows_; }
  const std::vector<FixedZero>& fixed_zero() const { return fixed_zero_; }
  const std::vector<IpNode>& nodes() const { return nodes_; }
  int objective() const { return 0; }

  /// Index of a variable by name, -1 if absent.
  int find(const std::string& name) const;

 private:
  friend IpModel build_ip(const Tree&, const Tree&, const Permutation&);

  int leaf_count_ = 0;
  std::string tree_;
  std::string tree_prime_;
  Permutation pi_;
  std::vector<IpVariable> variables_;
  std::vector<IpRow> rows_;
  std::vector<FixedZero> fixed_zero_;
  std::vector<IpNode> nodes_;
};

/// Throws std::invalid_argument on leaf-count mismatch.
IpModel build_ip(const Tree& tree, const Tree& tree_prime, const Permutation& pi);

struct SolveOptions {
  /// Answer each node from a cover table instead of branch and bound (n ≤ 24).
  bool use_cover_table = false;
};

struct IpSolution {
  int objective = 0;
  /// One value per model variable.
  std::vector<int> values;
  /// Branch-and-bound nodes explored, summed over all per-node subproblems.
  std::uint64_t search_nodes = 0;
};

/// Exact optimum. Rows couple only through c, so c* is the max over w of the
/// cheaper of two independent minimum set covers, each solved by branch and
/// bound (greedy incumbent, counting lower bound).
IpSolution solve_ip(const IpModel& model, const SolveOptions& options = {});

/// Minimum number of `candidates` whose union is `target` (every candidate must
/// be a subset of `target`); -1 when impossible. `chosen` receives the indices used.
int min_set_cover(LeafSet target, const std::vector<LeafSet>& candidates, std::vector<int>* chosen = nullptr,
                  std::uint64_t* search_nodes = nullptr);

/// Checks bounds, integrality and every row. On failure `why` names the first violation.
bool is_feasible(const IpModel& model, const std::vector<int>& values, std::string* why = nullptr);

/// Assignment with c = `objective` built from per-node covers of T-doad sets:
/// `covers[k]` covers the over side of nodes()[k] when `over[k]`, else the under side.
std::vector<int> assignment_from_covers(const IpModel& model, const std::vector<bool>& over,
                                        const std::vector<std::vector<DoadWitness>>& covers, int objective);

/// The coverings behind the poset bound, as an assignment with c = poset bound.
std::vector<int> poset_certificate(const IpModel& model, const Tree& tree, int* objective = nullptr);

/// CPLEX LP text: Minimize / Subject To / General / Binary / End, rows named
/// and grouped by constraint family. Deterministic for a given model.
void export_lp(const IpModel& model, std::ostream& out);
void export_lp(const IpModel& model, const std::filesystem::path& path);

}  // namespace tnexp
