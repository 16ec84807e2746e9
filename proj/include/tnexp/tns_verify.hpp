#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tnexp/cover.hpp"
#include "tnexp/leaf_set.hpp"
#include "tnexp/permutation.hpp"
#include "tnexp/tree.hpp"

namespace tnexp {

/// Arithmetic modulo 2^31 − 1.
namespace field {

inline constexpr std::uint32_t kPrime = 2147483647u;

inline std::uint32_t add(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t s = a + b;
  return s >= kPrime ? s - kPrime : s;
}
inline std::uint32_t sub(std::uint32_t a, std::uint32_t b) { return a >= b ? a - b : a + kPrime - b; }
inline std::uint32_t mul(std::uint32_t a, std::uint32_t b) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % kPrime);
}
std::uint32_t inverse(std::uint32_t a);

/// Rank of a row-major rows × cols matrix; the argument is consumed.
int rank(std::vector<std::uint32_t> matrix, std::size_t rows, std::size_t cols);

}  // namespace field

/// Largest ∏ d_ℓ that sample_tensor accepts.
inline constexpr std::uint64_t kMaxTensorEntries = std::uint64_t{1} << 22;

struct NetworkSpec {
  Tree tree;
  std::vector<int> leaf_dims;  // d_ℓ, by leaf label
  DimensionVector f;           // by vertex id
  int r = 1;

  /// Constant d, constant f.
  static NetworkSpec uniform(const Tree& tree, int d, std::uint64_t f, int r);
  /// Throws std::invalid_argument on size mismatches or non-positive entries.
  void validate() const;
  std::uint64_t total_entries() const;
};

/// A row basis in the coordinates of V_v = ⊗_{ℓ∈𝔡(v)} V_ℓ (left leaves slowest).
/// At the root the rows are coefficients over U_{v1} ⊗ U_{v2} instead.
struct SubspaceBasis {
  std::size_t dim = 0;
  std::size_t ambient = 0;
  std::vector<std::uint32_t> rows;
};

struct SampledTensor {
  std::uint64_t seed = 0;
  std::vector<int> leaf_dims;
  /// Coefficients indexed by the mixed-radix leaf index, leaf 1 slowest.
  std::vector<std::uint32_t> data;
  std::vector<SubspaceBasis> bases;  // by vertex id
  /// Coefficient draws that came out rank deficient and were redrawn.
  int resamples = 0;
};

/// Bottom-up: each leaf gets a random min(r·f_ℓ, d_ℓ)-dimensional subspace of V_ℓ,
/// each internal v a random min(r·f_v, dim U_{v1}·dim U_{v2})-dimensional subspace
/// of U_{v1} ⊗ U_{v2}; t is a random vector of U_root.
/// Throws std::length_error past kMaxTensorEntries.
SampledTensor sample_tensor(const NetworkSpec& spec, std::uint64_t seed);

/// Rank of t reshaped with rows indexed by S and columns by ℒ∖S (both in
/// increasing label order). Throws std::invalid_argument for S = ∅ or ℒ.
int flattening_rank(const SampledTensor& t, LeafSet s);

struct SplitRank {
  VertexId node = kNoVertex;  // in the probe tree
  LeafSet split;              // π⁻¹(𝔡(node)), in the sampled tree's labels
  int rank = 0;
  int transpose_rank = 0;
  std::uint64_t bound = 0;    // r^c · f'_node
  bool within() const { return static_cast<std::uint64_t>(rank) <= bound; }
};

struct FlatteningProfile {
  std::uint64_t seed = 0;
  int exponent = 0;
  std::vector<SplitRank> splits;  // every non-root vertex of the probe, preorder

  bool all_within() const;
  bool transpose_consistent() const;
};

/// Ranks at every non-root vertex split of `probe`, compared with r^c · f'.
FlatteningProfile flattening_profile(const SampledTensor& t, int r, const Tree& probe, const Permutation& pi,
                                     const DimensionVector& f_prime, int exponent);

struct NodeExponent {
  VertexId node = kNoVertex;
  LeafSet split;
  int max_rank = 0;
  /// Smallest c ≥ 0 with max_rank ≤ r^c · f'_node.
  int exponent = 0;
};

/// Evidence only: what the sampled tensors needed, never a certified lower bound.
struct EmpiricalExponent {
  int r = 2;
  std::vector<std::uint64_t> seeds;
  std::vector<NodeExponent> nodes;
  int max_exponent = 0;
  int resamples = 0;
  bool transpose_consistent = true;
};

/// Trials use seeds seed, seed+1, ..., seed+trials-1. Throws std::invalid_argument for r = 1.
EmpiricalExponent empirical_exponent(const NetworkSpec& spec, const Tree& probe, const Permutation& pi,
                                     const DimensionVector& f_prime, int trials, std::uint64_t seed);

}  // namespace tnexp
