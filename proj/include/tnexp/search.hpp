#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tnexp/permutation.hpp"

namespace tnexp {

enum class SearchColumn : std::uint8_t { cover, poset, naive_max };

std::string column_name(SearchColumn column);  // "cover_bound", ...

struct SearchOptions {
  int leaves = 4;
  bool poset = false;
  bool naive = false;
  /// 0: every permutation. Otherwise this many distinct permutations drawn
  /// once from `seed` and shared by all shape pairs.
  std::uint64_t sample = 0;
  std::uint64_t seed = 0;
  /// 0: read TNEXP_THREADS, defaulting to 1.
  int threads = 0;
};

/// Shape-pair statistics of one column.
struct PairAggregate {
  int min = 0;
  int max = 0;
  std::map<int, std::uint64_t> histogram;

  bool operator==(const PairAggregate&) const = default;
};

/// Every (shape_a, shape_b, π) instance for one leaf count. Instance order is
/// shape_a index, then shape_b index, then π (lexicographic one-line order).
class SearchResult {
 public:
  int leaves() const { return leaves_; }
  const std::vector<std::string>& shapes() const { return shapes_; }
  bool sampled() const { return sampled_; }
  std::uint64_t seed() const { return seed_; }

  std::size_t permutation_count() const { return permutation_count_; }
  Permutation permutation(std::size_t k) const;
  std::size_t instance_count() const { return shapes_.size() * shapes_.size() * permutation_count_; }

  bool has(SearchColumn column) const;
  std::vector<SearchColumn> columns() const;
  int value(SearchColumn column, std::size_t a, std::size_t b, std::size_t k) const;
  std::size_t index(std::size_t a, std::size_t b, std::size_t k) const {
    return (a * shapes_.size() + b) * permutation_count_ + k;
  }

  PairAggregate aggregate(SearchColumn column, std::size_t a, std::size_t b) const;
  /// Per pair (row a, column b) minimum over π.
  std::vector<std::vector<int>> min_matrix(SearchColumn column) const;
  std::vector<std::vector<int>> max_matrix(SearchColumn column) const;

 private:
  friend SearchResult run_search(const SearchOptions&);
  friend SearchResult read_csv(const std::filesystem::path&);

  const std::vector<std::uint8_t>& data(SearchColumn column) const;

  int leaves_ = 0;
  std::vector<std::string> shapes_;
  bool sampled_ = false;
  std::uint64_t seed_ = 0;
  std::size_t permutation_count_ = 0;
  std::vector<Permutation> sample_;  // empty unless sampled
  std::vector<std::uint8_t> cover_;
  std::vector<std::uint8_t> poset_;
  std::vector<std::uint8_t> naive_;
};

/// Full product for 2 ≤ n ≤ 8; with sampling up to 12 leaves.
/// Throws std::invalid_argument on cap violations.
SearchResult run_search(const SearchOptions& options);

/// Header n,shape_a,shape_b,perm_oneline,cover_bound[,poset_bound][,naive_max_bound].
void write_csv(const SearchResult& result, const std::filesystem::path& path);
void write_json(const SearchResult& result, std::ostream& out);
void write_json(const SearchResult& result, const std::filesystem::path& path);

/// Inverse of write_csv. Throws std::runtime_error on malformed or unordered input.
SearchResult read_csv(const std::filesystem::path& path);

/// How to read a foreign results table. Column fields name header cells.
struct ReferenceAdapter {
  char delimiter = ',';
  std::string shape_a = "shape_a";
  std::string shape_b = "shape_b";
  std::string permutation = "perm_oneline";
  std::string value = "cover_bound";
  /// Column of our file to compare against.
  SearchColumn ours = SearchColumn::cover;
};

/// Reads {"delimiter", "shape_a", "shape_b", "permutation", "value", "ours"}; absent keys keep defaults.
ReferenceAdapter load_adapter(const std::filesystem::path& path);

struct Mismatch {
  std::string shape_a;
  std::string shape_b;
  std::string permutation;
  std::optional<int> ours;    // absent: instance only in the reference
  std::optional<int> theirs;  // absent: instance missing from the reference
};

struct DiffReport {
  std::size_t compared = 0;
  std::vector<Mismatch> mismatches;
  /// Mismatches past this many are counted but not stored.
  std::size_t dropped = 0;

  bool clean() const { return mismatches.empty() && dropped == 0; }
  std::size_t total() const { return mismatches.size() + dropped; }
};

/// Per-instance comparison. Reference rows may come in any order; shapes are
/// matched verbatim and permutations after parsing.
DiffReport verify_against_reference(const std::filesystem::path& ours, const std::filesystem::path& reference,
                                    const ReferenceAdapter& adapter = {}, std::size_t keep = 1000);

}  // namespace tnexp
