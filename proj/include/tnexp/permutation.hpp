#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tnexp/leaf_set.hpp"

namespace tnexp {

/// Bijection on the leaf labels {1..n}, held in one-line notation.
///
/// In an instance (T, T', π) leaf ℓ of T is identified with leaf π(ℓ) of T'.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(int n);
  /// ℓ ↦ n+1-ℓ
  static Permutation reversal(int n);
  /// Throws std::invalid_argument unless `one_line` is a bijection on {1..n}.
  static Permutation from_one_line(std::vector<int> one_line);
  /// Accepts "id", a digit string such as "1324" (n ≤ 9), or labels separated
  /// by ',', '-' or whitespace. `n` is the expected size.
  static Permutation parse(std::string_view text, int n);
  /// Inverse of lehmer_rank(): the rank-th permutation in lexicographic order.
  static Permutation unrank(int n, std::uint64_t rank);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int label) const { return image_[label - 1]; }
  const std::vector<int>& one_line() const { return image_; }
  bool is_identity() const;

  Permutation inverse() const;
  /// (this ∘ inner)(ℓ) = this(inner(ℓ))
  Permutation after(const Permutation& inner) const;

  /// π(S)
  LeafSet image(LeafSet s) const;
  /// π⁻¹(S) = {ℓ : π(ℓ) ∈ S}
  LeafSet preimage(LeafSet s) const;

  /// Position in lexicographic order of one-line notation.
  std::uint64_t lehmer_rank() const;
  /// Advance to the lexicographic successor; false after the last permutation.
  bool next();

  /// Concatenated digits for n ≤ 9 ("2143"), dash separated otherwise ("10-2-...").
  std::string to_string() const;

  bool operator==(const Permutation&) const = default;

 private:
  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {}
  std::vector<int> image_;
};

}  // namespace tnexp
