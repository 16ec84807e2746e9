#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace tnexp {

/// Upper bound on the number of leaves of any tree handled by the library.
inline constexpr int kMaxLeaves = 32;

/// A subset of the leaf labels {1..n}, stored as a bit mask (label ℓ is bit ℓ-1).
class LeafSet {
 public:
  using Mask = std::uint32_t;

  constexpr LeafSet() = default;
  constexpr explicit LeafSet(Mask bits) : bits_(bits) {}

  static LeafSet from_labels(std::initializer_list<int> labels);
  static LeafSet from_labels(const std::vector<int>& labels);

  static constexpr LeafSet full(int n) {
    return LeafSet(static_cast<Mask>((std::uint64_t{1} << n) - 1));
  }
  static constexpr LeafSet singleton(int label) { return LeafSet(Mask{1} << (label - 1)); }
  /// {first, first+1, ..., last}; empty when last < first.
  static constexpr LeafSet interval(int first, int last) {
    if (last < first) return LeafSet();
    return LeafSet(full(last).bits_ & ~full(first - 1).bits_);
  }

  constexpr Mask bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int label) const { return (bits_ >> (label - 1)) & 1u; }
  constexpr bool subset_of(LeafSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool disjoint_from(LeafSet other) const { return (bits_ & other.bits_) == 0; }
  constexpr LeafSet complement(int n) const { return LeafSet(full(n).bits_ & ~bits_); }
  /// Smallest label in the set; 0 when empty.
  constexpr int lowest() const { return bits_ == 0 ? 0 : std::countr_zero(bits_) + 1; }
  constexpr int highest() const { return bits_ == 0 ? 0 : 32 - std::countl_zero(bits_); }

  std::vector<int> labels() const;
  /// "{1,2,4}"
  std::string to_string() const;

  constexpr LeafSet operator|(LeafSet o) const { return LeafSet(bits_ | o.bits_); }
  constexpr LeafSet operator&(LeafSet o) const { return LeafSet(bits_ & o.bits_); }
  constexpr LeafSet operator-(LeafSet o) const { return LeafSet(bits_ & ~o.bits_); }
  constexpr LeafSet& operator|=(LeafSet o) { bits_ |= o.bits_; return *this; }

  constexpr bool operator==(const LeafSet&) const = default;
  constexpr auto operator<=>(const LeafSet&) const = default;

 private:
  Mask bits_ = 0;
};

}  // namespace tnexp
