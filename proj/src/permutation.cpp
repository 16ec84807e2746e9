#include "tnexp/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace tnexp {

LeafSet LeafSet::from_labels(std::initializer_list<int> labels) {
  return from_labels(std::vector<int>(labels));
}

LeafSet LeafSet::from_labels(const std::vector<int>& labels) {
  Mask bits = 0;
  for (int label : labels) {
    if (label < 1 || label > kMaxLeaves) {
      throw std::invalid_argument("leaf label out of range: " + std::to_string(label));
    }
    bits |= Mask{1} << (label - 1);
  }
  return LeafSet(bits);
}

std::vector<int> LeafSet::labels() const {
  std::vector<int> out;
  for (Mask rest = bits_; rest != 0; rest &= rest - 1) {
    out.push_back(std::countr_zero(rest) + 1);
  }
  return out;
}

std::string LeafSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int label : labels()) {
    if (!first) out += ',';
    out += std::to_string(label);
    first = false;
  }
  return out + "}";
}

Permutation Permutation::identity(int n) {
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 1);
  return Permutation(std::move(image));
}

Permutation Permutation::reversal(int n) {
  std::vector<int> image(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) image[i] = n - i;
  return Permutation(std::move(image));
}

Permutation Permutation::from_one_line(std::vector<int> one_line) {
  const int n = static_cast<int>(one_line.size());
  if (n < 1 || n > kMaxLeaves) {
    throw std::invalid_argument("permutation size must be in 1.." + std::to_string(kMaxLeaves));
  }
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int value : one_line) {
    if (value < 1 || value > n || seen[value]) {
      throw std::invalid_argument("not a permutation of 1.." + std::to_string(n));
    }
    seen[value] = true;
  }
  return Permutation(std::move(one_line));
}

Permutation Permutation::parse(std::string_view text, int n) {
  if (text == "id" || text == "identity") return identity(n);
  std::vector<int> values;
  const bool separated = text.find_first_of(",- \t") != std::string_view::npos;
  if (!separated) {
    for (char c : text) {
      if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0') {
        throw std::invalid_argument("bad permutation '" + std::string(text) + "'");
      }
      values.push_back(c - '0');
    }
  } else {
    std::size_t pos = 0;
    while (pos < text.size()) {
      while (pos < text.size() && std::string_view(",- \t").find(text[pos]) != std::string_view::npos) {
        ++pos;
      }
      if (pos == text.size()) break;
      int value = 0;
      bool any = false;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + (text[pos] - '0');
        any = true;
        ++pos;
      }
      if (!any) throw std::invalid_argument("bad permutation '" + std::string(text) + "'");
      values.push_back(value);
    }
  }
  if (static_cast<int>(values.size()) != n) {
    throw std::invalid_argument("permutation '" + std::string(text) + "' does not have " +
                                std::to_string(n) + " entries");
  }
  return from_one_line(std::move(values));
}

Permutation Permutation::unrank(int n, std::uint64_t rank) {
  std::vector<std::uint64_t> factorial(static_cast<std::size_t>(n) + 1, 1);
  for (int i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * static_cast<std::uint64_t>(i);
  if (n > 20 || rank >= factorial[n]) throw std::invalid_argument("permutation rank out of range");
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> image;
  image.reserve(pool.size());
  for (int i = n; i >= 1; --i) {
    const std::uint64_t block = factorial[i - 1];
    const auto index = static_cast<std::size_t>(rank / block);
    rank %= block;
    image.push_back(pool[index]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(index));
  }
  return Permutation(std::move(image));
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i) {
    if (image_[i] != i + 1) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (int i = 0; i < size(); ++i) inv[image_[i] - 1] = i + 1;
  return Permutation(std::move(inv));
}

Permutation Permutation::after(const Permutation& inner) const {
  if (inner.size() != size()) throw std::invalid_argument("permutation sizes differ");
  std::vector<int> out(image_.size());
  for (int i = 0; i < size(); ++i) out[i] = image_[inner.image_[i] - 1];
  return Permutation(std::move(out));
}

LeafSet Permutation::image(LeafSet s) const {
  LeafSet::Mask out = 0;
  for (int i = 0; i < size(); ++i) {
    if (s.contains(i + 1)) out |= LeafSet::Mask{1} << (image_[i] - 1);
  }
  return LeafSet(out);
}

LeafSet Permutation::preimage(LeafSet s) const {
  LeafSet::Mask out = 0;
  for (int i = 0; i < size(); ++i) {
    if (s.contains(image_[i])) out |= LeafSet::Mask{1} << i;
  }
  return LeafSet(out);
}

std::uint64_t Permutation::lehmer_rank() const {
  if (size() > 20) throw std::invalid_argument("lehmer rank needs n <= 20");
  std::uint64_t rank = 0;
  for (int i = 0; i < size(); ++i) {
    int smaller_after = 0;
    for (int j = i + 1; j < size(); ++j) {
      if (image_[j] < image_[i]) ++smaller_after;
    }
    rank = rank * static_cast<std::uint64_t>(size() - i) + static_cast<std::uint64_t>(smaller_after);
  }
  return rank;
}

bool Permutation::next() { return std::next_permutation(image_.begin(), image_.end()); }

std::string Permutation::to_string() const {
  std::string out;
  if (size() <= 9) {
    for (int value : image_) out += static_cast<char>('0' + value);
    return out;
  }
  for (int i = 0; i < size(); ++i) {
    if (i > 0) out += '-';
    out += std::to_string(image_[i]);
  }
  return out;
}

}  // namespace tnexp
