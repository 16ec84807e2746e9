#include "tnexp/tns_verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

namespace tnexp {

namespace field {

std::uint32_t inverse(std::uint32_t a) {
  if (a == 0) throw std::domain_error("zero has no inverse");
  // Fermat: a^(p-2).
  std::uint32_t result = 1;
  std::uint32_t base = a;
  for (std::uint32_t e = kPrime - 2; e != 0; e >>= 1) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
  }
  return result;
}

int rank(std::vector<std::uint32_t> m, std::size_t rows, std::size_t cols) {
  int found = 0;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
    std::size_t pick = pivot_row;
    while (pick < rows && m[pick * cols + col] == 0) ++pick;
    if (pick == rows) continue;
    if (pick != pivot_row) {
      std::swap_ranges(m.begin() + static_cast<std::ptrdiff_t>(pick * cols),
                       m.begin() + static_cast<std::ptrdiff_t>((pick + 1) * cols),
                       m.begin() + static_cast<std::ptrdiff_t>(pivot_row * cols));
    }
    std::uint32_t* top = &m[pivot_row * cols];
    const std::uint32_t scale = inverse(top[col]);
    for (std::size_t c = col; c < cols; ++c) top[c] = mul(top[c], scale);
    for (std::size_t r = pivot_row + 1; r < rows; ++r) {
      std::uint32_t* row = &m[r * cols];
      const std::uint32_t factor = row[col];
      if (factor == 0) continue;
      for (std::size_t c = col; c < cols; ++c) row[c] = sub(row[c], mul(factor, top[c]));
    }
    ++pivot_row;
    ++found;
  }
  return found;
}

}  // namespace field

NetworkSpec NetworkSpec::uniform(const Tree& tree, int d, std::uint64_t f, int r) {
  NetworkSpec spec{tree, std::vector<int>(static_cast<std::size_t>(tree.leaf_count()), d),
                   DimensionVector(static_cast<std::size_t>(tree.vertex_count()), f), r};
  spec.validate();
  return spec;
}

void NetworkSpec::validate() const {
  if (static_cast<int>(leaf_dims.size()) != tree.leaf_count()) {
    throw std::invalid_argument("need one leaf dimension per leaf");
  }
  if (static_cast<int>(f.size()) != tree.vertex_count()) {
    throw std::invalid_argument("need one entry of f per vertex");
  }
  if (std::any_of(leaf_dims.begin(), leaf_dims.end(), [](int d) { return d < 1; })) {
    throw std::invalid_argument("leaf dimensions must be positive");
  }
  if (std::any_of(f.begin(), f.end(), [](std::uint64_t v) { return v < 1; })) {
    throw std::invalid_argument("dimension vector must be positive");
  }
  if (r < 1) throw std::invalid_argument("scale r must be positive");
}

std::uint64_t NetworkSpec::total_entries() const {
  std::uint64_t total = 1;
  for (int d : leaf_dims) {
    total *= static_cast<std::uint64_t>(d);
    if (total > kMaxTensorEntries) return total;
  }
  return total;
}

namespace {

class FieldRng {
 public:
  // One stream per (seed, vertex, purpose).
  FieldRng(std::uint64_t seed, int vertex, int purpose) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(vertex), static_cast<std::uint32_t>(purpose)};
    engine_.seed(seq);
  }

  std::uint32_t next() {
    while (true) {
      const auto x = static_cast<std::uint32_t>(engine_() >> 33);
      if (x < field::kPrime) return x;
    }
  }

  std::vector<std::uint32_t> matrix(std::size_t rows, std::size_t cols) {
    std::vector<std::uint32_t> out(rows * cols);
    for (auto& x : out) x = next();
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

std::size_t capped(std::uint64_t r_times_f, std::size_t available) {
  return static_cast<std::size_t>(std::min<std::uint64_t>(r_times_f, available));
}

std::uint64_t scaled(int r, std::uint64_t f) {
  const auto rr = static_cast<std::uint64_t>(r);
  return f > UINT64_MAX / rr ? UINT64_MAX : rr * f;
}

// Full-rank random dim × cols coefficients; one redraw on deficiency.
std::vector<std::uint32_t> coefficients(FieldRng& rng, std::size_t dim, std::size_t cols, int& resamples) {
  auto c = rng.matrix(dim, cols);
  if (field::rank(c, dim, cols) < static_cast<int>(dim)) {
    ++resamples;
    c = rng.matrix(dim, cols);
  }
  return c;
}

// U1ᵀ · M · U2 for M a k1 × k2 coefficient block, flattened with U1's coordinates slowest.
std::vector<std::uint32_t> expand(const std::uint32_t* coeff, const SubspaceBasis& u1, const SubspaceBasis& u2) {
  std::vector<std::uint32_t> tmp(u1.dim * u2.ambient, 0);
  for (std::size_t i = 0; i < u1.dim; ++i) {
    for (std::size_t j = 0; j < u2.dim; ++j) {
      const std::uint32_t c = coeff[i * u2.dim + j];
      if (c == 0) continue;
      const std::uint32_t* src = &u2.rows[j * u2.ambient];
      std::uint32_t* dst = &tmp[i * u2.ambient];
      for (std::size_t b = 0; b < u2.ambient; ++b) dst[b] = field::add(dst[b], field::mul(c, src[b]));
    }
  }
  std::vector<std::uint32_t> out(u1.ambient * u2.ambient, 0);
  for (std::size_t i = 0; i < u1.dim; ++i) {
    const std::uint32_t* left = &u1.rows[i * u1.ambient];
    const std::uint32_t* right = &tmp[i * u2.ambient];
    for (std::size_t a = 0; a < u1.ambient; ++a) {
      if (left[a] == 0) continue;
      std::uint32_t* dst = &out[a * u2.ambient];
      for (std::size_t b = 0; b < u2.ambient; ++b) dst[b] = field::add(dst[b], field::mul(left[a], right[b]));
    }
  }
  return out;
}

}  // namespace

SampledTensor sample_tensor(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.total_entries() > kMaxTensorEntries) {
    throw std::length_error("tensor would have more than 2^22 entries");
  }
  const Tree& tree = spec.tree;
  SampledTensor t;
  t.seed = seed;
  t.leaf_dims = spec.leaf_dims;
  t.bases.resize(static_cast<std::size_t>(tree.vertex_count()));

  // Children have larger preorder ids than their parent.
  for (VertexId v = tree.vertex_count() - 1; v >= 0; --v) {
    FieldRng rng(seed, v, 0);
    SubspaceBasis& basis = t.bases[v];
    const std::uint64_t cap = scaled(spec.r, spec.f[v]);
    if (tree.is_leaf(v)) {
      const auto d = static_cast<std::size_t>(spec.leaf_dims[tree.leaf_label(v) - 1]);
      basis.ambient = d;
      basis.dim = capped(cap, d);
      if (basis.dim == d) {
        basis.rows.assign(d * d, 0);
        for (std::size_t i = 0; i < d; ++i) basis.rows[i * d + i] = 1;
      } else {
        basis.rows = coefficients(rng, basis.dim, d, t.resamples);
      }
      continue;
    }
    const SubspaceBasis& u1 = t.bases[tree.left(v)];
    const SubspaceBasis& u2 = t.bases[tree.right(v)];
    const std::size_t product = u1.dim * u2.dim;
    const std::size_t dim = capped(cap, product);
    const auto coeff = coefficients(rng, dim, product, t.resamples);
    if (v == tree.root()) {
      basis = {dim, product, coeff};
      FieldRng pick(seed, v, 1);
      std::vector<std::uint32_t> mix(product, 0);
      for (std::size_t m = 0; m < dim; ++m) {
        const std::uint32_t alpha = pick.next();
        for (std::size_t k = 0; k < product; ++k) mix[k] = field::add(mix[k], field::mul(alpha, coeff[m * product + k]));
      }
      t.data = expand(mix.data(), u1, u2);
      continue;
    }
    basis.dim = dim;
    basis.ambient = u1.ambient * u2.ambient;
    basis.rows.reserve(dim * basis.ambient);
    for (std::size_t m = 0; m < dim; ++m) {
      const auto row = expand(&coeff[m * product], u1, u2);
      basis.rows.insert(basis.rows.end(), row.begin(), row.end());
    }
  }
  return t;
}

int flattening_rank(const SampledTensor& t, LeafSet s) {
  const int n = static_cast<int>(t.leaf_dims.size());
  if (s.empty() || s == LeafSet::full(n) || !s.subset_of(LeafSet::full(n))) {
    throw std::invalid_argument("flattening needs a nonempty proper leaf subset");
  }
  std::size_t rows = 1;
  std::size_t cols = 1;
  for (int leaf = 1; leaf <= n; ++leaf) (s.contains(leaf) ? rows : cols) *= static_cast<std::size_t>(t.leaf_dims[leaf - 1]);

  std::vector<std::uint32_t> matrix(rows * cols);
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  for (std::size_t flat = 0; flat < t.data.size(); ++flat) {
    std::size_t row = 0;
    std::size_t col = 0;
    for (int leaf = 1; leaf <= n; ++leaf) {
      const auto d = static_cast<std::size_t>(t.leaf_dims[leaf - 1]);
      if (s.contains(leaf)) {
        row = row * d + static_cast<std::size_t>(digit[leaf - 1]);
      } else {
        col = col * d + static_cast<std::size_t>(digit[leaf - 1]);
      }
    }
    matrix[row * cols + col] = t.data[flat];
    // Advance the mixed-radix counter, leaf n fastest.
    for (int leaf = n; leaf >= 1; --leaf) {
      if (++digit[leaf - 1] < t.leaf_dims[leaf - 1]) break;
      digit[leaf - 1] = 0;
    }
  }
  return field::rank(std::move(matrix), rows, cols);
}

bool FlatteningProfile::all_within() const {
  return std::all_of(splits.begin(), splits.end(), [](const SplitRank& s) { return s.within(); });
}

bool FlatteningProfile::transpose_consistent() const {
  return std::all_of(splits.begin(), splits.end(), [](const SplitRank& s) { return s.rank == s.transpose_rank; });
}

namespace {

std::uint64_t power_bound(int r, int c, std::uint64_t f) {
  std::uint64_t out = f;
  for (int k = 0; k < c; ++k) out = scaled(r, out);
  return out;
}

void check_probe(const SampledTensor& t, const Tree& probe, const Permutation& pi, const DimensionVector& f_prime) {
  if (probe.leaf_count() != static_cast<int>(t.leaf_dims.size()) || pi.size() != probe.leaf_count()) {
    throw std::invalid_argument("probe tree and permutation must match the sampled leaves");
  }
  if (static_cast<int>(f_prime.size()) != probe.vertex_count()) {
    throw std::invalid_argument("need one entry of f' per probe vertex");
  }
}

}  // namespace

FlatteningProfile flattening_profile(const SampledTensor& t, int r, const Tree& probe, const Permutation& pi,
                                     const DimensionVector& f_prime, int exponent) {
  check_probe(t, probe, pi, f_prime);
  FlatteningProfile out;
  out.seed = t.seed;
  out.exponent = exponent;
  for (VertexId v = 1; v < probe.vertex_count(); ++v) {
    SplitRank split;
    split.node = v;
    split.split = pi.preimage(probe.descendants(v));
    split.rank = flattening_rank(t, split.split);
    split.transpose_rank = flattening_rank(t, split.split.complement(probe.leaf_count()));
    split.bound = power_bound(r, exponent, f_prime[v]);
    out.splits.push_back(split);
  }
  return out;
}

EmpiricalExponent empirical_exponent(const NetworkSpec& spec, const Tree& probe, const Permutation& pi,
                                     const DimensionVector& f_prime, int trials, std::uint64_t seed) {
  if (spec.r < 2) throw std::invalid_argument("empirical exponent needs r >= 2");
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  spec.validate();

  std::vector<FlatteningProfile> profiles(static_cast<std::size_t>(trials));
  std::vector<int> resamples(static_cast<std::size_t>(trials), 0);
  auto run = [&](int k) {
    const SampledTensor t = sample_tensor(spec, seed + static_cast<std::uint64_t>(k));
    check_probe(t, probe, pi, f_prime);
    profiles[k] = flattening_profile(t, spec.r, probe, pi, f_prime, 0);
    resamples[k] = t.resamples;
  };
  int threads = 1;
  if (const char* env = std::getenv("TNEXP_THREADS")) threads = std::max(1, std::atoi(env));
  threads = std::min(threads, trials);
  if (threads == 1) {
    for (int k = 0; k < trials; ++k) run(k);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int k = w; k < trials; k += threads) run(k);
      });
    }
    for (auto& th : pool) th.join();
  }

  EmpiricalExponent out;
  out.r = spec.r;
  for (int k = 0; k < trials; ++k) out.seeds.push_back(seed + static_cast<std::uint64_t>(k));
  for (VertexId v = 1; v < probe.vertex_count(); ++v) {
    NodeExponent node;
    node.node = v;
    node.split = pi.preimage(probe.descendants(v));
    out.nodes.push_back(node);
  }
  for (int k = 0; k < trials; ++k) {
    out.resamples += resamples[k];
    out.transpose_consistent = out.transpose_consistent && profiles[k].transpose_consistent();
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
      out.nodes[i].max_rank = std::max(out.nodes[i].max_rank, profiles[k].splits[i].rank);
    }
  }
  for (NodeExponent& node : out.nodes) {
    while (static_cast<std::uint64_t>(node.max_rank) > power_bound(spec.r, node.exponent, f_prime[node.node])) {
      ++node.exponent;
    }
    out.max_exponent = std::max(out.max_exponent, node.exponent);
  }
  return out;
}

}  // namespace tnexp
