// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: tnexp_acceptance [c1 ... c9]   (no arguments runs all)

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tnexp/bounds.hpp"
#include "tnexp/cover.hpp"
#include "tnexp/ilp.hpp"
#include "tnexp/search.hpp"
#include "tnexp/tns_verify.hpp"

using namespace tnexp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", x);
  return buf;
}

Permutation shuffled(int n, std::mt19937_64& rng) {
  std::vector<int> line(n);
  for (int i = 0; i < n; ++i) line[i] = i + 1;
  std::shuffle(line.begin(), line.end(), rng);
  return Permutation::from_one_line(line);
}

int brute_force_cover(const Tree& tree, LeafSet s) {
  if (s.empty()) return 0;
  std::vector<LeafSet::Mask> inside;
  for (const DoadEntry& e : DoadFamily(tree)) {
    if (e.set.subset_of(s)) inside.push_back(e.set.bits());
  }
  int best = 1 << 20;
  for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << inside.size()); ++pick) {
    const int k = std::popcount(pick);
    if (k >= best) continue;
    LeafSet::Mask uni = 0;
    for (std::uint64_t rest = pick; rest != 0; rest &= rest - 1) uni |= inside[std::countr_zero(rest)];
    if (uni == s.bits()) best = k;
  }
  return best;
}

Outcome c1() {
  Clock clock;
  const SearchResult r = run_search({.leaves = 4, .threads = 1});
  const double t = clock.seconds();
  int ones = 0;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t k = 0; k < r.permutation_count(); ++k) ones += r.value(SearchColumn::cover, a, b, k) == 1;
    }
  }
  const bool min_ok = r.min_matrix(SearchColumn::cover) == std::vector<std::vector<int>>{{1, 1}, {1, 1}};
  Outcome o;
  o.pass = r.instance_count() == 96 && ones == 96 && t < 1.0;
  o.detail = std::to_string(r.instance_count()) + " instances, " + std::to_string(ones) + " with cover_bound 1, " +
             std::to_string(r.instance_count() - ones) + " with 2; min over pi " +
             (min_ok ? "[[1,1],[1,1]]" : "differs") + "; " + fixed(t);
  return o;
}

Outcome c2() {
  const Tree t = Tree::parse("((.(..))(.(..)))");
  const LeafHeights h = heights(t);
  const std::vector<int> want{0, 1, 0, 1, 2, 0};
  std::string got;
  for (int x : h.height) got += (got.empty() ? "" : ",") + std::to_string(x);
  return {h.height == want, "heights (" + got + ")"};
}

Outcome c3() {
  Outcome o;
  std::string got;
  for (int k = 2; k <= 5; ++k) {
    const int v = height_bound_tt(Tree::hierarchical(k)).value;
    got += (got.empty() ? "" : ",") + std::to_string(v);
    o.pass &= v == (k + 1) / 2;
  }
  const int ip = solve_ip(build_ip(Tree::hierarchical(3), Tree::train_track(8), Permutation::identity(8))).objective;
  o.pass &= ip == 2;
  o.detail = "height_bound_tt HT_2..HT_5 = " + got + "; IP(HT_3, TT_8) = " + std::to_string(ip);
  return o;
}

Outcome c4() {
  Clock clock;
  Outcome o;
  std::size_t trees = 0;
  int worst = 0;
  for (int n = 2; n <= 8; ++n) {
    const Tree tt = Tree::train_track(n);
    const CoverTable table(tt);
    for (const Tree& t : enumerate_plane_trees(n)) {
      const int c = cover_bound(table, t, Permutation::identity(n));
      worst = std::max(worst, c);
      ++trees;
    }
  }
  const double t = clock.seconds();
  o.pass = worst <= 2 && t < 60.0;
  o.detail = std::to_string(trees) + " plane trees, max cover exponent " + std::to_string(worst) + "; " + fixed(t);
  return o;
}

Outcome c5() {
  const Tree a = Tree::parse("((.((..).))(..))");
  const Tree b = Tree::parse("(((.((..).)).).)");
  const int cover = cover_exponent(a, b, Permutation::identity(6)).cover_bound;
  const int general = plane_general_bound(a).value;
  const int poset = poset_bound(Tree::parse("((.(.((..).)))((..).))"), Tree::train_track(8), Permutation::identity(8)).value;
  return {cover == 1 && general == 4 && poset == 3, "pair cover " + std::to_string(cover) + ", plane_general " +
                                                        std::to_string(general) + "; eight-leaf poset " +
                                                        std::to_string(poset)};
}

Outcome c6() {
  Clock clock;
  Outcome o;
  std::size_t instances = 0;
  std::size_t bad = 0;
  std::size_t pairs6 = 0;
  std::size_t pairs7 = 0;
  // 50 permutations per shape pair at n = 6 (τ_6² pairs), and at n = 7 (τ_7² = 121 pairs).
  for (int n : {6, 7}) {
    std::mt19937_64 rng(n);
    const auto shapes = enumerate_shapes(n);
    for (const Tree& t : shapes) {
      const CoverTable table(t);
      for (const Tree& tp : shapes) {
        (n == 6 ? pairs6 : pairs7)++;
        for (int k = 0; k < 50; ++k) {
          const Permutation pi = shuffled(n, rng);
          bad += solve_ip(build_ip(t, tp, pi)).objective != cover_bound(table, tp, pi);
          ++instances;
        }
      }
    }
  }
  std::size_t subsets = 0;
  std::size_t bad_subsets = 0;
  for (int n = 2; n <= 5; ++n) {
    for (const Tree& t : enumerate_plane_trees(n)) {
      const CoverTable table(t);
      for (LeafSet::Mask s = 0; s < (LeafSet::Mask{1} << n); ++s) {
        bad_subsets += table.count(LeafSet(s)) != brute_force_cover(t, LeafSet(s));
        ++subsets;
      }
    }
  }
  const double t = clock.seconds();
  o.pass = bad == 0 && bad_subsets == 0 && t < 300.0;
  o.detail = std::to_string(pairs6) + "+" + std::to_string(pairs7) + " shape pairs, " + std::to_string(instances) +
             " IP solves, " + std::to_string(bad) + " disagree; " + std::to_string(subsets) + " subsets, " +
             std::to_string(bad_subsets) + " brute-force mismatches; " + fixed(t);
  return o;
}

Outcome c7() {
  Clock clock;
  std::size_t instances = 0;
  std::size_t poset_bad = 0;
  std::size_t half_bad = 0;
  std::size_t height_bad = 0;
  for (int n = 2; n <= 7; ++n) {
    const SearchResult r = run_search({.leaves = n, .poset = true, .threads = 1});
    for (std::size_t a = 0; a < r.shapes().size(); ++a) {
      for (std::size_t b = 0; b < r.shapes().size(); ++b) {
        for (std::size_t k = 0; k < r.permutation_count(); ++k) {
          const int c = r.value(SearchColumn::cover, a, b, k);
          poset_bad += c > r.value(SearchColumn::poset, a, b, k);
          half_bad += c > n / 2;
          ++instances;
        }
      }
    }
    for (const Tree& t : enumerate_plane_trees(n)) {
      height_bad += cover_bound(CoverTable(t), Tree::train_track(n), Permutation::identity(n)) >
                    height_bound_tt(t).value;
    }
  }
  const double t = clock.seconds();
  return {poset_bad == 0 && half_bad == 0 && height_bad == 0,
          std::to_string(instances) + " instances; violations: poset " + std::to_string(poset_bad) + ", n/2 " +
              std::to_string(half_bad) + ", height " + std::to_string(height_bad) + "; " + fixed(t)};
}

Outcome c8() {
  Clock clock;
  std::size_t pairs = 0;
  std::size_t splits = 0;
  std::size_t over = 0;
  std::size_t transpose_bad = 0;
  for (int n = 2; n <= 6; ++n) {
    const auto trees = enumerate_plane_trees(n);
    const Permutation id = Permutation::identity(n);
    for (const Tree& t : trees) {
      const CoverTable table(t);
      const NetworkSpec spec = NetworkSpec::uniform(t, 2, 1, 2);
      for (const Tree& tp : trees) {
        const int c = cover_bound(table, tp, id);
        const DimensionVector f_prime(tp.vertex_count(), 1);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
          const FlatteningProfile p = flattening_profile(sample_tensor(spec, seed), 2, tp, id, f_prime, c);
          for (const SplitRank& s : p.splits) {
            over += !s.within();
            transpose_bad += s.rank != s.transpose_rank;
            ++splits;
          }
        }
        ++pairs;
      }
    }
  }
  const double t = clock.seconds();
  return {over == 0 && transpose_bad == 0 && t < 600.0,
          std::to_string(pairs) + " pairs x 10 seeds, " + std::to_string(splits) + " splits; " +
              std::to_string(over) + " above 2^cover, " + std::to_string(transpose_bad) + " transpose mismatches; " +
              fixed(t)};
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  if (fs::file_size(a) != fs::file_size(b)) return false;
  std::ifstream fa(a, std::ios::binary);
  std::ifstream fb(b, std::ios::binary);
  std::vector<char> ba(1 << 20);
  std::vector<char> bb(1 << 20);
  while (fa && fb) {
    fa.read(ba.data(), ba.size());
    fb.read(bb.data(), bb.size());
    if (fa.gcount() != fb.gcount() || !std::equal(ba.begin(), ba.begin() + fa.gcount(), bb.begin())) return false;
  }
  return true;
}

Outcome c9() {
  const fs::path dir = fs::temp_directory_path() / "tnexp_acceptance_c9";
  fs::create_directories(dir);
  Outcome o;
  double slowest = 0;
  std::size_t instances = 0;
  for (const char* name : {"a.csv", "b.csv"}) {
    Clock clock;
    const SearchResult r = run_search({.leaves = 8, .threads = 1});
    write_csv(r, dir / name);
    slowest = std::max(slowest, clock.seconds());
    instances = r.instance_count();
  }
  const bool same = same_bytes(dir / "a.csv", dir / "b.csv");
  const auto bytes = fs::file_size(dir / "a.csv");
  fs::remove_all(dir);
  o.pass = instances == 23u * 23u * 40320u && same && slowest < 600.0;
  o.detail = std::to_string(instances) + " instances, " + std::to_string(bytes) + " bytes, " +
             (same ? "identical" : "different") + " across runs; slowest run " + fixed(slowest);
  return o;
}

struct Criterion {
  const char* id;
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"c1", "n=4 reproduction", c1},     {"c2", "height fixture", c2},       {"c3", "hierarchical family", c3},
    {"c4", "train track universality", c4}, {"c5", "non-sharpness fixtures", c5}, {"c6", "oracle equivalence", c6},
    {"c7", "ordering properties", c7},  {"c8", "rank verification", c8},    {"c9", "scale", c9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failed = 0;
  int ran = 0;
  for (const Criterion& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << " " << c.title << ": " << o.detail << std::endl;
  }
  if (ran == 0) {
    std::cerr << "unknown criterion\n";
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
