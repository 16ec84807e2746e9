#include "tnexp/search.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "json.hpp"

#include "tnexp/bounds.hpp"
#include "tnexp/cover.hpp"
#include "tnexp/doad.hpp"
#include "tnexp/tree.hpp"

namespace tnexp {

std::string column_name(SearchColumn column) {
  switch (column) {
    case SearchColumn::cover: return "cover_bound";
    case SearchColumn::poset: return "poset_bound";
    case SearchColumn::naive_max: return "naive_max_bound";
  }
  return "unknown";
}

namespace {

std::optional<SearchColumn> column_from_name(const std::string& name) {
  for (SearchColumn c : {SearchColumn::cover, SearchColumn::poset, SearchColumn::naive_max}) {
    if (column_name(c) == name) return c;
  }
  return std::nullopt;
}

std::uint64_t factorial(int n) {
  std::uint64_t out = 1;
  for (int k = 2; k <= n; ++k) out *= static_cast<std::uint64_t>(k);
  return out;
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TNEXP_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return 1;
}

// Uniform draw in [0, bound) without modulo bias.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::vector<Permutation> sample_permutations(int n, std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> ranks;
  const std::uint64_t total = factorial(n);
  std::unordered_map<std::uint64_t, bool> seen;
  while (ranks.size() < count) {
    std::vector<int> line(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) line[k] = k + 1;
    for (int k = n - 1; k > 0; --k) {
      std::swap(line[k], line[uniform_below(rng, static_cast<std::uint64_t>(k) + 1)]);
    }
    const std::uint64_t rank = Permutation::from_one_line(line).lehmer_rank();
    if (seen.emplace(rank, true).second) ranks.push_back(rank);
    if (ranks.size() == total) break;
  }
  std::sort(ranks.begin(), ranks.end());
  std::vector<Permutation> out;
  out.reserve(ranks.size());
  for (std::uint64_t r : ranks) out.push_back(Permutation::unrank(n, r));
  return out;
}

struct ProbeShape {
  std::vector<std::pair<LeafSet, LeafSet>> splits;  // (𝔡(w), 𝔞(w)) per internal node
  std::vector<LeafSet> doads;
};

}  // namespace

Permutation SearchResult::permutation(std::size_t k) const {
  if (sampled_) return sample_.at(k);
  return Permutation::unrank(leaves_, k);
}

bool SearchResult::has(SearchColumn column) const { return !data(column).empty() || instance_count() == 0; }

std::vector<SearchColumn> SearchResult::columns() const {
  std::vector<SearchColumn> out{SearchColumn::cover};
  if (!poset_.empty()) out.push_back(SearchColumn::poset);
  if (!naive_.empty()) out.push_back(SearchColumn::naive_max);
  return out;
}

const std::vector<std::uint8_t>& SearchResult::data(SearchColumn column) const {
  switch (column) {
    case SearchColumn::poset: return poset_;
    case SearchColumn::naive_max: return naive_;
    default: return cover_;
  }
}

int SearchResult::value(SearchColumn column, std::size_t a, std::size_t b, std::size_t k) const {
  const auto& values = data(column);
  if (values.empty()) throw std::invalid_argument(column_name(column) + " was not computed");
  return values[index(a, b, k)];
}

PairAggregate SearchResult::aggregate(SearchColumn column, std::size_t a, std::size_t b) const {
  const auto& values = data(column);
  if (values.empty()) throw std::invalid_argument(column_name(column) + " was not computed");
  PairAggregate out;
  out.min = std::numeric_limits<int>::max();
  const std::size_t base = index(a, b, 0);
  for (std::size_t k = 0; k < permutation_count_; ++k) {
    const int v = values[base + k];
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
    ++out.histogram[v];
  }
  if (permutation_count_ == 0) out.min = 0;
  return out;
}

std::vector<std::vector<int>> SearchResult::min_matrix(SearchColumn column) const {
  std::vector<std::vector<int>> out(shapes_.size(), std::vector<int>(shapes_.size()));
  for (std::size_t a = 0; a < shapes_.size(); ++a) {
    for (std::size_t b = 0; b < shapes_.size(); ++b) out[a][b] = aggregate(column, a, b).min;
  }
  return out;
}

std::vector<std::vector<int>> SearchResult::max_matrix(SearchColumn column) const {
  std::vector<std::vector<int>> out(shapes_.size(), std::vector<int>(shapes_.size()));
  for (std::size_t a = 0; a < shapes_.size(); ++a) {
    for (std::size_t b = 0; b < shapes_.size(); ++b) out[a][b] = aggregate(column, a, b).max;
  }
  return out;
}

SearchResult run_search(const SearchOptions& options) {
  const int n = options.leaves;
  if (n < 2) throw std::invalid_argument("search needs at least 2 leaves");
  const bool sampled = options.sample != 0 && options.sample < factorial(std::min(n, 20));
  if (!sampled && n > 8) {
    throw std::invalid_argument("full search is capped at 8 leaves; pass a permutation sample size");
  }
  if (n > 12) throw std::invalid_argument("search is capped at 12 leaves");

  SearchResult result;
  result.leaves_ = n;
  result.sampled_ = sampled;
  result.seed_ = options.seed;
  const std::vector<Tree> shapes = enumerate_shapes(n);
  for (const Tree& t : shapes) result.shapes_.push_back(t.to_string());
  if (sampled) {
    result.sample_ = sample_permutations(n, options.sample, options.seed);
    result.permutation_count_ = result.sample_.size();
  } else {
    result.permutation_count_ = factorial(n);
  }

  const std::size_t count = shapes.size();
  const std::size_t perms = result.permutation_count_;
  std::vector<CoverTable> tables;
  std::vector<std::vector<std::uint8_t>> poset_tables;
  std::vector<ProbeShape> probes;
  for (const Tree& t : shapes) {
    tables.emplace_back(t);
    if (options.poset) poset_tables.push_back(poset_term_table(t));
    ProbeShape probe;
    for (VertexId w : t.internal_nodes()) probe.splits.emplace_back(t.descendants(w), t.anti_descendants(w));
    for (const DoadEntry& e : DoadFamily(t)) probe.doads.push_back(e.set);
    probes.push_back(std::move(probe));
  }

  result.cover_.assign(result.instance_count(), 0);
  if (options.poset) result.poset_.assign(result.instance_count(), 0);
  if (options.naive) result.naive_.assign(result.instance_count(), 0);

  // Each worker owns whole probe shapes b; all writes land in disjoint slots.
  auto work = [&](std::size_t b) {
    const ProbeShape& probe = probes[b];
    std::vector<std::pair<LeafSet::Mask, LeafSet::Mask>> splits(probe.splits.size());
    std::vector<LeafSet::Mask> doads(probe.doads.size());
    Permutation pi = sampled ? result.sample_.front() : Permutation::identity(n);
    for (std::size_t k = 0; k < perms; ++k) {
      if (sampled) {
        pi = result.sample_[k];
      } else if (k > 0) {
        pi.next();
      }
      for (std::size_t s = 0; s < splits.size(); ++s) {
        splits[s] = {pi.preimage(probe.splits[s].first).bits(), pi.preimage(probe.splits[s].second).bits()};
      }
      if (options.poset || options.naive) {
        for (std::size_t s = 0; s < doads.size(); ++s) doads[s] = pi.preimage(probe.doads[s]).bits();
      }
      for (std::size_t a = 0; a < count; ++a) {
        const std::uint8_t* table = tables[a].counts().data();
        const std::size_t at = result.index(a, b, k);
        int bound = 0;
        for (const auto& [under, over] : splits) {
          int best = table[under];
          if (over != 0) best = std::min<int>(best, table[over]);
          bound = std::max(bound, best);
        }
        result.cover_[at] = static_cast<std::uint8_t>(bound);
        if (options.poset) {
          const std::uint8_t* terms = poset_tables[a].data();
          int poset = 0;
          for (LeafSet::Mask d : doads) poset = std::max<int>(poset, terms[d]);
          result.poset_[at] = static_cast<std::uint8_t>(poset);
        }
        if (options.naive) {
          int naive = 0;
          for (LeafSet::Mask d : doads) naive = std::max<int>(naive, table[d]);
          result.naive_[at] = static_cast<std::uint8_t>(naive);
        }
      }
    }
  };

  const int threads = std::min<int>(thread_count(options.threads), static_cast<int>(count));
  if (threads <= 1) {
    for (std::size_t b = 0; b < count; ++b) work(b);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t b = static_cast<std::size_t>(t); b < count; b += static_cast<std::size_t>(threads)) work(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  return result;
}

void write_csv(const SearchResult& result, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const auto columns = result.columns();
  std::string buffer = "n,shape_a,shape_b,perm_oneline";
  for (SearchColumn c : columns) buffer += "," + column_name(c);
  buffer += "\n";

  std::vector<std::string> perm_text(result.permutation_count());
  if (!result.sampled()) {
    Permutation pi = Permutation::identity(result.leaves());
    for (std::size_t k = 0; k < perm_text.size(); ++k) {
      if (k > 0) pi.next();
      perm_text[k] = pi.to_string();
    }
  } else {
    for (std::size_t k = 0; k < perm_text.size(); ++k) perm_text[k] = result.permutation(k).to_string();
  }

  const std::string n_text = std::to_string(result.leaves()) + ",";
  const auto& shapes = result.shapes();
  constexpr std::size_t kFlushAt = std::size_t{1} << 20;
  char digits[8];
  for (std::size_t a = 0; a < shapes.size(); ++a) {
    for (std::size_t b = 0; b < shapes.size(); ++b) {
      const std::string prefix = n_text + shapes[a] + "," + shapes[b] + ",";
      for (std::size_t k = 0; k < perm_text.size(); ++k) {
        buffer += prefix;
        buffer += perm_text[k];
        for (SearchColumn c : columns) {
          buffer += ',';
          const auto end = std::to_chars(digits, digits + sizeof digits, result.value(c, a, b, k)).ptr;
          buffer.append(digits, end);
        }
        buffer += '\n';
        if (buffer.size() >= kFlushAt) {
          file.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
          buffer.clear();
        }
      }
    }
  }
  file.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!file) throw std::runtime_error("write to " + path.string() + " failed");
}

void write_json(const SearchResult& result, std::ostream& out) {
  using nlohmann::json;
  json doc;
  doc["n"] = result.leaves();
  doc["shapes"] = result.shapes();
  doc["permutations"] = result.permutation_count();
  doc["sampled"] = result.sampled();
  if (result.sampled()) doc["seed"] = result.seed();
  doc["instances"] = result.instance_count();
  json columns = json::array();
  json aggregates = json::object();
  for (SearchColumn c : result.columns()) {
    columns.push_back(column_name(c));
    json block;
    block["min_matrix"] = result.min_matrix(c);
    block["max_matrix"] = result.max_matrix(c);
    std::map<int, std::uint64_t> total;
    json pairs = json::array();
    for (std::size_t a = 0; a < result.shapes().size(); ++a) {
      for (std::size_t b = 0; b < result.shapes().size(); ++b) {
        const PairAggregate agg = result.aggregate(c, a, b);
        json hist = json::object();
        for (const auto& [value, times] : agg.histogram) {
          hist[std::to_string(value)] = times;
          total[value] += times;
        }
        pairs.push_back({{"shape_a", a}, {"shape_b", b}, {"min", agg.min}, {"max", agg.max}, {"histogram", hist}});
      }
    }
    json hist = json::object();
    for (const auto& [value, times] : total) hist[std::to_string(value)] = times;
    block["histogram"] = hist;
    block["pairs"] = pairs;
    aggregates[column_name(c)] = block;
  }
  doc["columns"] = columns;
  doc["aggregates"] = aggregates;
  out << doc.dump(2) << "\n";
}

void write_json(const SearchResult& result, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_json(result, file);
  if (!file) throw std::runtime_error("write to " + path.string() + " failed");
}

namespace {

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = line.find(delimiter, start);
    if (at == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, at - start));
    start = at + 1;
  }
}

int parse_int(std::string_view text, const std::string& where) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error(where + ": expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

SearchResult read_csv(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(file, line)) throw std::runtime_error(path.string() + ": empty file");
  strip_cr(line);
  const auto header = split(line, ',');
  if (header.size() < 5 || header[0] != "n" || header[1] != "shape_a" || header[2] != "shape_b" ||
      header[3] != "perm_oneline" || header[4] != "cover_bound") {
    throw std::runtime_error(path.string() + ": unexpected header '" + line + "'");
  }
  std::vector<SearchColumn> columns;
  for (std::size_t c = 4; c < header.size(); ++c) {
    const auto column = column_from_name(std::string(header[c]));
    if (!column) throw std::runtime_error(path.string() + ": unknown column '" + std::string(header[c]) + "'");
    columns.push_back(*column);
  }

  SearchResult result;
  std::unordered_map<std::string, std::size_t> shape_index;
  std::unordered_map<std::string, std::size_t> perm_index;
  std::vector<Permutation> perms;
  std::vector<std::vector<std::uint8_t>> values(columns.size());
  std::size_t last_a = 0, last_b = 0, last_k = 0;
  std::size_t row = 0;
  auto index_of = [&](std::string_view text) {
    auto [it, inserted] = shape_index.emplace(std::string(text), result.shapes_.size());
    if (inserted) result.shapes_.emplace_back(text);
    return it->second;
  };
  while (std::getline(file, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const std::string where = path.string() + ": row " + std::to_string(row + 1);
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw std::runtime_error(where + ": wrong number of cells");
    const int n = parse_int(cells[0], where);
    if (row == 0) {
      result.leaves_ = n;
    } else if (n != result.leaves_) {
      throw std::runtime_error(where + ": mixed leaf counts");
    }
    const std::size_t a = index_of(cells[1]);
    const std::size_t b = index_of(cells[2]);
    std::size_t k;
    if (auto it = perm_index.find(std::string(cells[3])); it != perm_index.end()) {
      k = it->second;
    } else {
      if (a != 0 || b != 0) throw std::runtime_error(where + ": permutation absent from the first block");
      k = perms.size();
      try {
        perms.push_back(Permutation::parse(cells[3], n));
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error(where + ": " + e.what());
      }
      perm_index.emplace(std::string(cells[3]), k);
    }
    if (row > 0 && std::tie(a, b, k) <= std::tie(last_a, last_b, last_k)) {
      throw std::runtime_error(where + ": rows out of order");
    }
    std::tie(last_a, last_b, last_k) = std::tie(a, b, k);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      values[c].push_back(static_cast<std::uint8_t>(parse_int(cells[4 + c], where)));
    }
    ++row;
  }

  const std::size_t s = result.shapes_.size();
  if (row != s * s * perms.size()) throw std::runtime_error(path.string() + ": incomplete instance grid");
  for (std::size_t k = 1; k < perms.size(); ++k) {
    if (perms[k].lehmer_rank() <= perms[k - 1].lehmer_rank()) {
      throw std::runtime_error(path.string() + ": permutations not in lexicographic order");
    }
  }
  result.permutation_count_ = perms.size();
  result.sampled_ = perms.size() != factorial(result.leaves_);
  if (result.sampled_) result.sample_ = std::move(perms);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    switch (columns[c]) {
      case SearchColumn::cover: result.cover_ = std::move(values[c]); break;
      case SearchColumn::poset: result.poset_ = std::move(values[c]); break;
      case SearchColumn::naive_max: result.naive_ = std::move(values[c]); break;
    }
  }
  return result;
}

ReferenceAdapter load_adapter(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open adapter " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("adapter " + path.string() + ": " + e.what());
  }
  ReferenceAdapter out;
  if (doc.contains("delimiter")) {
    const auto text = doc["delimiter"].get<std::string>();
    if (text.size() != 1) throw std::runtime_error("adapter delimiter must be one character");
    out.delimiter = text[0];
  }
  if (doc.contains("shape_a")) out.shape_a = doc["shape_a"].get<std::string>();
  if (doc.contains("shape_b")) out.shape_b = doc["shape_b"].get<std::string>();
  if (doc.contains("permutation")) out.permutation = doc["permutation"].get<std::string>();
  if (doc.contains("value")) out.value = doc["value"].get<std::string>();
  if (doc.contains("ours")) {
    const auto column = column_from_name(doc["ours"].get<std::string>());
    if (!column) throw std::runtime_error("adapter: unknown column " + doc["ours"].dump());
    out.ours = *column;
  }
  return out;
}

DiffReport verify_against_reference(const std::filesystem::path& ours, const std::filesystem::path& reference,
                                    const ReferenceAdapter& adapter, std::size_t keep) {
  const SearchResult mine = read_csv(ours);
  if (!mine.has(adapter.ours)) throw std::runtime_error(ours.string() + " has no " + column_name(adapter.ours));

  std::ifstream file(reference, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + reference.string());
  std::string line;
  if (!std::getline(file, line)) throw std::runtime_error("unparseable reference: empty file");
  strip_cr(line);
  const auto header = split(line, adapter.delimiter);
  auto find_column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("unparseable reference: no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t col_a = find_column(adapter.shape_a);
  const std::size_t col_b = find_column(adapter.shape_b);
  const std::size_t col_p = find_column(adapter.permutation);
  const std::size_t col_v = find_column(adapter.value);

  std::unordered_map<std::string, std::size_t> shape_index;
  for (std::size_t s = 0; s < mine.shapes().size(); ++s) shape_index.emplace(mine.shapes()[s], s);
  std::vector<std::uint64_t> sample_ranks;
  if (mine.sampled()) {
    for (std::size_t k = 0; k < mine.permutation_count(); ++k) sample_ranks.push_back(mine.permutation(k).lehmer_rank());
  }

  DiffReport report;
  auto record = [&](Mismatch m) {
    if (report.mismatches.size() < keep) {
      report.mismatches.push_back(std::move(m));
    } else {
      ++report.dropped;
    }
  };
  std::vector<bool> seen(mine.instance_count(), false);
  std::size_t row = 0;
  while (std::getline(file, line)) {
    strip_cr(line);
    ++row;
    if (line.empty()) continue;
    const std::string where = "unparseable reference: row " + std::to_string(row);
    const auto cells = split(line, adapter.delimiter);
    if (cells.size() != header.size()) throw std::runtime_error(where + ": wrong number of cells");
    const int theirs = parse_int(cells[col_v], where);
    Permutation pi;
    try {
      pi = Permutation::parse(cells[col_p], mine.leaves());
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    Mismatch m{std::string(cells[col_a]), std::string(cells[col_b]), pi.to_string(), std::nullopt, theirs};
    const auto a = shape_index.find(m.shape_a);
    const auto b = shape_index.find(m.shape_b);
    std::optional<std::size_t> k;
    const std::uint64_t rank = pi.lehmer_rank();
    if (!mine.sampled()) {
      k = rank;
    } else if (auto it = std::lower_bound(sample_ranks.begin(), sample_ranks.end(), rank);
               it != sample_ranks.end() && *it == rank) {
      k = static_cast<std::size_t>(it - sample_ranks.begin());
    }
    if (a == shape_index.end() || b == shape_index.end() || !k) {
      record(std::move(m));
      continue;
    }
    const std::size_t at = mine.index(a->second, b->second, *k);
    seen[at] = true;
    ++report.compared;
    const int value = mine.value(adapter.ours, a->second, b->second, *k);
    if (value != theirs) {
      m.ours = value;
      record(std::move(m));
    }
  }
  for (std::size_t a = 0; a < mine.shapes().size(); ++a) {
    for (std::size_t b = 0; b < mine.shapes().size(); ++b) {
      for (std::size_t k = 0; k < mine.permutation_count(); ++k) {
        if (seen[mine.index(a, b, k)]) continue;
        record({mine.shapes()[a], mine.shapes()[b], mine.permutation(k).to_string(),
                mine.value(adapter.ours, a, b, k), std::nullopt});
      }
    }
  }
  return report;
}

}  // namespace tnexp
