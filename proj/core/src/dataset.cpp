#include "seriate/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include "json.hpp"

#include "detail.hpp"
#include "seriate/error.hpp"

namespace seriate {

using detail::Rng;
using detail::uniform01;

BitDataset::BitDataset(std::size_t n, const std::vector<std::vector<std::uint8_t>>& samples) : n_(n) {
  if (n == 0) throw ValidationError("dataset needs at least one variable");
  if (samples.empty()) throw ValidationError("no samples");
  bits_.reserve(n * samples.size());
  for (std::size_t t = 0; t < samples.size(); ++t) {
    if (samples[t].size() != n)
      throw ValidationError("sample " + std::to_string(t) + " has length " + std::to_string(samples[t].size()) +
                            ", expected " + std::to_string(n));
    for (std::uint8_t b : samples[t]) {
      if (b > 1) throw ValidationError("sample " + std::to_string(t) + " has a non-binary entry");
      bits_.push_back(b);
    }
  }
}

BitDataset BitDataset::from_strings(const std::vector<std::string>& rows) {
  if (rows.empty()) throw ValidationError("no samples");
  std::vector<std::vector<std::uint8_t>> samples;
  samples.reserve(rows.size());
  for (const auto& r : rows) {
    std::vector<std::uint8_t> s;
    for (char c : r) {
      if (c != '0' && c != '1') throw ValidationError("non-binary character in '" + r + "'");
      s.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    samples.push_back(std::move(s));
  }
  return BitDataset(rows.front().size(), samples);
}

std::string BitDataset::sample_string(std::size_t t) const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i) s[i] = static_cast<char>('0' + bit(t, i));
  return s;
}

std::map<std::string, std::size_t> BitDataset::histogram() const {
  std::map<std::string, std::size_t> h;
  for (std::size_t t = 0; t < size(); ++t) ++h[sample_string(t)];
  return h;
}

BitDataset BitDataset::prefix(std::size_t count) const {
  BitDataset out;
  out.n_ = n_;
  const std::size_t take = std::min(count, size());
  if (take == 0) throw ValidationError("no samples");
  out.bits_.assign(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(take * n_));
  return out;
}

BitDatasetBuilder::BitDatasetBuilder(std::size_t n, std::size_t reserve) {
  if (n == 0) throw ValidationError("dataset needs at least one variable");
  ds_.n_ = n;
  ds_.bits_.reserve(n * reserve);
}

void BitDatasetBuilder::push(std::span<const std::uint8_t> sample) {
  ds_.bits_.insert(ds_.bits_.end(), sample.begin(), sample.end());
}

BitDataset BitDatasetBuilder::finish() && {
  if (ds_.bits_.empty()) throw ValidationError("no samples");
  return std::move(ds_);
}

// --- Ising trees -----------------------------------------------------------

void IsingTree::validate() const {
  if (n < 2) throw ValidationError("Ising tree needs n >= 2");
  if (edges.size() != n - 1)
    throw ValidationError("Ising tree on " + std::to_string(n) + " nodes needs " + std::to_string(n - 1) +
                          " edges, got " + std::to_string(edges.size()));
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    if (e.i >= n || e.j >= n) throw ValidationError("Ising edge endpoint out of range");
    if (e.i == e.j) throw ValidationError("Ising edge is a self-loop");
    if (e.coupling == 0.0 || !std::isfinite(e.coupling)) throw ValidationError("Ising coupling must be nonzero and finite");
    const std::size_t a = find(e.i);
    const std::size_t b = find(e.j);
    if (a == b) throw ValidationError("Ising edges contain a cycle or duplicate edge");
    parent[a] = b;
  }
}

double IsingTree::max_abs_coupling() const {
  double m = 0.0;
  for (const auto& e : edges) m = std::max(m, std::abs(e.coupling));
  return m;
}

namespace {

double draw_coupling(Rng& rng, const CouplingRange& range) {
  const double neg_len = std::max(0.0, std::min(range.hi, -range.exclude) - range.lo);
  const double pos_len = std::max(0.0, range.hi - std::max(range.lo, range.exclude));
  const double total = neg_len + pos_len;
  const double u = uniform01(rng) * total;
  if (u < neg_len) return range.lo + u;
  return std::max(range.lo, range.exclude) + (u - neg_len);
}

}  // namespace

IsingTree gen_ising_tree(std::size_t n, std::uint64_t seed, const CouplingRange& range) {
  if (n < 2) throw DomainError("Ising tree needs n >= 2");
  if (!(range.lo < range.hi) || range.exclude < 0.0)
    throw DomainError("coupling range must satisfy lo < hi and exclude >= 0");
  const double neg_len = std::max(0.0, std::min(range.hi, -range.exclude) - range.lo);
  const double pos_len = std::max(0.0, range.hi - std::max(range.lo, range.exclude));
  if (neg_len + pos_len <= 0.0) throw DomainError("coupling range is empty after excluding the band around 0");

  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  std::vector<std::size_t> pruefer(n - 2);
  for (auto& p : pruefer) p = node(rng);

  // Standard decoding: repeatedly join the smallest leaf to the next sequence entry.
  std::vector<std::size_t> degree(n, 1);
  for (std::size_t p : pruefer) ++degree[p];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> leaves;
  for (std::size_t v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.push(v);

  IsingTree tree;
  tree.n = n;
  for (std::size_t p : pruefer) {
    const std::size_t leaf = leaves.top();
    leaves.pop();
    tree.edges.push_back({std::min(leaf, p), std::max(leaf, p), 0.0});
    if (--degree[p] == 1) leaves.push(p);
  }
  const std::size_t u = leaves.top();
  leaves.pop();
  const std::size_t v = leaves.top();
  tree.edges.push_back({std::min(u, v), std::max(u, v), 0.0});

  for (auto& e : tree.edges) e.coupling = draw_coupling(rng, range);
  return tree;
}

double default_beta(const IsingTree& tree) {
  const double m = tree.max_abs_coupling();
  if (m <= 0.0) throw ValidationError("Ising tree has no nonzero coupling");
  return 0.6 / m;
}

ExplicitDistribution gibbs_distribution(const IsingTree& tree, double beta) {
  tree.validate();
  if (tree.n > kMaxEnumeratedSites)
    throw CapacityError("exact Gibbs enumeration supports n <= " + std::to_string(kMaxEnumeratedSites));
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and >= 0");

  ExplicitDistribution dist;
  dist.n = tree.n;
  const std::size_t states = std::size_t{1} << tree.n;
  std::vector<double> log_w(states);
  for (std::size_t s = 0; s < states; ++s) {
    double e = 0.0;  // sum J s_i s_j, so -beta*H = beta*e
    for (const auto& edge : tree.edges) {
      const double si = dist.bit(s, edge.i) ? 1.0 : -1.0;
      const double sj = dist.bit(s, edge.j) ? 1.0 : -1.0;
      e += edge.coupling * si * sj;
    }
    log_w[s] = beta * e;
  }
  const double mx = *std::max_element(log_w.begin(), log_w.end());
  dist.probs.resize(states);
  double z = 0.0;
  for (std::size_t s = 0; s < states; ++s) z += dist.probs[s] = std::exp(log_w[s] - mx);
  for (auto& p : dist.probs) p /= z;
  return dist;
}

BitDataset sample_distribution(const ExplicitDistribution& dist, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ValidationError("no samples requested");
  std::vector<double> cdf(dist.probs.size());
  std::partial_sum(dist.probs.begin(), dist.probs.end(), cdf.begin());
  const double total = cdf.back();

  Rng rng(seed);
  BitDatasetBuilder b(dist.n, samples);
  std::vector<std::uint8_t> x(dist.n);
  for (std::size_t t = 0; t < samples; ++t) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= cdf.size()) idx = cdf.size() - 1;
    for (std::size_t k = 0; k < dist.n; ++k) x[k] = dist.bit(idx, k);
    b.push(x);
  }
  return std::move(b).finish();
}

BitDataset sample_gibbs(const IsingTree& tree, double beta, std::size_t samples, std::uint64_t seed) {
  return sample_distribution(gibbs_distribution(tree, beta), samples, seed);
}

// --- Bars and stripes, Markov chains --------------------------------------

BitDataset gen_bas(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DomainError("bars-and-stripes grid needs rows >= 1 and cols >= 1");
  if (rows * cols > kMaxBasPixels)
    throw CapacityError("bars-and-stripes supports at most " + std::to_string(kMaxBasPixels) + " pixels");

  const std::size_t n = rows * cols;
  std::vector<std::vector<std::uint8_t>> patterns;
  std::vector<std::uint8_t> x(n);
  // Bars: every row constant, row r takes bit r of the mask.
  for (std::size_t mask = 0; mask < (std::size_t{1} << rows); ++mask) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) x[r * cols + c] = static_cast<std::uint8_t>((mask >> r) & 1U);
    patterns.push_back(x);
  }
  // Stripes: every column constant; the two constant images are already present.
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << cols); ++mask) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) x[r * cols + c] = static_cast<std::uint8_t>((mask >> c) & 1U);
    patterns.push_back(x);
  }
  std::sort(patterns.begin(), patterns.end());
  patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
  return BitDataset(n, patterns);
}

BitDataset gen_markov_chain(std::size_t n, double flip_prob, std::size_t samples, std::uint64_t seed) {
  if (n == 0) throw DomainError("Markov chain needs n >= 1");
  if (!(flip_prob > 0.0 && flip_prob < 1.0)) throw DomainError("flip probability must lie in (0, 1)");
  if (samples == 0) throw ValidationError("no samples requested");
  Rng rng(seed);
  BitDatasetBuilder b(n, samples);
  std::vector<std::uint8_t> x(n);
  for (std::size_t t = 0; t < samples; ++t) {
    x[0] = static_cast<std::uint8_t>(uniform01(rng) < 0.5 ? 0 : 1);
    for (std::size_t i = 1; i < n; ++i) x[i] = static_cast<std::uint8_t>(uniform01(rng) < flip_prob ? 1 - x[i - 1] : x[i - 1]);
    b.push(x);
  }
  return std::move(b).finish();
}

ExplicitDistribution markov_chain_distribution(std::size_t n, double flip_prob) {
  if (n == 0) throw DomainError("Markov chain needs n >= 1");
  if (n > kMaxEnumeratedSites) throw CapacityError("exact enumeration supports n <= " + std::to_string(kMaxEnumeratedSites));
  if (!(flip_prob > 0.0 && flip_prob < 1.0)) throw DomainError("flip probability must lie in (0, 1)");
  ExplicitDistribution dist;
  dist.n = n;
  dist.probs.resize(std::size_t{1} << n);
  for (std::size_t s = 0; s < dist.probs.size(); ++s) {
    double p = 0.5;
    for (std::size_t i = 1; i < n; ++i) p *= dist.bit(s, i) != dist.bit(s, i - 1) ? flip_prob : 1.0 - flip_prob;
    dist.probs[s] = p;
  }
  return dist;
}

// --- Permutations ---------------------------------------------------------

void validate_permutation(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n)
    throw ValidationError("ordering has length " + std::to_string(perm.size()) + ", expected " + std::to_string(n));
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw ValidationError("ordering is not a permutation of 0..n-1");
    seen[p] = true;
  }
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
  validate_permutation(perm, perm.size());
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = k;
  return inv;
}

BitDataset permute_dataset(const BitDataset& ds, std::span<const std::size_t> perm) {
  validate_permutation(perm, ds.n());
  BitDatasetBuilder b(ds.n(), ds.size());
  std::vector<std::uint8_t> x(ds.n());
  for (std::size_t t = 0; t < ds.size(); ++t) {
    for (std::size_t k = 0; k < ds.n(); ++k) x[k] = ds.bit(t, perm[k]);
    b.push(x);
  }
  return std::move(b).finish();
}

// --- Files ----------------------------------------------------------------

std::string format_dataset(const BitDataset& ds) {
  std::string out;
  out.reserve(ds.size() * (ds.n() + 1));
  for (std::size_t t = 0; t < ds.size(); ++t) {
    for (std::size_t i = 0; i < ds.n(); ++i) out.push_back(static_cast<char>('0' + ds.bit(t, i)));
    out.push_back('\n');
  }
  return out;
}

BitDataset parse_dataset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool in_header = true;
  std::vector<std::uint8_t> bits;
  std::vector<std::uint8_t> x;
  std::size_t count = 0;
  std::size_t first_blank = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (in_header && !line.empty() && line.front() == '#') continue;
    in_header = false;
    if (line.empty()) {
      // Blank lines are tolerated only at the end of the file.
      if (first_blank == 0) first_blank = line_no;
      continue;
    }
    if (first_blank != 0) throw ParseError(first_blank, "empty sample line");
    if (line.front() == '#') throw ParseError(line_no, "comment lines are only allowed before the first sample");
    x.clear();
    for (char c : line) {
      if (c != '0' && c != '1') throw ParseError(line_no, std::string("invalid character '") + c + "'");
      x.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (count == 0) {
      n = x.size();
    } else if (x.size() != n) {
      throw ParseError(line_no, "sample length " + std::to_string(x.size()) + " differs from " + std::to_string(n));
    }
    bits.insert(bits.end(), x.begin(), x.end());
    ++count;
  }
  if (count == 0) throw ParseError(0, "no samples");

  BitDatasetBuilder b(n, count);
  for (std::size_t t = 0; t < count; ++t) b.push(std::span<const std::uint8_t>(bits.data() + t * n, n));
  return std::move(b).finish();
}

void save_dataset(const BitDataset& ds, const std::filesystem::path& path) {
  detail::write_file(path, format_dataset(ds));
}

BitDataset load_dataset(const std::filesystem::path& path) { return parse_dataset(detail::read_file(path)); }

std::string ising_tree_to_json(const IsingTree& tree) {
  nlohmann::json j;
  j["n"] = tree.n;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : tree.edges) j["edges"].push_back({e.i, e.j, e.coupling});
  return j.dump() + "\n";
}

IsingTree ising_tree_from_json(const std::string& text) {
  IsingTree tree;
  try {
    const auto j = nlohmann::json::parse(text);
    tree.n = j.at("n").get<std::size_t>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw ParseError(0, "Ising edge must be [i, j, J]");
      tree.edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(0, std::string("invalid Ising tree JSON: ") + ex.what());
  }
  tree.validate();
  return tree;
}

void save_ising_tree(const IsingTree& tree, const std::filesystem::path& path) {
  detail::write_file(path, ising_tree_to_json(tree));
}

IsingTree load_ising_tree(const std::filesystem::path& path) { return ising_tree_from_json(detail::read_file(path)); }

}  // namespace seriate
