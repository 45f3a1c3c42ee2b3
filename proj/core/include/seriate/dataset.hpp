#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace seriate {

/// T samples of n binary variables, stored sample-major.
class BitDataset {
 public:
  BitDataset() = default;
  /// Builds from bit-vectors; every sample must have length n, T >= 1.
  BitDataset(std::size_t n, const std::vector<std::vector<std::uint8_t>>& samples);
  /// Builds from '0'/'1' strings of equal length.
  static BitDataset from_strings(const std::vector<std::string>& rows);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return n_ == 0 ? 0 : bits_.size() / n_; }

  std::span<const std::uint8_t> sample(std::size_t t) const noexcept { return {bits_.data() + t * n_, n_}; }
  std::uint8_t bit(std::size_t t, std::size_t i) const noexcept { return bits_[t * n_ + i]; }
  std::string sample_string(std::size_t t) const;

  /// Distinct samples (as strings) with their multiplicities, in lexicographic order.
  std::map<std::string, std::size_t> histogram() const;

  /// First `count` samples (count clamped to size()).
  BitDataset prefix(std::size_t count) const;

  friend bool operator==(const BitDataset&, const BitDataset&) = default;

 private:
  friend class BitDatasetBuilder;
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Incremental construction used by the generators.
class BitDatasetBuilder {
 public:
  explicit BitDatasetBuilder(std::size_t n, std::size_t reserve = 0);
  void push(std::span<const std::uint8_t> sample);
  BitDataset finish() &&;

 private:
  BitDataset ds_;
};

/// A fully enumerated distribution over n-bit strings. Index convention:
/// position 0 of a sample is the most significant bit of the index, so
/// index order equals lexicographic string order.
struct ExplicitDistribution {
  std::size_t n = 0;
  std::vector<double> probs;  // size 2^n

  std::uint8_t bit(std::size_t index, std::size_t position) const noexcept {
    return static_cast<std::uint8_t>((index >> (n - 1 - position)) & 1U);
  }
};

/// Spanning tree of pairwise couplings for H(s) = -sum J_ij s_i s_j.
struct IsingEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  double coupling = 0.0;
  friend bool operator==(const IsingEdge&, const IsingEdge&) = default;
};

struct IsingTree {
  std::size_t n = 0;
  std::vector<IsingEdge> edges;

  /// Throws ValidationError unless the edges form a spanning tree with nonzero couplings.
  void validate() const;
  double max_abs_coupling() const;
  friend bool operator==(const IsingTree&, const IsingTree&) = default;
};

/// Couplings are drawn uniformly from [lo, hi] minus the open band (-exclude, exclude).
struct CouplingRange {
  double lo = -1.0;
  double hi = 1.0;
  double exclude = 0.1;
};

inline constexpr std::size_t kMaxBasPixels = 24;
inline constexpr std::size_t kMaxEnumeratedSites = 20;

/// Every bars pattern (rows constant) and stripes pattern (columns constant),
/// deduplicated, flattened row-major. T = 2^rows + 2^cols - 2.
BitDataset gen_bas(std::size_t rows, std::size_t cols);

/// Uniform random labelled spanning tree via a Prüfer sequence.
IsingTree gen_ising_tree(std::size_t n, std::uint64_t seed, const CouplingRange& range = {});

/// Default inverse temperature 0.6 / max|J|.
double default_beta(const IsingTree& tree);

/// Exact Boltzmann distribution p(s) ∝ exp(-beta H(s)) with s_i = 2x_i - 1.
ExplicitDistribution gibbs_distribution(const IsingTree& tree, double beta);

/// T i.i.d. draws from the exactly enumerated Gibbs distribution.
BitDataset sample_gibbs(const IsingTree& tree, double beta, std::size_t samples, std::uint64_t seed);

/// T independent binary Markov chains with uniform start and flip probability p.
BitDataset gen_markov_chain(std::size_t n, double flip_prob, std::size_t samples, std::uint64_t seed);

/// Exact law of the Markov chain above, enumerated over 2^n strings.
ExplicitDistribution markov_chain_distribution(std::size_t n, double flip_prob);

/// i.i.d. draws from an enumerated distribution.
BitDataset sample_distribution(const ExplicitDistribution& dist, std::size_t samples, std::uint64_t seed);

/// Output bit at position k is input bit at position perm[k].
BitDataset permute_dataset(const BitDataset& ds, std::span<const std::size_t> perm);

/// Throws ValidationError if `perm` is not a permutation of {0..n-1}.
void validate_permutation(std::span<const std::size_t> perm, std::size_t n);

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

// Text format: one sample per line of '0'/'1', optional leading '#' comments.
void save_dataset(const BitDataset& ds, const std::filesystem::path& path);
BitDataset load_dataset(const std::filesystem::path& path);
BitDataset parse_dataset(const std::string& text);
std::string format_dataset(const BitDataset& ds);

// JSON format: {"n": int, "edges": [[i, j, J], ...]}.
std::string ising_tree_to_json(const IsingTree& tree);
IsingTree ising_tree_from_json(const std::string& text);
void save_ising_tree(const IsingTree& tree, const std::filesystem::path& path);
IsingTree load_ising_tree(const std::filesystem::path& path);

}  // namespace seriate
