#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "seriate/matrix.hpp"
#include "seriate/mi_graph.hpp"

namespace seriate {

inline constexpr double kEpsRobinson = 1e-12;
inline constexpr std::size_t kMaxBruteForceSites = 10;

/// A site ordering: perm[k] is the original variable placed at position k.
struct Ordering {
  std::vector<std::size_t> perm;
  double cost = 0.0;       ///< 1/2 sum_{k,l} (k-l)^2 w_{perm[k], perm[l]}
  bool stable = true;      ///< false when lambda_1 is (numerically) degenerate
  double lambda1 = 0.0;    ///< algebraic connectivity of the Laplacian used
  double gap = 0.0;        ///< lambda_2 - lambda_1 (lambda_1 when n == 2)
  std::size_t components = 1;
};

/// Sites mapped to the first m nontrivial Laplacian eigenvectors. Row i of
/// `coords` is the point for site i.
struct Embedding {
  Matrix coords;
  std::size_t dims() const noexcept { return coords.cols(); }
};

/// Discrete seriation cost; positions run 0..n-1.
double perm_cost(const WeightMatrix& w, std::span<const std::size_t> perm);

/// x^T L x, the continuous relaxation of perm_cost.
double relaxed_cost(const Matrix& l, std::span<const double> x);

/// Reverses `perm` in place when perm.front() > perm.back().
void canonicalize(std::vector<std::size_t>& perm);

/// The centred, unit-norm position vector of a permutation: entry i is
/// proportional to (pos(i) + 1 - (n+1)/2) where pos is the inverse permutation.
std::vector<double> position_vector(std::span<const std::size_t> perm);

/// Vertex partition read off the near-zero eigenspace (vertices of one
/// component have parallel rows in the kernel basis).
std::vector<std::vector<std::size_t>> kernel_components(const LapSpectrum& spectrum, double eps = kEpsEig);

/// Stable ascending argsort of the Fiedler vector, canonicalized, with its
/// cost under `w`. Throws DisconnectedGraphError when lambda_1 <= kEpsEig.
Ordering fiedler_order(const LapSpectrum& spectrum, const WeightMatrix& w);

/// Convenience: Fiedler order from the unnormalized Laplacian of `w`.
Ordering fiedler_order(const WeightMatrix& w);

/// Exact minimizer of perm_cost over canonical permutations, ties broken
/// lexicographically. n <= kMaxBruteForceSites.
Ordering brute_force_order(const WeightMatrix& w, std::size_t threads = 1);

/// w_ij <= w_ik for j < k < i and w_ij >= w_ik for i < j < k, within eps.
bool is_robinson(const WeightMatrix& w, double eps = kEpsRobinson);

/// Points from eigenvectors 1..m; each column's largest-magnitude entry
/// (first on ties) is made positive.
Embedding spectral_embedding(const LapSpectrum& spectrum, std::size_t m);

/// lambda_k - lambda_{k-1}, 1 <= k <= n-1.
double spectral_gap(const LapSpectrum& spectrum, std::size_t k);

/// True iff delta_frobenius <= (lambda_k - lambda_{k-1}) / sqrt(2).
bool stability_margin(const LapSpectrum& spectrum, std::size_t k, double delta_frobenius);

/// lambda_1 of the normalized Laplacian of `w`; throws IsolatedVertexError.
double algebraic_connectivity(const WeightMatrix& w);

// {"perm":[...], "cost":..., "stable":..., "lambda1":..., "gap":...}
std::string ordering_to_json(const Ordering& o);
Ordering ordering_from_json(const std::string& text);
void save_ordering(const Ordering& o, const std::filesystem::path& path);
Ordering load_ordering(const std::filesystem::path& path);

// CSV rows: site_index,coord_1,...,coord_m
std::string embedding_to_csv(const Embedding& e);

}  // namespace seriate
