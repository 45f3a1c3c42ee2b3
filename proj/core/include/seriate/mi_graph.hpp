#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "seriate/dataset.hpp"
#include "seriate/matrix.hpp"

namespace seriate {

inline constexpr double kEpsEig = 1e-9;
inline constexpr double kEpsOrth = 1e-8;
inline constexpr double kEpsSym = 1e-10;
inline constexpr double kEpsProb = 1e-9;

/// Symmetric, nonnegative, zero-diagonal similarity matrix (mutual information in nats).
class WeightMatrix {
 public:
  WeightMatrix() = default;
  explicit WeightMatrix(std::size_t n) : w_(n, n) {}
  /// Validates symmetry (to kEpsSym), nonnegativity and zero diagonal, then
  /// stores the exactly symmetrized matrix.
  explicit WeightMatrix(const Matrix& w);

  std::size_t size() const noexcept { return w_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return w_(i, j); }
  /// Sets w_ij = w_ji = value (value >= 0, i != j).
  void set(std::size_t i, std::size_t j, double value);
  const Matrix& matrix() const noexcept { return w_; }

  double degree(std::size_t i) const;
  /// Sub-graph induced by `vertices`, in the given order.
  WeightMatrix submatrix(std::span<const std::size_t> vertices) const;
  /// (perm W perm^T)_{kl} = w_{perm[k], perm[l]}.
  WeightMatrix permuted(std::span<const std::size_t> perm) const;
  WeightMatrix scaled(double factor) const;

 private:
  Matrix w_;
};

enum class LaplacianKind { unnormalized, normalized };

const char* to_string(LaplacianKind kind) noexcept;

/// Full spectrum of a Laplacian: eigenvalues ascending, eigenvectors one per row.
struct LapSpectrum {
  LaplacianKind kind = LaplacianKind::unnormalized;
  std::vector<double> eigenvalues;
  Matrix eigenvectors;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  std::span<const double> vector(std::size_t k) const noexcept { return eigenvectors.row(k); }
};

/// Plug-in mutual information (nats) of a 2x2 joint {p00, p01, p10, p11}.
/// Uses 0·ln(0/q) = 0 and clamps rounding noise at 0.
double pair_mutual_information(const std::array<double, 4>& joint);

/// Maximum-likelihood estimate of I(X_i; X_j) for all pairs. Each pair is
/// computed independently so the result does not depend on `threads`.
WeightMatrix empirical_pairwise_mi(const BitDataset& ds, std::size_t threads = 1);

/// Exact pairwise MI of an enumerated distribution (must sum to 1 within kEpsProb).
WeightMatrix exact_pairwise_mi(const ExplicitDistribution& dist);

/// L = D - W, or D^{-1/2} (D - W) D^{-1/2}. The normalized form throws
/// IsolatedVertexError when some degree is zero.
Matrix laplacian(const WeightMatrix& w, LaplacianKind kind = LaplacianKind::unnormalized);

/// Dense symmetric eigendecomposition (cyclic Jacobi). Throws ValidationError
/// if `l` is not symmetric to kEpsSym.
LapSpectrum eigendecompose(const Matrix& l, LaplacianKind kind = LaplacianKind::unnormalized);

LapSpectrum laplacian_spectrum(const WeightMatrix& w, LaplacianKind kind = LaplacianKind::unnormalized);

/// f^T L f.
double quadratic_form(const Matrix& l, std::span<const double> f);

/// Components of the graph with edges {w_ij > edge_threshold}; each component
/// sorted ascending, components ordered by their smallest vertex.
std::vector<std::vector<std::size_t>> connected_components(const WeightMatrix& w, double edge_threshold = 0.0);

/// Number of eigenvalues below `eps`.
std::size_t count_zero_eigenvalues(const LapSpectrum& spectrum, double eps = kEpsEig);

// CSV: n rows, comma separated, full matrix. Doubles are written with
// round-trip precision.
std::string matrix_to_csv(const Matrix& m);
Matrix matrix_from_csv(const std::string& text);
void save_matrix_csv(const Matrix& m, const std::filesystem::path& path);
Matrix load_matrix_csv(const std::filesystem::path& path);

// JSON: {"kind": ..., "eigenvalues": [...], "eigenvectors": [[...], ...]}, one row per eigenvector.
std::string spectrum_to_json(const LapSpectrum& s);
LapSpectrum spectrum_from_json(const std::string& text);

}  // namespace seriate
