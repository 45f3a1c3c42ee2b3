#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "seriate/dataset.hpp"

namespace seriate {

inline constexpr double kProbFloor = 1e-300;
inline constexpr double kEpsNorm = 1e-8;
inline constexpr int kMaxInitAttempts = 10;

/// Real-valued matrix product state over n binary sites. Core i has shape
/// (left_dim(i), 2, right_dim(i)) stored row-major (left, physical, right);
/// the outer bonds are 1.
class MpsModel {
 public:
  MpsModel() = default;
  /// `bond_dims` lists the n-1 internal bonds; cores must match the implied shapes.
  MpsModel(std::vector<std::size_t> bond_dims, std::vector<std::vector<double>> cores);

  std::size_t n() const noexcept { return cores_.size(); }
  /// Internal bond dimensions chi_1 .. chi_{n-1}.
  std::vector<std::size_t> bond_dims() const;
  std::size_t left_dim(std::size_t site) const noexcept { return dims_[site]; }
  std::size_t right_dim(std::size_t site) const noexcept { return dims_[site + 1]; }

  std::span<const double> core(std::size_t site) const noexcept { return cores_[site]; }
  std::span<double> core(std::size_t site) noexcept { return cores_[site]; }
  const std::vector<std::vector<double>>& cores() const noexcept { return cores_; }

  double at(std::size_t site, std::size_t l, std::size_t x, std::size_t r) const noexcept {
    return cores_[site][(l * 2 + x) * dims_[site + 1] + r];
  }
  double& at(std::size_t site, std::size_t l, std::size_t x, std::size_t r) noexcept {
    return cores_[site][(l * 2 + x) * dims_[site + 1] + r];
  }

  std::size_t parameter_count() const;

  friend bool operator==(const MpsModel&, const MpsModel&) = default;

 private:
  std::vector<std::size_t> dims_;  // n+1 entries, dims_[0] = dims_[n] = 1
  std::vector<std::vector<double>> cores_;
};

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t epochs = 300;
  std::uint64_t seed = 0;
  std::size_t record_every = 1;

  void validate() const;
};

struct TracePoint {
  std::size_t epoch = 0;
  double kl = 0.0;
  double nll = 0.0;
};

struct TrainResult {
  MpsModel model;
  std::vector<TracePoint> trace;
};

/// i.i.d. N(0,1) cores with bonds min(chi, 2^i, 2^(n-i)), then rescaled so
/// that ||psi||_2 = 1.
MpsModel init_random_mps(std::size_t n, std::size_t chi, std::uint64_t seed);

/// Random init that has strictly positive probability on every sample of
/// every given dataset; retries derived seeds up to kMaxInitAttempts times.
MpsModel init_trainable_mps(std::size_t n, std::size_t chi, std::uint64_t seed,
                            std::span<const BitDataset* const> datasets);

/// (|0...0> + |1...1>)/sqrt(2) with bond dimension 2 (n >= 2), or (|0>+|1>)/sqrt(2) for n = 1.
MpsModel ghz_mps(std::size_t n);

/// Product state with per-site amplitudes (a0, a1).
MpsModel product_mps(std::span<const std::array<double, 2>> amplitudes);

/// psi_x by a left-to-right matrix chain.
double amplitude(const MpsModel& m, std::span<const std::uint8_t> x);

/// ||psi||_2^2 by transfer-matrix contraction.
double norm_squared(const MpsModel& m);

/// |psi_x|^2 / ||psi||^2.
double prob(const MpsModel& m, std::span<const std::uint8_t> x);

/// All 2^n Born probabilities (n <= kMaxEnumeratedSites).
ExplicitDistribution exact_distribution(const MpsModel& m);

/// Exact sequential sampling from conditional marginals.
BitDataset sample(const MpsModel& m, std::size_t samples, std::uint64_t seed);

/// -1/T sum_t ln P(x_t). Throws SupportError for samples with P <= kProbFloor.
double nll(const MpsModel& m, const BitDataset& ds);

/// sum over distinct x of P_D(x) ln(P_D(x) / P(x)).
double kl_empirical(const MpsModel& m, const BitDataset& ds);

/// Shannon entropy (nats) of the empirical distribution of `ds`.
double empirical_entropy(const BitDataset& ds);

struct LossAndGradient {
  double nll = 0.0;
  std::vector<std::vector<double>> gradient;  // same layout as the cores
};

/// NLL and its exact gradient with respect to every core entry.
LossAndGradient nll_gradient(const MpsModel& m, const BitDataset& ds);

/// Full-batch gradient descent on the NLL of the normalized Born distribution.
/// Records KL at epoch 0, every `record_every` epochs, and at the end.
/// Throws DivergenceError on a non-finite loss.
TrainResult train(MpsModel m, const BitDataset& ds, const TrainConfig& cfg);

/// FNV-1a over bond dimensions and little-endian core bytes.
std::uint64_t model_hash(const MpsModel& m);

// {"n":..., "bond_dims":[...], "encoding":"base64-f64le", "data":"..."}
std::string model_to_json(const MpsModel& m);
MpsModel model_from_json(const std::string& text);
void save_model(const MpsModel& m, const std::filesystem::path& path);
MpsModel load_model(const std::filesystem::path& path);

}  // namespace seriate
