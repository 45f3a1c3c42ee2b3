#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seriate/born_machine.hpp"
#include "seriate/dataset.hpp"
#include "seriate/mi_graph.hpp"
#include "seriate/seriation.hpp"

namespace seriate {

enum class DatasetKind { bas, ising_tree, random_mps, markov, file };

const char* to_string(DatasetKind kind) noexcept;
DatasetKind dataset_kind_from_string(const std::string& name);

/// Describes how to obtain a dataset. Fields irrelevant to `kind` are ignored.
struct DatasetSpec {
  DatasetKind kind = DatasetKind::bas;
  std::size_t rows = 4;              // bas
  std::size_t cols = 3;              // bas
  std::size_t n = 12;                // ising_tree, random_mps, markov
  std::size_t samples = 1000;        // ising_tree, random_mps, markov
  std::optional<double> beta;        // ising_tree; default 0.6 / max|J|
  std::size_t chi_data = 4;          // random_mps
  double flip_prob = 0.1;            // markov
  std::filesystem::path path;        // file
  std::filesystem::path tree_path;   // ising_tree: load instead of generating

  /// Canonical JSON object describing this dataset.
  std::string descriptor_json() const;
};

/// Materializes a dataset; `seed` drives every random choice.
BitDataset make_dataset(const DatasetSpec& spec, std::uint64_t seed);

/// The exact law behind a generated dataset, when enumerable (not for bas/file).
std::optional<ExplicitDistribution> exact_dataset_distribution(const DatasetSpec& spec, std::uint64_t seed);

/// The Ising tree a DatasetSpec uses for `seed` (generated or loaded).
IsingTree dataset_ising_tree(const DatasetSpec& spec, std::uint64_t seed);

/// Fiedler seriation with the disconnected-graph policy: each connected
/// component is ordered by its own Fiedler vector (components of size <= 2
/// keep ascending index order), components are concatenated by decreasing
/// size (ties by smallest vertex). `components` > 1 marks that the policy ran.
Ordering seriate_with_components(const WeightMatrix& w);

/// Uniform random permutation (Fisher-Yates) driven by `seed`.
std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed);

double median(std::vector<double> values);

struct ExperimentConfig {
  DatasetSpec dataset;
  std::size_t chi = 8;
  TrainConfig train{0.01, 300, 0, 10};
  std::size_t num_shuffles = 50;
  std::uint64_t master_seed = 1;
  double margin = 0.01;
  std::size_t threads = 1;
};

struct TrialResult {
  std::size_t index = 0;
  std::uint64_t trial_seed = 0;
  std::uint64_t init_seed = 0;
  std::vector<std::size_t> shuffle;
  std::vector<std::size_t> seriation;
  std::size_t components = 1;
  std::uint64_t init_hash_random = 0;
  std::uint64_t init_hash_seriated = 0;
  double final_kl_random = 0.0;
  double final_kl_seriated = 0.0;
  std::vector<TracePoint> trace_random;
  std::vector<TracePoint> trace_seriated;
  bool failed = false;
  std::string error;
};

struct ExperimentSummary {
  double median_kl_random = 0.0;
  double median_kl_seriated = 0.0;
  double win_fraction = 0.0;
  double margin = 0.01;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::size_t component_policy_trials = 0;
};

struct ExperimentReport {
  std::string dataset_descriptor;  // JSON object
  std::size_t n = 0;
  std::size_t samples = 0;
  std::size_t chi = 0;
  TrainConfig train;
  std::uint64_t master_seed = 0;
  std::vector<TrialResult> trials;
  ExperimentSummary summary;
  std::vector<double> laplacian_eigenvalues;
};

/// Seriated-vs-shuffled comparison. Every trial shuffles the sites, trains one
/// model on the shuffled data and one on its Fiedler-seriated version from
/// the identical initial model, and records both final KL divergences.
ExperimentReport run_seriation_experiment(const ExperimentConfig& cfg);

/// Recomputes the summary from the recorded trials.
ExperimentSummary summarize(const std::vector<TrialResult>& trials, double margin);

std::string report_to_json(const ExperimentReport& report, bool include_traces = true);

/// Markov-chain spec used by the stability sweep by default.
inline DatasetSpec markov_spec(std::size_t n = 12, double flip_prob = 0.1) {
  DatasetSpec s;
  s.kind = DatasetKind::markov;
  s.n = n;
  s.flip_prob = flip_prob;
  return s;
}

struct StabilityConfig {
  DatasetSpec dataset = markov_spec();
  std::vector<std::size_t> counts{100, 300, 1000, 3000, 100000};
  std::size_t seeds = 10;
  std::uint64_t master_seed = 1;
  bool include_exact = true;
  std::size_t threads = 1;
};

struct SpectrumSample {
  std::uint64_t seed = 0;
  bool isolated = false;  // some vertex had zero degree; excluded from medians
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;
  std::vector<double> eigenvalues;
};

struct StabilityRow {
  std::size_t samples = 0;  // 0 marks the exact-MI row
  bool exact = false;
  double median_lambda1 = 0.0;
  double median_lambda2 = 0.0;
  double median_gap = 0.0;
  std::vector<SpectrumSample> per_seed;
};

struct StabilityTable {
  std::vector<StabilityRow> rows;
};

/// Normalized-Laplacian spectra of MI graphs estimated from increasing sample
/// counts. For each seed one dataset of max(counts) samples is drawn and its
/// prefixes are used for the smaller counts.
StabilityTable stability_sweep(const StabilityConfig& cfg);

std::string stability_to_csv(const StabilityTable& table);
std::string stability_to_json(const StabilityTable& table);

struct ConnectivityConfig {
  std::size_t n = 10;
  std::vector<std::size_t> chis{1, 2, 4, 8, 16};
  std::size_t samples = 1000;
  std::size_t seeds = 20;
  std::uint64_t master_seed = 1;
  std::size_t threads = 1;
};

struct ConnectivityRow {
  std::size_t chi = 0;
  double median_lambda1 = 0.0;
  std::vector<double> lambda1;     // per seed; 0 when the graph has an isolated vertex
  std::size_t isolated = 0;
};

struct ConnectivityTable {
  std::vector<ConnectivityRow> rows;
};

/// Algebraic connectivity of the normalized MI Laplacian of samples from
/// random MPS with increasing bond dimension.
ConnectivityTable connectivity_sweep(const ConnectivityConfig& cfg);

std::string connectivity_to_csv(const ConnectivityTable& table);
std::string connectivity_to_json(const ConnectivityTable& table);

}  // namespace seriate
