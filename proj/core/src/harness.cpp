#include "seriate/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "detail.hpp"
#include "json.hpp"
#include "seriate/error.hpp"
#include "seriate/parallel.hpp"

namespace seriate {

namespace {

// Seed streams. Every random choice is a pure function of the master seed.
constexpr std::uint64_t kStreamData = 0;
constexpr std::uint64_t kStreamTrials = 1;
constexpr std::uint64_t kStreamShuffle = 0;
constexpr std::uint64_t kStreamInit = 1;
constexpr std::uint64_t kStreamTree = 0;
constexpr std::uint64_t kStreamSamples = 1;

}  // namespace

const char* to_string(DatasetKind kind) noexcept {
  switch (kind) {
    case DatasetKind::bas: return "bas";
    case DatasetKind::ising_tree: return "ising";
    case DatasetKind::random_mps: return "mps";
    case DatasetKind::markov: return "markov";
    case DatasetKind::file: return "file";
  }
  return "unknown";
}

DatasetKind dataset_kind_from_string(const std::string& name) {
  if (name == "bas") return DatasetKind::bas;
  if (name == "ising" || name == "ising_tree") return DatasetKind::ising_tree;
  if (name == "mps" || name == "random_mps") return DatasetKind::random_mps;
  if (name == "markov") return DatasetKind::markov;
  if (name == "file") return DatasetKind::file;
  throw ValidationError("unknown dataset kind '" + name + "'");
}

std::string DatasetSpec::descriptor_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  switch (kind) {
    case DatasetKind::bas:
      j["rows"] = rows;
      j["cols"] = cols;
      break;
    case DatasetKind::ising_tree:
      j["n"] = n;
      j["samples"] = samples;
      if (beta) j["beta"] = *beta;
      if (!tree_path.empty()) j["tree"] = tree_path.string();
      break;
    case DatasetKind::random_mps:
      j["n"] = n;
      j["samples"] = samples;
      j["chi_data"] = chi_data;
      break;
    case DatasetKind::markov:
      j["n"] = n;
      j["samples"] = samples;
      j["flip_prob"] = flip_prob;
      break;
    case DatasetKind::file:
      j["path"] = path.string();
      break;
  }
  return j.dump();
}

IsingTree dataset_ising_tree(const DatasetSpec& spec, std::uint64_t seed) {
  if (!spec.tree_path.empty()) return load_ising_tree(spec.tree_path);
  return gen_ising_tree(spec.n, derive_seed(seed, kStreamTree));
}

namespace {

double ising_beta(const DatasetSpec& spec, const IsingTree& tree) {
  return spec.beta ? *spec.beta : default_beta(tree);
}

}  // namespace

BitDataset make_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case DatasetKind::bas:
      return gen_bas(spec.rows, spec.cols);
    case DatasetKind::ising_tree: {
      const auto tree = dataset_ising_tree(spec, seed);
      return sample_gibbs(tree, ising_beta(spec, tree), spec.samples, derive_seed(seed, kStreamSamples));
    }
    case DatasetKind::random_mps: {
      const auto model = init_random_mps(spec.n, spec.chi_data, derive_seed(seed, kStreamTree));
      return sample(model, spec.samples, derive_seed(seed, kStreamSamples));
    }
    case DatasetKind::markov:
      return gen_markov_chain(spec.n, spec.flip_prob, spec.samples, seed);
    case DatasetKind::file:
      return load_dataset(spec.path);
  }
  throw ValidationError("unknown dataset kind");
}

std::optional<ExplicitDistribution> exact_dataset_distribution(const DatasetSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case DatasetKind::ising_tree: {
      const auto tree = dataset_ising_tree(spec, seed);
      return gibbs_distribution(tree, ising_beta(spec, tree));
    }
    case DatasetKind::random_mps:
      return exact_distribution(init_random_mps(spec.n, spec.chi_data, derive_seed(seed, kStreamTree)));
    case DatasetKind::markov:
      return markov_chain_distribution(spec.n, spec.flip_prob);
    case DatasetKind::bas:
    case DatasetKind::file:
      return std::nullopt;
  }
  return std::nullopt;
}

Ordering seriate_with_components(const WeightMatrix& w) {
  auto comps = connected_components(w, 0.0);
  if (comps.size() <= 1) return fiedler_order(w);

  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  Ordering o;
  o.components = comps.size();
  o.stable = true;
  o.lambda1 = 0.0;
  o.gap = 0.0;
  for (const auto& comp : comps) {
    if (comp.size() <= 2) {
      o.perm.insert(o.perm.end(), comp.begin(), comp.end());
      continue;
    }
    const auto sub = fiedler_order(w.submatrix(comp));
    o.stable = o.stable && sub.stable;
    for (std::size_t k : sub.perm) o.perm.push_back(comp[k]);
  }
  o.cost = perm_cost(w, o.perm);
  return o;
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  detail::Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    auto j = static_cast<std::size_t>(detail::uniform01(rng) * static_cast<double>(i));
    if (j >= i) j = i - 1;
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

ExperimentSummary summarize(const std::vector<TrialResult>& trials, double margin) {
  ExperimentSummary s;
  s.margin = margin;
  std::vector<double> kr;
  std::vector<double> ks;
  std::size_t wins = 0;
  for (const auto& t : trials) {
    if (t.failed) {
      ++s.failed;
      continue;
    }
    ++s.completed;
    if (t.components > 1) ++s.component_policy_trials;
    kr.push_back(t.final_kl_random);
    ks.push_back(t.final_kl_seriated);
    if (t.final_kl_seriated < t.final_kl_random * (1.0 - margin)) ++wins;
  }
  s.median_kl_random = median(kr);
  s.median_kl_seriated = median(ks);
  s.win_fraction = s.completed ? static_cast<double>(wins) / static_cast<double>(s.completed) : 0.0;
  return s;
}

ExperimentReport run_seriation_experiment(const ExperimentConfig& cfg) {
  cfg.train.validate();
  if (cfg.num_shuffles == 0) throw ValidationError("experiment needs at least one shuffle");
  if (cfg.chi == 0) throw DomainError("bond dimension must be >= 1");

  const BitDataset base = make_dataset(cfg.dataset, derive_seed(cfg.master_seed, kStreamData));
  if (base.n() > kMaxEnumeratedSites)
    throw CapacityError("experiment supports n <= " + std::to_string(kMaxEnumeratedSites));
  const std::size_t n = base.n();

  ExperimentReport report;
  report.dataset_descriptor = cfg.dataset.descriptor_json();
  report.n = n;
  report.samples = base.size();
  report.chi = cfg.chi;
  report.train = cfg.train;
  report.master_seed = cfg.master_seed;
  // The spectrum is invariant under site permutations, so the unshuffled data
  // gives the same eigenvalues as every seriated copy.
  report.laplacian_eigenvalues = laplacian_spectrum(empirical_pairwise_mi(base)).eigenvalues;

  const std::uint64_t trials_root = derive_seed(cfg.master_seed, kStreamTrials);
  report.trials.resize(cfg.num_shuffles);
  parallel_for(cfg.num_shuffles, cfg.threads, [&](std::size_t t) {
    TrialResult& r = report.trials[t];
    r.index = t;
    r.trial_seed = derive_seed(trials_root, t);
    r.init_seed = derive_seed(r.trial_seed, kStreamInit);
    try {
      r.shuffle = random_permutation(n, derive_seed(r.trial_seed, kStreamShuffle));
      const BitDataset shuffled = permute_dataset(base, r.shuffle);

      const Ordering order = seriate_with_components(empirical_pairwise_mi(shuffled));
      r.seriation = order.perm;
      r.components = order.components;
      const BitDataset seriated = permute_dataset(shuffled, order.perm);

      TrainConfig tc = cfg.train;
      tc.seed = r.init_seed;
      const BitDataset* both[] = {&shuffled, &seriated};
      // Each arm draws its own initial model from the same seed; the hashes
      // in the report confirm they are identical.
      const MpsModel init_random = init_trainable_mps(n, cfg.chi, r.init_seed, both);
      const MpsModel init_seriated = init_trainable_mps(n, cfg.chi, r.init_seed, both);
      r.init_hash_random = model_hash(init_random);
      r.init_hash_seriated = model_hash(init_seriated);

      auto arm_random = train(init_random, shuffled, tc);
      auto arm_seriated = train(init_seriated, seriated, tc);
      r.final_kl_random = arm_random.trace.back().kl;
      r.final_kl_seriated = arm_seriated.trace.back().kl;
      r.trace_random = std::move(arm_random.trace);
      r.trace_seriated = std::move(arm_seriated.trace);
    } catch (const Error& e) {
      r.failed = true;
      r.error = "trial " + std::to_string(t) + ": " + e.what();
    }
  });
  report.summary = summarize(report.trials, cfg.margin);
  return report;
}

namespace {

nlohmann::json trace_json(const std::vector<TracePoint>& trace) {
  auto a = nlohmann::json::array();
  for (const auto& p : trace) a.push_back({p.epoch, p.kl});
  return a;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string report_to_json(const ExperimentReport& report, bool include_traces) {
  nlohmann::json j;
  j["dataset"] = nlohmann::json::parse(report.dataset_descriptor);
  j["n"] = report.n;
  j["samples"] = report.samples;
  j["chi"] = report.chi;
  j["train"] = {{"learning_rate", report.train.learning_rate},
                {"epochs", report.train.epochs},
                {"record_every", report.train.record_every}};
  j["master_seed"] = report.master_seed;
  j["laplacian_eigenvalues"] = report.laplacian_eigenvalues;
  j["summary"] = {{"median_kl_random", report.summary.median_kl_random},
                  {"median_kl_seriated", report.summary.median_kl_seriated},
                  {"win_fraction", report.summary.win_fraction},
                  {"margin", report.summary.margin},
                  {"completed", report.summary.completed},
                  {"failed", report.summary.failed},
                  {"component_policy_trials", report.summary.component_policy_trials}};
  auto trials = nlohmann::json::array();
  for (const auto& t : report.trials) {
    nlohmann::json tj;
    tj["index"] = t.index;
    tj["trial_seed"] = t.trial_seed;
    tj["init_seed"] = t.init_seed;
    tj["shuffle"] = t.shuffle;
    if (t.failed) {
      tj["failed"] = true;
      tj["error"] = t.error;
    } else {
      tj["seriation"] = t.seriation;
      tj["components"] = t.components;
      tj["init_hash_random"] = hex64(t.init_hash_random);
      tj["init_hash_seriated"] = hex64(t.init_hash_seriated);
      tj["final_kl_random"] = t.final_kl_random;
      tj["final_kl_seriated"] = t.final_kl_seriated;
      if (include_traces) {
        tj["kl_trace_random"] = trace_json(t.trace_random);
        tj["kl_trace_seriated"] = trace_json(t.trace_seriated);
      }
    }
    trials.push_back(std::move(tj));
  }
  j["trials"] = std::move(trials);
  return j.dump() + "\n";
}

// --- Sweeps ---------------------------------------------------------------

namespace {

SpectrumSample normalized_spectrum_sample(const WeightMatrix& w, std::uint64_t seed) {
  SpectrumSample s;
  s.seed = seed;
  try {
    const auto spec = laplacian_spectrum(w, LaplacianKind::normalized);
    s.eigenvalues = spec.eigenvalues;
    s.lambda1 = spec.size() > 1 ? spec.eigenvalues[1] : 0.0;
    s.lambda2 = spec.size() > 2 ? spec.eigenvalues[2] : s.lambda1;
    s.gap = s.lambda2 - s.lambda1;
  } catch (const IsolatedVertexError&) {
    s.isolated = true;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.lambda1 = s.lambda2 = s.gap = nan;
  }
  return s;
}

void fill_medians(StabilityRow& row) {
  std::vector<double> l1;
  std::vector<double> l2;
  std::vector<double> g;
  for (const auto& s : row.per_seed) {
    if (s.isolated) continue;
    l1.push_back(s.lambda1);
    l2.push_back(s.lambda2);
    g.push_back(s.gap);
  }
  row.median_lambda1 = median(l1);
  row.median_lambda2 = median(l2);
  row.median_gap = median(g);
}

}  // namespace

StabilityTable stability_sweep(const StabilityConfig& cfg) {
  if (cfg.counts.empty()) throw ValidationError("stability sweep needs at least one sample count");
  if (cfg.seeds == 0) throw ValidationError("stability sweep needs at least one seed");
  for (std::size_t k = 0; k < cfg.counts.size(); ++k) {
    if (cfg.counts[k] == 0) throw ValidationError("sample counts must be positive");
    if (k > 0 && cfg.counts[k] <= cfg.counts[k - 1]) throw ValidationError("sample counts must be strictly ascending");
  }
  const std::size_t max_count = cfg.counts.back();
  DatasetSpec spec = cfg.dataset;
  spec.samples = max_count;

  StabilityTable table;
  table.rows.resize(cfg.counts.size());
  for (std::size_t k = 0; k < cfg.counts.size(); ++k) {
    table.rows[k].samples = cfg.counts[k];
    table.rows[k].per_seed.resize(cfg.seeds);
  }

  parallel_for(cfg.seeds, cfg.threads, [&](std::size_t s) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, s);
    const BitDataset full = make_dataset(spec, seed);
    if (full.size() < max_count)
      throw ValidationError("dataset has " + std::to_string(full.size()) + " samples, sweep needs " + std::to_string(max_count));
    for (std::size_t k = 0; k < cfg.counts.size(); ++k)
      table.rows[k].per_seed[s] = normalized_spectrum_sample(empirical_pairwise_mi(full.prefix(cfg.counts[k])), seed);
  });
  for (auto& row : table.rows) fill_medians(row);

  if (cfg.include_exact) {
    // The exact law is seed-independent for Markov chains; for seeded
    // generators the first seed's law is used.
    if (auto dist = exact_dataset_distribution(spec, derive_seed(cfg.master_seed, 0))) {
      StabilityRow row;
      row.exact = true;
      row.per_seed.push_back(normalized_spectrum_sample(exact_pairwise_mi(*dist), 0));
      fill_medians(row);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::string stability_to_csv(const StabilityTable& table) {
  std::string out = "samples,lambda1,lambda2,gap,seeds_used\n";
  for (const auto& row : table.rows) {
    std::size_t used = 0;
    for (const auto& s : row.per_seed) used += s.isolated ? 0 : 1;
    out += (row.exact ? std::string("exact") : std::to_string(row.samples)) + "," +
           detail::format_double(row.median_lambda1) + "," + detail::format_double(row.median_lambda2) + "," +
           detail::format_double(row.median_gap) + "," + std::to_string(used) + "\n";
  }
  return out;
}

namespace {

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string stability_to_json(const StabilityTable& table) {
  auto rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r;
    r["samples"] = row.exact ? nlohmann::json("exact") : nlohmann::json(row.samples);
    r["median_lambda1"] = finite_or_null(row.median_lambda1);
    r["median_lambda2"] = finite_or_null(row.median_lambda2);
    r["median_gap"] = finite_or_null(row.median_gap);
    auto seeds = nlohmann::json::array();
    for (const auto& s : row.per_seed) {
      nlohmann::json sj;
      sj["seed"] = s.seed;
      sj["isolated"] = s.isolated;
      sj["lambda1"] = finite_or_null(s.lambda1);
      sj["lambda2"] = finite_or_null(s.lambda2);
      sj["gap"] = finite_or_null(s.gap);
      sj["eigenvalues"] = s.eigenvalues;
      seeds.push_back(std::move(sj));
    }
    r["per_seed"] = std::move(seeds);
    rows.push_back(std::move(r));
  }
  nlohmann::json j;
  j["rows"] = std::move(rows);
  return j.dump() + "\n";
}

ConnectivityTable connectivity_sweep(const ConnectivityConfig& cfg) {
  if (cfg.n < 2) throw DomainError("connectivity sweep needs n >= 2");
  if (cfg.n > kMaxEnumeratedSites) throw CapacityError("connectivity sweep supports n <= " + std::to_string(kMaxEnumeratedSites));
  if (cfg.chis.empty() || cfg.seeds == 0 || cfg.samples == 0)
    throw ValidationError("connectivity sweep needs bond dimensions, seeds and samples");

  ConnectivityTable table;
  table.rows.resize(cfg.chis.size());
  const std::size_t jobs = cfg.chis.size() * cfg.seeds;
  std::vector<double> values(jobs);
  std::vector<char> isolated(jobs, 0);
  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    const std::size_t c = job / cfg.seeds;
    const std::size_t s = job % cfg.seeds;
    const std::uint64_t seed = derive_seed(derive_seed(cfg.master_seed, cfg.chis[c]), s);
    const auto model = init_random_mps(cfg.n, cfg.chis[c], derive_seed(seed, kStreamTree));
    const auto ds = sample(model, cfg.samples, derive_seed(seed, kStreamSamples));
    try {
      values[job] = algebraic_connectivity(empirical_pairwise_mi(ds));
    } catch (const IsolatedVertexError&) {
      // A constant column disconnects its vertex: algebraic connectivity is 0.
      values[job] = 0.0;
      isolated[job] = 1;
    }
  });
  for (std::size_t c = 0; c < cfg.chis.size(); ++c) {
    auto& row = table.rows[c];
    row.chi = cfg.chis[c];
    for (std::size_t s = 0; s < cfg.seeds; ++s) {
      row.lambda1.push_back(values[c * cfg.seeds + s]);
      row.isolated += static_cast<std::size_t>(isolated[c * cfg.seeds + s]);
    }
    row.median_lambda1 = median(row.lambda1);
  }
  return table;
}

std::string connectivity_to_csv(const ConnectivityTable& table) {
  std::string out = "chi,median_lambda1,seeds,isolated\n";
  for (const auto& row : table.rows)
    out += std::to_string(row.chi) + "," + detail::format_double(row.median_lambda1) + "," +
           std::to_string(row.lambda1.size()) + "," + std::to_string(row.isolated) + "\n";
  return out;
}

std::string connectivity_to_json(const ConnectivityTable& table) {
  auto rows = nlohmann::json::array();
  for (const auto& row : table.rows)
    rows.push_back({{"chi", row.chi}, {"median_lambda1", row.median_lambda1}, {"lambda1", row.lambda1}, {"isolated", row.isolated}});
  nlohmann::json j;
  j["rows"] = std::move(rows);
  return j.dump() + "\n";
}

}  // namespace seriate
