// seriate-tn: command-line front end for the seriation / MPS toolkit.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seriate/born_machine.hpp"
#include "seriate/dataset.hpp"
#include "seriate/error.hpp"
#include "seriate/harness.hpp"
#include "seriate/mi_graph.hpp"
#include "seriate/parallel.hpp"
#include "seriate/seriation.hpp"

namespace {

using namespace seriate;

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitCapacity = 4;
constexpr int kExitIo = 5;
constexpr int kExitDivergence = 6;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::capacity: return kExitCapacity;
    case ErrorKind::io: return kExitIo;
    case ErrorKind::divergence: return kExitDivergence;
    default: return kExitValidation;
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string join_values(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v[i]);
    s += (i ? " " : "") + std::string(buf);
  }
  return s;
}

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  std::optional<std::size_t> threads;

  std::size_t thread_count() const { return resolve_threads(threads); }
};

void add_common(CLI::App* cmd, Common& c, bool out_required, const std::vector<std::string>& formats) {
  cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  auto* out = cmd->add_option("--out,--output,-o", c.out, "Output file ('-' for stdout)");
  if (out_required) out->required();
  if (!formats.empty()) {
    c.format = formats.front();
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
  }
  cmd->add_option("--threads", c.threads, "Worker threads (" + std::string(kThreadsEnvVar) + " overrides)")
      ->check(CLI::PositiveNumber);
}

void add_dataset_flags(CLI::App* cmd, DatasetSpec& spec, std::string& kind, bool allow_file) {
  std::vector<std::string> kinds{"bas", "ising", "mps", "markov"};
  if (allow_file) kinds.push_back("file");
  cmd->add_option("--dataset", kind, "Dataset family")->check(CLI::IsMember(kinds))->required();
  cmd->add_option("--rows", spec.rows, "BAS rows")->capture_default_str();
  cmd->add_option("--cols", spec.cols, "BAS columns")->capture_default_str();
  cmd->add_option("--n", spec.n, "Number of sites")->capture_default_str();
  cmd->add_option("--samples,-T", spec.samples, "Number of samples")->capture_default_str();
  cmd->add_option("--beta", spec.beta, "Ising inverse temperature (default 0.6/max|J|)");
  cmd->add_option("--tree", spec.tree_path, "Ising tree JSON to use instead of generating one");
  cmd->add_option("--chi-data", spec.chi_data, "Bond dimension of the data-generating MPS")->capture_default_str();
  cmd->add_option("--p,--flip-prob", spec.flip_prob, "Markov flip probability")->capture_default_str();
  if (allow_file) cmd->add_option("--input,-i", spec.path, "Dataset file (with --dataset file)");
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("list", "'" + item + "' is not a positive integer");
    }
  }
  if (out.empty()) throw CLI::ValidationError("list", "empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral seriation of qubit orderings for MPS Born machines"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "seriate-tn 0.1.0");

  // gen
  Common gen_c;
  DatasetSpec gen_spec;
  std::string gen_kind;
  std::string gen_tree_out;
  auto* gen = app.add_subcommand("gen", "Generate a bitstring dataset");
  add_common(gen, gen_c, true, {});
  add_dataset_flags(gen, gen_spec, gen_kind, false);
  gen->add_option("--tree-out", gen_tree_out, "Also write the Ising tree as JSON");

  // mi
  Common mi_c;
  std::string mi_input, mi_spectrum_out, mi_kind = "unnormalized";
  auto* mi = app.add_subcommand("mi", "Pairwise mutual information graph of a dataset");
  add_common(mi, mi_c, true, {"csv", "json"});
  mi->add_option("--input,-i", mi_input, "Dataset file")->required();
  mi->add_option("--spectrum-out", mi_spectrum_out, "Also write the Laplacian spectrum as JSON");
  mi->add_option("--laplacian", mi_kind, "Laplacian for --spectrum-out")
      ->check(CLI::IsMember({"unnormalized", "normalized"}))
      ->capture_default_str();

  // seriate
  Common ser_c;
  std::string ser_input, ser_weights, ser_apply;
  bool ser_brute = false;
  auto* ser = app.add_subcommand("seriate", "Order sites by the Fiedler vector of the MI graph");
  add_common(ser, ser_c, true, {"json"});
  auto* ser_in = ser->add_option("--input,-i", ser_input, "Dataset file");
  auto* ser_w = ser->add_option("--weights", ser_weights, "Weight matrix CSV instead of a dataset");
  ser_in->excludes(ser_w);
  ser->add_flag("--brute-force", ser_brute, "Exhaustive minimum-cost ordering (n <= 10)");
  ser->add_option("--apply", ser_apply, "Write the dataset with sites reordered")->needs(ser_in);

  // embed
  Common emb_c;
  std::string emb_input, emb_kind = "unnormalized";
  std::size_t emb_dims = 2;
  auto* emb = app.add_subcommand("embed", "Spectral embedding of the sites");
  add_common(emb, emb_c, true, {"csv"});
  emb->add_option("--input,-i", emb_input, "Dataset file")->required();
  emb->add_option("--dims,-m", emb_dims, "Embedding dimension")->capture_default_str();
  emb->add_option("--laplacian", emb_kind, "Laplacian kind")
      ->check(CLI::IsMember({"unnormalized", "normalized"}))
      ->capture_default_str();

  // train
  Common tr_c;
  std::string tr_input, tr_trace;
  std::size_t tr_chi = 8;
  TrainConfig tr_cfg;
  auto* tr = app.add_subcommand("train", "Train an MPS Born machine by gradient descent");
  add_common(tr, tr_c, true, {"json"});
  tr->add_option("--input,-i", tr_input, "Dataset file")->required();
  tr->add_option("--chi", tr_chi, "Maximum bond dimension")->capture_default_str();
  tr->add_option("--lr", tr_cfg.learning_rate, "Learning rate")->capture_default_str();
  tr->add_option("--epochs", tr_cfg.epochs, "Epochs")->capture_default_str();
  tr->add_option("--record-every", tr_cfg.record_every, "Trace interval")->capture_default_str();
  tr->add_option("--trace", tr_trace, "Write the KL/NLL trace as CSV");

  // experiment
  Common ex_c;
  ExperimentConfig ex_cfg;
  std::string ex_kind;
  bool ex_no_traces = false;
  auto* ex = app.add_subcommand("experiment", "Seriated vs shuffled training comparison");
  add_common(ex, ex_c, true, {"json"});
  add_dataset_flags(ex, ex_cfg.dataset, ex_kind, true);
  ex->add_option("--chi", ex_cfg.chi, "Maximum bond dimension")->capture_default_str();
  ex->add_option("--shuffles", ex_cfg.num_shuffles, "Number of random shuffles")->capture_default_str();
  ex->add_option("--lr", ex_cfg.train.learning_rate, "Learning rate")->capture_default_str();
  ex->add_option("--epochs", ex_cfg.train.epochs, "Epochs")->capture_default_str();
  ex->add_option("--record-every", ex_cfg.train.record_every, "Trace interval")->capture_default_str();
  ex->add_option("--margin", ex_cfg.margin, "Relative win margin")->capture_default_str();
  ex->add_flag("--no-traces", ex_no_traces, "Omit KL traces from the report");

  // stability
  Common st_c;
  StabilityConfig st_cfg;
  std::string st_kind, st_counts = "100,300,1000,3000,100000";
  bool st_no_exact = false;
  auto* st = app.add_subcommand("stability", "Normalized-Laplacian spectrum vs sample count");
  add_common(st, st_c, true, {"csv", "json"});
  add_dataset_flags(st, st_cfg.dataset, st_kind, false);
  st->add_option("--counts", st_counts, "Ascending comma-separated sample counts")->capture_default_str();
  st->add_option("--seeds", st_cfg.seeds, "Seeds per count")->capture_default_str();
  st->add_flag("--no-exact", st_no_exact, "Skip the exact-MI row");

  // connectivity
  Common co_c;
  ConnectivityConfig co_cfg;
  std::string co_chis = "1,2,4,8,16";
  auto* co = app.add_subcommand("connectivity", "Algebraic connectivity vs bond dimension of random MPS");
  add_common(co, co_c, true, {"csv", "json"});
  co->add_option("--n", co_cfg.n, "Number of sites")->capture_default_str();
  co->add_option("--chis", co_chis, "Comma-separated bond dimensions")->capture_default_str();
  co->add_option("--samples,-T", co_cfg.samples, "Samples per model")->capture_default_str();
  co->add_option("--seeds", co_cfg.seeds, "Seeds per bond dimension")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      gen_spec.kind = dataset_kind_from_string(gen_kind);
      const auto ds = make_dataset(gen_spec, gen_c.seed);
      write_text(gen_c.out, format_dataset(ds));
      if (!gen_tree_out.empty()) {
        if (gen_spec.kind != DatasetKind::ising_tree) throw ValidationError("--tree-out needs --dataset ising");
        save_ising_tree(dataset_ising_tree(gen_spec, gen_c.seed), gen_tree_out);
      }
      std::cerr << "gen: " << ds.size() << " samples of " << ds.n() << " bits -> " << gen_c.out << "\n";
    } else if (*mi) {
      const auto ds = load_dataset(mi_input);
      const auto w = empirical_pairwise_mi(ds, mi_c.thread_count());
      if (mi_c.format == "csv") {
        write_text(mi_c.out, matrix_to_csv(w.matrix()));
      } else {
        nlohmann::json j;
        j["n"] = w.size();
        auto rows = nlohmann::json::array();
        for (std::size_t i = 0; i < w.size(); ++i) {
          auto r = nlohmann::json::array();
          for (std::size_t k = 0; k < w.size(); ++k) r.push_back(w(i, k));
          rows.push_back(std::move(r));
        }
        j["mi"] = std::move(rows);
        write_text(mi_c.out, j.dump() + "\n");
      }
      const auto kind = mi_kind == "normalized" ? LaplacianKind::normalized : LaplacianKind::unnormalized;
      if (!mi_spectrum_out.empty()) write_text(mi_spectrum_out, spectrum_to_json(laplacian_spectrum(w, kind)));
      double max_mi = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t k = 0; k < w.size(); ++k) max_mi = std::max(max_mi, w(i, k));
      std::cerr << "mi: " << w.size() << " sites, max MI " << max_mi << " nats -> " << mi_c.out << "\n";
    } else if (*ser) {
      if (ser_input.empty() && ser_weights.empty()) throw CLI::RequiredError("--input or --weights");
      std::optional<BitDataset> ds;
      WeightMatrix w;
      if (!ser_input.empty()) {
        ds = load_dataset(ser_input);
        w = empirical_pairwise_mi(*ds, ser_c.thread_count());
      } else {
        w = WeightMatrix(load_matrix_csv(ser_weights));
      }
      const Ordering o = ser_brute ? brute_force_order(w, ser_c.thread_count()) : seriate_with_components(w);
      write_text(ser_c.out, ordering_to_json(o));
      if (!ser_apply.empty()) save_dataset(permute_dataset(*ds, o.perm), ser_apply);
      std::cerr << "seriate: " << (ser_brute ? "brute-force" : "fiedler") << " order over " << o.perm.size()
                << " sites, cost " << o.cost << (o.stable ? "" : " (unstable)")
                << (o.components > 1 ? ", " + std::to_string(o.components) + " components" : "") << " -> "
                << ser_c.out << "\n";
    } else if (*emb) {
      const auto ds = load_dataset(emb_input);
      const auto kind = emb_kind == "normalized" ? LaplacianKind::normalized : LaplacianKind::unnormalized;
      const auto spec = laplacian_spectrum(empirical_pairwise_mi(ds, emb_c.thread_count()), kind);
      const auto e = spectral_embedding(spec, emb_dims);
      write_text(emb_c.out, embedding_to_csv(e));
      std::cerr << "embed: " << e.coords.rows() << " sites in " << e.coords.cols() << " dimensions -> " << emb_c.out
                << "\n";
    } else if (*tr) {
      const auto ds = load_dataset(tr_input);
      tr_cfg.seed = tr_c.seed;
      const BitDataset* sets[] = {&ds};
      const auto init = init_trainable_mps(ds.n(), tr_chi, tr_c.seed, sets);
      const auto res = train(init, ds, tr_cfg);
      save_model(res.model, tr_c.out);
      if (!tr_trace.empty()) {
        std::string csv = "epoch,kl,nll\n";
        char buf[96];
        for (const auto& p : res.trace) {
          std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", p.epoch, p.kl, p.nll);
          csv += buf;
        }
        write_text(tr_trace, csv);
      }
      std::cerr << "train: " << tr_cfg.epochs << " epochs, KL " << res.trace.front().kl << " -> "
                << res.trace.back().kl << " -> " << tr_c.out << "\n";
    } else if (*ex) {
      ex_cfg.dataset.kind = dataset_kind_from_string(ex_kind);
      ex_cfg.master_seed = ex_c.seed;
      ex_cfg.threads = ex_c.thread_count();
      const auto report = run_seriation_experiment(ex_cfg);
      write_text(ex_c.out, report_to_json(report, !ex_no_traces));
      const auto& s = report.summary;
      std::cerr << "experiment: " << s.completed << " trials (" << s.failed << " failed), median KL shuffled "
                << s.median_kl_random << " vs seriated " << s.median_kl_seriated << ", win fraction "
                << s.win_fraction << " -> " << ex_c.out << "\n";
    } else if (*st) {
      st_cfg.dataset.kind = dataset_kind_from_string(st_kind);
      st_cfg.counts = parse_counts(st_counts);
      st_cfg.master_seed = st_c.seed;
      st_cfg.include_exact = !st_no_exact;
      st_cfg.threads = st_c.thread_count();
      const auto table = stability_sweep(st_cfg);
      write_text(st_c.out, st_c.format == "csv" ? stability_to_csv(table) : stability_to_json(table));
      std::vector<double> gaps;
      for (const auto& r : table.rows) gaps.push_back(r.median_gap);
      std::cerr << "stability: " << table.rows.size() << " rows, median gaps " << join_values(gaps) << " -> "
                << st_c.out << "\n";
    } else if (*co) {
      co_cfg.chis = parse_counts(co_chis);
      co_cfg.master_seed = co_c.seed;
      co_cfg.threads = co_c.thread_count();
      const auto table = connectivity_sweep(co_cfg);
      write_text(co_c.out, co_c.format == "csv" ? connectivity_to_csv(table) : connectivity_to_json(table));
      std::vector<double> l1;
      for (const auto& r : table.rows) l1.push_back(r.median_lambda1);
      std::cerr << "connectivity: median lambda1 " << join_values(l1) << " -> " << co_c.out << "\n";
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
