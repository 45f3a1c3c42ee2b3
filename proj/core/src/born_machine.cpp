#include "seriate/born_machine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <random>

#include "detail.hpp"
#include "json.hpp"
#include "seriate/error.hpp"
#include "seriate/parallel.hpp"

namespace seriate {

using detail::Rng;
using detail::uniform01;

MpsModel::MpsModel(std::vector<std::size_t> bond_dims, std::vector<std::vector<double>> cores)
    : cores_(std::move(cores)) {
  const std::size_t n = cores_.size();
  if (n == 0) throw ValidationError("MPS needs at least one site");
  if (bond_dims.size() != n - 1) throw ValidationError("MPS needs n-1 internal bond dimensions");
  dims_.assign(n + 1, 1);
  for (std::size_t b = 0; b + 1 < n; ++b) {
    if (bond_dims[b] == 0) throw ValidationError("bond dimensions must be positive");
    dims_[b + 1] = bond_dims[b];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (cores_[i].size() != dims_[i] * 2 * dims_[i + 1])
      throw ValidationError("core " + std::to_string(i) + " does not match its bond dimensions");
}

std::vector<std::size_t> MpsModel::bond_dims() const { return {dims_.begin() + 1, dims_.end() - 1}; }

std::size_t MpsModel::parameter_count() const {
  std::size_t k = 0;
  for (const auto& c : cores_) k += c.size();
  return k;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ValidationError("learning rate must be positive");
  if (record_every == 0) throw ValidationError("record_every must be positive");
}

namespace {

void check_sample(const MpsModel& m, std::span<const std::uint8_t> x) {
  if (x.size() != m.n())
    throw ValidationError("sample length " + std::to_string(x.size()) + " differs from model size " + std::to_string(m.n()));
}

void rescale_all(MpsModel& m, double factor) {
  for (std::size_t i = 0; i < m.n(); ++i)
    for (double& v : m.core(i)) v *= factor;
}

/// Rescales every core by the same factor so that ||psi|| = 1.
void normalize_globally(MpsModel& m) {
  const double z = norm_squared(m);
  if (!(z > 0.0) || !std::isfinite(z)) throw ValidationError("MPS has zero or non-finite norm");
  rescale_all(m, std::pow(z, -0.5 / static_cast<double>(m.n())));
}

// Left transfer environments: env[i] is left_dim(i) x left_dim(i).
std::vector<std::vector<double>> left_environments(const MpsModel& m) {
  const std::size_t n = m.n();
  std::vector<std::vector<double>> env(n + 1);
  env[0] = {1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t dl = m.left_dim(i);
    const std::size_t dr = m.right_dim(i);
    const auto& e = env[i];
    std::vector<double> tmp(dl * dr);  // (E A_b)[l', r] for fixed b
    std::vector<double> next(dr * dr, 0.0);
    for (std::size_t b = 0; b < 2; ++b) {
      std::fill(tmp.begin(), tmp.end(), 0.0);
      for (std::size_t l = 0; l < dl; ++l)
        for (std::size_t lp = 0; lp < dl; ++lp) {
          const double elp = e[l * dl + lp];
          if (elp == 0.0) continue;
          for (std::size_t r = 0; r < dr; ++r) tmp[l * dr + r] += elp * m.at(i, lp, b, r);
        }
      // next[r, r'] += sum_l A[l,b,r] tmp[l,r']
      for (std::size_t l = 0; l < dl; ++l)
        for (std::size_t r = 0; r < dr; ++r) {
          const double a = m.at(i, l, b, r);
          for (std::size_t rp = 0; rp < dr; ++rp) next[r * dr + rp] += a * tmp[l * dr + rp];
        }
    }
    env[i + 1] = std::move(next);
  }
  return env;
}

// Right transfer environments: env[i] is right_dim(i) x right_dim(i).
std::vector<std::vector<double>> right_environments(const MpsModel& m) {
  const std::size_t n = m.n();
  std::vector<std::vector<double>> env(n);
  env[n - 1] = {1.0};
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t dl = m.left_dim(i);
    const std::size_t dr = m.right_dim(i);
    const auto& e = env[i];
    std::vector<double> tmp(dl * dr);  // (A_b E)[l, r']
    std::vector<double> next(dl * dl, 0.0);
    for (std::size_t b = 0; b < 2; ++b) {
      std::fill(tmp.begin(), tmp.end(), 0.0);
      for (std::size_t l = 0; l < dl; ++l)
        for (std::size_t r = 0; r < dr; ++r) {
          const double a = m.at(i, l, b, r);
          if (a == 0.0) continue;
          for (std::size_t rp = 0; rp < dr; ++rp) tmp[l * dr + rp] += a * e[r * dr + rp];
        }
      for (std::size_t l = 0; l < dl; ++l)
        for (std::size_t lp = 0; lp < dl; ++lp) {
          double s = 0.0;
          for (std::size_t rp = 0; rp < dr; ++rp) s += tmp[l * dr + rp] * m.at(i, lp, b, rp);
          next[l * dl + lp] += s;
        }
    }
    env[i - 1] = std::move(next);
  }
  return env;
}

// v <- v * A_site[x]
void apply_left(const MpsModel& m, std::size_t site, std::uint8_t x, std::span<const double> v, std::vector<double>& out) {
  const std::size_t dl = m.left_dim(site);
  const std::size_t dr = m.right_dim(site);
  out.assign(dr, 0.0);
  for (std::size_t l = 0; l < dl; ++l) {
    const double vl = v[l];
    if (vl == 0.0) continue;
    const double* row = m.core(site).data() + (l * 2 + x) * dr;
    for (std::size_t r = 0; r < dr; ++r) out[r] += vl * row[r];
  }
}

struct Patterns {
  std::vector<std::vector<std::uint8_t>> x;
  std::vector<double> weight;     // multiplicity / T
  std::vector<std::size_t> first;  // index of first occurrence in the dataset
};

Patterns distinct_patterns(const BitDataset& ds) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> h;  // pattern -> (count, first index)
  for (std::size_t t = 0; t < ds.size(); ++t) {
    auto [it, inserted] = h.try_emplace(ds.sample_string(t), 0, t);
    ++it->second.first;
  }
  Patterns p;
  const double inv_t = 1.0 / static_cast<double>(ds.size());
  for (const auto& [s, cf] : h) {
    std::vector<std::uint8_t> x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) x[i] = static_cast<std::uint8_t>(s[i] - '0');
    p.x.push_back(std::move(x));
    p.weight.push_back(static_cast<double>(cf.first) * inv_t);
    p.first.push_back(cf.second);
  }
  return p;
}

void check_dataset(const MpsModel& m, const BitDataset& ds) {
  if (ds.n() != m.n())
    throw ValidationError("dataset has " + std::to_string(ds.n()) + " variables, model has " + std::to_string(m.n()));
  if (ds.size() == 0) throw ValidationError("no samples");
}

/// sum_x w_x ln P(x), throwing SupportError on vanishing probabilities.
double mean_log_prob(const MpsModel& m, const Patterns& pats, double log_z) {
  double s = 0.0;
  for (std::size_t k = 0; k < pats.x.size(); ++k) {
    const double a = amplitude(m, pats.x[k]);
    const double lp = std::log(a * a) - log_z;
    if (!(lp > std::log(kProbFloor))) throw SupportError(pats.first[k], std::exp(lp));
    s += pats.weight[k] * lp;
  }
  return s;
}

}  // namespace

MpsModel init_random_mps(std::size_t n, std::size_t chi, std::uint64_t seed) {
  if (n == 0) throw DomainError("MPS needs n >= 1");
  if (chi == 0) throw DomainError("bond dimension must be >= 1");
  std::vector<std::size_t> bonds(n - 1);
  for (std::size_t b = 1; b < n; ++b) {
    // min(chi, 2^b, 2^(n-b)) without overflowing the shifts
    const std::size_t lb = b < 63 ? (std::size_t{1} << b) : chi;
    const std::size_t rb = (n - b) < 63 ? (std::size_t{1} << (n - b)) : chi;
    bonds[b - 1] = std::min({chi, lb, rb});
  }
  std::vector<std::vector<double>> cores(n);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t dl = i == 0 ? 1 : bonds[i - 1];
    const std::size_t dr = i + 1 == n ? 1 : bonds[i];
    cores[i].resize(dl * 2 * dr);
    for (double& v : cores[i]) v = gauss(rng);
  }
  MpsModel m(std::move(bonds), std::move(cores));
  normalize_globally(m);
  return m;
}

MpsModel init_trainable_mps(std::size_t n, std::size_t chi, std::uint64_t seed,
                            std::span<const BitDataset* const> datasets) {
  for (int attempt = 0; attempt < kMaxInitAttempts; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt));
    MpsModel m = init_random_mps(n, chi, s);
    try {
      for (const BitDataset* ds : datasets) (void)nll(m, *ds);
      return m;
    } catch (const SupportError&) {
      if (attempt + 1 == kMaxInitAttempts) throw;
    }
  }
  throw ValidationError("unreachable: initialization retries exhausted");
}

MpsModel ghz_mps(std::size_t n) {
  if (n == 0) throw DomainError("MPS needs n >= 1");
  const double h = std::sqrt(0.5);
  if (n == 1) return MpsModel({}, {{h, h}});
  std::vector<std::vector<double>> cores(n);
  const double amp = std::pow(0.5, 0.5 / static_cast<double>(n));  // product of n of these is 1/sqrt(2)
  // first core (1,2,2): A[0,x,r] = amp * delta(x,r)
  cores[0] = {amp, 0.0, 0.0, amp};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    cores[i].assign(2 * 2 * 2, 0.0);
    cores[i][(0 * 2 + 0) * 2 + 0] = amp;
    cores[i][(1 * 2 + 1) * 2 + 1] = amp;
  }
  // last core (2,2,1): A[l,x,0] = amp * delta(l,x)
  cores[n - 1] = {amp, 0.0, 0.0, amp};
  return MpsModel(std::vector<std::size_t>(n - 1, 2), std::move(cores));
}

MpsModel product_mps(std::span<const std::array<double, 2>> amplitudes) {
  std::vector<std::vector<double>> cores;
  for (const auto& a : amplitudes) cores.push_back({a[0], a[1]});
  if (cores.empty()) throw DomainError("MPS needs n >= 1");
  std::vector<std::size_t> bonds(cores.size() - 1, 1);
  return MpsModel(std::move(bonds), std::move(cores));
}

double amplitude(const MpsModel& m, std::span<const std::uint8_t> x) {
  check_sample(m, x);
  std::vector<double> v{1.0};
  std::vector<double> next;
  for (std::size_t i = 0; i < m.n(); ++i) {
    apply_left(m, i, x[i], v, next);
    v.swap(next);
  }
  return v[0];
}

double norm_squared(const MpsModel& m) { return left_environments(m).back()[0]; }

double prob(const MpsModel& m, std::span<const std::uint8_t> x) {
  const double a = amplitude(m, x);
  return a * a / norm_squared(m);
}

ExplicitDistribution exact_distribution(const MpsModel& m) {
  const std::size_t n = m.n();
  if (n > kMaxEnumeratedSites) throw CapacityError("exact enumeration supports n <= " + std::to_string(kMaxEnumeratedSites));
  ExplicitDistribution dist;
  dist.n = n;
  dist.probs.assign(std::size_t{1} << n, 0.0);
  const double z = norm_squared(m);

  // Depth-first over prefixes so each partial product is computed once.
  std::vector<std::vector<double>> stack(n + 1);
  stack[0] = {1.0};
  auto recurse = [&](auto& self, std::size_t site, std::size_t index) -> void {
    if (site == n) {
      dist.probs[index] = stack[n][0] * stack[n][0] / z;
      return;
    }
    for (std::uint8_t b = 0; b < 2; ++b) {
      apply_left(m, site, b, stack[site], stack[site + 1]);
      self(self, site + 1, (index << 1) | b);
    }
  };
  recurse(recurse, 0, 0);
  return dist;
}

BitDataset sample(const MpsModel& m, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ValidationError("no samples requested");
  const std::size_t n = m.n();
  const auto right = right_environments(m);
  Rng rng(seed);
  BitDatasetBuilder builder(n, samples);
  std::vector<std::uint8_t> x(n);
  std::vector<double> v;
  std::array<std::vector<double>, 2> u;

  for (std::size_t t = 0; t < samples; ++t) {
    v.assign(1, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t dr = m.right_dim(i);
      const auto& e = right[i];
      std::array<double, 2> q{};
      for (std::uint8_t b = 0; b < 2; ++b) {
        apply_left(m, i, b, v, u[b]);
        double s = 0.0;
        for (std::size_t r = 0; r < dr; ++r) {
          double er = 0.0;
          for (std::size_t rp = 0; rp < dr; ++rp) er += e[r * dr + rp] * u[b][rp];
          s += u[b][r] * er;
        }
        q[b] = std::max(s, 0.0);
      }
      const double total = q[0] + q[1];
      const std::uint8_t bit = uniform01(rng) * total < q[0] ? 0 : 1;
      x[i] = bit;
      const double scale = q[bit] > 0.0 ? 1.0 / std::sqrt(q[bit]) : 1.0;
      v.resize(dr);
      for (std::size_t r = 0; r < dr; ++r) v[r] = u[bit][r] * scale;
    }
    builder.push(x);
  }
  return std::move(builder).finish();
}

double nll(const MpsModel& m, const BitDataset& ds) {
  check_dataset(m, ds);
  const auto pats = distinct_patterns(ds);
  return -mean_log_prob(m, pats, std::log(norm_squared(m)));
}

double empirical_entropy(const BitDataset& ds) {
  const double t = static_cast<double>(ds.size());
  double h = 0.0;
  for (const auto& [s, c] : ds.histogram()) {
    const double p = static_cast<double>(c) / t;
    h -= p * std::log(p);
  }
  return h;
}

double kl_empirical(const MpsModel& m, const BitDataset& ds) {
  check_dataset(m, ds);
  const auto pats = distinct_patterns(ds);
  const double log_z = std::log(norm_squared(m));
  double kl = 0.0;
  for (std::size_t k = 0; k < pats.x.size(); ++k) {
    const double a = amplitude(m, pats.x[k]);
    const double lp = std::log(a * a) - log_z;
    if (!(lp > std::log(kProbFloor))) throw SupportError(pats.first[k], std::exp(lp));
    kl += pats.weight[k] * (std::log(pats.weight[k]) - lp);
  }
  return kl;
}

namespace {

LossAndGradient loss_and_gradient(const MpsModel& m, const Patterns& pats) {
  const std::size_t n = m.n();
  LossAndGradient out;
  out.gradient.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.gradient[i].assign(m.core(i).size(), 0.0);

  const auto left_env = left_environments(m);
  const auto right_env = right_environments(m);
  const double z = left_env[n][0];
  if (!(z > 0.0) || !std::isfinite(z)) {
    out.nll = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  // Normalization term: dZ/dA_i[l,b,r] = 2 (EL_i A_i[b] ER_i)[l,r]; contributes dZ / Z.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t dl = m.left_dim(i);
    const std::size_t dr = m.right_dim(i);
    const auto& el = left_env[i];
    const auto& er = right_env[i];
    std::vector<double> tmp(dl * dr);
    for (std::size_t b = 0; b < 2; ++b) {
      std::fill(tmp.begin(), tmp.end(), 0.0);
      for (std::size_t l = 0; l < dl; ++l)
        for (std::size_t lp = 0; lp < dl; ++lp) {
          const double e = el[l * dl + lp];
          if (e == 0.0) continue;
          for (std::size_t r = 0; r < dr; ++r) tmp[l * dr + r] += e * m.at(i, lp, b, r);
        }
      for (std::size_t l = 0; l < dl; ++l)
        for (std::size_t r = 0; r < dr; ++r) {
          double s = 0.0;
          for (std::size_t rp = 0; rp < dr; ++rp) s += tmp[l * dr + rp] * er[r * dr + rp];
          out.gradient[i][(l * 2 + b) * dr + r] = 2.0 * s / z;
        }
    }
  }

  // Data term: -(2/T) sum_t dpsi_t/dA / psi_t with dpsi/dA_i[l,x_i,r] = left_l * right_r.
  std::vector<std::vector<double>> lv(n + 1);
  std::vector<std::vector<double>> rv(n + 1);
  double mean_log_p = 0.0;
  const double log_z = std::log(z);
  for (std::size_t k = 0; k < pats.x.size(); ++k) {
    const auto& x = pats.x[k];
    lv[0] = {1.0};
    for (std::size_t i = 0; i < n; ++i) apply_left(m, i, x[i], lv[i], lv[i + 1]);
    const double psi = lv[n][0];
    const double lp = std::log(psi * psi) - log_z;
    if (!(lp > std::log(kProbFloor))) throw SupportError(pats.first[k], std::exp(lp));
    mean_log_p += pats.weight[k] * lp;

    // rv[i] = A_{i+1}[x] ... A_{n-1}[x] as a column of size right_dim(i).
    rv[n - 1] = {1.0};
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t dl = m.left_dim(i);
      const std::size_t dr = m.right_dim(i);
      rv[i - 1].assign(dl, 0.0);
      for (std::size_t l = 0; l < dl; ++l) {
        const double* row = m.core(i).data() + (l * 2 + x[i]) * dr;
        double s = 0.0;
        for (std::size_t r = 0; r < dr; ++r) s += row[r] * rv[i][r];
        rv[i - 1][l] = s;
      }
    }
    const double coef = -2.0 * pats.weight[k] / psi;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t dl = m.left_dim(i);
      const std::size_t dr = m.right_dim(i);
      auto& g = out.gradient[i];
      for (std::size_t l = 0; l < dl; ++l) {
        const double cl = coef * lv[i][l];
        double* grow = g.data() + (l * 2 + x[i]) * dr;
        for (std::size_t r = 0; r < dr; ++r) grow[r] += cl * rv[i][r];
      }
    }
  }
  out.nll = -mean_log_p;
  return out;
}

}  // namespace

LossAndGradient nll_gradient(const MpsModel& m, const BitDataset& ds) {
  check_dataset(m, ds);
  return loss_and_gradient(m, distinct_patterns(ds));
}

TrainResult train(MpsModel m, const BitDataset& ds, const TrainConfig& cfg) {
  cfg.validate();
  check_dataset(m, ds);
  TrainResult result;
  const auto pats = distinct_patterns(ds);
  const double entropy = empirical_entropy(ds);

  auto record = [&](std::size_t epoch, double loss) { result.trace.push_back({epoch, loss - entropy, loss}); };

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto lg = loss_and_gradient(m, pats);
    if (!std::isfinite(lg.nll)) throw DivergenceError(epoch);
    if (epoch % cfg.record_every == 0) record(epoch, lg.nll);
    for (std::size_t i = 0; i < m.n(); ++i) {
      auto core = m.core(i);
      for (std::size_t k = 0; k < core.size(); ++k) core[k] -= cfg.learning_rate * lg.gradient[i][k];
    }
  }
  const double final_loss = -mean_log_prob(m, pats, std::log(norm_squared(m)));
  if (!std::isfinite(final_loss)) throw DivergenceError(cfg.epochs);
  if (result.trace.empty() || result.trace.back().epoch != cfg.epochs) record(cfg.epochs, final_loss);
  result.model = std::move(m);
  return result;
}

std::uint64_t model_hash(const MpsModel& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(m.n());
  for (std::size_t d : m.bond_dims()) feed(d);
  for (const auto& core : m.cores())
    for (double v : core) feed(std::bit_cast<std::uint64_t>(v));
  return h;
}

namespace {

constexpr char kBase64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    const std::uint32_t b0 = bytes[i];
    const std::uint32_t b1 = i + 1 < bytes.size() ? bytes[i + 1] : 0;
    const std::uint32_t b2 = i + 2 < bytes.size() ? bytes[i + 2] : 0;
    const std::uint32_t triple = (b0 << 16) | (b1 << 8) | b2;
    out.push_back(kBase64[(triple >> 18) & 63]);
    out.push_back(kBase64[(triple >> 12) & 63]);
    out.push_back(i + 1 < bytes.size() ? kBase64[(triple >> 6) & 63] : '=');
    out.push_back(i + 2 < bytes.size() ? kBase64[triple & 63] : '=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (text.size() % 4 != 0) throw ParseError(0, "base64 block length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + static_cast<std::size_t>(k)];
      if (c == '=') {
        v[k] = 0;
        ++pad;
      } else {
        v[k] = value(c);
        if (v[k] < 0 || pad > 0) throw ParseError(0, "invalid base64 character");
      }
    }
    const std::uint32_t triple = (static_cast<std::uint32_t>(v[0]) << 18) | (static_cast<std::uint32_t>(v[1]) << 12) |
                                 (static_cast<std::uint32_t>(v[2]) << 6) | static_cast<std::uint32_t>(v[3]);
    out.push_back(static_cast<std::uint8_t>(triple >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(triple >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(triple));
  }
  return out;
}

}  // namespace

std::string model_to_json(const MpsModel& m) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(m.parameter_count() * 8);
  for (const auto& core : m.cores())
    for (double v : core) {
      const auto bits = std::bit_cast<std::uint64_t>(v);
      for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
    }
  nlohmann::json j;
  j["n"] = m.n();
  j["bond_dims"] = m.bond_dims();
  j["encoding"] = "base64-f64le";
  j["data"] = base64_encode(bytes);
  return j.dump() + "\n";
}

MpsModel model_from_json(const std::string& text) {
  std::size_t n = 0;
  std::vector<std::size_t> bonds;
  std::vector<std::uint8_t> bytes;
  try {
    const auto j = nlohmann::json::parse(text);
    n = j.at("n").get<std::size_t>();
    bonds = j.at("bond_dims").get<std::vector<std::size_t>>();
    if (j.value("encoding", std::string("base64-f64le")) != "base64-f64le") throw ParseError(0, "unsupported core encoding");
    bytes = base64_decode(j.at("data").get<std::string>());
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(0, std::string("invalid model JSON: ") + ex.what());
  }
  if (n == 0 || bonds.size() != n - 1) throw ParseError(0, "bond_dims must list n-1 entries");
  std::vector<std::size_t> dims(n + 1, 1);
  for (std::size_t b = 0; b + 1 < n; ++b) dims[b + 1] = bonds[b];
  std::size_t offset = 0;
  std::vector<std::vector<double>> cores(n);
  for (std::size_t i = 0; i < n; ++i) {
    cores[i].resize(dims[i] * 2 * dims[i + 1]);
    for (double& v : cores[i]) {
      if (offset + 8 > bytes.size()) throw ParseError(0, "core data block is too short");
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[offset + static_cast<std::size_t>(b)]) << (8 * b);
      v = std::bit_cast<double>(bits);
      offset += 8;
    }
  }
  if (offset != bytes.size()) throw ParseError(0, "core data block has trailing bytes");
  return MpsModel(std::move(bonds), std::move(cores));
}

void save_model(const MpsModel& m, const std::filesystem::path& path) { detail::write_file(path, model_to_json(m)); }

MpsModel load_model(const std::filesystem::path& path) { return model_from_json(detail::read_file(path)); }

}  // namespace seriate
