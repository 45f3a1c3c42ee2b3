#include "seriate/seriation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "detail.hpp"
#include "json.hpp"
#include "seriate/error.hpp"
#include "seriate/parallel.hpp"

namespace seriate {

double perm_cost(const WeightMatrix& w, std::span<const std::size_t> perm) {
  validate_permutation(perm, w.size());
  // Each unordered pair appears twice in the full double sum.
  double cost = 0.0;
  for (std::size_t k = 0; k < perm.size(); ++k)
    for (std::size_t l = k + 1; l < perm.size(); ++l) {
      const double d = static_cast<double>(l - k);
      cost += d * d * w(perm[k], perm[l]);
    }
  return cost;
}

double relaxed_cost(const Matrix& l, std::span<const double> x) { return quadratic_form(l, x); }

void canonicalize(std::vector<std::size_t>& perm) {
  if (perm.size() >= 2 && perm.front() > perm.back()) std::reverse(perm.begin(), perm.end());
}

std::vector<double> position_vector(std::span<const std::size_t> perm) {
  const auto inv = inverse_permutation(perm);
  const double n = static_cast<double>(perm.size());
  std::vector<double> x(perm.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (static_cast<double>(inv[i]) + 1.0 - (n + 1.0) / 2.0) / (n / 2.0);
  const double norm = norm2(x);
  if (norm > 0.0)
    for (double& v : x) v /= norm;
  return x;
}

std::vector<std::vector<std::size_t>> kernel_components(const LapSpectrum& spectrum, double eps) {
  const std::size_t n = spectrum.size();
  const std::size_t k = std::max<std::size_t>(1, count_zero_eigenvalues(spectrum, eps));
  std::vector<std::vector<double>> rows(n, std::vector<double>(k));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) rows[i][c] = spectrum.eigenvectors(c, i);
    const double nr = norm2(rows[i]);
    if (nr > 0.0)
      for (double& v : rows[i]) v /= nr;
  }
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> representative;
  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (std::size_t g = 0; g < comps.size() && !placed; ++g) {
      if (std::abs(dot(rows[i], rows[representative[g]])) > 0.5) {
        comps[g].push_back(i);
        placed = true;
      }
    }
    if (!placed) {
      comps.push_back({i});
      representative.push_back(i);
    }
  }
  return comps;
}

Ordering fiedler_order(const LapSpectrum& spectrum, const WeightMatrix& w) {
  const std::size_t n = spectrum.size();
  if (w.size() != n) throw ValidationError("spectrum and weight matrix sizes differ");
  Ordering o;
  if (n == 1) {
    o.perm = {0};
    return o;
  }
  const double lambda1 = spectrum.eigenvalues[1];
  if (lambda1 <= kEpsEig) throw DisconnectedGraphError(kernel_components(spectrum));

  const auto fiedler = spectrum.vector(1);
  o.perm.resize(n);
  std::iota(o.perm.begin(), o.perm.end(), std::size_t{0});
  std::stable_sort(o.perm.begin(), o.perm.end(), [&](std::size_t a, std::size_t b) { return fiedler[a] < fiedler[b]; });
  canonicalize(o.perm);
  o.cost = perm_cost(w, o.perm);
  o.lambda1 = lambda1;
  o.gap = n > 2 ? spectrum.eigenvalues[2] - lambda1 : lambda1;
  o.stable = o.gap >= kEpsEig;
  return o;
}

Ordering fiedler_order(const WeightMatrix& w) { return fiedler_order(laplacian_spectrum(w), w); }

Ordering brute_force_order(const WeightMatrix& w, std::size_t threads) {
  const std::size_t n = w.size();
  if (n > kMaxBruteForceSites)
    throw CapacityError("exhaustive ordering supports n <= " + std::to_string(kMaxBruteForceSites));
  Ordering best;
  best.perm.resize(n);
  std::iota(best.perm.begin(), best.perm.end(), std::size_t{0});
  if (n <= 2) {
    best.cost = n == 2 ? w(0, 1) : 0.0;
    return best;
  }

  // Partition by the leading element; each partition is scanned in
  // lexicographic order so its first strict minimum is its lexicographic best.
  struct Partial {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> perm;
  };
  std::vector<Partial> partial(n);
  parallel_for(n, threads, [&](std::size_t first) {
    std::vector<std::size_t> rest;
    for (std::size_t v = 0; v < n; ++v)
      if (v != first) rest.push_back(v);
    std::vector<std::size_t> perm(n);
    perm[0] = first;
    Partial& out = partial[first];
    do {
      if (first > rest.back()) continue;  // non-canonical (reversal of another)
      std::copy(rest.begin(), rest.end(), perm.begin() + 1);
      double cost = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          const double d = static_cast<double>(l - k);
          cost += d * d * w(perm[k], perm[l]);
        }
      if (cost < out.cost) {
        out.cost = cost;
        out.perm = perm;
      }
    } while (std::next_permutation(rest.begin(), rest.end()));
  });

  const Partial* winner = nullptr;
  for (const auto& p : partial)
    if (!p.perm.empty() && (winner == nullptr || p.cost < winner->cost)) winner = &p;
  best.perm = winner->perm;
  best.cost = perm_cost(w, best.perm);
  return best;
}

bool is_robinson(const WeightMatrix& w, double eps) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    // Left of the diagonal: non-decreasing towards i.
    for (std::size_t j = 0; j + 1 < i; ++j)
      if (w(i, j) > w(i, j + 1) + eps) return false;
    // Right of the diagonal: non-increasing away from i.
    for (std::size_t j = i + 1; j + 1 < n; ++j)
      if (w(i, j) + eps < w(i, j + 1)) return false;
  }
  return true;
}

Embedding spectral_embedding(const LapSpectrum& spectrum, std::size_t m) {
  const std::size_t n = spectrum.size();
  if (m == 0 || m + 1 > n) throw ValidationError("embedding dimension must satisfy 1 <= m <= n-1");
  if (spectrum.eigenvalues[1] <= kEpsEig) throw DisconnectedGraphError(kernel_components(spectrum));
  Embedding e{Matrix(n, m)};
  for (std::size_t c = 0; c < m; ++c) {
    const auto v = spectrum.vector(c + 1);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    const double sign = v[arg] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) e.coords(i, c) = sign * v[i];
  }
  return e;
}

double spectral_gap(const LapSpectrum& spectrum, std::size_t k) {
  if (k == 0 || k >= spectrum.size())
    throw ValidationError("spectral gap index must satisfy 1 <= k <= n-1 (got " + std::to_string(k) + ")");
  return spectrum.eigenvalues[k] - spectrum.eigenvalues[k - 1];
}

bool stability_margin(const LapSpectrum& spectrum, std::size_t k, double delta_frobenius) {
  return delta_frobenius <= spectral_gap(spectrum, k) / std::sqrt(2.0);
}

double algebraic_connectivity(const WeightMatrix& w) {
  if (w.size() < 2) throw ValidationError("algebraic connectivity needs n >= 2");
  return laplacian_spectrum(w, LaplacianKind::normalized).eigenvalues[1];
}

std::string ordering_to_json(const Ordering& o) {
  nlohmann::json j;
  j["perm"] = o.perm;
  j["cost"] = o.cost;
  j["stable"] = o.stable;
  j["lambda1"] = o.lambda1;
  j["gap"] = o.gap;
  if (o.components != 1) j["components"] = o.components;
  return j.dump() + "\n";
}

Ordering ordering_from_json(const std::string& text) {
  Ordering o;
  try {
    const auto j = nlohmann::json::parse(text);
    o.perm = j.at("perm").get<std::vector<std::size_t>>();
    o.cost = j.value("cost", 0.0);
    o.stable = j.value("stable", true);
    o.lambda1 = j.value("lambda1", 0.0);
    o.gap = j.value("gap", 0.0);
    o.components = j.value("components", std::size_t{1});
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(0, std::string("invalid ordering JSON: ") + ex.what());
  }
  validate_permutation(o.perm, o.perm.size());
  return o;
}

void save_ordering(const Ordering& o, const std::filesystem::path& path) { detail::write_file(path, ordering_to_json(o)); }

Ordering load_ordering(const std::filesystem::path& path) { return ordering_from_json(detail::read_file(path)); }

std::string embedding_to_csv(const Embedding& e) {
  std::string out = "site_index";
  for (std::size_t c = 0; c < e.dims(); ++c) out += ",coord_" + std::to_string(c + 1);
  out += '\n';
  for (std::size_t i = 0; i < e.coords.rows(); ++i) {
    out += std::to_string(i);
    for (std::size_t c = 0; c < e.dims(); ++c) out += "," + detail::format_double(e.coords(i, c));
    out += '\n';
  }
  return out;
}

}  // namespace seriate
