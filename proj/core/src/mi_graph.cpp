#include "seriate/mi_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "json.hpp"
#include "seriate/error.hpp"
#include "seriate/parallel.hpp"
#include "seriate/symmetric_eigen.hpp"

namespace seriate {

WeightMatrix::WeightMatrix(const Matrix& w) : w_(w.rows(), w.cols()) {
  if (!w.square()) throw ValidationError("weight matrix must be square");
  const std::size_t n = w.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (w(i, i) != 0.0) throw ValidationError("weight matrix diagonal must be zero (row " + std::to_string(i) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(w(i, j))) throw ValidationError("weight matrix has a non-finite entry");
      if (w(i, j) < 0.0) throw ValidationError("weight matrix entries must be nonnegative");
      if (std::abs(w(i, j) - w(j, i)) > kEpsSym)
        throw ValidationError("weight matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w_(i, j) = w_(j, i) = 0.5 * (w(i, j) + w(j, i));
}

void WeightMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i == j) throw ValidationError("weight matrix diagonal must stay zero");
  if (!(value >= 0.0) || !std::isfinite(value)) throw ValidationError("weights must be finite and nonnegative");
  w_(i, j) = w_(j, i) = value;
}

double WeightMatrix::degree(std::size_t i) const {
  double d = 0.0;
  for (double v : w_.row(i)) d += v;
  return d;
}

WeightMatrix WeightMatrix::submatrix(std::span<const std::size_t> vertices) const {
  WeightMatrix out(vertices.size());
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = 0; b < vertices.size(); ++b) out.w_(a, b) = w_(vertices[a], vertices[b]);
  return out;
}

WeightMatrix WeightMatrix::permuted(std::span<const std::size_t> perm) const {
  validate_permutation(perm, size());
  return submatrix(perm);
}

WeightMatrix WeightMatrix::scaled(double factor) const {
  if (!(factor >= 0.0)) throw ValidationError("scale factor must be nonnegative");
  WeightMatrix out = *this;
  for (double& v : out.w_.data()) v *= factor;
  return out;
}

const char* to_string(LaplacianKind kind) noexcept {
  return kind == LaplacianKind::normalized ? "normalized" : "unnormalized";
}

double pair_mutual_information(const std::array<double, 4>& joint) {
  const double pa[2] = {joint[0] + joint[1], joint[2] + joint[3]};
  const double pb[2] = {joint[0] + joint[2], joint[1] + joint[3]};
  double mi = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double p = joint[static_cast<std::size_t>(2 * a + b)];
      if (p > 0.0) mi += p * std::log(p / (pa[a] * pb[b]));
    }
  return std::max(mi, 0.0);
}

namespace {

using Column = std::vector<std::uint64_t>;

std::vector<Column> pack_columns(const BitDataset& ds) {
  const std::size_t words = (ds.size() + 63) / 64;
  std::vector<Column> cols(ds.n(), Column(words, 0));
  for (std::size_t t = 0; t < ds.size(); ++t)
    for (std::size_t i = 0; i < ds.n(); ++i)
      if (ds.bit(t, i)) cols[i][t / 64] |= std::uint64_t{1} << (t % 64);
  return cols;
}

std::size_t popcount(const Column& c) {
  std::size_t k = 0;
  for (auto w : c) k += static_cast<std::size_t>(std::popcount(w));
  return k;
}

std::size_t popcount_and(const Column& a, const Column& b) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) k += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return k;
}

}  // namespace

WeightMatrix empirical_pairwise_mi(const BitDataset& ds, std::size_t threads) {
  const std::size_t n = ds.n();
  const std::size_t total = ds.size();
  if (total == 0) throw ValidationError("no samples");
  const auto cols = pack_columns(ds);
  std::vector<std::size_t> ones(n);
  for (std::size_t i = 0; i < n; ++i) ones[i] = popcount(cols[i]);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::vector<double> values(pairs.size());
  const double inv_t = 1.0 / static_cast<double>(total);
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const std::size_t n11 = popcount_and(cols[i], cols[j]);
    const std::size_t n10 = ones[i] - n11;
    const std::size_t n01 = ones[j] - n11;
    const std::size_t n00 = total - n11 - n10 - n01;
    values[k] = pair_mutual_information({static_cast<double>(n00) * inv_t, static_cast<double>(n01) * inv_t,
                                         static_cast<double>(n10) * inv_t, static_cast<double>(n11) * inv_t});
  });

  WeightMatrix w(n);
  for (std::size_t k = 0; k < pairs.size(); ++k) w.set(pairs[k].first, pairs[k].second, values[k]);
  return w;
}

WeightMatrix exact_pairwise_mi(const ExplicitDistribution& dist) {
  const std::size_t n = dist.n;
  if (n == 0) throw ValidationError("distribution over zero variables");
  if (n > kMaxEnumeratedSites) throw CapacityError("exact MI supports n <= " + std::to_string(kMaxEnumeratedSites));
  if (dist.probs.size() != (std::size_t{1} << n)) throw ValidationError("distribution must list 2^n probabilities");
  double total = 0.0;
  for (double p : dist.probs) {
    if (!(p >= 0.0)) throw ValidationError("distribution has a negative or NaN probability");
    total += p;
  }
  if (std::abs(total - 1.0) > kEpsProb) throw ValidationError("distribution is not normalized (sum = " + detail::format_double(total) + ")");

  // Accumulate all 2x2 pair marginals in one pass.
  std::vector<std::array<double, 4>> joints(n * n, {0.0, 0.0, 0.0, 0.0});
  for (std::size_t s = 0; s < dist.probs.size(); ++s) {
    const double p = dist.probs[s];
    if (p == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t bi = dist.bit(s, i);
      for (std::size_t j = i + 1; j < n; ++j) joints[i * n + j][2 * bi + dist.bit(s, j)] += p;
    }
  }
  WeightMatrix w(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w.set(i, j, pair_mutual_information(joints[i * n + j]));
  return w;
}

Matrix laplacian(const WeightMatrix& w, LaplacianKind kind) {
  const std::size_t n = w.size();
  Matrix l(n, n);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = w.degree(i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) l(i, j) = (i == j ? d[i] : 0.0) - w(i, j);
  if (kind == LaplacianKind::unnormalized) return l;

  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d[i] > 0.0)) throw IsolatedVertexError(i);
    inv_sqrt[i] = 1.0 / std::sqrt(d[i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) l(i, j) *= inv_sqrt[i] * inv_sqrt[j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) l(j, i) = l(i, j);
  return l;
}

LapSpectrum eigendecompose(const Matrix& l, LaplacianKind kind) {
  if (!l.square()) throw ValidationError("eigendecompose needs a square matrix");
  if (max_abs_asymmetry(l) > kEpsSym) throw ValidationError("eigendecompose needs a symmetric matrix");
  auto eig = jacobi_eigen(l);
  return LapSpectrum{kind, std::move(eig.values), std::move(eig.vectors)};
}

LapSpectrum laplacian_spectrum(const WeightMatrix& w, LaplacianKind kind) {
  return eigendecompose(laplacian(w, kind), kind);
}

double quadratic_form(const Matrix& l, std::span<const double> f) {
  if (!l.square() || l.rows() != f.size()) throw ValidationError("quadratic form: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * dot(l.row(i), f);
  return s;
}

std::vector<std::vector<std::size_t>> connected_components(const WeightMatrix& w, double edge_threshold) {
  const std::size_t n = w.size();
  std::vector<std::vector<std::size_t>> comps;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (std::size_t u = 0; u < n; ++u)
        if (!seen[u] && w(v, u) > edge_threshold) {
          seen[u] = true;
          stack.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

std::size_t count_zero_eigenvalues(const LapSpectrum& spectrum, double eps) {
  return static_cast<std::size_t>(
      std::count_if(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(), [eps](double v) { return v < eps; }));
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      out += detail::format_double(m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

Matrix matrix_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(line_no, "invalid number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError(line_no, "inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(0, "empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path) { detail::write_file(path, matrix_to_csv(m)); }

Matrix load_matrix_csv(const std::filesystem::path& path) { return matrix_from_csv(detail::read_file(path)); }

std::string spectrum_to_json(const LapSpectrum& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind);
  j["eigenvalues"] = s.eigenvalues;
  j["eigenvectors"] = nlohmann::json::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    auto v = s.vector(k);
    j["eigenvectors"].push_back(std::vector<double>(v.begin(), v.end()));
  }
  return j.dump() + "\n";
}

LapSpectrum spectrum_from_json(const std::string& text) {
  LapSpectrum s;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "normalized") {
      s.kind = LaplacianKind::normalized;
    } else if (kind == "unnormalized") {
      s.kind = LaplacianKind::unnormalized;
    } else {
      throw ParseError(0, "unknown Laplacian kind '" + kind + "'");
    }
    s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    const auto vecs = j.at("eigenvectors").get<std::vector<std::vector<double>>>();
    const std::size_t n = s.eigenvalues.size();
    if (vecs.size() != n) throw ParseError(0, "eigenvector count differs from eigenvalue count");
    s.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      if (vecs[k].size() != n) throw ParseError(0, "eigenvector has wrong length");
      for (std::size_t i = 0; i < n; ++i) s.eigenvectors(k, i) = vecs[k][i];
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(0, std::string("invalid spectrum JSON: ") + ex.what());
  }
  return s;
}

}  // namespace seriate
