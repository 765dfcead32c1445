#include "bhchaos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "bhchaos/error.hpp"

namespace bhchaos {

namespace {

void check_dense_cap(std::size_t dim, std::size_t cap) {
  if (dim > cap) {
    throw CapacityError("sector dimension " + std::to_string(dim) +
                        " exceeds the dense diagonalization cap " + std::to_string(cap) +
                        "; use spectrum_edges and Chebyshev propagation for this size");
  }
}

// Symmetric eigen-decomposition, in place; ascending eigenvalues.
Eigen::VectorXd dense_eigen(Eigen::MatrixXd& matrix, bool vectors) {
  if (matrix.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      matrix, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  Eigen::VectorXd w = solver.eigenvalues();
  if (vectors) {
    matrix = solver.eigenvectors();
  } else {
    matrix.resize(0, 0);
  }
  return w;
}

template <class Vector>
double entropy_d1(const Vector& v, std::size_t basis_size) {
  if (basis_size < 2) throw std::invalid_argument("D1 needs a basis of at least two states");
  const double norm2 = v.squaredNorm();
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10) {
    throw std::invalid_argument("D1 input vector is not normalized (norm = " +
                                std::to_string(std::sqrt(norm2)) + ")");
  }
  double entropy = 0.0;
  for (Eigen::Index a = 0; a < v.size(); ++a) {
    const double p = std::norm(v[a]);
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::clamp(entropy / std::log(static_cast<double>(basis_size)), 0.0, 1.0);
}

}  // namespace

SpectralData diagonalize(const SparseHamiltonian& hamiltonian, DiagonalizeOptions options) {
  const std::size_t dim = hamiltonian.dimension();
  check_dense_cap(dim, options.dense_cap);
  if (dim == 0) throw ConfigError("cannot diagonalize an empty sector");
  SpectralData out;
  out.basis = hamiltonian.basis_handle();
  Eigen::MatrixXd matrix = hamiltonian.to_dense();
  out.eigenvalues = dense_eigen(matrix, options.eigenvectors);
  if (options.eigenvectors) out.eigenvectors = std::move(matrix);
  out.e_min = out.eigenvalues(0);
  out.e_max = out.eigenvalues(out.eigenvalues.size() - 1);
  return out;
}

SpectrumEdges spectrum_edges(const SparseHamiltonian& hamiltonian, EdgeOptions options) {
  const std::size_t dim = hamiltonian.dimension();
  SpectrumEdges edges;
  if (dim <= options.exact_cap) {
    Eigen::MatrixXd matrix = hamiltonian.to_dense();
    Eigen::VectorXd w = dense_eigen(matrix, false);
    edges.e_min = w(0);
    edges.e_max = w(w.size() - 1);
    edges.exact = true;
    return edges;
  }

  const auto n = static_cast<Eigen::Index>(dim);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd v(n), v_prev = Eigen::VectorXd::Zero(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(rng);
  v.normalize();

  std::vector<double> alpha, beta;
  double beta_prev = 0.0;
  for (int k = 0; k < options.max_iterations; ++k) {
    hamiltonian.apply_affine(v.data(), w.data(), 1.0, 0.0);
    w -= beta_prev * v_prev;
    const double a = v.dot(w);
    w -= a * v;
    alpha.push_back(a);
    const double b = w.norm();

    const int steps = k + 1;
    const bool check = steps % (steps < 200 ? 10 : 50) == 0 || steps == options.max_iterations ||
                       steps == static_cast<int>(dim);
    const double scale = std::max({std::abs(alpha.front()), std::abs(a), 1e-300});
    const bool breakdown = b <= 1e-12 * scale;
    if (check || breakdown) {
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), steps);
      Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), steps - 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const auto& theta = tri.eigenvalues();
      const auto& z = tri.eigenvectors();
      edges.e_min = theta(0);
      edges.e_max = theta(steps - 1);
      edges.residual_min = b * std::abs(z(steps - 1, 0));
      edges.residual_max = b * std::abs(z(steps - 1, steps - 1));
      edges.iterations = steps;
      const double tol =
          options.relative_tolerance * std::max(std::abs(edges.e_min), std::abs(edges.e_max));
      if (breakdown || (edges.residual_min <= tol && edges.residual_max <= tol)) return edges;
    }
    beta.push_back(b);
    v_prev.swap(v);
    v = w / b;
    beta_prev = b;
  }
  throw NumericalError("Lanczos edge solver did not converge after " +
                       std::to_string(edges.iterations) + " iterations (residuals " +
                       std::to_string(edges.residual_min) + ", " +
                       std::to_string(edges.residual_max) + ", edges " +
                       std::to_string(edges.e_min) + ", " + std::to_string(edges.e_max) + ")");
}

double fractal_dimension_d1(const Eigen::Ref<const Eigen::VectorXd>& v, std::size_t basis_size) {
  return entropy_d1(v, basis_size);
}

double fractal_dimension_d1(const Eigen::Ref<const Eigen::VectorXcd>& v, std::size_t basis_size) {
  return entropy_d1(v, basis_size);
}

std::vector<double> fractal_dimensions(const SpectralData& spectrum) {
  if (spectrum.eigenvectors.cols() != spectrum.eigenvalues.size()) {
    throw ConfigError("spectral data holds no eigenvectors");
  }
  std::vector<double> d1(spectrum.size());
  const std::size_t dim = static_cast<std::size_t>(spectrum.eigenvectors.rows());
  for (std::size_t k = 0; k < d1.size(); ++k) {
    d1[k] = fractal_dimension_d1(spectrum.eigenvectors.col(static_cast<Eigen::Index>(k)), dim);
  }
  return d1;
}

double scaled_energy(double energy, const SpectralData& spectrum) {
  const double width = spectrum.e_max - spectrum.e_min;
  if (!(width > 0.0)) throw NumericalError("spectrum has zero width");
  return (energy - spectrum.e_min) / width;
}

std::vector<std::size_t> nearest_states(const Eigen::VectorXd& eigenvalues, double reference,
                                        std::size_t count) {
  const auto n = static_cast<std::size_t>(eigenvalues.size());
  if (count > n) {
    throw ConfigError("window of " + std::to_string(count) + " states exceeds the " +
                      std::to_string(n) + " available eigenstates");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(eigenvalues(a) - reference) < std::abs(eigenvalues(b) - reference);
  });
  order.resize(count);
  return order;
}

namespace {

Window summarize(std::size_t id, double center, const std::vector<double>& d1,
                 std::span<const std::size_t> members) {
  Window w;
  w.id = id;
  w.center = center;
  w.count = members.size();
  if (members.empty()) {
    w.mean_d1 = w.var_d1 = std::numeric_limits<double>::quiet_NaN();
    return w;
  }
  double sum = 0.0;
  for (auto k : members) sum += d1[k];
  w.mean_d1 = sum / members.size();
  double sq = 0.0;
  for (auto k : members) sq += (d1[k] - w.mean_d1) * (d1[k] - w.mean_d1);
  w.var_d1 = sq / members.size();
  return w;
}

// Number of eigenvalues strictly below the reference energy.
double reference_rank(const Eigen::VectorXd& e, double reference) {
  auto begin = e.data();
  return static_cast<double>(std::lower_bound(begin, begin + e.size(), reference) - begin);
}

}  // namespace

FractalStatistics windowed_statistics(const SpectralData& spectrum, const std::vector<double>& d1,
                                      const WindowScheme& scheme) {
  const std::size_t n = spectrum.size();
  if (d1.size() != n) throw ConfigError("D1 list does not match the spectrum");
  if (scheme.count == 0) throw ConfigError("window count must be positive");
  if (scheme.count > n) {
    throw ConfigError("window count " + std::to_string(scheme.count) + " exceeds the " +
                      std::to_string(n) + " available eigenstates");
  }
  FractalStatistics stats;
  stats.scheme = scheme;
  const auto& e = spectrum.eigenvalues;

  switch (scheme.kind) {
    case WindowKind::equal_eps_width: {
      std::vector<std::vector<std::size_t>> bins(scheme.count);
      for (std::size_t k = 0; k < n; ++k) {
        const double eps = scaled_energy(e(k), spectrum);
        auto bin = static_cast<std::size_t>(std::floor(eps * scheme.count));
        bins[std::min(bin, scheme.count - 1)].push_back(k);
      }
      for (std::size_t b = 0; b < scheme.count; ++b) {
        stats.windows.push_back(summarize(b, (b + 0.5) / scheme.count, d1, bins[b]));
      }
      break;
    }
    case WindowKind::equal_count_around: {
      auto members = nearest_states(e, scheme.reference_energy, scheme.count);
      const double mean_rank =
          std::accumulate(members.begin(), members.end(), 0.0) / members.size();
      const double center = 100.0 * (mean_rank + 0.5 - reference_rank(e, scheme.reference_energy)) / n;
      stats.windows.push_back(summarize(0, center, d1, members));
      break;
    }
    case WindowKind::spectrum_percentage: {
      const double ref = reference_rank(e, scheme.reference_energy);
      std::vector<std::size_t> members;
      for (std::size_t b = 0; b < scheme.count; ++b) {
        const std::size_t lo = b * n / scheme.count;
        const std::size_t hi = (b + 1) * n / scheme.count;
        members.resize(hi - lo);
        std::iota(members.begin(), members.end(), lo);
        const double center = 100.0 * (0.5 * (lo + hi) - ref) / n;
        stats.windows.push_back(summarize(b, center, d1, members));
      }
      break;
    }
  }
  return stats;
}

double goe_reference_d1(std::size_t dim, std::size_t samples, std::uint64_t seed) {
  if (dim < 2 || samples == 0) throw ConfigError("GOE reference needs dim >= 2 and samples > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
    v.normalize();
    total += fractal_dimension_d1(v, dim);
  }
  return total / samples;
}

double goe_reference_d1_analytic(std::size_t dim) {
  constexpr double euler_gamma = 0.57721566490153286061;
  return 1.0 - (2.0 - euler_gamma - std::log(2.0)) / std::log(static_cast<double>(dim));
}

}  // namespace bhchaos
