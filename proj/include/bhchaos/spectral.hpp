#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bhchaos/hamiltonian.hpp"

namespace bhchaos {

inline constexpr std::size_t kDefaultDenseCap = 50'000;

/// Full eigen-decomposition of a sector Hamiltonian. Eigenvalues ascending,
/// eigenvectors stored as orthonormal columns in the sector basis.
struct SpectralData {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  double e_min = 0.0;
  double e_max = 0.0;
  std::shared_ptr<const SectorBasis> basis;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

struct DiagonalizeOptions {
  std::size_t dense_cap = kDefaultDenseCap;
  bool eigenvectors = true;
};

SpectralData diagonalize(const SparseHamiltonian& hamiltonian, DiagonalizeOptions options = {});

struct SpectrumEdges {
  double e_min = 0.0;
  double e_max = 0.0;
  bool exact = false;       // from dense diagonalization
  int iterations = 0;       // Lanczos steps
  double residual_min = 0;  // Ritz residual bounds |E - theta|
  double residual_max = 0;
};

struct EdgeOptions {
  std::size_t exact_cap = 2'000;  // dense eigenvalues at or below this size
  double relative_tolerance = 1e-8;
  int max_iterations = 5'000;
  std::uint64_t seed = 12345;
};

/// Extremal eigenvalues: dense for small sectors, Lanczos otherwise.
SpectrumEdges spectrum_edges(const SparseHamiltonian& hamiltonian, EdgeOptions options = {});

/// Normalized Shannon entropy of |v_a|^2 over a basis of size `basis_size`.
/// Throws std::invalid_argument unless ||v|| = 1 within 1e-10.
double fractal_dimension_d1(const Eigen::Ref<const Eigen::VectorXd>& v, std::size_t basis_size);
double fractal_dimension_d1(const Eigen::Ref<const Eigen::VectorXcd>& v, std::size_t basis_size);

/// D1 of every eigenvector, using the sector dimension in the prefactor.
std::vector<double> fractal_dimensions(const SpectralData& spectrum);

/// (E - E_min) / (E_max - E_min); throws NumericalError for a zero-width spectrum.
double scaled_energy(double energy, const SpectralData& spectrum);

enum class WindowKind { equal_eps_width, equal_count_around, spectrum_percentage };

struct WindowScheme {
  WindowKind kind = WindowKind::equal_eps_width;
  std::size_t count = 100;
  double reference_energy = 0.0;

  /// `windows` intervals of equal width in scaled energy.
  static WindowScheme equal_eps_width(std::size_t windows) {
    return {WindowKind::equal_eps_width, windows, 0.0};
  }
  /// The `states` eigenstates closest in energy to `reference`.
  static WindowScheme equal_count_around(double reference, std::size_t states) {
    return {WindowKind::equal_count_around, states, reference};
  }
  /// `windows` equal-population sets over the sorted spectrum, located by
  /// their spectrum percentage relative to the rank of `reference`.
  static WindowScheme spectrum_percentage(double reference, std::size_t windows) {
    return {WindowKind::spectrum_percentage, windows, reference};
  }
};

struct Window {
  std::size_t id = 0;
  double center = 0.0;  // scaled energy, or spectrum percentage from the reference
  std::size_t count = 0;
  double mean_d1 = 0.0;
  double var_d1 = 0.0;
};

struct FractalStatistics {
  WindowScheme scheme;
  std::vector<Window> windows;
};

FractalStatistics windowed_statistics(const SpectralData& spectrum, const std::vector<double>& d1,
                                      const WindowScheme& scheme);

/// Indices of the `count` eigenvalues closest to `reference`, ordered by
/// distance with ties broken by the lower index.
std::vector<std::size_t> nearest_states(const Eigen::VectorXd& eigenvalues, double reference,
                                        std::size_t count);

/// Mean D1 of `samples` Gaussian random real unit vectors of length `dim`.
double goe_reference_d1(std::size_t dim, std::size_t samples = 10'000, std::uint64_t seed = 2024);

/// Large-dimension Porter-Thomas value 1 - (2 - gamma_E - ln 2) / ln D.
double goe_reference_d1_analytic(std::size_t dim);

}  // namespace bhchaos
