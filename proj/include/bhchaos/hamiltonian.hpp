#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bhchaos/basis.hpp"

namespace bhchaos {

/// Tunneling J and on-site interaction U, both in the same energy unit.
struct CouplingParameters {
  double J = 1.0;
  double U = 1.0;

  double gamma() const { return J / U; }
  double eta(int particles) const { return J / (U * particles); }

  static CouplingParameters from_gamma(double gamma, double U = 1.0) { return {gamma * U, U}; }
};

/// Compressed sparse rows holding both triangles of a real symmetric matrix.
struct CsrMatrix {
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int32_t> col;
  std::vector<double> val;

  std::size_t rows() const { return row_ptr.empty() ? 0 : row_ptr.size() - 1; }
  std::size_t nonzeros() const { return val.size(); }
};

/// H = -J h_tun + U h_int in a sector basis. The dimensionless parts are shared
/// between copies so a parameter sweep assembles them once.
class SparseHamiltonian {
 public:
  SparseHamiltonian(std::shared_ptr<const SectorBasis> basis,
                    std::shared_ptr<const CsrMatrix> tunneling,
                    std::shared_ptr<const std::vector<double>> interaction,
                    CouplingParameters params);

  const SectorBasis& basis() const { return *basis_; }
  std::shared_ptr<const SectorBasis> basis_handle() const { return basis_; }
  const CouplingParameters& params() const { return params_; }
  std::size_t dimension() const { return interaction_->size(); }

  const CsrMatrix& tunneling() const { return *tunneling_; }
  const std::vector<double>& interaction() const { return *interaction_; }

  /// Same structure, different couplings.
  SparseHamiltonian with_couplings(CouplingParameters params) const;

  /// y = H x
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

  /// y = scale * (H x) + shift * x, without temporaries.
  void apply_affine(const std::complex<double>* x, std::complex<double>* y, double scale,
                    double shift) const;
  void apply_affine(const double* x, double* y, double scale, double shift) const;

  Eigen::MatrixXd to_dense() const;

 private:
  template <class Scalar>
  void affine_kernel(const Scalar* x, Scalar* y, double scale, double shift) const;

  std::shared_ptr<const SectorBasis> basis_;
  std::shared_ptr<const CsrMatrix> tunneling_;
  std::shared_ptr<const std::vector<double>> interaction_;
  CouplingParameters params_;
};

/// Builds h_tun and h_int directly in the given sector (hard-wall chain).
SparseHamiltonian assemble(std::shared_ptr<const SectorBasis> basis, CouplingParameters params);

/// Interaction energy sum_j n_j (n_j - 1) / 2 in units of U.
std::int64_t interaction_count(std::span<const std::uint8_t> occupations);
std::int64_t interaction_count(const FockState& state);

}  // namespace bhchaos
