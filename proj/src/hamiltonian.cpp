#include "bhchaos/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "bhchaos/error.hpp"

namespace bhchaos {

std::int64_t interaction_count(std::span<const std::uint8_t> occupations) {
  std::int64_t total = 0;
  for (std::int64_t n : occupations) total += n * (n - 1);
  return total / 2;
}

std::int64_t interaction_count(const FockState& state) {
  std::int64_t total = 0;
  for (std::int64_t n : state.occupations()) total += n * (n - 1);
  return total / 2;
}

SparseHamiltonian::SparseHamiltonian(std::shared_ptr<const SectorBasis> basis,
                                     std::shared_ptr<const CsrMatrix> tunneling,
                                     std::shared_ptr<const std::vector<double>> interaction,
                                     CouplingParameters params)
    : basis_(std::move(basis)),
      tunneling_(std::move(tunneling)),
      interaction_(std::move(interaction)),
      params_(params) {
  if (!basis_ || !tunneling_ || !interaction_) throw ConfigError("incomplete Hamiltonian");
  if (tunneling_->rows() != interaction_->size() || interaction_->size() != basis_->size()) {
    throw ConfigError("Hamiltonian parts do not match the basis dimension");
  }
  if (!(params_.J >= 0.0) || !(params_.U >= 0.0) || !std::isfinite(params_.J) ||
      !std::isfinite(params_.U)) {
    throw ConfigError("couplings must be finite and non-negative");
  }
}

SparseHamiltonian SparseHamiltonian::with_couplings(CouplingParameters params) const {
  return SparseHamiltonian(basis_, tunneling_, interaction_, params);
}

template <class Scalar>
void SparseHamiltonian::affine_kernel(const Scalar* x, Scalar* y, double scale,
                                      double shift) const {
  const auto& t = *tunneling_;
  const auto& d = *interaction_;
  const double hop = -params_.J * scale;
  const double on_site = params_.U * scale;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    Scalar acc{};
    for (std::int64_t k = t.row_ptr[i]; k < t.row_ptr[i + 1]; ++k) acc += t.val[k] * x[t.col[k]];
    y[i] = hop * acc + (on_site * d[i] + shift) * x[i];
  }
}

void SparseHamiltonian::apply_affine(const std::complex<double>* x, std::complex<double>* y,
                                     double scale, double shift) const {
  affine_kernel(x, y, scale, shift);
}

void SparseHamiltonian::apply_affine(const double* x, double* y, double scale,
                                     double shift) const {
  affine_kernel(x, y, scale, shift);
}

Eigen::VectorXd SparseHamiltonian::apply(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dimension()) {
    throw std::invalid_argument("vector length does not match the Hamiltonian dimension");
  }
  Eigen::VectorXd y(x.size());
  affine_kernel(x.data(), y.data(), 1.0, 0.0);
  return y;
}

Eigen::VectorXcd SparseHamiltonian::apply(const Eigen::VectorXcd& x) const {
  if (static_cast<std::size_t>(x.size()) != dimension()) {
    throw std::invalid_argument("vector length does not match the Hamiltonian dimension");
  }
  Eigen::VectorXcd y(x.size());
  affine_kernel(x.data(), y.data(), 1.0, 0.0);
  return y;
}

Eigen::MatrixXd SparseHamiltonian::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  const auto& t = *tunneling_;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::int64_t k = t.row_ptr[i]; k < t.row_ptr[i + 1]; ++k) {
      h(i, t.col[k]) -= params_.J * t.val[k];
    }
    h(i, i) += params_.U * (*interaction_)[i];
  }
  return h;
}

SparseHamiltonian assemble(std::shared_ptr<const SectorBasis> basis, CouplingParameters params) {
  if (!basis) throw ConfigError("missing basis");
  const FockBasis& fock = basis->fock();
  const int L = fock.sites();
  const std::size_t dim = basis->size();

  auto tunneling = std::make_shared<CsrMatrix>();
  auto interaction = std::make_shared<std::vector<double>>(dim);
  tunneling->row_ptr.reserve(dim + 1);
  tunneling->row_ptr.push_back(0);

  std::vector<std::uint8_t> work(L);
  std::vector<std::pair<std::int32_t, double>> entries;
  // Column m of <m'|h|m> = factor_m * <m'|h|first(m)>, which is also row m.
  for (std::size_t m = 0; m < dim; ++m) {
    const SectorMember& member = basis->member(m);
    const double factor = member.paired() ? M_SQRT2 : 1.0;
    auto occ = fock.occupations(member.first);
    (*interaction)[m] = static_cast<double>(interaction_count(occ));

    entries.clear();
    std::copy(occ.begin(), occ.end(), work.begin());
    auto add_hop = [&](int from, int to) {
      const double amp = std::sqrt(static_cast<double>(work[from]) * (work[to] + 1));
      --work[from];
      ++work[to];
      const auto target = fock.find(work);
      SectorComponent comp;
      if (target >= 0 && basis->locate(static_cast<std::size_t>(target), comp)) {
        entries.emplace_back(static_cast<std::int32_t>(comp.member), factor * comp.amplitude * amp);
      }
      ++work[from];
      --work[to];
    };
    for (int j = 0; j + 1 < L; ++j) {
      if (work[j] > 0) add_hop(j, j + 1);
      if (work[j + 1] > 0) add_hop(j + 1, j);
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < entries.size();) {
      std::int32_t col = entries[k].first;
      double value = 0.0;
      for (; k < entries.size() && entries[k].first == col; ++k) value += entries[k].second;
      if (std::abs(value) > 1e-14) {
        tunneling->col.push_back(col);
        tunneling->val.push_back(value);
      }
    }
    tunneling->row_ptr.push_back(static_cast<std::int64_t>(tunneling->val.size()));
  }
  return SparseHamiltonian(std::move(basis), std::move(tunneling), std::move(interaction), params);
}

}  // namespace bhchaos
