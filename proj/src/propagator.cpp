#include "bhchaos/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>

#include "bhchaos/bessel.hpp"
#include "bhchaos/error.hpp"

namespace bhchaos {

double time_energy_unit(const CouplingParameters& params) {
  if (params.J > 0.0) return params.J;
  if (params.U > 0.0) return params.U;
  return 1.0;
}

ChebyshevScaling chebyshev_scaling(const SpectrumEdges& edges, double energy_unit, double padding) {
  if (!(padding >= 1.0)) throw ConfigError("spectral padding must be >= 1");
  if (!(energy_unit > 0.0)) throw ConfigError("energy unit must be positive");
  ChebyshevScaling s;
  s.energy_unit = energy_unit;
  s.b = (edges.e_max + edges.e_min) / (2.0 * energy_unit);
  const double half = (edges.e_max - edges.e_min) / (2.0 * energy_unit);
  // A degenerate spectrum still needs a finite, positive half-width.
  s.a = std::max(padding * half, 1e-8 * std::max(1.0, std::abs(s.b)));
  return s;
}

std::vector<std::complex<double>> chebyshev_coefficients(double a_dt, double cutoff) {
  if (!(a_dt >= 0.0)) throw std::invalid_argument("a*dt must be non-negative");
  const auto bessel = bessel_jn_until(a_dt, cutoff);
  std::vector<std::complex<double>> c(bessel.size());
  const std::complex<double> minus_i(0.0, -1.0);
  std::complex<double> phase = 1.0;
  for (std::size_t n = 0; n < bessel.size(); ++n) {
    c[n] = phase * bessel[n];
    phase *= minus_i;
  }
  return c;
}

ChebyshevPropagator::ChebyshevPropagator(SparseHamiltonian hamiltonian, PropagatorConfig config)
    : ChebyshevPropagator(hamiltonian, spectrum_edges(hamiltonian, config.edges), config) {}

ChebyshevPropagator::ChebyshevPropagator(SparseHamiltonian hamiltonian, const SpectrumEdges& edges,
                                         PropagatorConfig config)
    : hamiltonian_(std::move(hamiltonian)), config_(config) {
  if (!(config_.dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(config_.cutoff > 0.0)) throw ConfigError("coefficient cutoff must be positive");
  double unit = time_energy_unit(hamiltonian_.params());
  scaling_ = chebyshev_scaling(edges, unit, config_.padding);
}

const std::vector<std::complex<double>>& ChebyshevPropagator::coefficients(double abs_dt) {
  auto it = coefficient_cache_.find(abs_dt);
  if (it == coefficient_cache_.end()) {
    // The dropped tail is about 2|c_{M+1}|, so the cutoff alone cannot keep a
    // step inside max_step_drift when both are 1e-12.
    const double cutoff = std::min(config_.cutoff, 0.01 * config_.max_step_drift);
    it = coefficient_cache_.emplace(abs_dt, chebyshev_coefficients(scaling_.a * abs_dt, cutoff)).first;
  }
  return it->second;
}

int ChebyshevPropagator::order(double dt) {
  return static_cast<int>(coefficients(std::abs(dt)).size()) - 1;
}

void ChebyshevPropagator::step(PropagationState& state, double dt) {
  const auto n = state.amplitudes.size();
  if (static_cast<std::size_t>(n) != hamiltonian_.dimension()) {
    throw std::invalid_argument("state length does not match the Hamiltonian dimension");
  }
  if (dt == 0.0) return;
  const auto& c = coefficients(std::abs(dt));
  const double norm_before = state.amplitudes.norm();

  // Backward steps use J_n(-x) = (-1)^n J_n(x), i.e. conjugated coefficients.
  auto coeff = [&](std::size_t k) { return dt > 0 ? c[k] : std::conj(c[k]); };
  const double scale = 1.0 / (scaling_.energy_unit * scaling_.a);
  const double shift = -scaling_.b / scaling_.a;

  prev_ = state.amplitudes;
  sum_ = coeff(0) * prev_;
  if (c.size() > 1) {
    cur_.resize(n);
    next_.resize(n);
    hamiltonian_.apply_affine(prev_.data(), cur_.data(), scale, shift);
    sum_ += 2.0 * coeff(1) * cur_;
    for (std::size_t k = 2; k < c.size(); ++k) {
      hamiltonian_.apply_affine(cur_.data(), next_.data(), 2.0 * scale, 2.0 * shift);
      next_ -= prev_;
      sum_ += 2.0 * coeff(k) * next_;
      prev_.swap(cur_);
      cur_.swap(next_);
    }
  }
  state.amplitudes = std::polar(1.0, -scaling_.b * dt) * sum_;
  state.tau += dt;

  const double norm_after = state.amplitudes.norm();
  state.norm_log.push_back(norm_after);
  if (std::abs(norm_after - norm_before) > config_.max_step_drift) {
    char drift[32];
    std::snprintf(drift, sizeof drift, "%.3e", norm_after - norm_before);
    throw NumericalError(std::string("norm drift ") + drift +
                         " in one Chebyshev step (order " + std::to_string(c.size() - 1) +
                         ", a = " + std::to_string(scaling_.a) + ")");
  }
}

void ChebyshevPropagator::advance_to(PropagationState& state, double tau) {
  const double dt = config_.dt;
  // Relative slack so a grid of dt-multiples does not produce sliver steps.
  const double slack = 1e-9 * dt;
  while (std::abs(tau - state.tau) > slack) {
    const double remaining = tau - state.tau;
    const double h = std::abs(remaining) <= dt + slack ? remaining : std::copysign(dt, remaining);
    step(state, h);
  }
  state.tau = tau;
}

PropagationState step(const SparseHamiltonian& hamiltonian, const PropagationState& state,
                      const PropagatorConfig& config) {
  ChebyshevPropagator propagator(hamiltonian, config);
  PropagationState out = state;
  propagator.step(out, config.dt);
  return out;
}

void evolve(const SparseHamiltonian& hamiltonian, const Eigen::VectorXcd& initial,
            std::span<const double> times, const PropagatorConfig& config,
            const std::function<void(const PropagationState&)>& observer) {
  if (std::abs(initial.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("initial state is not normalized");
  }
  ChebyshevPropagator propagator(hamiltonian, config);
  PropagationState state;
  state.amplitudes = initial;
  for (double t : times) {
    propagator.advance_to(state, t);
    observer(state);
  }
}

std::vector<PropagationState> evolve(const SparseHamiltonian& hamiltonian,
                                     const Eigen::VectorXcd& initial, std::span<const double> times,
                                     const PropagatorConfig& config) {
  std::vector<PropagationState> out;
  out.reserve(times.size());
  evolve(hamiltonian, initial, times, config,
         [&](const PropagationState& s) { out.push_back(s); });
  return out;
}

namespace {
constexpr char kMagic[8] = {'B', 'H', 'C', 'K', 'P', 'T', '0', '1'};
}

void save_checkpoint(const std::filesystem::path& path, const PropagationState& state,
                     const std::string& tag) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write checkpoint " + path.string());
  const std::uint64_t tag_len = tag.size();
  const std::uint64_t dim = static_cast<std::uint64_t>(state.amplitudes.size());
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&state.tau), sizeof state.tau);
  out.write(reinterpret_cast<const char*>(&tag_len), sizeof tag_len);
  out.write(tag.data(), static_cast<std::streamsize>(tag_len));
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(state.amplitudes.data()),
            static_cast<std::streamsize>(dim * sizeof(std::complex<double>)));
  if (!out) throw ConfigError("failed writing checkpoint " + path.string());
}

PropagationState load_checkpoint(const std::filesystem::path& path, const std::string& expected_tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string());
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + sizeof magic, kMagic)) {
    throw ConfigError("not a checkpoint file: " + path.string());
  }
  PropagationState state;
  std::uint64_t tag_len = 0, dim = 0;
  in.read(reinterpret_cast<char*>(&state.tau), sizeof state.tau);
  in.read(reinterpret_cast<char*>(&tag_len), sizeof tag_len);
  if (!in || tag_len > (1u << 20)) throw ConfigError("corrupt checkpoint " + path.string());
  std::string tag(tag_len, '\0');
  in.read(tag.data(), static_cast<std::streamsize>(tag_len));
  if (tag != expected_tag) {
    throw ConfigError("checkpoint " + path.string() + " belongs to a different configuration");
  }
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  if (!in) throw ConfigError("corrupt checkpoint " + path.string());
  state.amplitudes.resize(static_cast<Eigen::Index>(dim));
  in.read(reinterpret_cast<char*>(state.amplitudes.data()),
          static_cast<std::streamsize>(dim * sizeof(std::complex<double>)));
  if (!in) throw ConfigError("truncated checkpoint " + path.string());
  return state;
}

}  // namespace bhchaos
