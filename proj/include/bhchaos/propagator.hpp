#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bhchaos/hamiltonian.hpp"
#include "bhchaos/spectral.hpp"

namespace bhchaos {

/// Times are measured in units of hbar/E_u with E_u = J (tunneling times),
/// falling back to E_u = U when J = 0.
struct PropagatorConfig {
  double dt = 0.1;
  double cutoff = 1e-12;       // keep every c_n with |c_n| >= min(cutoff, max_step_drift / 100)
  double padding = 1.01;       // multiplies the spectral half-width
  double max_step_drift = 1e-12;  // |norm change| allowed per step
  EdgeOptions edges;
};

/// H / E_u = a * H_rescaled + b, with spec(H_rescaled) inside [-1, 1].
struct ChebyshevScaling {
  double energy_unit = 1.0;
  double a = 1.0;
  double b = 0.0;
};

ChebyshevScaling chebyshev_scaling(const SpectrumEdges& edges, double energy_unit, double padding);

/// Energy defining the time unit of `params`.
double time_energy_unit(const CouplingParameters& params);

/// c_n = (-i)^n J_n(a_dt), n = 0..M, with |c_M| >= cutoff > |c_n| for n > M.
std::vector<std::complex<double>> chebyshev_coefficients(double a_dt, double cutoff);

struct PropagationState {
  Eigen::VectorXcd amplitudes;
  double tau = 0.0;
  std::vector<double> norm_log;  // norm after every step
};

class ChebyshevPropagator {
 public:
  /// Estimates the spectral edges of `hamiltonian`.
  ChebyshevPropagator(SparseHamiltonian hamiltonian, PropagatorConfig config = {});
  ChebyshevPropagator(SparseHamiltonian hamiltonian, const SpectrumEdges& edges,
                      PropagatorConfig config = {});

  const ChebyshevScaling& scaling() const { return scaling_; }
  const PropagatorConfig& config() const { return config_; }
  const SparseHamiltonian& hamiltonian() const { return hamiltonian_; }

  /// Expansion order used for a step of length |dt|.
  int order(double dt);

  /// One step of signed length dt; throws NumericalError on excess norm drift.
  void step(PropagationState& state, double dt);

  /// Steps of config().dt (shortened at the end) until state.tau == tau.
  void advance_to(PropagationState& state, double tau);

 private:
  const std::vector<std::complex<double>>& coefficients(double abs_dt);

  SparseHamiltonian hamiltonian_;
  PropagatorConfig config_;
  ChebyshevScaling scaling_;
  std::map<double, std::vector<std::complex<double>>> coefficient_cache_;
  Eigen::VectorXcd prev_, cur_, next_, sum_;
};

/// Single step with freshly estimated edges.
PropagationState step(const SparseHamiltonian& hamiltonian, const PropagationState& state,
                      const PropagatorConfig& config);

/// Snapshots at each requested time (any order, negative times allowed).
std::vector<PropagationState> evolve(const SparseHamiltonian& hamiltonian,
                                     const Eigen::VectorXcd& initial, std::span<const double> times,
                                     const PropagatorConfig& config = {});

/// Streaming variant: `observer` sees the state at each requested time.
void evolve(const SparseHamiltonian& hamiltonian, const Eigen::VectorXcd& initial,
            std::span<const double> times, const PropagatorConfig& config,
            const std::function<void(const PropagationState&)>& observer);

/// Binary snapshot: magic, tau, tag (e.g. a config hash), amplitudes.
void save_checkpoint(const std::filesystem::path& path, const PropagationState& state,
                     const std::string& tag);
PropagationState load_checkpoint(const std::filesystem::path& path, const std::string& expected_tag);

}  // namespace bhchaos
