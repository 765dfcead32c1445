#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include "bhchaos/basis.hpp"
#include "bhchaos/hamiltonian.hpp"

namespace bhchaos {

using Rational = boost::rational<std::int64_t>;

enum class StateKind { homogeneous, staggered, localized };

std::string_view to_string(StateKind kind);
StateKind parse_state_kind(std::string_view text);

struct InitialStateSpec {
  StateKind kind = StateKind::homogeneous;
  int particles = 0;
  int sites = 0;
  int ell = 3;  // localized only

  Rational density() const { return Rational(particles, sites); }
};

/// |n, ..., n> with n = N/L; ConfigError unless L divides N.
FockState make_homogeneous(int particles, int sites);

/// Unit-density palindromic staggered pattern (occupations 0..3, occupied
/// sites never adjacent) whose energy is closest to the maximally mixed one.
FockState make_staggered(int particles, int sites);

/// All particles on `ell` contiguous central sites with floor/ceil(N/ell)
/// each; an odd remainder goes to the center site, pairs fill from the center
/// outward. The block is centered exactly when L - ell is even; otherwise it
/// starts at site ceil((L - ell)/2) (0-based) and the state is not a palindrome.
FockState make_localized(int particles, int sites, int ell);

FockState make_state(const InitialStateSpec& spec);

/// Interaction energy of a Fock state in units of U: sum_j n_j (n_j - 1)/2.
/// Equals <n|H|n>/U for any J.
std::int64_t fock_energy_units(const FockState& state);
double fock_energy(const FockState& state, const CouplingParameters& params);

/// Closed forms: E_h/U = N(n-1)/2, E_s/U = N - 2, E_l/U = (N-r)(N+r-l)/(2l).
Rational homogeneous_energy_units(int particles, int sites);
Rational staggered_energy_units(int particles);
Rational localized_energy_units(int particles, int ell);

/// Tr(H rho_MM)/U = N(N-1)/(L+1), exact.
Rational mm_energy_units(int particles, int sites);
double mm_energy(int particles, int sites, double U);

/// LDOS width of a Fock state: J sqrt(2N - n_1 - n_L + 2 sum n_j n_{j+1}).
double ldos_width(const FockState& state, double J);
std::int64_t ldos_width_squared_units(const FockState& state);

enum class ThresholdRegime { gamma_controlled, eta_controlled };

std::string_view to_string(ThresholdRegime regime);

/// Either value is absent when it diverges or vanishes in the requested limit.
struct ThresholdEstimate {
  std::optional<Rational> gamma_c;
  std::optional<Rational> eta_c;
  ThresholdRegime regime = ThresholdRegime::gamma_controlled;
  Rational h_int_per_particle;  // <h_int>/N
  Rational density;
};

/// Crossing point of the small- and large-gamma excess energy asymptotes.
ThresholdEstimate threshold(const InitialStateSpec& spec);

/// Threshold in the limit N -> infinity at fixed density (n must be 1 for the
/// staggered family).
ThresholdEstimate asymptotic_threshold(StateKind kind, Rational density, int ell = 3);

/// (omega - omega_0)/J ~ inverse_gamma/gamma + linear_gamma*gamma (gamma -> 0)
/// and -> large_gamma (gamma -> infinity).
struct ExcessEnergyAsymptotes {
  Rational inverse_gamma;
  Rational linear_gamma;
  Rational large_gamma;

  double small_gamma_value(double gamma) const;
};

ExcessEnergyAsymptotes excess_energy_density_asymptotes(const FockState& state, Rational density);

/// The Fock state as a unit vector in `basis`. ConfigError when the state has
/// no definite image (non-palindrome in a parity sector, palindrome in odd).
Eigen::VectorXcd to_sector_vector(const FockState& state, const SectorBasis& basis);

/// Even sector for palindromes, full Fock space otherwise.
Parity natural_sector(const FockState& state);

}  // namespace bhchaos
