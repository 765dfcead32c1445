#include "bhchaos/states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "bhchaos/error.hpp"

namespace bhchaos {

std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::homogeneous: return "homogeneous";
    case StateKind::staggered: return "staggered";
    case StateKind::localized: return "localized";
  }
  return "?";
}

StateKind parse_state_kind(std::string_view text) {
  if (text == "homogeneous") return StateKind::homogeneous;
  if (text == "staggered") return StateKind::staggered;
  if (text == "localized") return StateKind::localized;
  throw ConfigError("unknown state kind '" + std::string(text) + "'");
}

std::string_view to_string(ThresholdRegime regime) {
  return regime == ThresholdRegime::gamma_controlled ? "gamma_controlled" : "eta_controlled";
}

FockState make_homogeneous(int particles, int sites) {
  if (sites < 2 || particles < 0) throw ConfigError("invalid (N, L)");
  if (particles % sites != 0) {
    throw ConfigError("homogeneous state needs integer density, got N=" +
                      std::to_string(particles) + ", L=" + std::to_string(sites));
  }
  return FockState(std::vector<int>(sites, particles / sites));
}

namespace {

struct StaggeredCandidate {
  Rational distance;     // |E - E_MM| / U
  std::int64_t width2;   // LDOS width squared, larger preferred
  std::int64_t core;     // spread of triply occupied sites, smaller preferred
  std::int64_t flank;    // spread of the other occupied sites, larger preferred
  std::vector<int> occupations;

  bool better_than(const StaggeredCandidate& o) const {
    if (distance != o.distance) return distance < o.distance;
    if (width2 != o.width2) return width2 > o.width2;
    if (core != o.core) return core < o.core;
    if (flank != o.flank) return flank > o.flank;
    return occupations < o.occupations;
  }
};

}  // namespace

FockState make_staggered(int particles, int sites) {
  if (particles != sites) throw ConfigError("staggered state is defined at unit density (N = L)");
  if (particles < 5) throw ConfigError("staggered state needs N >= 5");
  const int L = sites;
  const Rational target = mm_energy_units(particles, sites);
  const int half = (L + 1) / 2;
  const bool has_center = L % 2 == 1;

  std::vector<int> occ(L, 0);
  std::optional<StaggeredCandidate> best;

  // Depth-first over the left half; the right half mirrors it.
  std::function<void(int, int)> visit = [&](int pos, int remaining) {
    if (pos == half) {
      if (remaining != 0) return;
      FockState state(occ);
      StaggeredCandidate c;
      c.distance = Rational(fock_energy_units(state)) - target;
      c.distance = boost::abs(c.distance);
      c.width2 = ldos_width_squared_units(state);
      c.core = c.flank = 0;
      for (int j = 0; j < L; ++j) {
        const std::int64_t d = 2 * j - (L - 1);
        if (occ[j] == 3) c.core += d * d;
        else if (occ[j] > 0) c.flank += d * d;
      }
      c.occupations = occ;
      if (!best || c.better_than(*best)) best = std::move(c);
      return;
    }
    const bool center = has_center && pos == half - 1;
    const int mirror = L - 1 - pos;
    for (int n = 0; n <= 3; ++n) {
      const int used = center ? n : 2 * n;
      if (used > remaining) break;
      if (n > 0) {
        if (pos > 0 && occ[pos - 1] > 0) continue;
        if (!has_center && pos == half - 1) continue;  // would touch its mirror image
      }
      occ[pos] = n;
      occ[mirror] = n;
      visit(pos + 1, remaining - used);
      occ[pos] = 0;
      occ[mirror] = 0;
    }
  };
  visit(0, particles);
  if (!best) throw ConfigError("no staggered pattern exists for N=" + std::to_string(particles));
  return FockState(best->occupations);
}

FockState make_localized(int particles, int sites, int ell) {
  if (sites < 2 || particles < 0) throw ConfigError("invalid (N, L)");
  if (ell < 1 || ell > sites) throw ConfigError("localized block size must satisfy 1 <= ell <= L");
  std::vector<int> block(ell, particles / ell);
  int remainder = particles % ell;
  if (remainder % 2 == 1) {
    if (ell % 2 == 0) {
      throw ConfigError("odd remainder " + std::to_string(remainder) +
                        " cannot be split palindromically over an even block of " +
                        std::to_string(ell) + " sites");
    }
    ++block[ell / 2];
    --remainder;
  }
  // Mirror pairs, innermost first.
  int left = ell / 2 - 1;
  for (; remainder > 0; remainder -= 2, --left) {
    ++block[left];
    ++block[ell - 1 - left];
  }
  std::vector<int> occ(sites, 0);
  const int start = (sites - ell + 1) / 2;
  std::copy(block.begin(), block.end(), occ.begin() + start);
  return FockState(std::move(occ));
}

FockState make_state(const InitialStateSpec& spec) {
  switch (spec.kind) {
    case StateKind::homogeneous: return make_homogeneous(spec.particles, spec.sites);
    case StateKind::staggered: return make_staggered(spec.particles, spec.sites);
    case StateKind::localized: return make_localized(spec.particles, spec.sites, spec.ell);
  }
  throw ConfigError("unknown state kind");
}

std::int64_t fock_energy_units(const FockState& state) { return interaction_count(state); }

double fock_energy(const FockState& state, const CouplingParameters& params) {
  return params.U * static_cast<double>(fock_energy_units(state));
}

Rational homogeneous_energy_units(int particles, int sites) {
  const Rational n(particles, sites);
  return Rational(particles) * (n - 1) / 2;
}

Rational staggered_energy_units(int particles) { return Rational(particles - 2); }

Rational localized_energy_units(int particles, int ell) {
  const std::int64_t r = particles % ell;
  return Rational((particles - r) * (particles + r - ell), 2 * ell);
}

Rational mm_energy_units(int particles, int sites) {
  return Rational(static_cast<std::int64_t>(particles) * (particles - 1), sites + 1);
}

double mm_energy(int particles, int sites, double U) {
  return U * boost::rational_cast<double>(mm_energy_units(particles, sites));
}

std::int64_t ldos_width_squared_units(const FockState& state) {
  const auto occ = state.occupations();
  const int L = state.sites();
  std::int64_t total = 2LL * state.particles() - occ[0] - occ[L - 1];
  for (int j = 0; j + 1 < L; ++j) total += 2LL * occ[j] * occ[j + 1];
  return total;
}

double ldos_width(const FockState& state, double J) {
  return J * std::sqrt(static_cast<double>(ldos_width_squared_units(state)));
}

ThresholdEstimate threshold(const InitialStateSpec& spec) {
  const FockState state = make_state(spec);
  const Rational n = spec.density();
  const Rational N(spec.particles);
  ThresholdEstimate est;
  est.density = n;
  est.h_int_per_particle = Rational(fock_energy_units(state)) / N;
  if (spec.kind == StateKind::homogeneous) {
    est.gamma_c = 1 / (n + 1);
  } else {
    est.gamma_c = (est.h_int_per_particle - (n - 1) / 2) / 2;
  }
  est.eta_c = *est.gamma_c / N;
  est.regime = spec.kind == StateKind::localized ? ThresholdRegime::eta_controlled
                                                 : ThresholdRegime::gamma_controlled;
  return est;
}

ThresholdEstimate asymptotic_threshold(StateKind kind, Rational density, int ell) {
  ThresholdEstimate est;
  est.density = density;
  switch (kind) {
    case StateKind::homogeneous:
      // <h_int>/N = (n-1)/2
      est.h_int_per_particle = (density - 1) / 2;
      est.gamma_c = 1 / (density + 1);
      est.eta_c = Rational(0);
      break;
    case StateKind::staggered:
      if (density != Rational(1)) throw ConfigError("staggered family is defined at unit density");
      // <h_int>/N = 1 - 2/N -> 1
      est.h_int_per_particle = Rational(1);
      est.gamma_c = Rational(1, 2);
      est.eta_c = Rational(0);
      break;
    case StateKind::localized:
      // <h_int>/N^2 -> 1/(2 ell); <h_int>/N diverges
      est.eta_c = Rational(1, 4 * ell);
      est.regime = ThresholdRegime::eta_controlled;
      break;
  }
  return est;
}

double ExcessEnergyAsymptotes::small_gamma_value(double gamma) const {
  return boost::rational_cast<double>(inverse_gamma) / gamma +
         boost::rational_cast<double>(linear_gamma) * gamma;
}

ExcessEnergyAsymptotes excess_energy_density_asymptotes(const FockState& state, Rational density) {
  ExcessEnergyAsymptotes out;
  out.inverse_gamma = Rational(fock_energy_units(state), state.particles()) - (density - 1) / 2;
  out.linear_gamma = 2 * (density + 1);
  out.large_gamma = Rational(2);
  return out;
}

Eigen::VectorXcd to_sector_vector(const FockState& state, const SectorBasis& basis) {
  const std::size_t idx = basis.fock().index(state);
  SectorComponent comp;
  if (!basis.locate(idx, comp) || (basis.parity() != Parity::none && !state.is_palindrome())) {
    throw ConfigError("state |" + state.to_string() + "> is not a basis vector of the " +
                      std::string(to_string(basis.parity())) + " sector");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  v(comp.member) = 1.0;
  return v;
}

Parity natural_sector(const FockState& state) {
  return state.is_palindrome() ? Parity::even : Parity::none;
}

}  // namespace bhchaos
