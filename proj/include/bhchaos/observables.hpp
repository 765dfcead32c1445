#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bhchaos/basis.hpp"
#include "bhchaos/propagator.hpp"

namespace bhchaos {

/// <n_j> for every site. A paired member contributes the average occupation
/// of its two labels, so the profile of an even/odd state is exactly mirror
/// symmetric.
std::vector<double> site_densities(const Eigen::VectorXcd& state, const SectorBasis& basis);

struct CentralSiteStats {
  double mean = 0.0;      // <n_c>
  double variance = 0.0;  // <n_c^2> - <n_c>^2
};

/// 0-based index of the central site, floor(L/2) in 1-based numbering.
int central_site(int sites);

CentralSiteStats central_site_stats(const Eigen::VectorXcd& state, const SectorBasis& basis);

/// Width of the density profile normalized to the uniform profile's width.
double cloud_width(const std::vector<double>& densities);

/// (1/L) sum_j (<n_j> - n)^2.
double homogeneity_deficit(const std::vector<double>& densities, double density);

struct ObservableSample {
  double tau = 0.0;
  std::vector<double> densities;
  double n_c = 0.0;
  double dn_c2 = 0.0;
  double sigma = 0.0;
  double F = 0.0;
};

struct TimeSeries {
  int particles = 0;
  int sites = 0;
  double density = 0.0;
  std::vector<ObservableSample> samples;

  std::vector<double> times() const;
};

ObservableSample measure(const PropagationState& state, const SectorBasis& basis, double density);

enum class Signal { n_c, dn_c2, sigma, F };

std::string_view to_string(Signal signal);
std::vector<double> signal_values(const TimeSeries& series, Signal signal);

/// Time average over [t_i, t_f] by the trapezoidal rule.
double time_average(const TimeSeries& series, Signal signal, double t_i, double t_f);

/// (1/(t_f - t_i)) * integral of (O - mean)^2 over [t_i, t_f], trapezoidal.
/// Throws ConfigError unless samples cover the interval.
double temporal_variance(const TimeSeries& series, Signal signal, double t_i, double t_f);

/// temporal_variance divided by the time average.
double relative_temporal_variance(const TimeSeries& series, Signal signal, double t_i, double t_f);

struct TemporalSummary {
  double t_i = 100.0;
  double t_f = 200.0;
  double mean_n_c = 0.0;
  double var_n_c = 0.0;
  double mean_dn_c2 = 0.0;
  double rel_var_dn_c2 = 0.0;
  double mean_sigma = 0.0;
  double mean_F = 0.0;
  double F0 = 0.0;
  bool F_scaled = false;       // false when F0 = 0 and F is reported unscaled
  double mean_F_reported = 0.0;  // mean_F / F0 when F_scaled
};

TemporalSummary summarize(const TimeSeries& series, double t_i, double t_f);

}  // namespace bhchaos
