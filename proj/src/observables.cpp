#include "bhchaos/observables.hpp"

#include <algorithm>
#include <cmath>

#include "bhchaos/error.hpp"

namespace bhchaos {

namespace {

void check_state(const Eigen::VectorXcd& state, const SectorBasis& basis) {
  if (static_cast<std::size_t>(state.size()) != basis.size()) {
    throw std::invalid_argument("state length does not match the sector dimension");
  }
}

}  // namespace

std::vector<double> site_densities(const Eigen::VectorXcd& state, const SectorBasis& basis) {
  check_state(state, basis);
  const FockBasis& fock = basis.fock();
  const int L = fock.sites();
  std::vector<double> rho(L, 0.0);
  for (std::size_t m = 0; m < basis.size(); ++m) {
    const double p = std::norm(state(static_cast<Eigen::Index>(m)));
    if (p == 0.0) continue;
    const SectorMember& member = basis.member(m);
    auto a = fock.occupations(member.first);
    if (member.paired()) {
      auto b = fock.occupations(static_cast<std::size_t>(member.second));
      for (int j = 0; j < L; ++j) rho[j] += 0.5 * p * (a[j] + b[j]);
    } else {
      for (int j = 0; j < L; ++j) rho[j] += p * a[j];
    }
  }
  return rho;
}

int central_site(int sites) { return sites / 2 - 1; }

CentralSiteStats central_site_stats(const Eigen::VectorXcd& state, const SectorBasis& basis) {
  check_state(state, basis);
  const FockBasis& fock = basis.fock();
  const int c = central_site(fock.sites());
  auto occupation = [&](std::size_t m, auto&& f) {
    const SectorMember& member = basis.member(m);
    const double na = fock.occupations(member.first)[c];
    if (member.paired()) {
      f(0.5, na);
      f(0.5, fock.occupations(static_cast<std::size_t>(member.second))[c]);
    } else {
      f(1.0, na);
    }
  };
  // Two passes so a sharp occupation gives a variance of exactly zero up to
  // the norm error squared.
  double mean = 0.0;
  for (std::size_t m = 0; m < basis.size(); ++m) {
    const double p = std::norm(state(static_cast<Eigen::Index>(m)));
    if (p != 0.0) occupation(m, [&](double w, double n) { mean += w * p * n; });
  }
  double variance = 0.0;
  for (std::size_t m = 0; m < basis.size(); ++m) {
    const double p = std::norm(state(static_cast<Eigen::Index>(m)));
    if (p != 0.0) occupation(m, [&](double w, double n) { variance += w * p * (n - mean) * (n - mean); });
  }
  return {mean, variance};
}

double cloud_width(const std::vector<double>& densities) {
  const auto L = static_cast<double>(densities.size());
  if (densities.size() < 2) throw std::invalid_argument("cloud width needs at least two sites");
  double total = 0.0;
  for (double d : densities) total += d;
  if (!(total > 0.0)) throw std::invalid_argument("density profile is empty");
  const double center = (L + 1.0) / 2.0;
  double moment = 0.0;
  for (std::size_t j = 0; j < densities.size(); ++j) {
    const double offset = static_cast<double>(j + 1) - center;
    moment += densities[j] / total * offset * offset;
  }
  return std::sqrt(moment) / std::sqrt((L * L - 1.0) / 12.0);
}

double homogeneity_deficit(const std::vector<double>& densities, double density) {
  double sum = 0.0;
  for (double d : densities) sum += (d - density) * (d - density);
  return sum / static_cast<double>(densities.size());
}

std::vector<double> TimeSeries::times() const {
  std::vector<double> t;
  t.reserve(samples.size());
  for (const auto& s : samples) t.push_back(s.tau);
  return t;
}

ObservableSample measure(const PropagationState& state, const SectorBasis& basis, double density) {
  ObservableSample s;
  s.tau = state.tau;
  s.densities = site_densities(state.amplitudes, basis);
  const auto central = central_site_stats(state.amplitudes, basis);
  s.n_c = central.mean;
  s.dn_c2 = central.variance;
  s.sigma = cloud_width(s.densities);
  s.F = homogeneity_deficit(s.densities, density);
  return s;
}

std::string_view to_string(Signal signal) {
  switch (signal) {
    case Signal::n_c: return "n_c";
    case Signal::dn_c2: return "dn_c2";
    case Signal::sigma: return "sigma";
    case Signal::F: return "F";
  }
  return "?";
}

std::vector<double> signal_values(const TimeSeries& series, Signal signal) {
  std::vector<double> out;
  out.reserve(series.samples.size());
  for (const auto& s : series.samples) {
    switch (signal) {
      case Signal::n_c: out.push_back(s.n_c); break;
      case Signal::dn_c2: out.push_back(s.dn_c2); break;
      case Signal::sigma: out.push_back(s.sigma); break;
      case Signal::F: out.push_back(s.F); break;
    }
  }
  return out;
}

namespace {

struct Segment {
  std::vector<double> t;
  std::vector<double> y;
};

// Samples within [t_i, t_f]; the endpoints must be sampled.
Segment restrict_to(const TimeSeries& series, Signal signal, double t_i, double t_f) {
  if (!(t_f > t_i)) throw ConfigError("time interval must have t_f > t_i");
  const double slack = 1e-9 * std::max(1.0, std::abs(t_f));
  Segment seg;
  const auto values = signal_values(series, signal);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double t = series.samples[k].tau;
    if (t >= t_i - slack && t <= t_f + slack) {
      seg.t.push_back(t);
      seg.y.push_back(values[k]);
    }
  }
  if (seg.t.size() < 2 || std::abs(seg.t.front() - t_i) > slack ||
      std::abs(seg.t.back() - t_f) > slack) {
    throw ConfigError("samples do not cover the interval [" + std::to_string(t_i) + ", " +
                      std::to_string(t_f) + "]");
  }
  return seg;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double total = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) total += 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
  return total;
}

}  // namespace

double time_average(const TimeSeries& series, Signal signal, double t_i, double t_f) {
  const auto seg = restrict_to(series, signal, t_i, t_f);
  return trapezoid(seg.t, seg.y) / (t_f - t_i);
}

double temporal_variance(const TimeSeries& series, Signal signal, double t_i, double t_f) {
  auto seg = restrict_to(series, signal, t_i, t_f);
  const double mean = trapezoid(seg.t, seg.y) / (t_f - t_i);
  for (double& y : seg.y) y = (y - mean) * (y - mean);
  return trapezoid(seg.t, seg.y) / (t_f - t_i);
}

double relative_temporal_variance(const TimeSeries& series, Signal signal, double t_i, double t_f) {
  const double mean = time_average(series, signal, t_i, t_f);
  if (mean == 0.0) throw NumericalError("relative variance of a signal with zero time average");
  return temporal_variance(series, signal, t_i, t_f) / mean;
}

TemporalSummary summarize(const TimeSeries& series, double t_i, double t_f) {
  TemporalSummary s;
  s.t_i = t_i;
  s.t_f = t_f;
  s.mean_n_c = time_average(series, Signal::n_c, t_i, t_f);
  s.var_n_c = temporal_variance(series, Signal::n_c, t_i, t_f);
  s.mean_dn_c2 = time_average(series, Signal::dn_c2, t_i, t_f);
  s.rel_var_dn_c2 = s.mean_dn_c2 > 0.0
                        ? temporal_variance(series, Signal::dn_c2, t_i, t_f) / s.mean_dn_c2
                        : 0.0;
  s.mean_sigma = time_average(series, Signal::sigma, t_i, t_f);
  s.mean_F = time_average(series, Signal::F, t_i, t_f);
  if (series.samples.empty()) throw ConfigError("empty time series");
  s.F0 = series.samples.front().F;
  s.F_scaled = s.F0 > 1e-14;
  s.mean_F_reported = s.F_scaled ? s.mean_F / s.F0 : s.mean_F;
  return s;
}

}  // namespace bhchaos
