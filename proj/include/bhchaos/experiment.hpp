#pragma once

// Parameter sweeps, persistence, and run manifests behind the command line.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bhchaos/observables.hpp"
#include "bhchaos/propagator.hpp"
#include "bhchaos/spectral.hpp"
#include "bhchaos/states.hpp"

namespace bhchaos {

enum class Mode { spectrum, sweep_d1, evolve, sweep_dynamics, thresholds, staggered_table };
enum class GridParam { gamma, eta };

std::string_view to_string(Mode mode);
std::string_view to_string(GridParam param);
GridParam parse_grid_param(std::string_view text);

/// Log-spaced values rounded to six significant decimal digits, so that the
/// same grid is reproduced exactly across sizes and runs.
std::vector<double> log_grid(double min, double max, int count);

struct GridSpec {
  GridParam param = GridParam::gamma;
  double min = 0.01;
  double max = 100.0;
  int count = 30;

  std::vector<double> values() const { return log_grid(min, max, count); }
};

struct SystemSize {
  int particles = 0;
  int sites = 0;
};

struct ExperimentConfig {
  Mode mode = Mode::sweep_d1;
  std::vector<SystemSize> sizes;
  int ell = 3;
  GridSpec grid;
  StateKind state = StateKind::homogeneous;
  double U = 1.0;

  // spectral sweeps
  std::size_t dense_cap = kDefaultDenseCap;
  std::size_t eps_windows = 100;
  std::size_t nearest_count = 100;
  std::size_t percentage_windows = 100;
  std::size_t goe_samples = 10'000;
  std::uint64_t seed = 2024;

  // dynamics
  double t_max = 200.0;
  double dt_sample = 0.5;
  double t_i = 100.0;
  double t_f = 200.0;
  PropagatorConfig propagator;

  std::filesystem::path out = "results";
  int workers = 1;

  /// Canonical JSON of every field that affects results (not `out` or `workers`).
  std::string canonical_json() const;
  /// SHA-256 of canonical_json().
  std::string hash() const;
};

/// Coupling at a grid point: gamma directly, or gamma = eta * N.
CouplingParameters grid_coupling(const ExperimentConfig& config, double value, int particles);

// ---- single-cell computations -------------------------------------------

struct D1Cell {
  double gamma = 0.0;
  std::size_t dimension = 0;
  FractalStatistics eps;
  std::vector<std::pair<StateKind, FractalStatistics>> nearest;
  std::vector<std::pair<StateKind, FractalStatistics>> percentage;
};

/// State families whose Fock state exists at (N, L), in declaration order.
std::vector<StateKind> available_references(int particles, int sites, int ell);

D1Cell analyze_d1(const SparseHamiltonian& hamiltonian, const ExperimentConfig& config);

struct DynamicsCell {
  double gamma = 0.0;
  double eta = 0.0;
  TimeSeries series;
  TemporalSummary summary;
};

/// Propagates the configured initial state and samples observables every
/// dt_sample up to t_max.
DynamicsCell simulate_dynamics(const SparseHamiltonian& hamiltonian, const FockState& initial,
                               const ExperimentConfig& config);

/// Sample times 0, dt, ..., t_max.
std::vector<double> sample_times(double t_max, double dt_sample);

// ---- task scheduling ----------------------------------------------------

/// Runs job(i) for i in [0, count) on `workers` threads. Exceptions are
/// captured per task by the job itself.
void run_tasks(std::size_t count, int workers, const std::function<void(std::size_t)>& job);

// ---- runs ---------------------------------------------------------------

enum class TaskStatus { ok, config_error, capacity_error, numerical_error };
std::string_view to_string(TaskStatus status);

struct TaskRecord {
  std::string id;
  TaskStatus status = TaskStatus::ok;
  std::string message;
  double seconds = 0.0;
};

struct RunReport {
  std::vector<std::filesystem::path> files;
  std::vector<TaskRecord> tasks;
  std::filesystem::path manifest;

  /// First failing task's status, or ok.
  TaskStatus worst() const;
};

RunReport run_spectrum(const ExperimentConfig& config);
RunReport run_sweep_d1(const ExperimentConfig& config);
RunReport run_evolve(const ExperimentConfig& config);
RunReport run_sweep_dynamics(const ExperimentConfig& config);
RunReport report_thresholds(const ExperimentConfig& config, std::ostream& table);
RunReport staggered_table(const ExperimentConfig& config, std::ostream& table);

RunReport run(const ExperimentConfig& config, std::ostream& table);

/// Lowercase hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

std::string_view version();

}  // namespace bhchaos
