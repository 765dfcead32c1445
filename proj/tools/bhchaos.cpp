// Command-line front end for the sweeps in bhchaos/experiment.hpp.

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "bhchaos/error.hpp"
#include "bhchaos/experiment.hpp"

namespace {

using namespace bhchaos;

constexpr int kConfigExit = 2;
constexpr int kCapacityExit = 3;
constexpr int kNumericalExit = 4;

int exit_code(TaskStatus status) {
  switch (status) {
    case TaskStatus::ok: return 0;
    case TaskStatus::config_error: return kConfigExit;
    case TaskStatus::capacity_error: return kCapacityExit;
    case TaskStatus::numerical_error: return kNumericalExit;
  }
  return 1;
}

struct Options {
  std::vector<int> n;
  std::vector<int> l;
  int ell = 3;
  double grid_min = 0.01;
  double grid_max = 100.0;
  int grid_count = 30;
  std::string grid_param = "gamma";
  std::optional<double> gamma;
  std::optional<double> eta;
  std::string state = "homogeneous";
  double t_max = 200.0;
  double dt_sample = 0.5;
  double dt = 0.1;
  double t_i = 100.0;
  double t_f = 200.0;
  std::string out;
  int workers = 1;
  std::uint64_t seed = 2024;
  std::size_t goe_samples = 10'000;
  std::size_t nearest = 100;
  std::size_t windows = 100;
  std::size_t dense_cap = kDefaultDenseCap;
};

ExperimentConfig to_config(Mode mode, const Options& o) {
  ExperimentConfig c;
  c.mode = mode;
  if (!o.l.empty() && o.l.size() != o.n.size()) {
    throw ConfigError("--l must list one value per --n value (or be omitted for L = N)");
  }
  for (std::size_t i = 0; i < o.n.size(); ++i) c.sizes.push_back({o.n[i], o.l.empty() ? o.n[i] : o.l[i]});
  c.ell = o.ell;
  c.grid = {parse_grid_param(o.grid_param), o.grid_min, o.grid_max, o.grid_count};
  if (o.gamma && o.eta) throw ConfigError("--gamma and --eta are mutually exclusive");
  if (o.gamma) c.grid = {GridParam::gamma, *o.gamma, *o.gamma, 1};
  if (o.eta) c.grid = {GridParam::eta, *o.eta, *o.eta, 1};
  c.state = parse_state_kind(o.state);
  c.t_max = o.t_max;
  c.dt_sample = o.dt_sample;
  c.t_i = o.t_i;
  c.t_f = o.t_f;
  c.propagator.dt = o.dt;
  c.workers = o.workers;
  c.seed = o.seed;
  c.goe_samples = o.goe_samples;
  c.nearest_count = o.nearest;
  c.dense_cap = o.dense_cap;
  c.eps_windows = o.windows;
  c.percentage_windows = o.windows;
  if (!o.out.empty()) {
    c.out = o.out;
  } else if (const char* env = std::getenv("BHCHAOS_OUT"); env && *env) {
    c.out = env;
  } else {
    c.out = "results";
  }
  return c;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--n", o.n, "Particle numbers N (one run per value)")->delimiter(',');
  app->add_option("--l", o.l, "Site counts L, paired with --n (default L = N)")->delimiter(',');
  app->add_option("--ell", o.ell, "Block size of the localized state")->capture_default_str();
  app->add_option("--out", o.out, "Output directory (default $BHCHAOS_OUT or ./results)");
}

void add_grid(CLI::App* app, Options& o) {
  app->add_option("--grid-min", o.grid_min, "Smallest grid value")->capture_default_str();
  app->add_option("--grid-max", o.grid_max, "Largest grid value")->capture_default_str();
  app->add_option("--grid-count", o.grid_count, "Number of log-spaced grid points")->capture_default_str();
  app->add_option("--grid-param", o.grid_param, "Grid variable")
      ->check(CLI::IsMember({"gamma", "eta"}))
      ->capture_default_str();
  app->add_option("--gamma", o.gamma, "Single gamma = J/U instead of a grid");
  app->add_option("--eta", o.eta, "Single eta = J/(UN) instead of a grid");
  app->add_option("--workers", o.workers, "Worker threads over grid points")->capture_default_str();
  app->add_option("--dense-cap", o.dense_cap, "Largest sector dimension for full diagonalization")
      ->capture_default_str();
}

void add_dynamics(CLI::App* app, Options& o) {
  app->add_option("--state", o.state, "Initial Fock state family")
      ->check(CLI::IsMember({"homogeneous", "staggered", "localized"}))
      ->capture_default_str();
  app->add_option("--tmax", o.t_max, "Final tunneling time")->capture_default_str();
  app->add_option("--dt-sample", o.dt_sample, "Observable sampling interval")->capture_default_str();
  app->add_option("--dt", o.dt, "Chebyshev step")->capture_default_str();
  app->add_option("--t-start", o.t_i, "Start of the time-average window")->capture_default_str();
  app->add_option("--t-end", o.t_f, "End of the time-average window")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bose-Hubbard chaos diagnostics: spectra, fractal dimensions, and dynamics"};
  app.set_version_flag("--version", std::string(bhchaos::version()));
  app.require_subcommand(1);
  Options o;

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues, scaled energies and D1 per grid point");
  add_common(spectrum, o);
  add_grid(spectrum, o);

  auto* sweep_d1 = app.add_subcommand("sweep-d1", "Windowed D1 statistics over a gamma or eta grid");
  add_common(sweep_d1, o);
  add_grid(sweep_d1, o);
  sweep_d1->add_option("--seed", o.seed, "Seed for the GOE reference sample")->capture_default_str();
  sweep_d1->add_option("--goe-samples", o.goe_samples, "Random vectors in the GOE reference")->capture_default_str();
  sweep_d1->add_option("--nearest", o.nearest, "Eigenstates nearest each reference energy")->capture_default_str();
  sweep_d1->add_option("--windows", o.windows, "Windows for the eps and percentage schemes")->capture_default_str();

  auto* evolve = app.add_subcommand("evolve", "Propagate one initial state at a single gamma or eta");
  add_common(evolve, o);
  add_grid(evolve, o);
  add_dynamics(evolve, o);

  auto* sweep_dyn = app.add_subcommand("sweep-dynamics", "Observable time series and averages over a grid");
  add_common(sweep_dyn, o);
  add_grid(sweep_dyn, o);
  add_dynamics(sweep_dyn, o);

  auto* thresholds = app.add_subcommand("thresholds", "Chaos thresholds per state family and size");
  add_common(thresholds, o);

  auto* table = app.add_subcommand("staggered-table", "Staggered initial states closest to the spectral mean");
  add_common(table, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  bhchaos::Mode mode = bhchaos::Mode::spectrum;
  if (*sweep_d1) mode = bhchaos::Mode::sweep_d1;
  if (*evolve) mode = bhchaos::Mode::evolve;
  if (*sweep_dyn) mode = bhchaos::Mode::sweep_dynamics;
  if (*thresholds) mode = bhchaos::Mode::thresholds;
  if (*table) mode = bhchaos::Mode::staggered_table;

  try {
    const auto config = to_config(mode, o);
    const auto report = bhchaos::run(config, std::cout);
    for (const auto& t : report.tasks) {
      if (t.status != bhchaos::TaskStatus::ok) std::cerr << t.id << ": " << t.message << "\n";
    }
    std::cerr << "wrote " << report.files.size() << " files, manifest " << report.manifest.string() << "\n";
    return exit_code(report.worst());
  } catch (const bhchaos::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kCapacityExit;
  } catch (const bhchaos::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalExit;
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigExit;
  }
}
