#include "bhchaos/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bhchaos/error.hpp"

#ifndef BHCHAOS_VERSION
#define BHCHAOS_VERSION "unknown"
#endif

namespace bhchaos {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view version() { return BHCHAOS_VERSION; }

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::spectrum: return "spectrum";
    case Mode::sweep_d1: return "sweep-d1";
    case Mode::evolve: return "evolve";
    case Mode::sweep_dynamics: return "sweep-dynamics";
    case Mode::thresholds: return "thresholds";
    case Mode::staggered_table: return "staggered-table";
  }
  return "?";
}

std::string_view to_string(GridParam param) { return param == GridParam::gamma ? "gamma" : "eta"; }

GridParam parse_grid_param(std::string_view text) {
  if (text == "gamma") return GridParam::gamma;
  if (text == "eta") return GridParam::eta;
  throw ConfigError("grid parameter must be gamma or eta, got '" + std::string(text) + "'");
}

std::string_view to_string(TaskStatus status) {
  switch (status) {
    case TaskStatus::ok: return "ok";
    case TaskStatus::config_error: return "config_error";
    case TaskStatus::capacity_error: return "capacity_error";
    case TaskStatus::numerical_error: return "numerical_error";
  }
  return "?";
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string fmt(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string size_suffix(const SystemSize& s) {
  return "_N" + std::to_string(s.particles) + "_L" + std::to_string(s.sites);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

void validate(const ExperimentConfig& c) {
  if (c.U <= 0.0 || !std::isfinite(c.U)) throw ConfigError("U must be positive");
  if (c.workers < 1) throw ConfigError("--workers must be >= 1");
  for (const auto& s : c.sizes) {
    if (s.sites < 2) throw ConfigError("L must be >= 2");
    if (s.particles < 1) throw ConfigError("N must be >= 1");
  }
  if (c.mode == Mode::evolve || c.mode == Mode::sweep_dynamics) {
    if (!(c.dt_sample > 0.0)) throw ConfigError("--dt-sample must be positive");
    if (!(c.t_max > 0.0)) throw ConfigError("--tmax must be positive");
  }
}

TaskStatus classify(const std::exception& e) {
  if (dynamic_cast<const CapacityError*>(&e)) return TaskStatus::capacity_error;
  if (dynamic_cast<const NumericalError*>(&e)) return TaskStatus::numerical_error;
  return TaskStatus::config_error;
}

// Runs one task body, recording timing and any failure.
template <class F>
void guarded(TaskRecord& record, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    record.status = classify(e);
    record.message = e.what();
  }
  record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json grid_json(const ExperimentConfig& c) {
  json values = json::array();
  for (double v : c.grid.values()) values.push_back(fmt(v));
  return {{"param", std::string(to_string(c.grid.param))}, {"values", values}};
}

fs::path write_manifest(const ExperimentConfig& c, RunReport& report, double elapsed) {
  json files = json::array();
  for (const auto& f : report.files) {
    files.push_back({{"path", fs::relative(f, c.out).generic_string()},
                     {"sha256", file_sha256(f)},
                     {"bytes", fs::file_size(f)}});
  }
  json tasks = json::array();
  for (const auto& t : report.tasks) {
    json entry = {{"id", t.id}, {"status", std::string(to_string(t.status))}, {"seconds", t.seconds}};
    if (!t.message.empty()) entry["message"] = t.message;
    tasks.push_back(entry);
  }
  json manifest = {{"code_version", std::string(version())},
                   {"mode", std::string(to_string(c.mode))},
                   {"config", json::parse(c.canonical_json())},
                   {"config_hash", c.hash()},
                   {"grid", grid_json(c)},
                   {"tasks", tasks},
                   {"files", files},
                   {"elapsed_seconds", elapsed}};
  std::string name(to_string(c.mode));
  std::replace(name.begin(), name.end(), '-', '_');
  const fs::path path = c.out / ("manifest_" + name + ".json");
  write_text(path, manifest.dump(2) + "\n");
  return path;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// One assembled Hamiltonian per size, shared read-only by that size's tasks.
struct SizeContext {
  SystemSize size;
  std::optional<SparseHamiltonian> hamiltonian;
  std::optional<FockState> initial;
  TaskRecord setup;
};

std::vector<SizeContext> prepare_sizes(const ExperimentConfig& c, bool dynamics) {
  std::vector<SizeContext> out;
  for (const auto& s : c.sizes) {
    SizeContext ctx;
    ctx.size = s;
    ctx.setup.id = "setup" + size_suffix(s);
    guarded(ctx.setup, [&] {
      auto basis = enumerate_basis(s.particles, s.sites);
      Parity parity = Parity::even;
      if (dynamics) {
        ctx.initial = make_state({c.state, s.particles, s.sites, c.ell});
        parity = natural_sector(*ctx.initial);
      }
      auto sector = parity == Parity::none ? full_sector(basis) : build_parity_basis(basis, parity);
      ctx.hamiltonian = assemble(sector, {0.0, c.U});
    });
    out.push_back(std::move(ctx));
  }
  return out;
}

struct Cell {
  std::size_t size_index;
  double value;
};

std::vector<Cell> cells_of(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  const auto grid = c.grid.values();
  for (std::size_t s = 0; s < c.sizes.size(); ++s) {
    for (double v : grid) cells.push_back({s, v});
  }
  return cells;
}

std::string cell_id(const ExperimentConfig& c, const SystemSize& s, double value) {
  return std::string(to_string(c.grid.param)) + "=" + fmt(value) + size_suffix(s);
}

void require_sizes(const ExperimentConfig& c) {
  if (c.sizes.empty()) throw ConfigError("at least one system size (--n) is required");
}

void append_windows(std::string& csv, double gamma, const FractalStatistics& stats) {
  for (const auto& w : stats.windows) {
    csv += fmt(gamma) + "," + std::to_string(w.id) + "," + fmt(w.center) + "," + fmt(w.mean_d1) + "," +
           fmt(w.var_d1) + "," + std::to_string(w.count) + "\n";
  }
}

}  // namespace

std::vector<double> log_grid(double min, double max, int count) {
  if (count < 1) throw ConfigError("grid must contain at least one point");
  if (!(min > 0.0) || !(max >= min) || !std::isfinite(max)) {
    throw ConfigError("grid bounds must satisfy 0 < min <= max");
  }
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    const double raw = min * std::pow(max / min, t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", raw);
    out.push_back(std::strtod(buf, nullptr));
  }
  return out;
}

std::string ExperimentConfig::canonical_json() const {
  json sizes_json = json::array();
  for (const auto& s : sizes) sizes_json.push_back({s.particles, s.sites});
  json j = {{"mode", std::string(to_string(mode))},
            {"sizes", sizes_json},
            {"ell", ell},
            {"grid", {{"param", std::string(to_string(grid.param))},
                      {"min", grid.min},
                      {"max", grid.max},
                      {"count", grid.count}}},
            {"state", std::string(to_string(state))},
            {"U", U},
            {"dense_cap", dense_cap},
            {"eps_windows", eps_windows},
            {"nearest_count", nearest_count},
            {"percentage_windows", percentage_windows},
            {"goe_samples", goe_samples},
            {"seed", seed},
            {"t_max", t_max},
            {"dt_sample", dt_sample},
            {"t_i", t_i},
            {"t_f", t_f},
            {"propagator", {{"dt", propagator.dt},
                            {"cutoff", propagator.cutoff},
                            {"padding", propagator.padding},
                            {"max_step_drift", propagator.max_step_drift},
                            {"edge_exact_cap", propagator.edges.exact_cap},
                            {"edge_tolerance", propagator.edges.relative_tolerance},
                            {"edge_seed", propagator.edges.seed}}}};
  return j.dump();
}

std::string ExperimentConfig::hash() const {
  const std::string text = canonical_json();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

std::string file_sha256(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

CouplingParameters grid_coupling(const ExperimentConfig& config, double value, int particles) {
  const double gamma = config.grid.param == GridParam::gamma ? value : value * particles;
  return CouplingParameters::from_gamma(gamma, config.U);
}

TaskStatus RunReport::worst() const {
  for (const auto& t : tasks) {
    if (t.status != TaskStatus::ok) return t.status;
  }
  return TaskStatus::ok;
}

void run_tasks(std::size_t count, int workers, const std::function<void(std::size_t)>& job) {
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<StateKind> available_references(int particles, int sites, int ell) {
  std::vector<StateKind> out;
  for (StateKind k : {StateKind::homogeneous, StateKind::staggered, StateKind::localized}) {
    try {
      make_state({k, particles, sites, ell});
      out.push_back(k);
    } catch (const ConfigError&) {
    }
  }
  return out;
}

D1Cell analyze_d1(const SparseHamiltonian& hamiltonian, const ExperimentConfig& config) {
  D1Cell cell;
  cell.gamma = hamiltonian.params().gamma();
  const auto data = diagonalize(hamiltonian, {config.dense_cap, true});
  cell.dimension = data.size();
  const auto d1 = fractal_dimensions(data);
  cell.eps = windowed_statistics(data, d1, WindowScheme::equal_eps_width(config.eps_windows));
  const auto& fock = hamiltonian.basis().fock();
  for (StateKind kind : available_references(fock.particles(), fock.sites(), config.ell)) {
    const double e_ref = fock_energy(make_state({kind, fock.particles(), fock.sites(), config.ell}),
                                     hamiltonian.params());
    cell.nearest.emplace_back(
        kind, windowed_statistics(data, d1, WindowScheme::equal_count_around(e_ref, config.nearest_count)));
    cell.percentage.emplace_back(
        kind, windowed_statistics(data, d1, WindowScheme::spectrum_percentage(e_ref, config.percentage_windows)));
  }
  return cell;
}

std::vector<double> sample_times(double t_max, double dt_sample) {
  if (!(dt_sample > 0.0) || !(t_max >= 0.0)) throw ConfigError("invalid sampling grid");
  const auto steps = static_cast<long>(std::floor(t_max / dt_sample + 1e-9));
  std::vector<double> t;
  t.reserve(steps + 1);
  for (long k = 0; k <= steps; ++k) t.push_back(k * dt_sample);
  return t;
}

DynamicsCell simulate_dynamics(const SparseHamiltonian& hamiltonian, const FockState& initial,
                               const ExperimentConfig& config) {
  const auto& basis = hamiltonian.basis();
  const int N = initial.particles();
  const int L = initial.sites();
  DynamicsCell cell;
  cell.gamma = hamiltonian.params().gamma();
  cell.eta = hamiltonian.params().eta(N);
  cell.series.particles = N;
  cell.series.sites = L;
  cell.series.density = static_cast<double>(N) / L;
  const auto times = sample_times(config.t_max, config.dt_sample);
  evolve(hamiltonian, to_sector_vector(initial, basis), times, config.propagator,
         [&](const PropagationState& s) { cell.series.samples.push_back(measure(s, basis, cell.series.density)); });
  if (config.t_max >= config.t_f) cell.summary = summarize(cell.series, config.t_i, config.t_f);
  return cell;
}

RunReport run_spectrum(const ExperimentConfig& config) {
  validate(config);
  require_sizes(config);
  Timer timer;
  fs::create_directories(config.out);
  RunReport report;
  auto sizes = prepare_sizes(config, false);
  const auto cells = cells_of(config);
  std::vector<std::string> rows(cells.size());
  std::vector<TaskRecord> records(cells.size());
  run_tasks(cells.size(), config.workers, [&](std::size_t i) {
    const auto& ctx = sizes[cells[i].size_index];
    records[i].id = cell_id(config, ctx.size, cells[i].value);
    if (!ctx.hamiltonian) {
      records[i].status = ctx.setup.status;
      records[i].message = ctx.setup.message;
      return;
    }
    guarded(records[i], [&] {
      auto h = ctx.hamiltonian->with_couplings(grid_coupling(config, cells[i].value, ctx.size.particles));
      const auto data = diagonalize(h, {config.dense_cap, true});
      const auto d1 = fractal_dimensions(data);
      std::string& csv = rows[i];
      for (std::size_t k = 0; k < data.size(); ++k) {
        const double e = data.eigenvalues(static_cast<Eigen::Index>(k));
        csv += fmt(h.params().gamma()) + "," + std::to_string(k) + "," + fmt(e) + "," +
               fmt(scaled_energy(e, data)) + "," + fmt(d1[k]) + "\n";
      }
    });
  });
  for (const auto& ctx : sizes) {
    if (ctx.setup.status != TaskStatus::ok) report.tasks.push_back(ctx.setup);
  }
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    std::string csv = "gamma,index,energy,eps,D1\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].size_index == s) csv += rows[i];
    }
    const auto path = config.out / ("spectrum" + size_suffix(sizes[s].size) + ".csv");
    write_text(path, csv);
    report.files.push_back(path);
  }
  report.tasks.insert(report.tasks.end(), records.begin(), records.end());
  report.manifest = write_manifest(config, report, timer.seconds());
  return report;
}

RunReport run_sweep_d1(const ExperimentConfig& config) {
  validate(config);
  require_sizes(config);
  Timer timer;
  fs::create_directories(config.out);
  RunReport report;
  auto sizes = prepare_sizes(config, false);
  const auto cells = cells_of(config);
  std::vector<std::optional<D1Cell>> results(cells.size());
  std::vector<TaskRecord> records(cells.size());
  run_tasks(cells.size(), config.workers, [&](std::size_t i) {
    const auto& ctx = sizes[cells[i].size_index];
    records[i].id = cell_id(config, ctx.size, cells[i].value);
    if (!ctx.hamiltonian) {
      records[i].status = ctx.setup.status;
      records[i].message = ctx.setup.message;
      return;
    }
    guarded(records[i], [&] {
      results[i] = analyze_d1(
          ctx.hamiltonian->with_couplings(grid_coupling(config, cells[i].value, ctx.size.particles)), config);
    });
  });

  const std::string eps_header = "gamma,window_id,eps_center,mean_D1,var_D1,count\n";
  const std::string pct_header = "gamma,window_id,spectrum_percentage,mean_D1,var_D1,count\n";
  std::string goe = "N,L,dimension,samples,seed,goe_D1_sampled,goe_D1_analytic\n";
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const auto& ctx = sizes[s];
    if (!ctx.hamiltonian) {
      report.tasks.push_back(ctx.setup);
      continue;
    }
    const auto suffix = size_suffix(ctx.size);
    std::string eps_csv = eps_header;
    std::map<StateKind, std::string> nearest_csv, pct_csv;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].size_index != s || !results[i]) continue;
      const auto& r = *results[i];
      append_windows(eps_csv, r.gamma, r.eps);
      for (const auto& [kind, stats] : r.nearest) {
        auto& csv = nearest_csv[kind];
        if (csv.empty()) csv = pct_header;
        append_windows(csv, r.gamma, stats);
      }
      for (const auto& [kind, stats] : r.percentage) {
        auto& csv = pct_csv[kind];
        if (csv.empty()) csv = pct_header;
        append_windows(csv, r.gamma, stats);
      }
    }
    auto emit = [&](const std::string& name, const std::string& csv) {
      const auto path = config.out / (name + suffix + ".csv");
      write_text(path, csv);
      report.files.push_back(path);
    };
    emit("d1_eps", eps_csv);
    for (const auto& [kind, csv] : nearest_csv) emit("d1_nearest_" + std::string(to_string(kind)), csv);
    for (const auto& [kind, csv] : pct_csv) emit("d1_percentage_" + std::string(to_string(kind)), csv);

    const std::size_t dim = ctx.hamiltonian->dimension();
    bool any_ok = false;
    for (std::size_t i = 0; i < cells.size(); ++i) any_ok |= cells[i].size_index == s && results[i].has_value();
    if (any_ok && dim >= 2 && config.goe_samples > 0) {
      goe += std::to_string(ctx.size.particles) + "," + std::to_string(ctx.size.sites) + "," +
             std::to_string(dim) + "," + std::to_string(config.goe_samples) + "," +
             std::to_string(config.seed) + "," + fmt(goe_reference_d1(dim, config.goe_samples, config.seed)) +
             "," + fmt(goe_reference_d1_analytic(dim)) + "\n";
    }
  }
  const auto goe_path = config.out / "goe_reference.csv";
  write_text(goe_path, goe);
  report.files.push_back(goe_path);
  report.tasks.insert(report.tasks.end(), records.begin(), records.end());
  report.manifest = write_manifest(config, report, timer.seconds());
  return report;
}

namespace {

RunReport run_dynamics(const ExperimentConfig& config) {
  validate(config);
  require_sizes(config);
  Timer timer;
  fs::create_directories(config.out);
  RunReport report;
  auto sizes = prepare_sizes(config, true);
  const auto cells = cells_of(config);
  std::vector<std::optional<DynamicsCell>> results(cells.size());
  std::vector<TaskRecord> records(cells.size());
  run_tasks(cells.size(), config.workers, [&](std::size_t i) {
    const auto& ctx = sizes[cells[i].size_index];
    records[i].id = cell_id(config, ctx.size, cells[i].value);
    if (!ctx.hamiltonian) {
      records[i].status = ctx.setup.status;
      records[i].message = ctx.setup.message;
      return;
    }
    guarded(records[i], [&] {
      results[i] = simulate_dynamics(
          ctx.hamiltonian->with_couplings(grid_coupling(config, cells[i].value, ctx.size.particles)),
          *ctx.initial, config);
      // Report the grid variable as given, not as a round trip through the other one.
      if (config.grid.param == GridParam::eta) {
        results[i]->eta = cells[i].value;
      } else {
        results[i]->gamma = cells[i].value;
      }
    });
  });

  const std::string kind(to_string(config.state));
  const bool with_summary = config.t_max >= config.t_f;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const auto& ctx = sizes[s];
    if (!ctx.hamiltonian) {
      report.tasks.push_back(ctx.setup);
      continue;
    }
    const std::string N = std::to_string(ctx.size.particles), L = std::to_string(ctx.size.sites);
    std::string ts = "tau,gamma,eta,N,L,state_kind,n_c,dn_c2,sigma,F\n";
    std::string dens = "gamma,eta,tau,site,value\n";
    std::string sum =
        "gamma,eta,N,L,state_kind,mean_n_c,var_n_c,mean_dn_c2,rel_var_dn_c2,mean_sigma,mean_F,F0,"
        "F_scaled,mean_F_reported,status\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].size_index != s) continue;
      if (!results[i]) {
        const auto c = grid_coupling(config, cells[i].value, ctx.size.particles);
        const bool by_eta = config.grid.param == GridParam::eta;
        sum += fmt(by_eta ? c.gamma() : cells[i].value) + "," +
               fmt(by_eta ? cells[i].value : c.eta(ctx.size.particles)) + "," + N + "," + L + "," + kind +
               ",,,,,,,,,," + std::string(to_string(records[i].status)) + "\n";
        continue;
      }
      const auto& r = *results[i];
      const std::string head = fmt(r.gamma) + "," + fmt(r.eta);
      for (const auto& smp : r.series.samples) {
        ts += fmt(smp.tau) + "," + head + "," + N + "," + L + "," + kind + "," + fmt(smp.n_c) + "," +
              fmt(smp.dn_c2) + "," + fmt(smp.sigma) + "," + fmt(smp.F) + "\n";
        for (std::size_t j = 0; j < smp.densities.size(); ++j) {
          dens += head + "," + fmt(smp.tau) + "," + std::to_string(j + 1) + "," + fmt(smp.densities[j]) + "\n";
        }
      }
      if (with_summary) {
        const auto& m = r.summary;
        sum += head + "," + N + "," + L + "," + kind + "," + fmt(m.mean_n_c) + "," + fmt(m.var_n_c) + "," +
               fmt(m.mean_dn_c2) + "," + fmt(m.rel_var_dn_c2) + "," + fmt(m.mean_sigma) + "," +
               fmt(m.mean_F) + "," + fmt(m.F0) + "," + (m.F_scaled ? "1" : "0") + "," +
               fmt(m.mean_F_reported) + ",ok\n";
      }
    }
    const auto suffix = "_" + kind + size_suffix(ctx.size) + ".csv";
    for (const auto& [name, text] : {std::pair{"timeseries", &ts}, std::pair{"density", &dens}}) {
      const auto path = config.out / (name + suffix);
      write_text(path, *text);
      report.files.push_back(path);
    }
    if (with_summary) {
      const auto path = config.out / ("summary" + suffix);
      write_text(path, sum);
      report.files.push_back(path);
    }
  }
  report.tasks.insert(report.tasks.end(), records.begin(), records.end());
  report.manifest = write_manifest(config, report, timer.seconds());
  return report;
}

}  // namespace

RunReport run_evolve(const ExperimentConfig& config) {
  if (config.grid.count != 1) throw ConfigError("evolve runs a single grid point (use --gamma or --eta)");
  return run_dynamics(config);
}

RunReport run_sweep_dynamics(const ExperimentConfig& config) { return run_dynamics(config); }

RunReport report_thresholds(const ExperimentConfig& config, std::ostream& table) {
  validate(config);
  Timer timer;
  fs::create_directories(config.out);
  RunReport report;
  std::string csv = "state_kind,N,L,ell,gamma_c,eta_c,gamma_c_value,eta_c_value,regime\n";
  table << std::left << std::setw(13) << "state" << std::setw(6) << "N" << std::setw(6) << "L" << std::setw(5)
        << "ell" << std::setw(12) << "gamma_c" << std::setw(12) << "eta_c" << "regime\n";
  auto row = [&](StateKind kind, const std::string& N, const std::string& L, const ThresholdEstimate& est) {
    const std::string g = est.gamma_c ? fmt(*est.gamma_c) : "";
    const std::string e = est.eta_c ? fmt(*est.eta_c) : "";
    const std::string gv = est.gamma_c ? fmt(boost::rational_cast<double>(*est.gamma_c)) : "";
    const std::string ev = est.eta_c ? fmt(boost::rational_cast<double>(*est.eta_c)) : "";
    csv += std::string(to_string(kind)) + "," + N + "," + L + "," + std::to_string(config.ell) + "," + g + "," +
           e + "," + gv + "," + ev + "," + std::string(to_string(est.regime)) + "\n";
    table << std::setw(13) << to_string(kind) << std::setw(6) << N << std::setw(6) << L << std::setw(5)
          << config.ell << std::setw(12) << (g.empty() ? "-" : g) << std::setw(12) << (e.empty() ? "-" : e)
          << to_string(est.regime) << "\n";
  };
  for (const auto& s : config.sizes) {
    for (StateKind kind : available_references(s.particles, s.sites, config.ell)) {
      row(kind, std::to_string(s.particles), std::to_string(s.sites),
          threshold({kind, s.particles, s.sites, config.ell}));
    }
  }
  for (StateKind kind : {StateKind::homogeneous, StateKind::staggered, StateKind::localized}) {
    row(kind, "inf", "inf", asymptotic_threshold(kind, Rational(1), config.ell));
  }
  const auto path = config.out / "thresholds.csv";
  write_text(path, csv);
  report.files.push_back(path);
  report.manifest = write_manifest(config, report, timer.seconds());
  return report;
}

RunReport staggered_table(const ExperimentConfig& config, std::ostream& table) {
  validate(config);
  Timer timer;
  fs::create_directories(config.out);
  RunReport report;
  std::vector<int> lengths;
  for (const auto& s : config.sizes) {
    if (s.particles != s.sites) throw ConfigError("staggered states are defined for N = L");
    lengths.push_back(s.sites);
  }
  if (lengths.empty()) lengths = {10, 11, 13, 14, 16, 17};
  std::string csv = "L,state,energy_over_U,mm_energy_over_U,distance_over_U\n";
  table << std::left << std::setw(5) << "L" << std::setw(22) << "state" << std::setw(8) << "E/U"
        << std::setw(10) << "E_MM/U" << "|E-E_MM|/U\n";
  for (int L : lengths) {
    const auto state = make_staggered(L, L);
    const Rational e(fock_energy_units(state));
    const Rational mm = mm_energy_units(L, L);
    const Rational d = boost::abs(e - mm);
    csv += std::to_string(L) + "," + state.to_string() + "," + fmt(e) + "," + fmt(mm) + "," + fmt(d) + "\n";
    table << std::setw(5) << L << std::setw(22) << ("|" + state.to_string() + ">") << std::setw(8) << fmt(e)
          << std::setw(10) << fmt(mm) << fmt(d) << "\n";
  }
  const auto path = config.out / "staggered_table.csv";
  write_text(path, csv);
  report.files.push_back(path);
  report.manifest = write_manifest(config, report, timer.seconds());
  return report;
}

RunReport run(const ExperimentConfig& config, std::ostream& table) {
  switch (config.mode) {
    case Mode::spectrum: return run_spectrum(config);
    case Mode::sweep_d1: return run_sweep_d1(config);
    case Mode::evolve: return run_evolve(config);
    case Mode::sweep_dynamics: return run_sweep_dynamics(config);
    case Mode::thresholds: return report_thresholds(config, table);
    case Mode::staggered_table: return staggered_table(config, table);
  }
  throw ConfigError("unknown mode");
}

}  // namespace bhchaos
