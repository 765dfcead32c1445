#include <doctest.h>

#include <cmath>

#include "bhchaos/error.hpp"
#include "bhchaos/observables.hpp"
#include "bhchaos/states.hpp"
#include "test_helpers.hpp"

using namespace bhchaos;
using cd = std::complex<double>;

namespace {

TimeSeries synthetic(double (*f)(double), double t_max, double dt) {
  TimeSeries ts;
  for (int k = 0; k * dt <= t_max + 1e-12; ++k) {
    ObservableSample s;
    s.tau = k * dt;
    s.n_c = s.dn_c2 = s.sigma = s.F = f(s.tau);
    ts.samples.push_back(s);
  }
  return ts;
}

std::vector<double> densities_of(const FockState& s) {
  return {s.occupations().begin(), s.occupations().end()};
}

}  // namespace

TEST_CASE("initial-state profiles") {
  auto even = build_parity_basis(enumerate_basis(10, 10), Parity::even);
  auto hom = site_densities(to_sector_vector(make_homogeneous(10, 10), *even), *even);
  for (double d : hom) CHECK(d == doctest::Approx(1.0));
  CHECK(cloud_width(hom) == doctest::Approx(1.0));
  CHECK(homogeneity_deficit(hom, 1.0) == 0.0);

  auto stag = site_densities(to_sector_vector(make_staggered(10, 10), *even), *even);
  CHECK(homogeneity_deficit(stag, 1.0) == doctest::Approx(1.6));

  auto loc = densities_of(make_localized(10, 10, 3));
  CHECK(homogeneity_deficit(loc, 1.0) == doctest::Approx(2.4));
  CHECK(cloud_width(loc) == doctest::Approx(std::sqrt(0.85) / std::sqrt(99.0 / 12.0)));

  auto center = densities_of(FockState::parse("0007000"));
  CHECK(cloud_width(center) == 0.0);
}

TEST_CASE("central site") {
  CHECK(central_site(10) == 4);
  CHECK(central_site(7) == 2);
  auto basis = full_sector(enumerate_basis(6, 5));
  auto stats = central_site_stats(to_sector_vector(FockState::parse("10320"), *basis), *basis);
  CHECK(stats.mean == 0.0);
  auto stats2 = central_site_stats(to_sector_vector(FockState::parse("03120"), *basis), *basis);
  CHECK(stats2.mean == 3.0);
  CHECK(stats2.variance == 0.0);

  // a paired member with different central occupations has a nonzero variance
  auto even = build_parity_basis(enumerate_basis(3, 4), Parity::even);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(even->size());
  v(even->member_of(FockState::parse("0300"))) = 1.0;
  auto paired = central_site_stats(v, *even);
  CHECK(paired.mean == doctest::Approx(1.5));
  CHECK(paired.variance == doctest::Approx(2.25));
}

TEST_CASE("time statistics") {
  auto constant = synthetic([](double) { return 0.7; }, 200, 0.5);
  CHECK(time_average(constant, Signal::n_c, 100, 200) == doctest::Approx(0.7));
  CHECK(temporal_variance(constant, Signal::n_c, 100, 200) == doctest::Approx(0.0));

  auto wave = synthetic([](double t) { return 2.0 * std::sin(2 * M_PI * t / 10.0); }, 200, 0.5);
  CHECK(time_average(wave, Signal::sigma, 100, 200) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(temporal_variance(wave, Signal::sigma, 100, 200) == doctest::Approx(2.0).epsilon(1e-12));

  auto ramp = synthetic([](double t) { return t; }, 200, 0.5);
  CHECK(time_average(ramp, Signal::F, 100, 200) == doctest::Approx(150.0));
  CHECK(relative_temporal_variance(ramp, Signal::dn_c2, 100, 200) ==
        doctest::Approx(temporal_variance(ramp, Signal::dn_c2, 100, 200) / 150.0));

  CHECK_THROWS_AS(time_average(ramp, Signal::n_c, 100, 250), ConfigError);
  CHECK_THROWS_AS(time_average(ramp, Signal::n_c, 100.25, 150), ConfigError);
  CHECK_THROWS_AS(time_average(ramp, Signal::n_c, 150, 100), ConfigError);
  CHECK_THROWS_AS(relative_temporal_variance(synthetic([](double) { return 0.0; }, 200, 0.5),
                                             Signal::dn_c2, 100, 200),
                  NumericalError);
}

TEST_CASE("observables along a propagated trajectory") {
  const int N = 6;
  auto h = assemble(build_parity_basis(enumerate_basis(N, N), Parity::even), CouplingParameters::from_gamma(2.5));
  const auto& basis = h.basis();
  auto psi0 = to_sector_vector(make_staggered(N, N), basis);

  // dense reference evolution, observables from the full Fock expansion
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.to_dense());
  Eigen::MatrixXd embed = oracle::sector_embedding(basis);
  auto reference = [&](double tau) {
    Eigen::VectorXcd c = es.eigenvectors().transpose().cast<cd>() * psi0;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -es.eigenvalues()(k) * tau / 2.5);
    Eigen::VectorXcd full = embed.cast<cd>() * (es.eigenvectors().cast<cd>() * c);
    std::vector<double> rho(N, 0.0);
    double nc = 0.0, nc2 = 0.0;
    for (Eigen::Index i = 0; i < full.size(); ++i) {
      auto occ = basis.fock().occupations(i);
      const double p = std::norm(full(i));
      for (int j = 0; j < N; ++j) rho[j] += p * occ[j];
      nc += p * occ[central_site(N)];
      nc2 += p * occ[central_site(N)] * occ[central_site(N)];
    }
    return std::tuple{rho, nc, nc2 - nc * nc};
  };

  std::vector<double> times;
  for (int k = 0; k <= 100; ++k) times.push_back(0.5 * k);
  TimeSeries ts;
  evolve(h, psi0, times, {}, [&](const PropagationState& s) { ts.samples.push_back(measure(s, basis, 1.0)); });
  for (const auto& s : ts.samples) {
    double total = 0.0;
    for (double d : s.densities) total += d;
    CHECK(total == doctest::Approx(N).epsilon(1e-10));
    for (int j = 0; j < N; ++j) CHECK(s.densities[j] == s.densities[N - 1 - j]);
    CHECK(s.dn_c2 >= 0.0);
    CHECK(s.sigma >= 0.0);
    CHECK(s.F >= 0.0);
  }
  for (double tau : {10.0, 50.0}) {
    const auto& s = ts.samples[static_cast<std::size_t>(tau / 0.5)];
    auto [rho, nc, dnc2] = reference(tau);
    for (int j = 0; j < N; ++j) CHECK(std::abs(s.densities[j] - rho[j]) < 1e-8);
    CHECK(std::abs(s.n_c - nc) < 1e-8);
    CHECK(std::abs(s.dn_c2 - dnc2) < 1e-8);
  }
  auto summary = summarize(ts, 25.0, 50.0);
  CHECK(summary.F_scaled);
  CHECK(summary.F0 == doctest::Approx(homogeneity_deficit(densities_of(make_staggered(N, N)), 1.0)));
  CHECK(summary.mean_F_reported == doctest::Approx(summary.mean_F / summary.F0));
}

TEST_CASE("vanishing tunneling freezes central fluctuations") {
  auto h = assemble(build_parity_basis(enumerate_basis(8, 8), Parity::even), {0.0, 1.0});
  auto psi0 = to_sector_vector(make_homogeneous(8, 8), h.basis());
  std::vector<double> times{0.0, 10.0, 100.0};
  for (const auto& s : evolve(h, psi0, times)) {
    auto st = central_site_stats(s.amplitudes, h.basis());
    CHECK(st.variance < 1e-18);
    CHECK(st.mean == doctest::Approx(1.0));
  }
  TimeSeries ts;
  for (int k = 0; k <= 4; ++k) ts.samples.push_back({25.0 * k, {1, 1}, 1.0, 0.0, 1.0, 0.0});
  auto summary = summarize(ts, 0.0, 100.0);
  CHECK_FALSE(summary.F_scaled);
  CHECK(summary.mean_F_reported == 0.0);
  CHECK(summary.rel_var_dn_c2 == 0.0);
}
