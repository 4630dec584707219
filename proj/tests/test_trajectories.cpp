#include "bohm/trajectories.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

using namespace bohm;

namespace {

// Exact free Gaussian (unnormalized): psi ~ exp(-x^2 / (4 s0^2 + 2 i t)).
// Its velocity field is linear in x: v = x t / (4 s0^4 + t^2).
SpinorField analytic_gaussian(const Grid1D& g, double s0, double t) {
  SpinorField f(g);
  const Complex denom(4 * s0 * s0, 2 * t);
  for (int i = 0; i < g.n_points(); ++i) f.up[i] = std::exp(-g.x(i) * g.x(i) / denom);
  f.time = t;
  return f;
}

std::vector<SpinorField> analytic_frames(const Grid1D& g, double s0, double spacing, int count) {
  std::vector<SpinorField> frames;
  for (int k = 0; k < count; ++k) frames.push_back(analytic_gaussian(g, s0, k * spacing));
  return frames;
}

SpinorField plane_wave(const Grid1D& g, double k, double t) {
  SpinorField f(g);
  for (int i = 0; i < g.n_points(); ++i) f.up[i] = std::polar(1.0, k * g.x(i) - 0.5 * k * k * t);
  f.time = t;
  return f;
}

}  // namespace

TEST_CASE("sampling a uniform density fills deciles evenly") {
  const Grid1D g(-1.0, 2.0, 1024);
  Eigen::ArrayXd rho = Eigen::ArrayXd::Zero(1024);
  for (int i = 0; i < 1024; ++i)
    if (g.x(i) >= 0.0 && g.x(i) < 1.0) rho[i] = 1.0;
  const auto xs = sample_density(g, rho, 100000, CounterRng(17));
  // Support runs from the lower edge of the first occupied cell to the upper edge of the last.
  int first = 0, last = 1023;
  while (rho[first] == 0.0) ++first;
  while (rho[last] == 0.0) --last;
  const double lo = g.x(first) - 0.5 * g.dx(), hi = g.x(last) + 0.5 * g.dx();
  std::array<int, 10> deciles{};
  for (double x : xs) {
    const int d = static_cast<int>(std::floor((x - lo) / (hi - lo) * 10.0));
    REQUIRE(d >= 0);
    REQUIRE(d < 10);
    ++deciles[static_cast<std::size_t>(d)];
  }
  for (int c : deciles) CHECK(std::abs(c / 1e5 - 0.1) < 0.01);
}

TEST_CASE("a point mass is sampled inside its cell") {
  const Grid1D g(-4, 4, 256);
  Eigen::ArrayXd rho = Eigen::ArrayXd::Zero(256);
  rho[77] = 3.0;
  for (double x : sample_density(g, rho, 1000, CounterRng(1))) {
    CHECK(x >= g.x(77) - 0.5 * g.dx());
    CHECK(x <= g.x(77) + 0.5 * g.dx());
  }
}

TEST_CASE("sampling is deterministic and seed-dependent") {
  const Grid1D g(-16, 16, 256);
  SpinorField f(g);
  for (int i = 0; i < 256; ++i) f.up[i] = std::exp(-g.x(i) * g.x(i) / 4);
  const auto a = sample_positions(f, 500, 5), b = sample_positions(f, 500, 5), c = sample_positions(f, 500, 6);
  CHECK(a == b);
  CHECK(a != c);
  CHECK_THROWS_AS(sample_positions(SpinorField(g), 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_positions(f, 0, 1), std::invalid_argument);
}

TEST_CASE("cumulative mass and its inverse are consistent") {
  const Grid1D g(-8, 8, 256);
  Eigen::ArrayXd rho(256);
  for (int i = 0; i < 256; ++i) rho[i] = std::exp(-g.x(i) * g.x(i) / 2) * (1.1 + std::sin(g.x(i)));
  const CumulativeMass cdf(g, rho);
  CHECK(cdf(g.x_min() - 1) == 0.0);
  CHECK(cdf(g.x_max() + 1) == 1.0);
  double previous = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 1000; ++k) {
    const double u = k / 1000.0;
    const double x = cdf.inverse(u);
    CHECK(x >= previous);
    previous = x;
    CHECK(std::abs(cdf(x) - u) < 1e-12);
  }
  Eigen::ArrayXd negative = rho;
  negative[3] = -1;
  CHECK_THROWS_AS(CumulativeMass(g, negative), std::invalid_argument);
}

TEST_CASE("constant velocity field translates rigidly") {
  const Grid1D g(-32, 32, 256);
  const double k = 2 * M_PI * 4 / g.length();
  std::vector<SpinorField> frames;
  for (int f = 0; f <= 10; ++f) frames.push_back(plane_wave(g, k, 0.2 * f));
  const std::vector<double> x0 = {-20.0, -3.3, 0.0, 7.77, 15.0};
  const Ensemble e = integrate(frames, x0, 4);
  CHECK_FALSE(e.flagged());
  REQUIRE(e.n_frames() == 11);
  for (int i = 0; i < e.n_trajectories(); ++i) {
    CHECK(std::abs(e.positions(i, 10) - (x0[static_cast<std::size_t>(i)] + k * 2.0)) < 1e-6);
  }
  CHECK(check_no_crossing(e).violations == 0);
}

TEST_CASE("a real static field leaves trajectories fixed") {
  const Grid1D g(-8, 8, 256);
  SpinorField f(g);
  for (int i = 0; i < 256; ++i) f.up[i] = std::exp(-g.x(i) * g.x(i) / 2);
  std::vector<SpinorField> frames(5, f);
  for (int k = 0; k < 5; ++k) frames[static_cast<std::size_t>(k)].time = 0.5 * k;
  const std::vector<double> x0 = {-1.234, 0.0, 0.5, 2.0};
  const Ensemble e = integrate(frames, x0, 3);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < e.n_frames(); ++k) CHECK(e.positions(i, k) == x0[static_cast<std::size_t>(i)]);
}

TEST_CASE("the centre trajectory of a moving free Gaussian follows the packet centre") {
  const Grid1D g(-32, 32, 512);
  const double width = 1.0, p = 1.5, x0 = -3.0;
  const double dt = max_time_step(g, PotentialSpec::free());
  const auto start = gaussian_packet(g, x0, width, p, 1.0, 0.0);
  const auto frames = evolve_frames(start, PotentialSpec::free(), dt, 6400, 64);
  const Ensemble e = integrate(frames, std::vector<double>{x0}, 4);
  for (int k = 0; k < e.n_frames(); ++k) {
    const double t = e.frame_times[static_cast<std::size_t>(k)];
    CHECK(std::abs(e.positions(0, k) - (x0 + p * t)) < 1e-3 * width);
  }
}

TEST_CASE("RK4 error drops at least eightfold per halving of the substep") {
  const Grid1D g(-64, 64, 2048);
  const auto frames = analytic_frames(g, 0.5, 0.25, 9);
  const std::vector<double> x0 = {-0.6, -0.2, 0.3, 0.7};
  const Ensemble reference = integrate(frames, x0, 16);
  double previous = 0.0;
  for (int s : {1, 2}) {
    const Ensemble run = integrate(frames, x0, s);
    double err = 0.0;
    for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(run.positions(i, 8) - reference.positions(i, 8)));
    MESSAGE("substeps " << s << ": terminal error " << err);
    if (s == 2) CHECK(previous / err >= 8.0);
    previous = err;
  }
  // Sanity: the exact field expands positions by sigma(t) / sigma(0).
  const double t = 2.0, s0 = 0.5;
  const double growth = std::sqrt(1 + std::pow(t / (2 * s0 * s0), 2));
  CHECK(std::abs(reference.positions(2, 8) / 0.3 - growth) / growth < 5e-2);
}

TEST_CASE("trajectories that leave the grid abort and flag the run") {
  const Grid1D g(-8, 8, 256);
  const double k = 2 * M_PI * 8 / g.length();
  std::vector<SpinorField> frames;
  for (int f = 0; f <= 4; ++f) frames.push_back(plane_wave(g, k, 0.5 * f));
  const Ensemble e = integrate(frames, std::vector<double>{0.0, 6.0, 20.0}, 4);
  CHECK(e.flagged());
  CHECK(e.aborted[0] == 0);
  CHECK(e.aborted[1] == 1);
  CHECK(e.aborted[2] == 1);
  CHECK(std::isnan(e.positions(1, 4)));
  CHECK(std::isnan(e.positions(2, 0)));
}

TEST_CASE("integrate validates its frames") {
  const Grid1D g(-8, 8, 256), h(-8, 8, 512);
  const auto a = plane_wave(g, 1.0, 0.0), b = plane_wave(g, 1.0, 0.5), c = plane_wave(g, 1.0, 1.5);
  const std::vector<double> x{0.0};
  CHECK_THROWS_AS(integrate({a}, x), std::invalid_argument);
  CHECK_THROWS_AS(integrate({a, b, c}, x), std::invalid_argument);
  CHECK_THROWS_AS(integrate({a, plane_wave(h, 1.0, 0.5)}, x), std::invalid_argument);
  CHECK_THROWS_AS(integrate({a, b}, x, 0), std::invalid_argument);
  CHECK_THROWS_AS(integrate({a, b, plane_wave(g, 1.0, 1.0)}, x, 4, 3), std::invalid_argument);
  const Ensemble e = integrate({a, b, plane_wave(g, 1.0, 1.0)}, x, 4, 2);
  CHECK(e.n_frames() == 2);
  CHECK(e.frame_times == std::vector<double>{0.0, 1.0});
}

TEST_CASE("integration is bit-reproducible") {
  const Grid1D g(-16, 16, 512);
  const auto frames = analytic_frames(g, 0.7, 0.25, 9);
  SpinorField f0 = frames.front();
  const auto x0 = sample_positions(f0, 4000, 99);
  const Ensemble a = integrate(frames, x0, 4), b = integrate(frames, x0, 4);
  CHECK(std::memcmp(a.positions.data(), b.positions.data(), sizeof(double) * static_cast<std::size_t>(a.positions.size())) == 0);
  CHECK(check_no_crossing(a).violations == 0);
}

TEST_CASE("no-crossing detects injected swaps") {
  Ensemble e;
  e.frame_times = {0.0, 1.0, 2.0};
  e.positions.resize(4, 3);
  e.positions << 0.0, 0.1, 0.2,  //
      1.0, 1.1, 1.2,             //
      2.0, 2.1, 2.2,             //
      3.0, 3.1, 3.2;
  e.aborted.assign(4, 0);
  CHECK(check_no_crossing(e).violations == 0);

  e.positions(1, 2) = 2.5;  // trajectory 1 overtakes trajectory 2 at frame 2
  const auto report = check_no_crossing(e);
  CHECK(report.violations >= 1);
  REQUIRE(report.first_violation.has_value());
  CHECK(report.first_violation->lower == 1);
  CHECK(report.first_violation->upper == 2);
  CHECK(report.first_violation->frame == 2);
}

TEST_CASE("total variation of direct samples is at sampling-noise level") {
  const Grid1D g(-32, 32, 256);
  const auto field = gaussian_packet(g, 1.0, 1.5, 0.0, 1.0, 0.0);
  const int n = 50000, bins = 64;
  const auto xs = sample_positions(field, n, 42);
  const auto h = histogram_distance(xs, field, bins);
  CHECK(h.total_variation < 2.0 * std::sqrt(static_cast<double>(bins) / n));
  CHECK(h.total_variation < 0.03);
  double se = 0, st = 0;
  for (std::size_t b = 0; b < h.empirical_mass.size(); ++b) {
    se += h.empirical_mass[b];
    st += h.theoretical_mass[b];
  }
  CHECK(std::abs(se - 1.0) < 1e-9);
  CHECK(std::abs(st - 1.0) < 1e-9);
  CHECK(h.bin_edges.size() == 65);
  CHECK_THROWS_AS(histogram_distance(xs, field, 9), std::invalid_argument);
}

TEST_CASE("a point mass matched by its single trajectory has zero distance") {
  const Grid1D g(-8, 8, 256);
  SpinorField f(g);
  f.up[100] = 1.0;
  const auto h = histogram_distance(std::vector<double>{g.x(100)}, f, 16);
  CHECK(h.total_variation == 0.0);
}

TEST_CASE("a non-equilibrium ensemble is far from the density") {
  const Grid1D g(-32, 32, 256);
  const auto field = gaussian_packet(g, 0.0, 2.0, 0.0, 1.0, 0.0);
  std::vector<double> xs;
  for (int i = 0; i < 50000; ++i) xs.push_back(-1.0 + 2.0 * CounterRng(3).uniform(static_cast<std::uint64_t>(i)));
  CHECK(histogram_distance(xs, field, 64).total_variation > 0.2);
}

TEST_CASE("ensemble export") {
  Ensemble e;
  e.seed = 7;
  e.frame_times = {0.0, 0.5};
  e.positions.resize(1, 2);
  e.positions << 0.1, 0.25;
  e.aborted.assign(1, 0);
  std::ostringstream out;
  write_ensemble(out, e, "00000000deadbeef");
  CHECK(out.str() == "# config_hash=00000000deadbeef seed=7\ntrajectory_id,time,position\n0,0,0.10000000000000001\n0,0.5,0.25\n");
}
