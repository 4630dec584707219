#include "bohm/trajectories.hpp"

#include "bohm/frame_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

namespace bohm {

bool Ensemble::flagged() const { return std::any_of(aborted.begin(), aborted.end(), [](char a) { return a != 0; }); }

CumulativeMass::CumulativeMass(const Grid1D& grid, const Eigen::ArrayXd& density) : grid_(grid) {
  if (density.size() != grid.n_points()) throw std::invalid_argument("CumulativeMass: density size mismatch");
  if ((density < 0.0).any()) throw std::invalid_argument("CumulativeMass: negative density");
  partial_.resize(static_cast<std::size_t>(grid.n_points()) + 1);
  partial_[0] = 0.0;
  for (int i = 0; i < grid.n_points(); ++i) partial_[static_cast<std::size_t>(i) + 1] = partial_[static_cast<std::size_t>(i)] + density[i];
  const double total = partial_.back();
  if (!(total > 0.0) || !std::isfinite(total)) throw std::invalid_argument("CumulativeMass: degenerate (zero-norm) density");
  for (double& p : partial_) p /= total;
  partial_.back() = 1.0;
}

double CumulativeMass::operator()(double x) const {
  const double s = (x - cell_lower_edge(0)) / grid_.dx();
  if (s <= 0.0) return 0.0;
  const int n = grid_.n_points();
  if (s >= n) return 1.0;
  const int i = static_cast<int>(s);
  const double frac = s - i;
  const auto u = static_cast<std::size_t>(i);
  return partial_[u] + frac * (partial_[u + 1] - partial_[u]);
}

double CumulativeMass::inverse(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  // First cell whose upper cumulative bound exceeds u; zero-mass cells are skipped.
  auto it = std::upper_bound(partial_.begin() + 1, partial_.end(), u);
  if (it == partial_.end()) --it;
  const auto cell = static_cast<int>(it - partial_.begin()) - 1;
  const double lo = partial_[static_cast<std::size_t>(cell)];
  const double hi = partial_[static_cast<std::size_t>(cell) + 1];
  const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.5;
  return cell_lower_edge(cell) + frac * grid_.dx();
}

std::vector<double> sample_density(const Grid1D& grid, const Eigen::ArrayXd& density, int n, const CounterRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_positions: n must be >= 1");
  const CumulativeMass cdf(grid, density);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = cdf.inverse(rng.uniform(static_cast<std::uint64_t>(i)));
  return out;
}

std::vector<double> sample_positions(const SpinorField& field, int n, std::uint64_t seed) {
  return sample_density(field.grid, field.density(), n, CounterRng(seed));
}

namespace {

class VelocityFrames {
 public:
  explicit VelocityFrames(const std::vector<SpinorField>& frames) : grid_(frames.front().grid) {
    velocities_.reserve(frames.size());
    for (const auto& f : frames) velocities_.push_back(velocity_field(f));
  }

  /// Linear in space (periodic wrap between the last node and x_max) and
  /// linear in time between frames `frame` and `frame + 1`. Returns NaN off-grid.
  double at(double x, int frame, double tau) const {
    if (!(x >= grid_.x_min() && x < grid_.x_max())) return std::numeric_limits<double>::quiet_NaN();
    const double s = (x - grid_.x_min()) / grid_.dx();
    const int n = grid_.n_points();
    const int i = std::min(static_cast<int>(s), n - 1);
    const double w = s - i;
    const int j = (i + 1) % n;
    const auto& v0 = velocities_[static_cast<std::size_t>(frame)];
    const double a = (1.0 - w) * v0[i] + w * v0[j];
    if (tau == 0.0) return a;
    const auto& v1 = velocities_[static_cast<std::size_t>(frame) + 1];
    const double b = (1.0 - w) * v1[i] + w * v1[j];
    return (1.0 - tau) * a + tau * b;
  }

 private:
  Grid1D grid_;
  std::vector<Eigen::ArrayXd> velocities_;
};

void check_frames(const std::vector<SpinorField>& frames) {
  if (frames.size() < 2) throw std::invalid_argument("integrate: need at least two frames");
  const double spacing = frames[1].time - frames[0].time;
  if (!(spacing > 0.0)) throw std::invalid_argument("integrate: frame times must be ascending");
  for (std::size_t f = 1; f < frames.size(); ++f) {
    if (!(frames[f].grid == frames[0].grid)) throw std::invalid_argument("integrate: frames use different grids");
    if (std::abs(frames[f].time - frames[f - 1].time - spacing) > 1e-9 * spacing)
      throw std::invalid_argument("integrate: frame spacing is not uniform");
  }
}

}  // namespace

Ensemble integrate(const std::vector<SpinorField>& frames, std::span<const double> initial_positions,
                   int substeps_per_frame, int record_stride) {
  check_frames(frames);
  if (substeps_per_frame < 1) throw std::invalid_argument("integrate: substeps_per_frame must be >= 1");
  const int n_intervals = static_cast<int>(frames.size()) - 1;
  if (record_stride < 1 || n_intervals % record_stride != 0)
    throw std::invalid_argument("integrate: record_stride must divide the number of frame intervals");

  const VelocityFrames field(frames);
  const double frame_dt = frames[1].time - frames[0].time;
  const double h = frame_dt / substeps_per_frame;
  const int n = static_cast<int>(initial_positions.size());
  const int n_recorded = n_intervals / record_stride + 1;

  Ensemble e;
  for (int r = 0; r < n_recorded; ++r) e.frame_times.push_back(frames[static_cast<std::size_t>(r * record_stride)].time);
  e.positions.resize(n, n_recorded);
  e.aborted.assign(static_cast<std::size_t>(n), 0);

  auto run = [&](int begin, int end) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int k = begin; k < end; ++k) {
      double x = initial_positions[static_cast<std::size_t>(k)];
      bool alive = std::isfinite(field.at(x, 0, 0.0));
      e.positions(k, 0) = alive ? x : nan;
      for (int f = 0; f < n_intervals; ++f) {
        for (int s = 0; alive && s < substeps_per_frame; ++s) {
          const double t0 = static_cast<double>(s) / substeps_per_frame;
          const double th = (s + 0.5) / substeps_per_frame;
          const double t1 = static_cast<double>(s + 1) / substeps_per_frame;
          const double k1 = field.at(x, f, t0);
          const double k2 = field.at(x + 0.5 * h * k1, f, th);
          const double k3 = field.at(x + 0.5 * h * k2, f, th);
          const double k4 = field.at(x + h * k3, f, t1);
          x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
          alive = std::isfinite(x) && x >= frames[0].grid.x_min() && x < frames[0].grid.x_max();
        }
        if ((f + 1) % record_stride == 0) e.positions(k, (f + 1) / record_stride) = alive ? x : nan;
      }
      e.aborted[static_cast<std::size_t>(k)] = alive ? 0 : 1;
    }
  };

  // Each worker owns a disjoint block of rows, so the result is independent
  // of scheduling.
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(1, n / 512));
  if (workers == 1) {
    run(0, n);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, std::min(n, w * chunk), std::min(n, (w + 1) * chunk));
    for (auto& t : pool) t.join();
  }
  return e;
}

NoCrossingReport check_no_crossing(const Ensemble& ensemble) {
  NoCrossingReport report;
  if (ensemble.n_trajectories() < 2) return report;
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(ensemble.n_trajectories()));
  for (Eigen::Index i = 0; i < ensemble.positions.rows(); ++i) order.push_back(static_cast<int>(i));
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double xa = ensemble.positions(a, 0), xb = ensemble.positions(b, 0);
    return xa < xb || (xa == xb && a < b);
  });
  for (int f = 1; f < ensemble.n_frames(); ++f) {
    for (std::size_t i = 1; i < order.size(); ++i) {
      const int lo = order[i - 1];
      const int hi = order[i];
      if (!(ensemble.positions(lo, 0) < ensemble.positions(hi, 0))) continue;
      const double a = ensemble.positions(lo, f), b = ensemble.positions(hi, f);
      if (std::isnan(a) || std::isnan(b)) continue;
      if (!(a < b)) {
        ++report.violations;
        if (!report.first_violation) report.first_violation = NoCrossingReport::Violation{lo, hi, f};
      }
    }
  }
  return report;
}

HistogramComparison histogram_distance(std::span<const double> positions, const SpinorField& field, int n_bins) {
  if (n_bins < 10) throw std::invalid_argument("equilibrium_distance: n_bins must be >= 10");
  const Grid1D& g = field.grid;
  const CumulativeMass cdf(g, field.density());
  const int n = g.n_points();
  constexpr double kTail = 1e-10;

  int c_lo = 0;
  while (c_lo < n - 1 && cdf.before_cell(c_lo + 1) <= kTail) ++c_lo;
  int c_hi = n - 1;
  while (c_hi > c_lo && cdf.before_cell(c_hi) >= 1.0 - kTail) --c_hi;

  const int used = c_hi - c_lo + 1;
  const int cells_per_bin = (used + n_bins - 1) / n_bins;
  const int span = cells_per_bin * n_bins;
  int start = c_lo - (span - used) / 2;
  if (span <= n) start = std::clamp(start, 0, n - span);
  else start = 0;

  auto mass_before = [&](int cell) { return cdf.before_cell(std::clamp(cell, 0, n)); };
  const double bin_width = cells_per_bin * g.dx();
  const double edge0 = g.x(start) - 0.5 * g.dx();

  HistogramComparison h;
  h.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
  h.theoretical_mass.resize(static_cast<std::size_t>(n_bins));
  h.empirical_mass.assign(static_cast<std::size_t>(n_bins), 0.0);
  for (int b = 0; b <= n_bins; ++b) h.bin_edges[static_cast<std::size_t>(b)] = edge0 + b * bin_width;
  for (int b = 0; b < n_bins; ++b) {
    const double lo = b == 0 ? 0.0 : mass_before(start + b * cells_per_bin);
    const double hi = b == n_bins - 1 ? 1.0 : mass_before(start + (b + 1) * cells_per_bin);
    h.theoretical_mass[static_cast<std::size_t>(b)] = hi - lo;
  }

  long valid = 0;
  for (double p : positions) {
    if (!std::isfinite(p)) continue;
    const double s = std::floor((p - edge0) / bin_width);
    const int b = static_cast<int>(std::clamp(s, 0.0, static_cast<double>(n_bins - 1)));
    h.empirical_mass[static_cast<std::size_t>(b)] += 1.0;
    ++valid;
  }
  if (valid == 0) throw std::invalid_argument("equilibrium_distance: ensemble has no valid positions");
  for (double& m : h.empirical_mass) m /= static_cast<double>(valid);

  double tv = 0.0;
  for (int b = 0; b < n_bins; ++b)
    tv += std::abs(h.empirical_mass[static_cast<std::size_t>(b)] - h.theoretical_mass[static_cast<std::size_t>(b)]);
  h.total_variation = 0.5 * tv;
  return h;
}

HistogramComparison equilibrium_distance(const Ensemble& ensemble, int frame_index, const SpinorField& field_at_frame,
                                         int n_bins) {
  if (ensemble.n_trajectories() < 1) throw std::invalid_argument("equilibrium_distance: empty ensemble");
  if (frame_index < 0 || frame_index >= ensemble.n_frames())
    throw std::invalid_argument("equilibrium_distance: frame index out of range");
  std::vector<double> column(static_cast<std::size_t>(ensemble.n_trajectories()));
  for (int i = 0; i < ensemble.n_trajectories(); ++i) column[static_cast<std::size_t>(i)] = ensemble.positions(i, frame_index);
  return histogram_distance(column, field_at_frame, n_bins);
}

void write_ensemble(std::ostream& out, const Ensemble& ensemble, std::string_view config_hash) {
  out << "# config_hash=" << config_hash << " seed=" << ensemble.seed << '\n';
  out << "trajectory_id,time,position\n";
  for (int i = 0; i < ensemble.n_trajectories(); ++i)
    for (int f = 0; f < ensemble.n_frames(); ++f)
      out << i << ',' << format_double(ensemble.frame_times[static_cast<std::size_t>(f)]) << ','
          << format_double(ensemble.positions(i, f)) << '\n';
}

}  // namespace bohm
