// Quantum-equilibrium sampling and guiding-equation trajectory integration
// over stored wave-function frames.

#ifndef BOHM_TRAJECTORIES_HPP_
#define BOHM_TRAJECTORIES_HPP_

#include "bohm/rng.hpp"
#include "bohm/wavefield.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bohm {

struct Ensemble {
  using PositionMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  std::uint64_t seed = 0;
  std::vector<double> frame_times;
  PositionMatrix positions;    // n_trajectories x frame_times.size(); NaN after an abort
  std::vector<char> aborted;   // trajectory left the grid

  int n_trajectories() const { return static_cast<int>(positions.rows()); }
  int n_frames() const { return static_cast<int>(positions.cols()); }
  bool flagged() const;
  std::span<const double> trajectory(int i) const {
    return {positions.data() + static_cast<std::ptrdiff_t>(i) * positions.cols(),
            static_cast<std::size_t>(positions.cols())};
  }
};

/// Normalized cumulative mass of a nonnegative nodal density, treating node i
/// as the cell [x_i - dx/2, x_i + dx/2) with uniform density inside.
class CumulativeMass {
 public:
  CumulativeMass(const Grid1D& grid, const Eigen::ArrayXd& density);

  double operator()(double x) const;
  double inverse(double u) const;
  /// Cumulative mass before cell i (i in [0, n]).
  double before_cell(int i) const { return partial_[static_cast<std::size_t>(i)]; }
  double cell_lower_edge(int i) const { return grid_.x(i) - 0.5 * grid_.dx(); }
  const Grid1D& grid() const { return grid_; }

 private:
  Grid1D grid_;
  std::vector<double> partial_;
};

/// Inverse-transform sampling of |up|^2 + |down|^2; draw i uses counter i of
/// the seed's stream.
std::vector<double> sample_positions(const SpinorField& field, int n, std::uint64_t seed);
std::vector<double> sample_density(const Grid1D& grid, const Eigen::ArrayXd& density, int n, const CounterRng& rng);

/// RK4 on dX/dt = v(X, t) with v linear in space between nodes and linear in
/// time between frames. Positions are recorded at every `record_stride`-th
/// frame (the last frame must be one of them).
Ensemble integrate(const std::vector<SpinorField>& frames, std::span<const double> initial_positions,
                   int substeps_per_frame = 4, int record_stride = 1);

struct NoCrossingReport {
  long violations = 0;
  struct Violation {
    int lower = 0;  // trajectory that started below
    int upper = 0;
    int frame = 0;
  };
  std::optional<Violation> first_violation;
};

/// Checks that trajectories ordered at frame 0 stay ordered at every frame
/// (adjacent pairs in the initial order; ties at frame 0 are skipped).
NoCrossingReport check_no_crossing(const Ensemble& ensemble);

struct HistogramComparison {
  std::vector<double> bin_edges;
  std::vector<double> empirical_mass;
  std::vector<double> theoretical_mass;
  double total_variation = 0.0;
};

/// Bins are aligned to grid cells and cover the region holding all but 1e-10
/// of the density at each end; the outer bins absorb the tails.
HistogramComparison histogram_distance(std::span<const double> positions, const SpinorField& field, int n_bins);
HistogramComparison equilibrium_distance(const Ensemble& ensemble, int frame_index, const SpinorField& field_at_frame,
                                         int n_bins);

/// One row per (trajectory, frame): trajectory_id,time,position.
void write_ensemble(std::ostream& out, const Ensemble& ensemble, std::string_view config_hash);

}  // namespace bohm

#endif  // BOHM_TRAJECTORIES_HPP_
