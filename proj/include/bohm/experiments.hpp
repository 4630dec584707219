// End-to-end scenario harnesses: Stern-Gerlach runs, sequential spin
// measurements, the no-crossing inference, equivariance, and the pointer model.

#ifndef BOHM_EXPERIMENTS_HPP_
#define BOHM_EXPERIMENTS_HPP_

#include "bohm/conditional.hpp"
#include "bohm/hilbert.hpp"
#include "bohm/statistics.hpp"
#include "bohm/trajectories.hpp"
#include "bohm/wavefield.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bohm {

enum class Scenario { stern_gerlach, sequential, no_crossing, equilibrium, pointer };

std::string to_string(Scenario s);
/// Accepts underscore or hyphen spellings ("stern_gerlach", "stern-gerlach").
Scenario parse_scenario(const std::string& name);

enum class InitialDistribution { equilibrium, uniform };

struct ExperimentConfig {
  Scenario scenario = Scenario::stern_gerlach;
  std::uint64_t seed = 42;
  long n_trials = 20000;

  Complex alpha{M_SQRT1_2, 0.0};
  Complex beta{M_SQRT1_2, 0.0};
  std::vector<Vector3> axes;  // sequential stages

  double x_min = -32.0;
  double x_max = 32.0;
  int n_points = 256;

  double packet_center = 0.0;
  double packet_width = 1.0;
  double packet_momentum = 0.0;

  MagnetSpec magnet{5.0, 1.0};

  double dt = 0.0;              // 0: largest stable step
  double detection_time = 0.0;  // 0: branch separation of 10 packet widths
  double duration = 4.0;        // equilibrium runs
  int frame_stride = 4;         // evolution steps per stored frame
  int substeps = 4;             // RK4 substeps per frame interval
  int record_frames = 11;       // positions kept per trajectory (>= 2)

  PotentialSpec::Kind potential = PotentialSpec::Kind::free;
  double omega = 1.0;
  double potential_center = 0.0;

  int n_bins = 64;
  InitialDistribution initial = InitialDistribution::equilibrium;

  double pointer_width = 1.0;
  double pointer_shift = 10.0;

  Grid1D grid() const { return {x_min, x_max, n_points}; }
  PotentialSpec potential_spec() const;
  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

/// Scenario defaults (trial counts, potential) applied before config keys.
ExperimentConfig default_config(Scenario s);

inline constexpr double kEquilibriumTolerance = 0.03;
inline constexpr double kDetectionSupportThreshold = 1e-4;
inline constexpr double kGroupVelocityTolerance = 0.01;  // relative

/// T with 2 (mu_b tau) T = 10 sigma(T) for a free Gaussian of initial width
/// sigma_0; throws if the branches never separate that far.
double default_detection_time(double kick, double width);

/// Time stepping that lands exactly on `duration` with whole frames and
/// whole recording intervals.
struct TimeGrid {
  double dt = 0.0;
  int steps = 0;
  int frame_stride = 1;
  int record_stride = 1;  // frames per recorded position
};

TimeGrid plan_time_grid(const ExperimentConfig& config, const PotentialSpec& potential, double duration);

struct SternGerlachResult {
  MeasurementStatistics statistics;
  Ensemble ensemble;
  std::vector<int> outcomes;  // 0 = up, 1 = down
  BranchSupports supports;
  double detection_time = 0.0;
  // Centroid velocity of each component between kick and detection; NaN for
  // an empty component.
  double up_velocity = 0.0;
  double down_velocity = 0.0;
  std::vector<SpinorField> frames;  // recorded frames only
  std::vector<Check> checks;
};

/// Packet (alpha, beta) -> magnet kick -> free flight to the detection time.
std::vector<SpinorField> stern_gerlach_frames(const ExperimentConfig& config, Complex alpha, Complex beta,
                                              TimeGrid* time_grid = nullptr);

/// Outcome by the sign of (X - packet_center); exact ties count as up.
int classify(double final_position, double axis);

SternGerlachResult stern_gerlach(const ExperimentConfig& config);

struct SequentialResult {
  std::vector<MeasurementStatistics> stages;
  std::vector<std::vector<int>> outcomes;  // [stage][trial]
  std::vector<Ensemble> ensembles;         // per stage, trial order
  std::vector<Check> checks;
};

SequentialResult sequential(const ExperimentConfig& config);

struct NoCrossingResult {
  long violations = 0;
  double inference_accuracy = 0.0;
  bool precondition_met = false;
  SternGerlachResult run;
  std::vector<Check> checks;
};

NoCrossingResult no_crossing_check(const ExperimentConfig& config);

struct EquilibriumResult {
  std::vector<HistogramComparison> per_frame;
  Ensemble ensemble;
  std::vector<SpinorField> frames;  // recorded frames
  std::vector<Check> checks;
};

EquilibriumResult equilibrium_experiment(const ExperimentConfig& config);

struct PointerExperimentResult {
  PointerRun run;
  std::vector<Check> checks;
};

PointerExperimentResult pointer_experiment(const ExperimentConfig& config);

}  // namespace bohm

#endif  // BOHM_EXPERIMENTS_HPP_
