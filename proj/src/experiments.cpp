#include "bohm/experiments.hpp"

#include "bohm/frame_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace bohm {

namespace {

std::string fmt(double v) { return format_double(v); }

Check three_sigma_check(const std::string& name, const MeasurementStatistics& s) {
  return {name, s.within_three_sigma(),
          "f_up = " + fmt(s.frequencies[0]) + ", born = " + fmt(s.born_probabilities[0]) +
              ", 3 sigma = " + fmt(s.three_sigma_halfwidths[0])};
}

Check expectation_check(const std::string& name, const MeasurementStatistics& s) {
  return {name, s.expectation_within_three_sigma(),
          "<S_z> = " + fmt(s.expectation_value) + ", born = " + fmt(s.born_expectation)};
}

void require_unflagged(const Ensemble& e, const std::string& where) {
  if (e.flagged())
    throw std::runtime_error(where + ": a trajectory left the grid; enlarge the domain");
}

std::vector<SpinorField> recorded(const std::vector<SpinorField>& frames, int record_stride) {
  std::vector<SpinorField> out;
  for (std::size_t f = 0; f < frames.size(); f += static_cast<std::size_t>(record_stride)) out.push_back(frames[f]);
  return out;
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::stern_gerlach: return "stern_gerlach";
    case Scenario::sequential: return "sequential";
    case Scenario::no_crossing: return "no_crossing";
    case Scenario::equilibrium: return "equilibrium";
    case Scenario::pointer: return "pointer";
  }
  return "?";
}

Scenario parse_scenario(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  for (auto s : {Scenario::stern_gerlach, Scenario::sequential, Scenario::no_crossing, Scenario::equilibrium,
                 Scenario::pointer})
    if (to_string(s) == n) return s;
  throw std::invalid_argument("unknown scenario '" + name +
                              "' (expected stern-gerlach, sequential, no-crossing, equilibrium or pointer)");
}

PotentialSpec ExperimentConfig::potential_spec() const {
  switch (potential) {
    case PotentialSpec::Kind::free: return PotentialSpec::free();
    case PotentialSpec::Kind::harmonic: return PotentialSpec::harmonic(omega, potential_center);
    case PotentialSpec::Kind::custom_tabulated: break;
  }
  throw std::invalid_argument("potential kind custom_tabulated is not configurable from text");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("invariant violated: " + what); };
  const double spin_norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(spin_norm - 1.0) > 1e-9) fail("|alpha|^2 + |beta|^2 = 1 (got " + fmt(spin_norm) + ")");
  if (n_trials < 1) fail("trials >= 1");
  const Grid1D g = grid();  // checks its own invariants
  if (!(packet_width > 0.0)) fail("packet.width > 0");
  if (packet_center - 5.0 * packet_width < g.x_min() || packet_center + 5.0 * packet_width > g.x_max())
    fail("packet support >= 5 widths from both grid boundaries");
  magnet.validate();
  if (dt < 0.0) fail("evolution.dt >= 0");
  if (detection_time < 0.0) fail("evolution.detection_time >= 0");
  if (!(duration > 0.0)) fail("evolution.duration > 0");
  if (frame_stride < 1) fail("evolution.frame_stride >= 1");
  if (substeps < 1) fail("evolution.substeps >= 1");
  if (record_frames < 2) fail("evolution.record_frames >= 2");
  if (n_bins < 10) fail("equilibrium.bins >= 10");
  if (potential == PotentialSpec::Kind::harmonic && !(omega > 0.0)) fail("potential.omega > 0");
  if (scenario == Scenario::sequential && axes.size() < 2) fail("sequential runs need >= 2 axes");
  for (const auto& a : axes)
    if (std::abs(a.norm() - 1.0) > 1e-9) fail("every axis is a unit vector");
  if (!(pointer_width > 0.0)) fail("pointer.width > 0");
  if (!(pointer_shift > 0.0)) fail("pointer.shift > 0");
}

ExperimentConfig default_config(Scenario s) {
  ExperimentConfig c;
  c.scenario = s;
  switch (s) {
    case Scenario::stern_gerlach: c.n_trials = 20000; break;
    case Scenario::sequential:
      c.n_trials = 1000;
      c.alpha = 1.0;
      c.beta = 0.0;
      c.axes = {Vector3::UnitZ(), Vector3::UnitX()};
      break;
    case Scenario::no_crossing: c.n_trials = 1000; break;
    case Scenario::equilibrium:
      c.n_trials = 50000;
      c.alpha = 1.0;
      c.beta = 0.0;
      c.packet_center = -5.0;
      c.packet_momentum = 1.0;
      break;
    case Scenario::pointer: c.n_trials = 10000; break;
  }
  return c;
}

double default_detection_time(double kick, double width) {
  // 4 v^2 T^2 = 100 sigma^2 (1 + T^2 / (4 sigma^4))
  const double denom = 4.0 * kick * kick - 25.0 / (width * width);
  if (!(denom > 0.0))
    throw std::invalid_argument("magnet kick " + fmt(kick) + " is too weak to separate branches of width " + fmt(width) +
                                " by 10 packet widths (need mu_b * tau > 2.5 / width)");
  return 10.0 * width / std::sqrt(denom);
}

TimeGrid plan_time_grid(const ExperimentConfig& config, const PotentialSpec& potential, double duration) {
  const Grid1D g = config.grid();
  const double bound = max_time_step(g, potential);
  if (config.dt > bound * (1.0 + 1e-12))
    throw StabilityError("evolution.dt = " + fmt(config.dt) + " exceeds the stability bound " + fmt(bound));
  const double dt_max = config.dt > 0.0 ? config.dt : bound;
  const int intervals = config.record_frames - 1;
  TimeGrid tg;
  tg.frame_stride = config.frame_stride;
  tg.record_stride = std::max(1, static_cast<int>(std::ceil(duration / (dt_max * intervals * config.frame_stride) - 1e-12)));
  tg.steps = intervals * tg.record_stride * config.frame_stride;
  tg.dt = duration / tg.steps;
  return tg;
}

std::vector<SpinorField> stern_gerlach_frames(const ExperimentConfig& config, Complex alpha, Complex beta,
                                              TimeGrid* time_grid) {
  const double t_detect = config.detection_time > 0.0 ? config.detection_time
                                                      : default_detection_time(config.magnet.kick(), config.packet_width);
  const PotentialSpec free = PotentialSpec::free();
  const TimeGrid tg = plan_time_grid(config, free, t_detect);
  if (time_grid) *time_grid = tg;
  const SpinorField packet =
      gaussian_packet(config.grid(), config.packet_center, config.packet_width, config.packet_momentum, alpha, beta);
  return evolve_frames(magnet_kick(packet, config.magnet), free, tg.dt, tg.steps, tg.frame_stride);
}

int classify(double final_position, double axis) { return final_position >= axis ? 0 : 1; }

SternGerlachResult stern_gerlach(const ExperimentConfig& config) {
  config.validate();
  SternGerlachResult r;
  TimeGrid tg;
  const auto frames = stern_gerlach_frames(config, config.alpha, config.beta, &tg);
  r.detection_time = frames.back().time;
  r.supports = branch_supports(frames.back(), kDetectionSupportThreshold);
  if (!r.supports.separated)
    throw std::runtime_error("stern_gerlach: branches are not separated at the detection time t = " +
                             fmt(r.detection_time));

  const auto initial = sample_positions(frames.front(), static_cast<int>(config.n_trials), config.seed);
  r.ensemble = integrate(frames, initial, config.substeps, tg.record_stride);
  r.ensemble.seed = config.seed;
  require_unflagged(r.ensemble, "stern_gerlach");

  long up = 0;
  const int last = r.ensemble.n_frames() - 1;
  r.outcomes.resize(static_cast<std::size_t>(config.n_trials));
  for (int k = 0; k < r.ensemble.n_trajectories(); ++k) {
    r.outcomes[static_cast<std::size_t>(k)] = classify(r.ensemble.positions(k, last), config.packet_center);
    up += r.outcomes[static_cast<std::size_t>(k)] == 0;
  }
  r.statistics = spin_statistics(up, config.n_trials - up, std::norm(config.alpha));
  r.frames = recorded(frames, tg.record_stride);
  const auto centroid_velocity = [&](const Eigen::ArrayXcd& start, const Eigen::ArrayXcd& end) {
    const Grid1D& g = frames.front().grid;
    const Moments m0 = moments(g, start.abs2()), m1 = moments(g, end.abs2());
    if (m0.mass < 1e-12) return std::numeric_limits<double>::quiet_NaN();
    return (m1.mean - m0.mean) / (frames.back().time - frames.front().time);
  };
  r.up_velocity = centroid_velocity(frames.front().up, frames.back().up);
  r.down_velocity = centroid_velocity(frames.front().down, frames.back().down);
  {
    const double v = config.magnet.kick();
    bool ok = true;
    if (!std::isnan(r.up_velocity)) ok = ok && std::abs(r.up_velocity - v) <= kGroupVelocityTolerance * v;
    if (!std::isnan(r.down_velocity)) ok = ok && std::abs(r.down_velocity + v) <= kGroupVelocityTolerance * v;
    r.checks.push_back({"branch centroid velocities within 1% of +-mu_b tau", ok,
                        "v_up = " + fmt(r.up_velocity) + ", v_down = " + fmt(r.down_velocity) + ", mu_b tau = " + fmt(v)});
  }
  r.checks.push_back({"branches separated at detection", r.supports.separated,
                      "up [" + fmt(r.supports.up.lo) + ", " + fmt(r.supports.up.hi) + "], down [" +
                          fmt(r.supports.down.lo) + ", " + fmt(r.supports.down.hi) + "]"});
  r.checks.push_back(three_sigma_check("up frequency within 3 sigma of |alpha|^2", r.statistics));
  r.checks.push_back(expectation_check("expectation within 3 sigma of (1/2)(|alpha|^2 - |beta|^2)", r.statistics));
  return r;
}

SequentialResult sequential(const ExperimentConfig& config) {
  config.validate();
  if (config.axes.size() < 2) throw std::invalid_argument("sequential: need at least two axes");
  const long n = config.n_trials;
  const auto n_size = static_cast<std::size_t>(n);

  SequentialResult result;
  // Lab-frame spin state feeding each group. Stage 0 has one group; after
  // that a trial's group is its previous outcome (effective collapse).
  std::vector<Spinor> group_states = {Spinor(config.alpha, config.beta)};
  std::vector<double> group_weights = {1.0};
  std::vector<int> trial_group(n_size, 0);

  // Occupied-branch densities at detection, keyed by (group, outcome).
  using BranchKey = std::pair<int, int>;
  std::map<BranchKey, CumulativeMass> previous_branches;
  std::vector<int> previous_group;
  std::vector<double> previous_final;

  for (std::size_t stage = 0; stage < config.axes.size(); ++stage) {
    const std::string label = "stage " + std::to_string(stage + 1);
    const Eigen::Matrix2cd u = spin_rotation(config.axes[stage]);

    Ensemble ensemble;
    ensemble.seed = config.seed;
    ensemble.aborted.assign(n_size, 0);
    std::vector<int> outcomes(n_size, 0);
    std::map<BranchKey, CumulativeMass> branches;
    double p_up = 0.0;

    for (std::size_t g = 0; g < group_states.size(); ++g) {
      const Spinor local = u * group_states[g];
      p_up += group_weights[g] * std::norm(local[0]);
      std::vector<std::size_t> members;
      for (std::size_t t = 0; t < n_size; ++t)
        if (trial_group[t] == static_cast<int>(g)) members.push_back(t);
      if (members.empty()) continue;

      TimeGrid tg;
      const auto frames = stern_gerlach_frames(config, local[0], local[1], &tg);
      if (!branch_supports(frames.back(), kDetectionSupportThreshold).separated)
        throw std::runtime_error("sequential: branches not separated at " + label);

      std::vector<double> initial(members.size());
      if (stage == 0) {
        const auto drawn = sample_positions(frames.front(), static_cast<int>(n), config.seed);
        for (std::size_t m = 0; m < members.size(); ++m) initial[m] = drawn[members[m]];
      } else {
        // Fresh preparation: each particle keeps its quantile within the
        // branch it occupied, mapped onto the new packet.
        const CumulativeMass fresh(frames.front().grid, frames.front().density());
        for (std::size_t m = 0; m < members.size(); ++m) {
          const std::size_t t = members[m];
          const auto& branch = previous_branches.at({previous_group[t], trial_group[t]});
          initial[m] = fresh.inverse(branch(previous_final[t]));
        }
      }

      const Ensemble part = integrate(frames, initial, config.substeps, tg.record_stride);
      require_unflagged(part, "sequential " + label);
      if (ensemble.frame_times.empty()) {
        ensemble.frame_times = part.frame_times;
        ensemble.positions.setConstant(n, part.n_frames(), std::nan(""));
      }
      const int last = part.n_frames() - 1;
      for (std::size_t m = 0; m < members.size(); ++m) {
        const auto row = static_cast<Eigen::Index>(m);
        ensemble.positions.row(static_cast<Eigen::Index>(members[m])) = part.positions.row(row);
        outcomes[members[m]] = classify(part.positions(row, last), config.packet_center);
      }

      const SpinorField& detected = frames.back();
      if (detected.up_norm() > 0.0)
        branches.emplace(BranchKey{static_cast<int>(g), 0}, CumulativeMass(detected.grid, detected.up.abs2()));
      if (detected.down_norm() > 0.0)
        branches.emplace(BranchKey{static_cast<int>(g), 1}, CumulativeMass(detected.grid, detected.down.abs2()));
    }

    const long up = std::count(outcomes.begin(), outcomes.end(), 0);
    result.stages.push_back(spin_statistics(up, n - up, p_up));
    result.checks.push_back(three_sigma_check(label + " up frequency within 3 sigma of Born", result.stages.back()));
    if (stage > 0 && config.axes[stage].dot(config.axes[stage - 1]) > 1.0 - 1e-12) {
      long same = 0;
      for (std::size_t t = 0; t < n_size; ++t) same += outcomes[t] == result.outcomes.back()[t];
      result.checks.push_back({label + " repeats stage " + std::to_string(stage), same == n,
                               std::to_string(same) + " of " + std::to_string(n) + " outcomes agree"});
    }

    const Eigen::Matrix2cd u_inv = u.adjoint();
    group_states = {u_inv.col(0), u_inv.col(1)};
    group_weights = {p_up, 1.0 - p_up};
    previous_group = trial_group;
    previous_final.resize(n_size);
    for (std::size_t t = 0; t < n_size; ++t) {
      previous_final[t] = ensemble.positions(static_cast<Eigen::Index>(t), ensemble.n_frames() - 1);
      trial_group[t] = outcomes[t];
    }
    previous_branches = std::move(branches);

    result.outcomes.push_back(std::move(outcomes));
    result.ensembles.push_back(std::move(ensemble));
  }
  return result;
}

NoCrossingResult no_crossing_check(const ExperimentConfig& config) {
  NoCrossingResult r;
  r.precondition_met = std::abs(std::norm(config.alpha) - std::norm(config.beta)) < 1e-12 &&
                       config.packet_momentum == 0.0;
  r.run = stern_gerlach(config);
  const Ensemble& e = r.run.ensemble;
  r.violations = check_no_crossing(e).violations;

  long correct = 0;
  for (int k = 0; k < e.n_trajectories(); ++k) {
    const bool started_above = e.positions(k, 0) >= config.packet_center;
    correct += started_above == (r.run.outcomes[static_cast<std::size_t>(k)] == 0);
  }
  r.inference_accuracy = static_cast<double>(correct) / e.n_trajectories();

  r.checks.push_back({"symmetric state precondition (|alpha| = |beta|, zero momentum)", r.precondition_met,
                      r.precondition_met ? "met" : "breached: inference accuracy is not guaranteed"});
  r.checks.push_back({"no trajectory crossings", r.violations == 0, std::to_string(r.violations) + " violations"});
  r.checks.push_back({"outcome up iff initial position above the axis", r.inference_accuracy == 1.0,
                      "accuracy = " + fmt(r.inference_accuracy)});
  return r;
}

EquilibriumResult equilibrium_experiment(const ExperimentConfig& config) {
  config.validate();
  const PotentialSpec potential = config.potential_spec();
  const TimeGrid tg = plan_time_grid(config, potential, config.duration);
  const SpinorField packet = gaussian_packet(config.grid(), config.packet_center, config.packet_width,
                                             config.packet_momentum, config.alpha, config.beta);
  const auto frames = evolve_frames(packet, potential, tg.dt, tg.steps, tg.frame_stride);

  std::vector<double> initial;
  if (config.initial == InitialDistribution::equilibrium) {
    initial = sample_positions(frames.front(), static_cast<int>(config.n_trials), config.seed);
  } else {
    const CounterRng rng(config.seed);
    const double lo = config.packet_center - 2.0 * config.packet_width;
    initial.resize(static_cast<std::size_t>(config.n_trials));
    for (std::size_t i = 0; i < initial.size(); ++i) initial[i] = lo + 4.0 * config.packet_width * rng.uniform(i);
  }

  EquilibriumResult r;
  r.ensemble = integrate(frames, initial, config.substeps, tg.record_stride);
  r.ensemble.seed = config.seed;
  require_unflagged(r.ensemble, "equilibrium");
  r.frames = recorded(frames, tg.record_stride);
  for (int f = 0; f < r.ensemble.n_frames(); ++f) {
    r.per_frame.push_back(equilibrium_distance(r.ensemble, f, r.frames[static_cast<std::size_t>(f)], config.n_bins));
    const double tv = r.per_frame.back().total_variation;
    r.checks.push_back({"total variation < 0.03 at t = " + fmt(r.ensemble.frame_times[static_cast<std::size_t>(f)]),
                        tv < kEquilibriumTolerance, "TV = " + fmt(tv)});
  }
  return r;
}

PointerExperimentResult pointer_experiment(const ExperimentConfig& config) {
  config.validate();
  PointerSetup setup;
  setup.grid = config.grid();
  setup.packet = {config.packet_center, config.pointer_width};
  setup.coupling = {config.pointer_shift};

  PointerExperimentResult r;
  r.run = run_pointer_measurement(config.alpha, config.beta, setup, config.n_trials, config.seed);
  r.checks.push_back(three_sigma_check("outcome 1 frequency within 3 sigma of |alpha|^2", r.run.statistics));
  r.checks.push_back(expectation_check("expectation within 3 sigma of (1/2)(|alpha|^2 - |beta|^2)", r.run.statistics));
  r.checks.push_back({"branch overlap < 1e-6", r.run.overlap < 1e-6, "overlap = " + fmt(r.run.overlap)});
  r.checks.push_back({"collapsed spinor leakage < 1e-6 in every trial", r.run.max_leakage < 1e-6,
                      "max leakage = " + fmt(r.run.max_leakage)});
  return r;
}

}  // namespace bohm
