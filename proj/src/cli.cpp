#include "bohm/cli.hpp"

#include "bohm/config.hpp"
#include "bohm/experiments.hpp"
#include "bohm/frame_io.hpp"
#include "bohm/nogo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bohm {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Outputs {
  std::ostringstream text;
  Json json = Json::object();
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> tables;  // relative path, content
};

std::string fmt(double v) { return format_double(v); }

Json statistics_json(const MeasurementStatistics& s) {
  Json j;
  j["outcome_labels"] = s.outcome_labels;
  j["counts"] = s.counts;
  j["frequencies"] = s.frequencies;
  j["born_probabilities"] = s.born_probabilities;
  j["three_sigma_halfwidths"] = s.three_sigma_halfwidths;
  j["expectation_value"] = s.expectation_value;
  j["born_expectation"] = s.born_expectation;
  return j;
}

void statistics_text(std::ostream& out, const MeasurementStatistics& s) {
  for (std::size_t i = 0; i < s.counts.size(); ++i)
    out << "outcome " << s.outcome_labels[i] << ": count = " << s.counts[i] << ", frequency = " << fmt(s.frequencies[i])
        << ", born = " << fmt(s.born_probabilities[i]) << ", 3 sigma = " << fmt(s.three_sigma_halfwidths[i]) << '\n';
  out << "expectation (hbar/2)(f_up - f_down) = " << fmt(s.expectation_value)
      << ", born = " << fmt(s.born_expectation) << '\n';
}

std::string ensemble_table(const Ensemble& e, const std::string& hash) {
  std::ostringstream out;
  write_ensemble(out, e, hash);
  return out.str();
}

void add_frames(Outputs& o, const std::vector<SpinorField>& frames, const std::string& hash) {
  for (std::size_t f = 0; f < frames.size(); ++f) {
    std::ostringstream out;
    write_frame(out, frames[f], hash);
    char name[32];
    std::snprintf(name, sizeof name, "frames/frame_%04zu.txt", f);
    o.tables.emplace_back(name, out.str());
  }
}

// ---- nogo -----------------------------------------------------------------

void run_mermin(Outputs& o, std::ostream& console, bool quiet) {
  const auto square = nogo::build_mermin_square();
  const auto identities = nogo::verify_square_identities(square);
  const auto report = nogo::search_noncontextual_assignment(square, nogo::mermin_constraints());

  o.text << "Mermin-Peres square\n";
  for (int r = 0; r < 3; ++r)
    o.text << "  " << square.label(r, 0) << " | " << square.label(r, 1) << " | " << square.label(r, 2) << '\n';
  Json ids = Json::array();
  int commutators_ok = 0, products_ok = 0;
  for (const auto& c : identities) {
    o.text << (c.pass ? "  ok   " : "  FAIL ") << c.name << "  residual = " << fmt(c.residual) << '\n';
    ids.push_back({{"identity", c.name}, {"pass", c.pass}, {"residual", c.residual}});
    if (c.name.front() == '[') commutators_ok += c.pass;
    else products_ok += c.pass;
  }
  o.text << "noncontextual assignments: " << report.satisfying_assignments << " of " << report.total_assignments << '\n';
  o.json["identities"] = ids;
  o.json["total_assignments"] = report.total_assignments;
  o.json["satisfying_assignments"] = report.satisfying_assignments;
  o.json["witness"] = report.witness ? Json(*report.witness) : Json(nullptr);

  o.checks.push_back({"18 row/column commutators vanish (< 1e-12)", commutators_ok == 18,
                      std::to_string(commutators_ok) + " of 18"});
  o.checks.push_back({"row products +I, column products +I, +I, -I (< 1e-12)", products_ok == 6,
                      std::to_string(products_ok) + " of 6"});
  o.checks.push_back({"no consistent noncontextual assignment", report.satisfying_assignments == 0,
                      std::to_string(report.satisfying_assignments) + " of " + std::to_string(report.total_assignments)});
  if (!quiet)
    console << "search time: " << std::chrono::duration<double, std::milli>(report.elapsed).count() << " ms\n";
}

void run_von_neumann(Outputs& o) {
  const auto r = nogo::von_neumann_counterexample();
  const double root2 = std::sqrt(2.0);
  o.text << "eig(sigma_x + sigma_z) = {" << fmt(r.sum_eigenvalues[0]) << ", " << fmt(r.sum_eigenvalues[1]) << "}\n";
  o.text << "sums of eigenvalues = {";
  for (std::size_t i = 0; i < r.individual_sums.size(); ++i) o.text << (i ? ", " : "") << fmt(r.individual_sums[i]);
  o.text << "}\nminimum gap = " << fmt(r.min_gap) << '\n';
  o.json["sum_eigenvalues"] = r.sum_eigenvalues;
  o.json["individual_sums"] = r.individual_sums;
  o.json["min_gap"] = r.min_gap;
  const bool eig_ok = std::abs(r.sum_eigenvalues[0] + root2) < 1e-12 && std::abs(r.sum_eigenvalues[1] - root2) < 1e-12;
  o.checks.push_back({"eigenvalues of sigma_x + sigma_z are -sqrt2, +sqrt2 (1e-12)", eig_ok, ""});
  o.checks.push_back({"gap to {-2, 0, 2} equals 2 - sqrt2 (1e-12)", std::abs(r.min_gap - (2.0 - root2)) < 1e-12,
                      "gap = " + fmt(r.min_gap)});
}

void run_chsh(Outputs& o) {
  const auto local = nogo::chsh_local_bound();
  const double quantum = nogo::chsh_quantum_value();
  o.text << "local deterministic strategies: " << local.strategy_count << ", max S = " << local.max_S << " (attained by "
         << local.optimal_strategy_count << ")\n";
  o.text << "quantum value (largest eigenvalue of the CHSH operator) = " << fmt(quantum) << '\n';
  o.json["max_S"] = local.max_S;
  o.json["optimal_strategy_count"] = local.optimal_strategy_count;
  o.json["quantum_value"] = quantum;
  o.checks.push_back({"local bound is exactly 2", local.max_S == 2, std::to_string(local.max_S)});
  o.checks.push_back({"quantum value is 2 sqrt2 (1e-9)", std::abs(quantum - 2.0 * std::sqrt(2.0)) < 1e-9, fmt(quantum)});
  o.checks.push_back({"local bound < quantum value", local.max_S < quantum, ""});
}

// ---- sim --------------------------------------------------------------------

void run_sim(Outputs& o, const ExperimentConfig& config, const std::string& hash, bool dump_frames) {
  switch (config.scenario) {
    case Scenario::stern_gerlach: {
      const auto r = stern_gerlach(config);
      o.text << "detection time = " << fmt(r.detection_time) << '\n';
      statistics_text(o.text, r.statistics);
      o.json["detection_time"] = r.detection_time;
      o.json["statistics"] = statistics_json(r.statistics);
      o.checks = r.checks;
      o.tables.emplace_back("ensemble.csv", ensemble_table(r.ensemble, hash));
      if (dump_frames) add_frames(o, r.frames, hash);
      break;
    }
    case Scenario::sequential: {
      const auto r = sequential(config);
      Json stages = Json::array();
      for (std::size_t s = 0; s < r.stages.size(); ++s) {
        o.text << "stage " << s + 1 << '\n';
        statistics_text(o.text, r.stages[s]);
        stages.push_back(statistics_json(r.stages[s]));
        o.tables.emplace_back("ensemble_stage" + std::to_string(s + 1) + ".csv", ensemble_table(r.ensembles[s], hash));
      }
      o.json["stages"] = stages;
      o.checks = r.checks;
      break;
    }
    case Scenario::no_crossing: {
      const auto r = no_crossing_check(config);
      statistics_text(o.text, r.run.statistics);
      o.text << "crossing violations = " << r.violations << "\ninference accuracy = " << fmt(r.inference_accuracy) << '\n';
      o.json["statistics"] = statistics_json(r.run.statistics);
      o.json["violations"] = r.violations;
      o.json["inference_accuracy"] = r.inference_accuracy;
      o.json["precondition_met"] = r.precondition_met;
      o.checks = r.checks;
      o.tables.emplace_back("ensemble.csv", ensemble_table(r.run.ensemble, hash));
      if (dump_frames) add_frames(o, r.run.frames, hash);
      break;
    }
    case Scenario::equilibrium: {
      const auto r = equilibrium_experiment(config);
      Json frames = Json::array();
      std::ostringstream hist;
      hist << "# config_hash=" << hash << "\nframe,time,bin_lo,bin_hi,empirical,theoretical\n";
      for (std::size_t f = 0; f < r.per_frame.size(); ++f) {
        const auto& h = r.per_frame[f];
        const double t = r.ensemble.frame_times[f];
        o.text << "t = " << fmt(t) << ": total variation = " << fmt(h.total_variation) << '\n';
        frames.push_back({{"time", t}, {"total_variation", h.total_variation}});
        for (std::size_t b = 0; b < h.empirical_mass.size(); ++b)
          hist << f << ',' << fmt(t) << ',' << fmt(h.bin_edges[b]) << ',' << fmt(h.bin_edges[b + 1]) << ','
               << fmt(h.empirical_mass[b]) << ',' << fmt(h.theoretical_mass[b]) << '\n';
      }
      o.json["frames"] = frames;
      o.checks = r.checks;
      o.tables.emplace_back("ensemble.csv", ensemble_table(r.ensemble, hash));
      o.tables.emplace_back("histograms.csv", hist.str());
      if (dump_frames) add_frames(o, r.frames, hash);
      break;
    }
    case Scenario::pointer: {
      const auto r = pointer_experiment(config);
      statistics_text(o.text, r.run.statistics);
      o.text << "branch overlap = " << fmt(r.run.overlap) << "\nmax leakage = " << fmt(r.run.max_leakage)
             << "\nup-branch quadrature = " << fmt(r.run.up_branch_mass) << '\n';
      o.json["statistics"] = statistics_json(r.run.statistics);
      o.json["branch_overlap"] = r.run.overlap;
      o.json["max_leakage"] = r.run.max_leakage;
      o.json["up_branch_mass"] = r.run.up_branch_mass;
      o.checks = r.checks;
      std::ostringstream trials;
      write_pointer_trials(trials, r.run, hash);
      o.tables.emplace_back("trials.csv", trials.str());
      break;
    }
  }
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f.flush()) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

int dispatch(RunManifest& m, std::ostream& out, std::ostream& err) {
  Outputs o;
  std::string header;  // canonical request, echoed in the report
  try {
    if (m.group == "nogo") {
      header = "nogo " + m.command + "\n";
      m.config_hash = content_hash(header);
      o.json["config_hash"] = m.config_hash;
      o.json["command"] = "nogo " + m.command;
      if (m.command == "mermin") run_mermin(o, out, m.quiet);
      else if (m.command == "vonneumann") run_von_neumann(o);
      else if (m.command == "chsh") run_chsh(o);
      else throw std::invalid_argument("unknown nogo command '" + m.command + "'");
    } else if (m.group == "sim") {
      const Scenario scenario = parse_scenario(m.command);
      std::string text;
      if (!m.config_path.empty()) {
        std::ifstream f(m.config_path);
        if (!f) throw std::runtime_error("cannot read config file " + m.config_path);
        std::ostringstream buf;
        buf << f.rdbuf();
        text = buf.str();
      }
      ExperimentConfig config = parse_config(text, scenario);
      if (m.seed) config.seed = *m.seed;
      if (m.trajectories) config.n_trials = *m.trajectories;
      config.validate();
      header = canonical_config(config);
      m.config_hash = config_hash(config);
      o.json["config_hash"] = m.config_hash;
      o.json["command"] = "sim " + to_string(scenario);
      Json echo = Json::object();
      std::istringstream lines(header);
      for (std::string line; std::getline(lines, line);) {
        const auto eq = line.find(" = ");
        echo[line.substr(0, eq)] = line.substr(eq + 3);
      }
      o.json["config"] = echo;
      run_sim(o, config, m.config_hash, m.dump_frames);
    } else {
      throw std::invalid_argument("unknown command group '" + m.group + "'");
    }
  } catch (const std::exception& e) {
    err << "bohmlab: error: " << e.what() << '\n';
    return 2;
  }

  const bool pass = all_pass(o.checks);
  std::ostringstream report;
  report << "config_hash: " << m.config_hash << '\n' << header << "---\n" << o.text.str() << "--- checks\n";
  Json checks = Json::array();
  for (const auto& c : o.checks) {
    report << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  [" + c.detail + "]") << '\n';
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  report << "verdict: " << (pass ? "PASS" : "FAIL") << '\n';
  o.json["checks"] = checks;
  o.json["verdict"] = pass ? "PASS" : "FAIL";

  try {
    const fs::path dir(m.out_dir);
    write_file(dir / "report.txt", report.str());
    write_file(dir / "report.json", o.json.dump(2) + "\n");
    for (const auto& [name, content] : o.tables) write_file(dir / name, content);
  } catch (const std::exception& e) {
    err << "bohmlab: error: cannot write outputs to '" << m.out_dir << "': " << e.what() << '\n';
    return 2;
  }
  if (!m.quiet) out << report.str();
  return pass ? 0 : 1;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"bohmlab: pilot-wave simulations and no-hidden-variables checks"};
  app.require_subcommand(1);
  RunManifest m;

  auto* nogo_cmd = app.add_subcommand("nogo", "Exact checks of the no-hidden-variables arguments");
  nogo_cmd->require_subcommand(1);
  for (const char* name : {"mermin", "vonneumann", "chsh"}) nogo_cmd->add_subcommand(name)->fallthrough();
  nogo_cmd->add_option("--out", m.out_dir, "Output directory");
  nogo_cmd->add_flag("--quiet", m.quiet, "Suppress console report");

  auto* sim_cmd = app.add_subcommand("sim", "Run a trajectory experiment");
  sim_cmd->require_subcommand(1);
  for (const char* name : {"stern-gerlach", "sequential", "no-crossing", "equilibrium", "pointer"})
    sim_cmd->add_subcommand(name)->fallthrough();
  std::uint64_t seed = 0;
  long trajectories = 0;
  sim_cmd->add_option("--config", m.config_path, "Config file")->check(CLI::ExistingFile);
  auto* seed_opt = sim_cmd->add_option("--seed", seed, "Seed override");
  auto* traj_opt = sim_cmd->add_option("--trajectories", trajectories, "Trajectory count override")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--out", m.out_dir, "Output directory");
  sim_cmd->add_flag("--quiet", m.quiet, "Suppress console report");
  sim_cmd->add_flag("--dump-frames", m.dump_frames, "Write recorded wave-function frames");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "bohmlab: " << e.what() << '\n';
    return 2;
  }

  CLI::App* group = nogo_cmd->parsed() ? nogo_cmd : sim_cmd;
  m.group = group->get_name();
  m.command = group->get_subcommands().front()->get_name();
  if (*seed_opt) m.seed = seed;
  if (*traj_opt) m.trajectories = trajectories;
  return dispatch(m, out, err);
}

}  // namespace bohm
