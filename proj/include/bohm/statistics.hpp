// Outcome statistics for repeated measurement runs, and named pass/fail checks.

#ifndef BOHM_STATISTICS_HPP_
#define BOHM_STATISTICS_HPP_

#include <string>
#include <vector>

namespace bohm {

struct MeasurementStatistics {
  std::vector<std::string> outcome_labels;
  std::vector<long> counts;
  std::vector<double> frequencies;
  std::vector<double> born_probabilities;
  std::vector<double> three_sigma_halfwidths;  // 3 sqrt(p q / n) from the Born p
  double expectation_value = 0.0;              // (hbar/2)(f_up - f_down)
  double born_expectation = 0.0;               // (hbar/2)(p_up - p_down)

  long n_trials() const;
  /// |f_i - p_i| <= 3 sqrt(p_i q_i / n) for every outcome.
  bool within_three_sigma() const;
  bool expectation_within_three_sigma() const;
};

/// Two-outcome (up/down) statistics for spin-1/2 measurements, hbar = 1.
MeasurementStatistics spin_statistics(long up_count, long down_count, double p_up);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

bool all_pass(const std::vector<Check>& checks);

}  // namespace bohm

#endif  // BOHM_STATISTICS_HPP_
