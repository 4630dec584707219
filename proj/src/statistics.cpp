#include "bohm/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bohm {

long MeasurementStatistics::n_trials() const { return std::accumulate(counts.begin(), counts.end(), 0L); }

bool MeasurementStatistics::within_three_sigma() const {
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (std::abs(frequencies[i] - born_probabilities[i]) > three_sigma_halfwidths[i]) return false;
  return true;
}

bool MeasurementStatistics::expectation_within_three_sigma() const {
  // E - E_born = f_up - p_up, so the up halfwidth applies unchanged.
  return std::abs(expectation_value - born_expectation) <= three_sigma_halfwidths.at(0);
}

MeasurementStatistics spin_statistics(long up_count, long down_count, double p_up) {
  const long n = up_count + down_count;
  if (n <= 0) throw std::invalid_argument("spin_statistics: no trials");
  p_up = std::clamp(p_up, 0.0, 1.0);
  MeasurementStatistics s;
  s.outcome_labels = {"up", "down"};
  s.counts = {up_count, down_count};
  s.frequencies = {static_cast<double>(up_count) / n, static_cast<double>(down_count) / n};
  s.born_probabilities = {p_up, 1.0 - p_up};
  const double halfwidth = 3.0 * std::sqrt(p_up * (1.0 - p_up) / n);
  s.three_sigma_halfwidths = {halfwidth, halfwidth};
  s.expectation_value = 0.5 * (s.frequencies[0] - s.frequencies[1]);
  s.born_expectation = 0.5 * (s.born_probabilities[0] - s.born_probabilities[1]);
  return s;
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace bohm
