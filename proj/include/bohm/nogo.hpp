// Numerical and exhaustive checks of the classic no-hidden-variables
// arguments: the Mermin-Peres square, the von Neumann additivity
// counterexample, and the CHSH local/quantum bounds.

#ifndef BOHM_NOGO_HPP_
#define BOHM_NOGO_HPP_

#include "bohm/hilbert.hpp"

#include <array>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace bohm::nogo {

/// 3x3 arrangement of two-qubit observables, cells addressed row-major (0..8).
struct ObservableSquare {
  std::array<Operator, 9> cells;
  std::array<std::string, 9> labels;

  const Operator& cell(int row, int col) const { return cells[static_cast<std::size_t>(3 * row + col)]; }
  const std::string& label(int row, int col) const { return labels[static_cast<std::size_t>(3 * row + col)]; }
};

struct ContextConstraint {
  std::vector<int> member_indices;
  int required_product_sign = 1;  // +1 or -1
  std::string name;
};

struct IdentityCheck {
  std::string name;
  bool pass = false;
  double residual = 0.0;
};

struct AssignmentSearchReport {
  long total_assignments = 0;
  long satisfying_assignments = 0;
  std::optional<std::array<int, 9>> witness;  // +-1 per cell
  std::chrono::nanoseconds elapsed{0};
};

ObservableSquare build_mermin_square();

/// The six context constraints of the square: rows multiply to +I, columns
/// to +I, +I, -I.
std::vector<ContextConstraint> mermin_constraints();

/// Pairwise commutators within every row and column (18 checks), then the
/// three row products and three column products against +-I.
std::vector<IdentityCheck> verify_square_identities(const ObservableSquare& square);

/// Enumerates all 2^9 assignments of +-1 to the cells.
AssignmentSearchReport search_noncontextual_assignment(const ObservableSquare& square,
                                                       const std::vector<ContextConstraint>& constraints);

struct VonNeumannReport {
  std::vector<double> sum_eigenvalues;  // eig(sigma_x + sigma_z)
  std::vector<double> individual_sums;  // {a + b}
  double min_gap = 0.0;
};

VonNeumannReport von_neumann_counterexample();

struct ChshLocalReport {
  int max_S = 0;
  int optimal_strategy_count = 0;  // strategies attaining max_S
  int strategy_count = 0;
};

ChshLocalReport chsh_local_bound();

/// CHSH operator A(x)B + A(x)B' + A'(x)B - A'(x)B'.
Operator chsh_operator(const Operator& a, const Operator& a_prime, const Operator& b, const Operator& b_prime);

struct ChshSettings {
  Operator a, a_prime, b, b_prime;
};

/// A = sigma_z, A' = sigma_x, B = (sigma_z + sigma_x)/sqrt2, B' = (sigma_z - sigma_x)/sqrt2.
ChshSettings chsh_standard_settings();

double chsh_quantum_value();
double chsh_quantum_value(const ChshSettings& settings);

}  // namespace bohm::nogo

#endif  // BOHM_NOGO_HPP_
