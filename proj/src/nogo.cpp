#include "bohm/nogo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bohm::nogo {

namespace {

const Operator& sx() {
  static const Operator m = pauli(Axis::x);
  return m;
}
const Operator& sy() {
  static const Operator m = pauli(Axis::y);
  return m;
}
const Operator& sz() {
  static const Operator m = pauli(Axis::z);
  return m;
}
const Operator& id2() {
  static const Operator m = identity(2);
  return m;
}

}  // namespace

ObservableSquare build_mermin_square() {
  ObservableSquare s;
  // Superscript 1 is the left tensor factor.
  s.cells = {
      tensor(sx(), id2()), tensor(id2(), sx()), tensor(sx(), sx()),
      tensor(id2(), sy()), tensor(sy(), id2()), tensor(sy(), sy()),
      tensor(sx(), sy()),  tensor(sy(), sx()),  tensor(sz(), sz()),
  };
  s.labels = {
      "sx1",     "sx2",     "sx1 sx2",
      "sy2",     "sy1",     "sy1 sy2",
      "sx1 sy2", "sx2 sy1", "sz1 sz2",
  };
  return s;
}

std::vector<ContextConstraint> mermin_constraints() {
  std::vector<ContextConstraint> out;
  for (int r = 0; r < 3; ++r) out.push_back({{3 * r, 3 * r + 1, 3 * r + 2}, +1, "row " + std::to_string(r + 1)});
  for (int c = 0; c < 3; ++c) out.push_back({{c, c + 3, c + 6}, c == 2 ? -1 : +1, "column " + std::to_string(c + 1)});
  return out;
}

std::vector<IdentityCheck> verify_square_identities(const ObservableSquare& square) {
  std::vector<IdentityCheck> checks;
  const auto constraints = mermin_constraints();

  for (const auto& context : constraints) {
    const auto& m = context.member_indices;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        const auto& a = square.cells[static_cast<std::size_t>(m[i])];
        const auto& b = square.cells[static_cast<std::size_t>(m[j])];
        const double residual = commutator_norm(a, b);
        checks.push_back({"[" + square.labels[static_cast<std::size_t>(m[i])] + ", " +
                              square.labels[static_cast<std::size_t>(m[j])] + "] = 0 (" + context.name + ")",
                          residual < kIdentityTolerance, residual});
      }
    }
  }

  for (const auto& context : constraints) {
    Operator product = identity(4);
    for (int idx : context.member_indices) product = product * square.cells[static_cast<std::size_t>(idx)];
    const Operator target = static_cast<double>(context.required_product_sign) * identity(4);
    const double residual = (product - target).norm();
    checks.push_back({context.name + " product = " + (context.required_product_sign > 0 ? "+I" : "-I"),
                      residual < kIdentityTolerance, residual});
  }
  return checks;
}

AssignmentSearchReport search_noncontextual_assignment(const ObservableSquare& square,
                                                       const std::vector<ContextConstraint>& constraints) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& cell : square.cells) {
    for (double e : hermitian_eigenvalues(cell)) {
      if (std::abs(std::abs(e) - 1.0) > 1e-10)
        throw std::invalid_argument("search_noncontextual_assignment: cell eigenvalue outside {-1, +1}");
    }
  }
  for (const auto& c : constraints) {
    for (int idx : c.member_indices)
      if (idx < 0 || idx >= 9) throw std::invalid_argument("constraint member index outside the square");
    std::vector<int> sorted = c.member_indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("constraint member indices must be distinct");
    if (c.required_product_sign != 1 && c.required_product_sign != -1)
      throw std::invalid_argument("constraint sign must be +1 or -1");
  }

  AssignmentSearchReport report;
  constexpr int kCells = 9;
  report.total_assignments = 1L << kCells;
  for (long bits = 0; bits < report.total_assignments; ++bits) {
    std::array<int, 9> values{};
    for (int i = 0; i < kCells; ++i) values[static_cast<std::size_t>(i)] = (bits >> i) & 1 ? -1 : +1;
    bool ok = true;
    for (const auto& c : constraints) {
      int product = 1;
      for (int idx : c.member_indices) product *= values[static_cast<std::size_t>(idx)];
      if (product != c.required_product_sign) {
        ok = false;
        break;
      }
    }
    if (ok) {
      ++report.satisfying_assignments;
      if (!report.witness) report.witness = values;
    }
  }
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

VonNeumannReport von_neumann_counterexample() {
  VonNeumannReport r;
  r.sum_eigenvalues = hermitian_eigenvalues(sx() + sz());
  const auto ex = hermitian_eigenvalues(sx());
  const auto ez = hermitian_eigenvalues(sz());
  for (double a : ex)
    for (double b : ez) {
      const double s = a + b;
      bool seen = false;
      for (double t : r.individual_sums) seen = seen || std::abs(t - s) < 1e-12;
      if (!seen) r.individual_sums.push_back(s);
    }
  std::sort(r.individual_sums.begin(), r.individual_sums.end());
  r.min_gap = std::numeric_limits<double>::infinity();
  for (double e : r.sum_eigenvalues)
    for (double s : r.individual_sums) r.min_gap = std::min(r.min_gap, std::abs(e - s));
  return r;
}

ChshLocalReport chsh_local_bound() {
  ChshLocalReport r;
  r.max_S = std::numeric_limits<int>::min();
  std::vector<int> values;
  // Strategy bits: a, a', b, b' each in {+1, -1}.
  for (int bits = 0; bits < 16; ++bits) {
    const int a = bits & 1 ? -1 : 1;
    const int ap = bits & 2 ? -1 : 1;
    const int b = bits & 4 ? -1 : 1;
    const int bp = bits & 8 ? -1 : 1;
    const int s = a * b + a * bp + ap * b - ap * bp;
    values.push_back(s);
    r.max_S = std::max(r.max_S, s);
  }
  r.strategy_count = static_cast<int>(values.size());
  for (int s : values) r.optimal_strategy_count += s == r.max_S;
  return r;
}

Operator chsh_operator(const Operator& a, const Operator& a_prime, const Operator& b, const Operator& b_prime) {
  return tensor(a, b) + tensor(a, b_prime) + tensor(a_prime, b) - tensor(a_prime, b_prime);
}

ChshSettings chsh_standard_settings() {
  const double r = 1.0 / std::sqrt(2.0);
  return {sz(), sx(), r * (sz() + sx()), r * (sz() - sx())};
}

double chsh_quantum_value(const ChshSettings& s) {
  return hermitian_eigenvalues(chsh_operator(s.a, s.a_prime, s.b, s.b_prime)).back();
}

double chsh_quantum_value() { return chsh_quantum_value(chsh_standard_settings()); }

}  // namespace bohm::nogo
