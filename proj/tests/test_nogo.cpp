#include "bohm/nogo.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace bohm;
using namespace bohm::nogo;

namespace {

const Operator sx = pauli(Axis::x), sy = pauli(Axis::y), sz = pauli(Axis::z), id = identity(2);

// Counts sign vectors satisfying row/column parities, written out by hand.
long count_by_hand(const std::array<int, 3>& row_signs, const std::array<int, 3>& col_signs) {
  long count = 0;
  for (int bits = 0; bits < 512; ++bits) {
    int v[3][3];
    for (int i = 0; i < 9; ++i) v[i / 3][i % 3] = (bits >> i) & 1 ? -1 : 1;
    bool ok = true;
    for (int r = 0; r < 3; ++r) ok = ok && v[r][0] * v[r][1] * v[r][2] == row_signs[static_cast<std::size_t>(r)];
    for (int c = 0; c < 3; ++c) ok = ok && v[0][c] * v[1][c] * v[2][c] == col_signs[static_cast<std::size_t>(c)];
    count += ok;
  }
  return count;
}

}  // namespace

TEST_CASE("square cells match the displayed arrangement") {
  const auto s = build_mermin_square();
  CHECK(s.cell(0, 0) == tensor(sx, id));
  CHECK(s.cell(0, 1) == tensor(id, sx));
  CHECK(s.cell(0, 2) == tensor(sx, sx));
  CHECK(s.cell(1, 0) == tensor(id, sy));
  CHECK(s.cell(1, 1) == tensor(sy, id));
  CHECK(s.cell(1, 2) == tensor(sy, sy));
  CHECK(s.cell(2, 0) == tensor(sx, sy));
  CHECK(s.cell(2, 1) == tensor(sy, sx));
  CHECK(s.cell(2, 2) == tensor(sz, sz));
  for (const auto& c : s.cells) {
    CHECK(is_hermitian(c));
    Eigen::SelfAdjointEigenSolver<Operator> solver(c, Eigen::EigenvaluesOnly);
    for (double e : solver.eigenvalues()) CHECK(std::abs(std::abs(e) - 1.0) < 1e-10);
  }
}

TEST_CASE("square identities") {
  const auto checks = verify_square_identities(build_mermin_square());
  REQUIRE(checks.size() == 24);
  for (const auto& c : checks) {
    INFO(c.name);
    CHECK(c.pass);
    CHECK(c.residual < 1e-12);
  }
  // Independent products: row 1 and column 3.
  const auto s = build_mermin_square();
  CHECK((s.cell(0, 0) * s.cell(0, 1) * s.cell(0, 2) - identity(4)).norm() < 1e-12);
  CHECK((s.cell(0, 2) * s.cell(1, 2) * s.cell(2, 2) + identity(4)).norm() < 1e-12);
}

TEST_CASE("parity contradiction read from the identity report") {
  const auto constraints = mermin_constraints();
  REQUIRE(constraints.size() == 6);
  int row_parity = 1, col_parity = 1;
  for (int i = 0; i < 3; ++i) row_parity *= constraints[static_cast<std::size_t>(i)].required_product_sign;
  for (int i = 3; i < 6; ++i) col_parity *= constraints[static_cast<std::size_t>(i)].required_product_sign;
  CHECK(row_parity == 1);
  CHECK(col_parity == -1);
  // Each cell sits in exactly one row and one column, so any assignment has
  // equal row and column parity.
  std::array<int, 9> membership{};
  for (const auto& c : constraints)
    for (int idx : c.member_indices) ++membership[static_cast<std::size_t>(idx)];
  for (int m : membership) CHECK(m == 2);
}

TEST_CASE("noncontextual assignment search") {
  const auto square = build_mermin_square();
  auto constraints = mermin_constraints();

  const auto report = search_noncontextual_assignment(square, constraints);
  CHECK(report.total_assignments == 512);
  CHECK(report.satisfying_assignments == 0);
  CHECK_FALSE(report.witness.has_value());
  CHECK(count_by_hand({1, 1, 1}, {1, 1, -1}) == 0);

  auto flipped = constraints;
  flipped[5].required_product_sign = +1;
  const auto relaxed = search_noncontextual_assignment(square, flipped);
  CHECK(relaxed.satisfying_assignments == 16);
  CHECK(count_by_hand({1, 1, 1}, {1, 1, 1}) == 16);
  REQUIRE(relaxed.witness.has_value());
  for (const auto& c : flipped) {
    int product = 1;
    for (int idx : c.member_indices) product *= (*relaxed.witness)[static_cast<std::size_t>(idx)];
    CHECK(product == c.required_product_sign);
  }

  CHECK(search_noncontextual_assignment(square, {}).satisfying_assignments == 512);
  CHECK(report.elapsed.count() >= 0);
}

TEST_CASE("adding a constraint never increases the count") {
  const auto square = build_mermin_square();
  for (const auto& base : {mermin_constraints(), [] {
                             auto c = mermin_constraints();
                             c[5].required_product_sign = 1;
                             return c;
                           }()}) {
    std::array<long, 64> counts{};
    for (int mask = 0; mask < 64; ++mask) {
      std::vector<ContextConstraint> subset;
      for (int i = 0; i < 6; ++i)
        if (mask >> i & 1) subset.push_back(base[static_cast<std::size_t>(i)]);
      counts[static_cast<std::size_t>(mask)] = search_noncontextual_assignment(square, subset).satisfying_assignments;
    }
    for (int mask = 0; mask < 64; ++mask)
      for (int i = 0; i < 6; ++i)
        CHECK(counts[static_cast<std::size_t>(mask | (1 << i))] <= counts[static_cast<std::size_t>(mask)]);
  }
}

TEST_CASE("malformed constraints are rejected") {
  const auto square = build_mermin_square();
  CHECK_THROWS_AS(search_noncontextual_assignment(square, {{{0, 9}, 1, "bad"}}), std::invalid_argument);
  CHECK_THROWS_AS(search_noncontextual_assignment(square, {{{0, 0}, 1, "dup"}}), std::invalid_argument);
  CHECK_THROWS_AS(search_noncontextual_assignment(square, {{{0, 1}, 2, "sign"}}), std::invalid_argument);
  auto broken = square;
  broken.cells[0] = 2.0 * broken.cells[0];
  CHECK_THROWS_AS(search_noncontextual_assignment(broken, {}), std::invalid_argument);
}

TEST_CASE("von Neumann counterexample") {
  const auto r = von_neumann_counterexample();
  const double root2 = std::sqrt(2.0);
  REQUIRE(r.sum_eigenvalues.size() == 2);
  // lambda^2 - 2 = 0
  CHECK(std::abs(r.sum_eigenvalues[0] + root2) < 1e-12);
  CHECK(std::abs(r.sum_eigenvalues[1] - root2) < 1e-12);
  CHECK(r.individual_sums == std::vector<double>{-2.0, 0.0, 2.0});
  CHECK(std::abs(r.min_gap - (2.0 - root2)) < 1e-12);
}

TEST_CASE("CHSH local bound by enumeration") {
  const auto r = chsh_local_bound();
  CHECK(r.strategy_count == 16);
  CHECK(r.max_S == 2);
  CHECK(r.optimal_strategy_count == 8);

  int abs_two = 0, max_seen = -100;
  for (int a : {-1, 1})
    for (int ap : {-1, 1})
      for (int b : {-1, 1})
        for (int bp : {-1, 1}) {
          const int s = a * (b + bp) + ap * (b - bp);
          max_seen = std::max(max_seen, s);
          abs_two += std::abs(s) == 2;
        }
  CHECK(max_seen == 2);
  // Every deterministic strategy has |S| = 2; half of them reach +2.
  CHECK(abs_two == 16);
  CHECK(1 + 1 + 1 - 1 == 2);
}

TEST_CASE("CHSH quantum value") {
  const double q = chsh_quantum_value();
  CHECK(std::abs(q - 2.0 * std::sqrt(2.0)) < 1e-9);

  const auto s = chsh_standard_settings();
  Eigen::SelfAdjointEigenSolver<Operator> solver(chsh_operator(s.a, s.a_prime, s.b, s.b_prime), Eigen::EigenvaluesOnly);
  CHECK(std::abs(solver.eigenvalues().maxCoeff() - q) < 1e-12);

  CHECK(std::abs(chsh_quantum_value({s.a, s.a_prime, s.b_prime, s.b}) - 2.0 * std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(chsh_quantum_value({s.a, s.a_prime, s.b, s.b}) - 2.0) < 1e-12);
  CHECK(chsh_local_bound().max_S < q);
}

TEST_CASE("random spin settings never exceed 2 sqrt2") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal;
  auto random_axis = [&] {
    Vector3 v(normal(gen), normal(gen), normal(gen));
    return Operator(spin_along(Vector3(v.normalized())));
  };
  for (int t = 0; t < 200; ++t) {
    const double q = chsh_quantum_value({random_axis(), random_axis(), random_axis(), random_axis()});
    CHECK(q <= 2.0 * std::sqrt(2.0) + 1e-9);
  }
}
