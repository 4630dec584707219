#include "bohm/hilbert.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace bohm;

namespace {

const Complex I(0.0, 1.0);

Operator random_hermitian(std::mt19937_64& gen, int dim) {
  std::normal_distribution<double> normal;
  Operator b(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) b(i, j) = Complex(normal(gen), normal(gen));
  return (b + b.adjoint()) / 2.0;
}

Operator random_unitary(std::mt19937_64& gen, int dim) {
  std::normal_distribution<double> normal;
  Operator b(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) b(i, j) = Complex(normal(gen), normal(gen));
  Eigen::HouseholderQR<Operator> qr(b);
  return qr.householderQ() * Operator::Identity(dim, dim);
}

std::vector<double> oracle_eigenvalues(const Operator& a) {
  Eigen::SelfAdjointEigenSolver<Operator> solver(a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd v = solver.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

void check_close(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < tol);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("pauli matrices") {
  const Operator x = pauli(Axis::x), y = pauli(Axis::y), z = pauli(Axis::z);
  Operator ex(2, 2), ey(2, 2), ez(2, 2);
  ex << 0, 1, 1, 0;
  ey << 0, -I, I, 0;
  ez << 1, 0, 0, -1;
  CHECK(x == ex);
  CHECK(y == ey);
  CHECK(z == ez);
  for (const Operator& s : {x, y, z}) {
    CHECK(is_hermitian(s));
    CHECK(std::abs(s.trace()) == 0.0);
    CHECK(s * s == identity(2));
  }
  CHECK((x * y - I * z).norm() == 0.0);
  CHECK((y * z - I * x).norm() == 0.0);
  CHECK((z * x - I * y).norm() == 0.0);
}

TEST_CASE("tensor products") {
  CHECK(tensor(identity(2), identity(2)) == identity(4));
  const Operator zz = tensor(pauli(Axis::z), pauli(Axis::z));
  Operator diag = Operator::Zero(4, 4);
  diag.diagonal() << 1, -1, -1, 1;
  CHECK(zz == diag);

  const Operator xy = tensor(pauli(Axis::x), pauli(Axis::y));
  check_close(hermitian_eigenvalues(xy), {-1, -1, 1, 1}, 1e-12);
  check_close(oracle_eigenvalues(xy), {-1, -1, 1, 1}, 1e-12);

  CHECK_THROWS_AS(tensor(identity(4), identity(8)), std::invalid_argument);
  CHECK(tensor(identity(4), identity(4)).rows() == 16);
}

TEST_CASE("tensor is associative and obeys the mixed-product rule") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a = random_hermitian(gen, 2), b = random_hermitian(gen, 2), c = random_hermitian(gen, 2);
    const Operator d = random_hermitian(gen, 2);
    CHECK((tensor(tensor(a, b), c) - tensor(a, tensor(b, c))).norm() < 1e-12);
    CHECK((tensor(a, b) * tensor(c, d) - tensor(a * c, b * d)).norm() < 1e-12);
  }
}

TEST_CASE("commutator norm") {
  const Operator x = pauli(Axis::x), y = pauli(Axis::y);
  CHECK(commutator_norm(x, x) == 0.0);
  // [x, y] = 2i z; |2i z|_F computed directly.
  const Operator two_i_z = 2.0 * I * pauli(Axis::z);
  CHECK(commutator_norm(x, y) == doctest::Approx(two_i_z.norm()));
  CHECK(commutator_norm(x, y) == doctest::Approx(2.0 * std::sqrt(2.0)));

  // (x (x) x)(y (x) y) = (xy)(x)(xy) = (iz)(x)(iz) = -(z (x) z), and the reverse order gives the same.
  const Operator xx = tensor(x, x), yy = tensor(y, y);
  CHECK((xx * yy + tensor(pauli(Axis::z), pauli(Axis::z))).norm() == 0.0);
  CHECK(commutator_norm(xx, yy) < 1e-12);
}

TEST_CASE("hermitian eigenvalues: worked examples") {
  check_close(hermitian_eigenvalues(pauli(Axis::z)), {-1, 1}, 1e-14);
  const double r2 = std::sqrt(2.0);
  check_close(hermitian_eigenvalues(Operator(pauli(Axis::x) + pauli(Axis::z))), {-r2, r2}, 1e-12);
  check_close(hermitian_eigenvalues(tensor(pauli(Axis::z), pauli(Axis::z))), {-1, -1, 1, 1}, 1e-14);

  Operator bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(hermitian_eigenvalues(bad), std::invalid_argument);
}

TEST_CASE("hermitian eigenvalues agree with Eigen's self-adjoint solver") {
  std::mt19937_64 gen(20240611);
  for (int dim : {2, 3, 4, 8, 16}) {
    for (int trial = 0; trial < 25; ++trial) {
      const Operator a = random_hermitian(gen, dim);
      const auto got = hermitian_eigenvalues(a);
      const auto want = oracle_eigenvalues(a);
      CHECK(max_abs_diff(got, want) < 1e-10);
      CHECK(std::is_sorted(got.begin(), got.end()));
    }
  }
}

TEST_CASE("hermitian eigenvalues are unitarily invariant") {
  std::mt19937_64 gen(99);
  int trials = 0;
  for (int dim : {2, 4}) {
    for (int t = 0; t < 60; ++t, ++trials) {
      const Operator a = random_hermitian(gen, dim);
      const Operator u = random_unitary(gen, dim);
      Operator b = u * a * u.adjoint();
      b = (b + b.adjoint()) / 2.0;  // round-off only
      CHECK(max_abs_diff(hermitian_eigenvalues(a), hermitian_eigenvalues(b)) < 1e-9);
    }
  }
  CHECK(trials >= 100);
}

TEST_CASE("single-precision instantiation") {
  OperatorT<float> a = pauli<float>(Axis::x) + pauli<float>(Axis::z);
  const auto ev = hermitian_eigenvalues(a);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-6));
  CHECK(ev[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("spin rotation maps axis . sigma onto sigma_z") {
  CHECK(spin_rotation(Vector3(0, 0, 1)) == identity(2));

  const Operator ux = spin_rotation(Vector3(1, 0, 0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(ux(i, j)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK((ux * pauli(Axis::x) * ux.adjoint() - pauli(Axis::z)).norm() < 1e-12);

  const Operator uminus = spin_rotation(Vector3(0, 0, -1));
  CHECK((uminus * (-pauli(Axis::z)) * uminus.adjoint() - pauli(Axis::z)).norm() < 1e-12);
  // Rotation by pi about x: -i sigma_x.
  CHECK((uminus - Complex(0, -1) * pauli(Axis::x)).norm() < 1e-12);

  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 200; ++t) {
    Vector3 a(normal(gen), normal(gen), normal(gen));
    a.normalize();
    const Operator u = spin_rotation(a);
    CHECK((u * u.adjoint() - identity(2)).norm() < 1e-12);
    CHECK((u * spin_along(a) * u.adjoint() - pauli(Axis::z)).norm() < 1e-12);
  }

  CHECK_THROWS_AS(spin_rotation(Vector3(0, 0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(spin_rotation(Vector3(0, 0, 2)), std::invalid_argument);
}

TEST_CASE("normalize and expectation") {
  StateVector v(2);
  v << Complex(3, 0), Complex(0, 4);
  normalize(v);
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation(pauli(Axis::z), v).real() == doctest::Approx((9.0 - 16.0) / 25.0));
  StateVector zero = StateVector::Zero(2);
  CHECK_THROWS(normalize(zero));
}

TEST_CASE("axis names") {
  CHECK(parse_axis("x") == Axis::x);
  CHECK(to_string(Axis::y) == "y");
  CHECK(unit_vector(Axis::z) == Vector3(0, 0, 1));
  CHECK_THROWS(parse_axis("w"));
}
