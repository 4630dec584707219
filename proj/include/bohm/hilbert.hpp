// Dense complex linear algebra on small Hilbert spaces (dimension <= 16).
//
// Operators are fixed-capacity Eigen matrices so everything lives on the
// stack; all functions are templated on the real scalar type and accept any
// Eigen expression that evaluates to an operator.

#ifndef BOHM_HILBERT_HPP_
#define BOHM_HILBERT_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace bohm {

inline constexpr int kMaxHilbertDim = 16;

template <typename Scalar>
using OperatorT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic,
                                Eigen::ColMajor, kMaxHilbertDim, kMaxHilbertDim>;
template <typename Scalar>
using StateVectorT =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxHilbertDim, 1>;
template <typename Scalar>
using Vector3T = Eigen::Matrix<Scalar, 3, 1>;

using Complex = std::complex<double>;
using Operator = OperatorT<double>;
using StateVector = StateVectorT<double>;
using Vector3 = Vector3T<double>;

enum class Axis { x, y, z };

// Threshold for "exact" operator identities (Frobenius norm).
inline constexpr double kIdentityTolerance = 1e-12;

template <typename Scalar = double>
OperatorT<Scalar> identity(int dim) {
  if (dim < 1 || dim > kMaxHilbertDim) throw std::invalid_argument("identity: dimension out of range");
  return OperatorT<Scalar>::Identity(dim, dim);
}

template <typename Scalar = double>
OperatorT<Scalar> pauli(Axis axis) {
  using C = std::complex<Scalar>;
  OperatorT<Scalar> s(2, 2);
  switch (axis) {
    case Axis::x: s << C(0), C(1), C(1), C(0); break;
    case Axis::y: s << C(0), C(0, -1), C(0, 1), C(0); break;
    case Axis::z: s << C(1), C(0), C(0), C(-1); break;
  }
  return s;
}

/// Kronecker product a (x) b. The result must fit in kMaxHilbertDim.
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Complex = typename DerivedA::Scalar;
  using Real = typename Complex::value_type;
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > kMaxHilbertDim || cols > kMaxHilbertDim)
    throw std::invalid_argument("tensor: result dimension " + std::to_string(rows) +
                                " exceeds " + std::to_string(kMaxHilbertDim));
  OperatorT<Real> out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename DerivedA, typename DerivedB>
auto commutator_norm(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw std::invalid_argument("commutator_norm: dimension mismatch");
  return (a * b - b * a).norm();
}

template <typename Derived>
auto hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = kIdentityTolerance) {
  return a.rows() == a.cols() && hermiticity_defect(a) < tol;
}

/// Eigenvalues of a Hermitian operator in ascending order.
///
/// Cyclic complex Jacobi: each rotation first removes the phase of the pivot
/// a_pq with a diagonal unitary, then zeroes it with a real Givens rotation.
/// Stops when the off-diagonal Frobenius norm drops below 1e-14 (scaled by
/// max(1, |A|_F)); throws after 100 sweeps.
template <typename Derived>
std::vector<typename Derived::Scalar::value_type> hermitian_eigenvalues(
    const Eigen::MatrixBase<Derived>& input) {
  using Complex = typename Derived::Scalar;
  using Real = typename Complex::value_type;
  constexpr int kMaxSweeps = 100;
  // 1e-14 in double; a few ulps for narrower scalars.
  const Real kOffTolerance = std::max(Real(1e-14), Real(16) * std::numeric_limits<Real>::epsilon());

  if (input.rows() != input.cols()) throw std::invalid_argument("hermitian_eigenvalues: matrix not square");
  if (!is_hermitian(input)) throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");

  OperatorT<Real> a = input;
  const Eigen::Index n = a.rows();
  const Real scale = std::max(Real(1), a.norm());

  auto off_norm = [&] {
    Real s = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() > kOffTolerance * scale; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real r = std::abs(a(p, q));
        if (r == Real(0)) continue;
        const Complex phase = a(p, q) / r;  // e^{i phi}
        const Real theta = Real(0.5) * std::atan2(Real(2) * r, a(q, q).real() - a(p, p).real());
        const Real c = std::cos(theta), s = std::sin(theta);
        // V = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
        const Complex v_pp = c, v_pq = s;
        const Complex v_qp = -s * std::conj(phase), v_qq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- A V
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * v_pp + akq * v_qp;
          a(k, q) = akp * v_pq + akq * v_qq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- V^H A
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(v_pp) * apk + std::conj(v_qp) * aqk;
          a(q, k) = std::conj(v_pq) * apk + std::conj(v_qq) * aqk;
        }
        a(p, q) = a(q, p) = Complex(0);
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (off_norm() > kOffTolerance * scale)
    throw std::runtime_error("hermitian_eigenvalues: Jacobi iteration did not converge");

  std::vector<Real> values(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = a(i, i).real();
  std::sort(values.begin(), values.end());
  return values;
}

/// axis . sigma for a unit 3-vector.
template <typename Scalar>
OperatorT<Scalar> spin_along(const Vector3T<Scalar>& axis) {
  return axis.x() * pauli<Scalar>(Axis::x) + axis.y() * pauli<Scalar>(Axis::y) +
         axis.z() * pauli<Scalar>(Axis::z);
}

/// SU(2) rotation about unit vector n by angle theta: cos(theta/2) I - i sin(theta/2) n.sigma.
template <typename Scalar>
OperatorT<Scalar> su2_rotation(const Vector3T<Scalar>& n, Scalar theta) {
  using C = std::complex<Scalar>;
  return std::cos(theta / 2) * identity<Scalar>(2) - C(0, std::sin(theta / 2)) * spin_along(n);
}

/// Unitary U with U (axis.sigma) U^H = sigma_z.
///
/// U rotates `axis` onto z-hat by angle acos(axis.z) about axis x z-hat; the
/// antiparallel case -z is a rotation by pi about x-hat.
template <typename Scalar>
OperatorT<Scalar> spin_rotation(const Vector3T<Scalar>& axis) {
  const Scalar length = axis.norm();
  if (length == Scalar(0)) throw std::invalid_argument("spin_rotation: zero axis");
  if (std::abs(length - Scalar(1)) > Scalar(1e-9))
    throw std::invalid_argument("spin_rotation: axis is not a unit vector");

  const Vector3T<Scalar> z_hat = Vector3T<Scalar>::UnitZ();
  const Vector3T<Scalar> cross = axis.cross(z_hat);
  const Scalar sin_theta = cross.norm();
  const Scalar cos_theta = axis.dot(z_hat);
  if (sin_theta == Scalar(0)) {
    if (cos_theta > 0) return identity<Scalar>(2);
    return su2_rotation<Scalar>(Vector3T<Scalar>::UnitX(), Scalar(M_PI));
  }
  return su2_rotation<Scalar>(cross / sin_theta, std::atan2(sin_theta, cos_theta));
}

template <typename Derived>
void normalize(Eigen::MatrixBase<Derived>& v) {
  const auto n = v.norm();
  if (n == 0) throw std::invalid_argument("normalize: zero vector");
  v /= n;
}

/// <psi| A |psi> for a normalized state.
template <typename DerivedA, typename DerivedV>
auto expectation(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedV>& psi) {
  return (psi.adjoint() * a * psi)(0, 0);
}

Axis parse_axis(const std::string& name);
std::string to_string(Axis axis);
Vector3 unit_vector(Axis axis);

}  // namespace bohm

#endif  // BOHM_HILBERT_HPP_
