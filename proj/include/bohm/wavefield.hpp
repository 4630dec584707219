// Spinor wave functions on a periodic 1D grid: Gaussian packet preparation,
// split-step spectral evolution, the Stern-Gerlach phase kick, and the
// guiding-equation velocity field. Units are hbar = m = 1.

#ifndef BOHM_WAVEFIELD_HPP_
#define BOHM_WAVEFIELD_HPP_

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace bohm {

using Complex = std::complex<double>;

/// Raised when probability mass reaches the periodic boundary region.
class BoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a time step exceeds the accuracy bound of the split-step scheme.
class StabilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Grid1D {
 public:
  static constexpr int kMinPoints = 256;
  static constexpr int kMaxPoints = 16384;

  Grid1D(double x_min, double x_max, int n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n_points() const { return n_; }
  double length() const { return x_max_ - x_min_; }
  double dx() const { return length() / n_; }
  double x(int i) const { return x_min_ + i * dx(); }
  /// Largest representable wavenumber, pi / dx.
  double k_max() const;

  Eigen::ArrayXd nodes() const;
  /// FFT-ordered angular wavenumbers.
  Eigen::ArrayXd wavenumbers() const;

  bool operator==(const Grid1D&) const = default;

 private:
  double x_min_;
  double x_max_;
  int n_;
};

struct SpinorField {
  Grid1D grid;
  Eigen::ArrayXcd up;
  Eigen::ArrayXcd down;
  double time = 0.0;

  explicit SpinorField(const Grid1D& g);

  Eigen::ArrayXd density() const { return up.abs2() + down.abs2(); }
  double norm() const { return density().sum() * grid.dx(); }
  double up_norm() const { return up.abs2().sum() * grid.dx(); }
  double down_norm() const { return down.abs2().sum() * grid.dx(); }
};

struct MagnetSpec {
  double mu_b = 0.0;
  double tau = 1.0;

  /// Momentum imparted to each spin component, mu_b * tau.
  double kick() const { return mu_b * tau; }
  void validate() const;
};

class PotentialSpec {
 public:
  enum class Kind { free, harmonic, custom_tabulated };

  static PotentialSpec free();
  static PotentialSpec harmonic(double omega, double center = 0.0);
  static PotentialSpec tabulated(Eigen::ArrayXd values);

  Kind kind() const { return kind_; }
  double omega() const { return omega_; }
  double center() const { return center_; }

  /// V at every grid node.
  Eigen::ArrayXd sample(const Grid1D& grid) const;

 private:
  Kind kind_ = Kind::free;
  double omega_ = 0.0;
  double center_ = 0.0;
  Eigen::ArrayXd table_;
};

std::string to_string(PotentialSpec::Kind kind);

/// phi(x) ~ exp(-(x - center)^2 / (4 width^2) + i momentum x), times (alpha, beta).
SpinorField gaussian_packet(const Grid1D& grid, double center, double width, double momentum, Complex alpha,
                            Complex beta);

/// Largest admissible dt: 0.1 / max(|V|_inf, k_max^2 / 2).
double max_time_step(const Grid1D& grid, const PotentialSpec& potential);

/// Fraction of mass in the outer 5% of the grid (2.5% at each end).
double boundary_mass(const SpinorField& field);

inline constexpr double kBoundaryMassLimit = 1e-6;

/// Strang-split propagator; phase factors are computed once per (grid, V, dt).
class Propagator {
 public:
  Propagator(const Grid1D& grid, const PotentialSpec& potential, double dt);

  double dt() const { return dt_; }
  /// Advances in place. Throws BoundaryError if the boundary monitor trips.
  void step(SpinorField& field, int steps);

 private:
  void step_component(Eigen::ArrayXcd& psi);

  Grid1D grid_;
  double dt_;
  Eigen::ArrayXcd half_potential_;
  Eigen::ArrayXcd kinetic_;
  Eigen::FFT<double> fft_;
  Eigen::VectorXcd spectrum_;
  Eigen::VectorXcd buffer_;
};

SpinorField evolve(const SpinorField& field, const PotentialSpec& potential, double dt, int steps);

/// Evolves `steps` steps and returns the initial field plus every
/// `stride`-th state (steps must be a multiple of stride).
std::vector<SpinorField> evolve_frames(const SpinorField& field, const PotentialSpec& potential, double dt,
                                       int steps, int stride);

SpinorField magnet_kick(const SpinorField& field, const MagnetSpec& magnet);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;
};

struct BranchSupports {
  Interval up;
  Interval down;
  bool separated = false;
};

/// Smallest node intervals holding a fraction (1 - threshold) of each
/// component's mass; `separated` iff they are disjoint.
BranchSupports branch_supports(const SpinorField& field, double threshold);

/// Spectral first derivative of periodic samples (Nyquist mode dropped).
Eigen::ArrayXcd spectral_derivative(const Grid1D& grid, const Eigen::ArrayXcd& values);

/// v = Im(up* d up + down* d down) / (|up|^2 + |down|^2), regularized at nodes.
Eigen::ArrayXd velocity_field(const SpinorField& field);

/// Relative density below which the velocity is borrowed from the nearest
/// node above it.
inline constexpr double kNodeDensityFraction = 1e-12;

/// Position mean and standard deviation of a density sampled on the grid.
struct Moments {
  double mean = 0.0;
  double width = 0.0;
  double mass = 0.0;
};

Moments moments(const Grid1D& grid, const Eigen::ArrayXd& density);

}  // namespace bohm

#endif  // BOHM_WAVEFIELD_HPP_
