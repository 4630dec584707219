#include "bohm/wavefield.hpp"

#include <algorithm>
#include <cmath>

namespace bohm {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid1D::Grid1D(double x_min, double x_max, int n_points) : x_min_(x_min), x_max_(x_max), n_(n_points) {
  if (!(x_max > x_min)) throw std::invalid_argument("Grid1D: x_max must exceed x_min");
  if (!is_power_of_two(n_points) || n_points < kMinPoints || n_points > kMaxPoints)
    throw std::invalid_argument("Grid1D: n_points must be a power of two in [256, 16384], got " +
                                std::to_string(n_points));
}

double Grid1D::k_max() const { return M_PI * n_ / length(); }

Eigen::ArrayXd Grid1D::nodes() const {
  Eigen::ArrayXd x(n_);
  for (int i = 0; i < n_; ++i) x[i] = this->x(i);
  return x;
}

Eigen::ArrayXd Grid1D::wavenumbers() const {
  Eigen::ArrayXd k(n_);
  const double dk = 2.0 * M_PI / length();
  for (int i = 0; i < n_; ++i) k[i] = dk * (i < n_ / 2 ? i : i - n_);
  return k;
}

SpinorField::SpinorField(const Grid1D& g)
    : grid(g), up(Eigen::ArrayXcd::Zero(g.n_points())), down(Eigen::ArrayXcd::Zero(g.n_points())) {}

void MagnetSpec::validate() const {
  if (!(mu_b >= 0.0)) throw std::invalid_argument("MagnetSpec: mu_b must be >= 0");
  if (!(tau > 0.0)) throw std::invalid_argument("MagnetSpec: tau must be > 0");
}

PotentialSpec PotentialSpec::free() { return {}; }

PotentialSpec PotentialSpec::harmonic(double omega, double center) {
  if (!(omega > 0.0)) throw std::invalid_argument("PotentialSpec: harmonic omega must be > 0");
  PotentialSpec p;
  p.kind_ = Kind::harmonic;
  p.omega_ = omega;
  p.center_ = center;
  return p;
}

PotentialSpec PotentialSpec::tabulated(Eigen::ArrayXd values) {
  PotentialSpec p;
  p.kind_ = Kind::custom_tabulated;
  p.table_ = std::move(values);
  return p;
}

Eigen::ArrayXd PotentialSpec::sample(const Grid1D& grid) const {
  switch (kind_) {
    case Kind::free: return Eigen::ArrayXd::Zero(grid.n_points());
    case Kind::harmonic: return 0.5 * omega_ * omega_ * (grid.nodes() - center_).square();
    case Kind::custom_tabulated:
      if (table_.size() != grid.n_points())
        throw std::invalid_argument("PotentialSpec: tabulated length " + std::to_string(table_.size()) +
                                    " does not match n_points " + std::to_string(grid.n_points()));
      return table_;
  }
  return {};
}

std::string to_string(PotentialSpec::Kind kind) {
  switch (kind) {
    case PotentialSpec::Kind::free: return "free";
    case PotentialSpec::Kind::harmonic: return "harmonic";
    case PotentialSpec::Kind::custom_tabulated: return "custom_tabulated";
  }
  return "?";
}

SpinorField gaussian_packet(const Grid1D& grid, double center, double width, double momentum, Complex alpha,
                            Complex beta) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_packet: width must be > 0");
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9)
    throw std::invalid_argument("gaussian_packet: spin part violates |alpha|^2 + |beta|^2 = 1");
  if (center - 5.0 * width < grid.x_min() || center + 5.0 * width > grid.x_max())
    throw std::invalid_argument("gaussian_packet: packet lies within 5 widths of the grid boundary");

  const Eigen::ArrayXd x = grid.nodes();
  const Eigen::ArrayXd envelope = (-(x - center).square() / (4.0 * width * width)).exp();
  Eigen::ArrayXcd phi(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i) phi[i] = envelope[i] * std::polar(1.0, momentum * x[i]);
  phi /= std::sqrt(phi.abs2().sum() * grid.dx());

  SpinorField f(grid);
  f.up = alpha * phi;
  f.down = beta * phi;
  return f;
}

double max_time_step(const Grid1D& grid, const PotentialSpec& potential) {
  const double v_inf = potential.sample(grid).abs().maxCoeff();
  const double k = grid.k_max();
  return 0.1 / std::max(v_inf, 0.5 * k * k);
}

double boundary_mass(const SpinorField& field) {
  const int n = field.grid.n_points();
  const int edge = std::max(1, static_cast<int>(std::ceil(0.025 * n)));
  const Eigen::ArrayXd rho = field.density();
  const double total = rho.sum();
  if (total == 0.0) return 0.0;
  return (rho.head(edge).sum() + rho.tail(edge).sum()) / total;
}

Propagator::Propagator(const Grid1D& grid, const PotentialSpec& potential, double dt) : grid_(grid), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("Propagator: dt must be > 0");
  const double bound = max_time_step(grid, potential);
  if (dt > bound * (1.0 + 1e-12))
    throw StabilityError("Propagator: dt = " + std::to_string(dt) + " exceeds the stability bound " +
                         std::to_string(bound));
  const Eigen::ArrayXd v = potential.sample(grid);
  const Eigen::ArrayXd k = grid.wavenumbers();
  half_potential_.resize(grid.n_points());
  kinetic_.resize(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i) {
    half_potential_[i] = std::polar(1.0, -0.5 * v[i] * dt);
    kinetic_[i] = std::polar(1.0, -0.5 * k[i] * k[i] * dt);
  }
}

void Propagator::step_component(Eigen::ArrayXcd& psi) {
  psi *= half_potential_;
  buffer_ = psi.matrix();
  fft_.fwd(spectrum_, buffer_);
  spectrum_.array() *= kinetic_;
  fft_.inv(buffer_, spectrum_);
  psi = buffer_.array() * half_potential_;
}

void Propagator::step(SpinorField& field, int steps) {
  if (!(field.grid == grid_)) throw std::invalid_argument("Propagator: field grid mismatch");
  if (steps < 0) throw std::invalid_argument("Propagator: negative step count");
  const bool has_up = (field.up != Complex(0)).any();
  const bool has_down = (field.down != Complex(0)).any();
  const double t0 = field.time;
  for (int s = 0; s < steps; ++s) {
    if (has_up) step_component(field.up);
    if (has_down) step_component(field.down);
    field.time = t0 + (s + 1) * dt_;
    const double edge = boundary_mass(field);
    if (edge > kBoundaryMassLimit)
      throw BoundaryError("boundary monitor: mass fraction " + std::to_string(edge) +
                          " entered the outer 5% of the grid at t = " + std::to_string(field.time));
  }
}

SpinorField evolve(const SpinorField& field, const PotentialSpec& potential, double dt, int steps) {
  Propagator prop(field.grid, potential, dt);
  SpinorField out = field;
  prop.step(out, steps);
  return out;
}

std::vector<SpinorField> evolve_frames(const SpinorField& field, const PotentialSpec& potential, double dt,
                                       int steps, int stride) {
  if (stride < 1 || steps < 0 || steps % stride != 0)
    throw std::invalid_argument("evolve_frames: steps must be a non-negative multiple of stride");
  Propagator prop(field.grid, potential, dt);
  std::vector<SpinorField> frames;
  frames.reserve(static_cast<std::size_t>(steps / stride + 1));
  frames.push_back(field);
  SpinorField current = field;
  for (int s = 0; s < steps; s += stride) {
    prop.step(current, stride);
    current.time = field.time + (s + stride) * dt;
    frames.push_back(current);
  }
  return frames;
}

SpinorField magnet_kick(const SpinorField& field, const MagnetSpec& magnet) {
  magnet.validate();
  SpinorField out = field;
  const double p = magnet.kick();
  if (p == 0.0) return out;
  const Eigen::ArrayXd x = field.grid.nodes();
  for (int i = 0; i < x.size(); ++i) {
    const Complex phase = std::polar(1.0, p * x[i]);
    out.up[i] *= phase;
    out.down[i] *= std::conj(phase);
  }
  return out;
}

namespace {

Interval smallest_interval(const Grid1D& grid, const Eigen::ArrayXd& mass, double threshold) {
  const double total = mass.sum();
  if (total * grid.dx() < 1e-12) return {};
  const double target = (1.0 - threshold) * total;
  const int n = static_cast<int>(mass.size());
  int best_lo = 0, best_hi = n - 1;
  double window = 0.0;
  int lo = 0;
  for (int hi = 0; hi < n; ++hi) {
    window += mass[hi];
    while (lo < hi && window - mass[lo] >= target) window -= mass[lo++];
    if (window >= target && hi - lo < best_hi - best_lo) {
      best_lo = lo;
      best_hi = hi;
    }
  }
  return {grid.x(best_lo), grid.x(best_hi), false};
}

}  // namespace

BranchSupports branch_supports(const SpinorField& field, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("branch_supports: threshold must be in (0, 1)");
  BranchSupports b;
  b.up = smallest_interval(field.grid, field.up.abs2(), threshold);
  b.down = smallest_interval(field.grid, field.down.abs2(), threshold);
  b.separated = b.up.empty || b.down.empty || b.up.hi < b.down.lo || b.down.hi < b.up.lo;
  return b;
}

Eigen::ArrayXcd spectral_derivative(const Grid1D& grid, const Eigen::ArrayXcd& values) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in = values.matrix(), spectrum, out;
  fft.fwd(spectrum, in);
  const Eigen::ArrayXd k = grid.wavenumbers();
  spectrum.array() *= Complex(0, 1) * k.cast<Complex>();
  spectrum[grid.n_points() / 2] = 0.0;
  fft.inv(out, spectrum);
  return out.array();
}

Eigen::ArrayXd velocity_field(const SpinorField& field) {
  const Grid1D& g = field.grid;
  const int n = g.n_points();
  // Real and imaginary parts are differentiated separately so that a real
  // field yields exactly zero current.
  auto real_derivative = [&](const Eigen::ArrayXd& f) -> Eigen::ArrayXd {
    if ((f == 0.0).all()) return Eigen::ArrayXd::Zero(n);
    return spectral_derivative(g, f.cast<Complex>()).real();
  };
  auto current_of = [&](const Eigen::ArrayXcd& psi) -> Eigen::ArrayXd {
    const Eigen::ArrayXd re = psi.real(), im = psi.imag();
    return re * real_derivative(im) - im * real_derivative(re);
  };
  const Eigen::ArrayXd current = current_of(field.up) + current_of(field.down);
  const Eigen::ArrayXd rho = field.density();
  const double floor = kNodeDensityFraction * rho.maxCoeff();
  const double cap = g.k_max();

  Eigen::ArrayXd v(n);
  std::vector<bool> valid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    valid[static_cast<std::size_t>(i)] = rho[i] > floor && rho[i] > 0.0;
    if (valid[static_cast<std::size_t>(i)]) {
      v[i] = std::clamp(current[i] / rho[i], -cap, cap);
    }
  }
  // Fill sub-threshold nodes from the nearest valid node (ties go left).
  int last_valid = -1;
  std::vector<int> nearest(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (valid[static_cast<std::size_t>(i)]) last_valid = i;
    nearest[static_cast<std::size_t>(i)] = last_valid;
  }
  int next_valid = -1;
  for (int i = n - 1; i >= 0; --i) {
    if (valid[static_cast<std::size_t>(i)]) next_valid = i;
    if (valid[static_cast<std::size_t>(i)]) continue;
    const int left = nearest[static_cast<std::size_t>(i)];
    int pick = left;
    if (next_valid >= 0 && (left < 0 || next_valid - i < i - left)) pick = next_valid;
    v[i] = pick >= 0 ? v[pick] : 0.0;
  }
  return v;
}

Moments moments(const Grid1D& grid, const Eigen::ArrayXd& density) {
  Moments m;
  const Eigen::ArrayXd x = grid.nodes();
  const double total = density.sum();
  m.mass = total * grid.dx();
  if (total == 0.0) return m;
  m.mean = (x * density).sum() / total;
  m.width = std::sqrt(((x - m.mean).square() * density).sum() / total);
  return m;
}

}  // namespace bohm
