#include "bohm/conditional.hpp"

#include "bohm/frame_io.hpp"
#include "bohm/rng.hpp"
#include "bohm/trajectories.hpp"

#include <cmath>
#include <ostream>

namespace bohm {

void CouplingSpec::validate() const {
  if (!(shift > 0.0)) throw std::invalid_argument("CouplingSpec: shift must be > 0");
}

namespace {

double boundary_fraction(const PointerField& f) {
  const int n = f.grid.n_points();
  const int edge = std::max(1, static_cast<int>(std::ceil(0.025 * n)));
  const Eigen::ArrayXd rho = f.marginal_density();
  const double total = rho.sum();
  return total > 0.0 ? (rho.head(edge).sum() + rho.tail(edge).sum()) / total : 0.0;
}

Eigen::ArrayXcd translate(const Grid1D& grid, const Eigen::ArrayXcd& values, double shift) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in = values.matrix(), spectrum, out;
  fft.fwd(spectrum, in);
  const Eigen::ArrayXd k = grid.wavenumbers();
  for (int i = 0; i < grid.n_points(); ++i) spectrum[i] *= std::polar(1.0, -k[i] * shift);
  fft.inv(out, spectrum);
  return out.array();
}

}  // namespace

PointerField prepare_pointer_state(const Grid1D& grid, Complex alpha, Complex beta, const PointerPacket& packet) {
  const SpinorField s = gaussian_packet(grid, packet.center, packet.width, 0.0, alpha, beta);
  PointerField f(grid);
  f.amplitudes.row(0) = s.up.transpose();
  f.amplitudes.row(1) = s.down.transpose();
  return f;
}

PointerField apply_coupling(const PointerField& field, const CouplingSpec& coupling) {
  PointerField out = field;
  if (coupling.shift == 0.0) return out;
  coupling.validate();
  out.amplitudes.row(0) = translate(field.grid, field.amplitudes.row(0).transpose(), coupling.shift).transpose();
  out.amplitudes.row(1) = translate(field.grid, field.amplitudes.row(1).transpose(), -coupling.shift).transpose();
  const double edge = boundary_fraction(out);
  if (edge > kBoundaryMassLimit)
    throw BoundaryError("apply_coupling: shifted pointer packet puts mass fraction " + std::to_string(edge) +
                        " in the outer 5% of the grid");
  return out;
}

double branch_overlap(const PointerField& field) {
  const double n0 = std::sqrt(field.component_probability(0));
  const double n1 = std::sqrt(field.component_probability(1));
  if (n0 == 0.0 || n1 == 0.0) return 0.0;
  return (field.amplitudes.row(0).abs() * field.amplitudes.row(1).abs()).sum() * field.grid.dx() / (n0 * n1);
}

Spinor conditional_state(const PointerField& field, double y) {
  const Grid1D& g = field.grid;
  if (!(y >= g.x_min() && y < g.x_max()))
    throw std::out_of_range("conditional_state: Y = " + std::to_string(y) + " lies outside the pointer grid");
  const double s = (y - g.x_min()) / g.dx();
  const int n = g.n_points();
  const int i = std::min(static_cast<int>(s), n - 1);
  const int j = (i + 1) % n;
  const double w = s - i;
  Spinor psi((1.0 - w) * field.amplitudes(0, i) + w * field.amplitudes(0, j),
             (1.0 - w) * field.amplitudes(1, i) + w * field.amplitudes(1, j));
  const double density = psi.squaredNorm();
  const double peak = field.marginal_density().maxCoeff();
  if (!(density > kNodeDensityFraction * peak))
    throw std::domain_error("conditional_state: density at Y = " + std::to_string(y) + " is below the node threshold");
  return psi / std::sqrt(density);
}

PointerRun run_pointer_measurement(Complex alpha, Complex beta, const PointerSetup& setup, long n_trials,
                                   std::uint64_t seed) {
  if (n_trials < 1) throw std::invalid_argument("run_pointer_measurement: n_trials must be >= 1");
  const PointerField prepared = prepare_pointer_state(setup.grid, alpha, beta, setup.packet);
  const PointerField coupled = apply_coupling(prepared, setup.coupling);

  PointerRun run;
  run.overlap = branch_overlap(coupled);
  const Eigen::ArrayXd marginal = coupled.marginal_density();
  const CumulativeMass cdf(setup.grid, marginal);
  run.up_branch_mass = 1.0 - cdf(setup.packet.center);

  const CounterRng rng(seed);
  run.trials.resize(static_cast<std::size_t>(n_trials));
  long up = 0;
  for (long t = 0; t < n_trials; ++t) {
    PointerTrial& trial = run.trials[static_cast<std::size_t>(t)];
    trial.y = cdf.inverse(rng.uniform(static_cast<std::uint64_t>(t)));
    trial.outcome = trial.y >= setup.packet.center ? 0 : 1;
    trial.collapsed = conditional_state(coupled, trial.y);
    trial.leakage = std::norm(trial.collapsed[1 - trial.outcome]);
    run.max_leakage = std::max(run.max_leakage, trial.leakage);
    up += trial.outcome == 0;
  }
  run.statistics = spin_statistics(up, n_trials - up, std::norm(alpha));
  return run;
}

void write_pointer_trials(std::ostream& out, const PointerRun& run, std::string_view config_hash) {
  out << "# config_hash=" << config_hash << '\n';
  out << "trial_id,Y,outcome,up_re,up_im,down_re,down_im\n";
  for (std::size_t t = 0; t < run.trials.size(); ++t) {
    const auto& r = run.trials[t];
    out << t << ',' << format_double(r.y) << ',' << (r.outcome == 0 ? "up" : "down") << ','
        << format_double(r.collapsed[0].real()) << ',' << format_double(r.collapsed[0].imag()) << ','
        << format_double(r.collapsed[1].real()) << ',' << format_double(r.collapsed[1].imag()) << '\n';
  }
}

}  // namespace bohm
