// Two-factor measurement model: a spin-1/2 system coupled to a 1D pointer
// coordinate y. Provides the conditional spinor Psi(., Y) at the actual
// pointer position and the resulting effective collapse.

#ifndef BOHM_CONDITIONAL_HPP_
#define BOHM_CONDITIONAL_HPP_

#include "bohm/statistics.hpp"
#include "bohm/wavefield.hpp"

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace bohm {

using Spinor = Eigen::Vector2cd;

struct PointerPacket {
  double center = 0.0;
  double width = 1.0;
};

struct CouplingSpec {
  double shift = 10.0;  // pointer displacement per spin eigenvalue
  void validate() const;
};

/// Psi(i, y) for spin component i in {0 = up, 1 = down}.
struct PointerField {
  using Amplitudes = Eigen::Array<Complex, 2, Eigen::Dynamic, Eigen::RowMajor>;

  Grid1D grid;
  Amplitudes amplitudes;

  explicit PointerField(const Grid1D& g) : grid(g), amplitudes(Amplitudes::Zero(2, g.n_points())) {}

  Eigen::ArrayXd marginal_density() const { return amplitudes.abs2().colwise().sum().transpose(); }
  double norm() const { return amplitudes.abs2().sum() * grid.dx(); }
  /// Quadrature of |Psi(i, y)|^2 over the grid.
  double component_probability(int i) const { return amplitudes.row(i).abs2().sum() * grid.dx(); }
};

/// amplitudes(i, .) = c_i Phi_0 with (c_0, c_1) = (alpha, beta).
PointerField prepare_pointer_state(const Grid1D& grid, Complex alpha, Complex beta, const PointerPacket& packet);

/// Translates component 0 by +shift and component 1 by -shift (spectrally).
PointerField apply_coupling(const PointerField& field, const CouplingSpec& coupling);

/// int |Phi_0(y) Phi_1(y)| dy for the normalized component envelopes.
double branch_overlap(const PointerField& field);

/// Normalized (Psi(0, Y), Psi(1, Y)), linearly interpolated in y.
Spinor conditional_state(const PointerField& field, double y);

struct PointerTrial {
  double y = 0.0;
  int outcome = 0;  // 0 = up (y >= center), 1 = down
  Spinor collapsed;
  double leakage = 0.0;  // |component of the unoccupied branch|^2
};

struct PointerSetup {
  Grid1D grid{-32.0, 32.0, 256};
  PointerPacket packet;
  CouplingSpec coupling;
};

struct PointerRun {
  MeasurementStatistics statistics;
  std::vector<PointerTrial> trials;
  double max_leakage = 0.0;
  double overlap = 0.0;
  double up_branch_mass = 0.0;  // quadrature of the marginal over y >= center
};

/// Samples Y from the post-coupling marginal (trial i uses counter i of the
/// seed's stream) and collapses the conditional spinor for every trial.
PointerRun run_pointer_measurement(Complex alpha, Complex beta, const PointerSetup& setup, long n_trials,
                                   std::uint64_t seed);

/// trial_id,Y,outcome,up_re,up_im,down_re,down_im
void write_pointer_trials(std::ostream& out, const PointerRun& run, std::string_view config_hash);

}  // namespace bohm

#endif  // BOHM_CONDITIONAL_HPP_
