#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qsolve/profile.hpp"

namespace qsolve {

using cplx = std::complex<double>;

/// Dimensionless energy E = k^2, E > 0.
class Energy {
 public:
  explicit Energy(double e);
  double value() const { return e_; }
  double k() const { return k_; }

 private:
  double e_;
  double k_;
};

/// Relative window inside which E is treated as equal to a layer value.
inline constexpr double kDegenerateTolerance = 1e-12;

bool is_degenerate(double e, double v);
/// Energy moved just outside the degenerate window of layer value v.
double nudged_energy(double e, double v);

/// sqrt(V - E) when V > E, i sqrt(E - V) otherwise; degenerate E = V is evaluated at the nudged energy.
cplx layer_momentum(Energy e, double v);

/// Per-energy solver state for one profile.
///
/// The decaying/growing amplitude ratio A_j of a barrier layer is stored as
/// log_b[j] = log(A_j exp(-2 p_j b_j)), the ratio at the layer's right edge, in log form: the ratio
/// anywhere in the layer is exp(log_b[j] + 2 p_j (b_j - x)) and is never formed outside log space
/// when it would overflow. Zero-valued layers carry their constant cutoff reflection c[j] instead.
struct LayerCoefficients {
  double energy = 0.0;            ///< energy actually used (after any degenerate nudge)
  double requested_energy = 0.0;
  double k = 0.0;
  std::vector<cplx> p;
  std::vector<cplx> log_b;
  std::vector<cplx> c;
  /// ln|A_1| of the first nonzero layer; NaN when the profile is identically zero.
  double ln_a1 = 0.0;

  bool is_zero_layer(std::size_t j, const StepProfile& profile) const { return profile.values()[j] == 0.0; }
  cplx scaled_a(std::size_t j) const { return std::exp(log_b[j]); }
};

struct ScatteringResult {
  double energy = 0.0;
  cplx r;
  cplx t;      ///< exp(log_t); zero when it underflows
  cplx log_t;
  double p_r = 0.0;
  double p_t = 0.0;
  double ln_p_t = 0.0;
  double ln_a1 = 0.0;
};

LayerCoefficients compute_coefficients(const StepProfile& profile, Energy e);

/// Cutoff reflection amplitude of the part of the potential right of x.
cplx cutoff_reflection_at(const LayerCoefficients& coeffs, const StepProfile& profile, double x);

/// log of the ratio T / T(b_{j-1}) contributed by layer j (zero for zero-valued layers).
cplx layer_log_factor(const LayerCoefficients& coeffs, const StepProfile& profile, std::size_t j);

ScatteringResult transmission(const LayerCoefficients& coeffs, const StepProfile& profile);

ScatteringResult scatter(const StepProfile& profile, Energy e);

/// Complex log of psi(x) for an incident wave amplitude*e^{ikx} from the left.
std::vector<cplx> log_wavefunction(const LayerCoefficients& coeffs, const StepProfile& profile,
                                   std::span<const double> grid, cplx amplitude = 1.0);

std::vector<cplx> wavefunction(const LayerCoefficients& coeffs, const StepProfile& profile,
                               std::span<const double> grid, cplx amplitude = 1.0);

/// psi and dpsi/dx at one point, from the closed-form layer solution.
struct WaveValue {
  cplx psi;
  cplx dpsi;
};
WaveValue wave_value(const LayerCoefficients& coeffs, const StepProfile& profile, double x, cplx amplitude = 1.0);

/// Largest relative mismatch of psi and of a finite-difference psi' across the breakpoints.
struct ContinuityReport {
  double max_psi_jump = 0.0;
  double max_dpsi_jump = 0.0;
};
ContinuityReport check_continuity(const LayerCoefficients& coeffs, const StepProfile& profile);

}  // namespace qsolve
