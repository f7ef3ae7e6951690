#pragma once

#include <array>
#include <complex>

#include "qsolve/profile.hpp"
#include "qsolve/recursion.hpp"

namespace qsolve::oracle {

/// 2x2 matrix acting on the state (psi, psi') and mapping it from the right edge of a layer to its left edge.
/// `log_scale` is factored out so that wide opaque layers stay representable: M = exp(log_scale) * m.
struct TransferMatrix {
  std::array<std::array<cplx, 2>, 2> m{};
  double log_scale = 0.0;

  cplx determinant() const;
  /// log|det| including the factored scale.
  double log_abs_determinant() const;
  TransferMatrix operator*(const TransferMatrix& rhs) const;
};

TransferMatrix layer_matrix(double v, double width, double energy);

/// Scattering by plane-wave matching and (psi, psi') propagation from the transmitted side.
/// Shares no numerics with the recursion module.
ScatteringResult tm_scatter(const StepProfile& profile, Energy e);

/// Closed-form transmission probability of a single rectangular barrier of height v and width w.
double single_barrier_pt(double v, double w, Energy e);

}  // namespace qsolve::oracle
