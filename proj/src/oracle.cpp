#include "qsolve/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qsolve/error.hpp"

namespace qsolve::oracle {

namespace {

constexpr cplx I{0.0, 1.0};

double effective_energy(const StepProfile& profile, double e) {
  for (int pass = 0; pass < 16; ++pass) {
    bool moved = false;
    for (double v : profile.values()) {
      if (is_degenerate(e, v)) {
        e = nudged_energy(e, v);
        moved = true;
      }
    }
    if (!moved) break;
  }
  return e;
}

}  // namespace

cplx TransferMatrix::determinant() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

double TransferMatrix::log_abs_determinant() const { return std::log(std::abs(determinant())) + 2.0 * log_scale; }

TransferMatrix TransferMatrix::operator*(const TransferMatrix& rhs) const {
  TransferMatrix out;
  double big = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      out.m[i][j] = m[i][0] * rhs.m[0][j] + m[i][1] * rhs.m[1][j];
      big = std::max(big, std::abs(out.m[i][j]));
    }
  out.log_scale = log_scale + rhs.log_scale;
  if (big > 0.0 && std::isfinite(big)) {
    for (auto& row : out.m)
      for (auto& v : row) v /= big;
    out.log_scale += std::log(big);
  }
  return out;
}

TransferMatrix layer_matrix(double v, double width, double energy) {
  TransferMatrix t;
  if (energy > v) {
    double q = std::sqrt(energy - v);
    double c = std::cos(q * width), s = std::sin(q * width);
    t.m = {{{c, -s / q}, {q * s, c}}};
  } else if (energy < v) {
    // cosh and sinh scaled by exp(-kappa w)
    double kappa = std::sqrt(v - energy);
    double decay = std::exp(-2.0 * kappa * width);
    double ch = 0.5 * (1.0 + decay), sh = 0.5 * (1.0 - decay);
    t.m = {{{ch, -sh / kappa}, {-kappa * sh, ch}}};
    t.log_scale = kappa * width;
  } else {
    t.m = {{{1.0, -width}, {0.0, 1.0}}};
  }
  return t;
}

ScatteringResult tm_scatter(const StepProfile& profile, Energy energy) {
  const double e = effective_energy(profile, energy.value());
  const double k = std::sqrt(e);
  const auto bp = profile.breakpoints();
  const auto vals = profile.values();

  // state = exp(log_scale) * (psi, psi'), transmitted wave e^{ikx} on the right
  cplx psi = 1.0, dpsi = I * k;
  cplx log_scale = I * k * bp.back();
  for (std::size_t j = vals.size(); j-- > 0;) {
    TransferMatrix t = layer_matrix(vals[j], profile.width(j), e);
    cplx a = t.m[0][0] * psi + t.m[0][1] * dpsi;
    cplx b = t.m[1][0] * psi + t.m[1][1] * dpsi;
    double big = std::max(std::abs(a), std::abs(b));
    if (!(big > 0.0) || !std::isfinite(big)) throw SolverError("transfer-matrix state degenerated", e, j);
    psi = a / big;
    dpsi = b / big;
    log_scale += t.log_scale + std::log(big);
  }

  // split into incident and reflected plane waves at b_0
  const double b0 = bp.front();
  cplx inc = 0.5 * (psi + dpsi / (I * k));
  cplx ref = 0.5 * (psi - dpsi / (I * k));
  if (inc == 0.0) throw SolverError("vanishing incident amplitude", e);

  ScatteringResult out;
  out.energy = e;
  cplx log_a = log_scale - I * k * b0 + std::log(inc);
  out.log_t = {-log_a.real(), std::remainder(-log_a.imag(), 2.0 * std::numbers::pi)};
  out.t = std::exp(out.log_t);
  out.r = ref / inc * std::exp(2.0 * I * k * b0);
  out.p_r = std::norm(out.r);
  out.ln_p_t = 2.0 * out.log_t.real();
  out.p_t = std::exp(out.ln_p_t);
  out.ln_a1 = std::numeric_limits<double>::quiet_NaN();
  return out;
}

double single_barrier_pt(double v, double w, Energy energy) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("barrier height must be positive");
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("barrier width must be positive");
  double e = is_degenerate(energy.value(), v) ? nudged_energy(energy.value(), v) : energy.value();
  double ratio;
  if (e < v) {
    double s = std::sinh(std::sqrt(v - e) * w);
    ratio = v * v * s * s / (4.0 * e * (v - e));
  } else {
    double s = std::sin(std::sqrt(e - v) * w);
    ratio = v * v * s * s / (4.0 * e * (e - v));
  }
  return 1.0 / (1.0 + ratio);
}

}  // namespace qsolve::oracle
