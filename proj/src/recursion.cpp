#include "qsolve/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qsolve/error.hpp"

namespace qsolve {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

cplx safe_log(cplx v) { return v == 0.0 ? cplx(-kInf, 0.0) : std::log(v); }

// Keeps accumulated phases small so that exp() of a long sum stays accurate.
cplx wrap_phase(cplx v) { return {v.real(), std::remainder(v.imag(), 2.0 * std::numbers::pi)}; }

// (1 + z) / (1 - z) - 1 = 2z / (1 - z) for z = exp(lz)
cplx mobius_minus_one(cplx lz) {
  if (lz.real() <= 0.0) {
    cplx z = std::exp(lz);
    return 2.0 * z / (1.0 - z);
  }
  cplx w = std::exp(-lz);
  return 2.0 / (w - 1.0);
}


// log(1 - exp(lz))
cplx log_one_minus_exp(cplx lz) {
  if (lz.real() <= 0.0) return safe_log(1.0 - std::exp(lz));
  return lz + safe_log(std::exp(-lz) - 1.0);
}

// log(a + exp(lz) * b)
cplx log_linear(cplx a, cplx b, cplx lz) {
  if (lz.real() <= 0.0) return safe_log(a + std::exp(lz) * b);
  return lz + safe_log(a * std::exp(-lz) + b);
}

cplx raw_momentum(double e, double v) { return v > e ? cplx(std::sqrt(v - e), 0.0) : cplx(0.0, std::sqrt(e - v)); }

// Per-layer combinations that cancel as V -> 0; evaluated without the cancellation.
struct LayerTerms {
  cplx kip;  // k + i p
  cplx kim;  // k - i p
};

LayerTerms layer_terms(double k, cplx p, double v) {
  if (p.real() == 0.0) {
    double q = p.imag();
    return {v / (k + q), k + q};  // k - q = V / (k + q)
  }
  return {k + I * p, k - I * p};
}

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

// R(x) e^{-2ikx} in a nonzero layer, for a ratio exp(lz) at x.
cplx reflection_factor(double k, cplx p, double v, cplx lz) {
  LayerTerms t = layer_terms(k, p, v);
  // (2E - V + 2ikp f) / V with f = 1 + g; 2E - V + 2ikp = (k + ip)^2 since p^2 = V - E
  return (t.kip * t.kip + 2.0 * I * k * p * mobius_minus_one(lz)) / v;
}

cplx reflection_left_edge(const LayerCoefficients& c, const StepProfile& profile, std::size_t j) {
  double v = profile.values()[j];
  double bl = profile.breakpoints()[j];
  cplx lz = c.log_b[j] + 2.0 * c.p[j] * profile.width(j);
  return reflection_factor(c.k, c.p[j], v, lz) * std::exp(2.0 * I * c.k * bl);
}

}  // namespace

Energy::Energy(double e) : e_(e), k_(std::sqrt(e)) {
  if (!std::isfinite(e) || !(e > 0.0)) throw InvalidArgument("energy must be positive and finite");
}

bool is_degenerate(double e, double v) { return std::abs(e - v) <= kDegenerateTolerance * std::max(1.0, std::abs(v)); }

double nudged_energy(double e, double v) {
  if (!is_degenerate(e, v)) return e;
  return v + 2.0 * kDegenerateTolerance * std::max(1.0, std::abs(v));
}

cplx layer_momentum(Energy e, double v) { return raw_momentum(nudged_energy(e.value(), v), v); }

LayerCoefficients compute_coefficients(const StepProfile& profile, Energy energy) {
  const auto vals = profile.values();
  const auto bp = profile.breakpoints();
  const std::size_t n = profile.layers();

  LayerCoefficients c;
  c.requested_energy = energy.value();
  c.energy = effective_energy(profile, energy.value());
  const double e = c.energy;
  const double k = std::sqrt(e);
  c.k = k;
  c.p.resize(n);
  c.log_b.assign(n, cplx(-kInf, 0.0));
  c.c.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) c.p[j] = raw_momentum(e, vals[j]);

  // Backward sweep from the virtual layer n+1, where A = 0.
  for (std::size_t jj = n; jj-- > 0;) {
    const double v = vals[jj];
    const bool last = jj + 1 == n;
    if (v == 0.0) {
      if (last) c.c[jj] = 0.0;
      else if (vals[jj + 1] == 0.0) c.c[jj] = c.c[jj + 1];
      else c.c[jj] = reflection_left_edge(c, profile, jj + 1);
      continue;
    }
    const cplx p = c.p[jj];
    const LayerTerms t = layer_terms(k, p, v);
    cplx num, den;
    if (last || vals[jj + 1] == 0.0) {
      // right neighbour has constant cutoff reflection C_{j+1}
      const cplx cn = last ? cplx(0.0) : c.c[jj + 1];
      const cplx vc = v * cn * std::exp(-2.0 * I * k * bp[jj + 1]);
      // V - 2k(k -+ ip) = -(k -+ ip)^2
      num = vc - t.kip * t.kip;
      den = vc - t.kim * t.kim;
    } else {
      const double v1 = vals[jj + 1];
      const cplx p1 = c.p[jj + 1];
      const cplx g = mobius_minus_one(c.log_b[jj + 1] + 2.0 * p1 * profile.width(jj + 1));
      // D - ikV with D = V p1 (1 + g) and p1 - ik = -i (k + i p1), kept free of cancellation as V1 -> 0
      const cplx d = v * p1 * g - I * v * layer_terms(k, p1, v1).kip;
      num = d + I * v1 * t.kip;
      den = d + I * v1 * t.kim;
    }
    if (den == 0.0 || !std::isfinite(std::abs(den)) || !std::isfinite(std::abs(num)))
      throw SolverError("vanishing denominator in the coefficient recursion", e, jj);
    c.log_b[jj] = safe_log(num) - std::log(den);
  }

  c.ln_a1 = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < n; ++j) {
    if (vals[j] != 0.0) {
      c.ln_a1 = c.log_b[j].real() + 2.0 * c.p[j].real() * bp[j + 1];
      break;
    }
  }
  return c;
}

cplx cutoff_reflection_at(const LayerCoefficients& coeffs, const StepProfile& profile, double x) {
  if (x >= profile.right()) return 0.0;
  if (x < profile.left()) {
    return profile.values()[0] == 0.0 ? coeffs.c[0] : reflection_left_edge(coeffs, profile, 0);
  }
  std::size_t j = *profile.layer_at(x);
  double v = profile.values()[j];
  if (v == 0.0) return coeffs.c[j];
  cplx lz = coeffs.log_b[j] + 2.0 * coeffs.p[j] * (profile.breakpoints()[j + 1] - x);
  return reflection_factor(coeffs.k, coeffs.p[j], v, lz) * std::exp(2.0 * I * coeffs.k * x);
}

cplx layer_log_factor(const LayerCoefficients& coeffs, const StepProfile& profile, std::size_t j) {
  double v = profile.values()[j];
  if (v == 0.0) return 0.0;
  const cplx p = coeffs.p[j];
  const double w = profile.width(j);
  const LayerTerms t = layer_terms(coeffs.k, p, v);
  // (p - ik) w + log(1 - B) - log(1 - B e^{2pw})
  return -I * t.kip * w + log_one_minus_exp(coeffs.log_b[j]) - log_one_minus_exp(coeffs.log_b[j] + 2.0 * p * w);
}

ScatteringResult transmission(const LayerCoefficients& coeffs, const StepProfile& profile) {
  ScatteringResult out;
  out.energy = coeffs.energy;
  cplx log_t = 0.0;
  for (std::size_t j = 0; j < profile.layers(); ++j) log_t = wrap_phase(log_t + layer_log_factor(coeffs, profile, j));
  out.log_t = log_t;
  out.t = std::exp(log_t);
  out.r = cutoff_reflection_at(coeffs, profile, std::nextafter(profile.left(), -kInf));
  out.p_r = std::norm(out.r);
  out.ln_p_t = 2.0 * log_t.real();
  out.p_t = std::exp(out.ln_p_t);
  out.ln_a1 = coeffs.ln_a1;
  return out;
}

ScatteringResult scatter(const StepProfile& profile, Energy e) {
  return transmission(compute_coefficients(profile, e), profile);
}

namespace {

struct LogWave {
  cplx log_psi;
  cplx log_dpsi;
};

// Evaluates the closed form belonging to `region` at x: region 0 is x < b_0, region j+1 is layer j,
// region n+1 is x > b_n. The formula extends analytically past the region's edges.
class WaveEvaluator {
 public:
  WaveEvaluator(const LayerCoefficients& c, const StepProfile& profile, cplx amplitude)
      : c_(c), profile_(profile), log_a_(std::log(amplitude)), n_(profile.layers()) {
    prefix_.assign(n_ + 1, 0.0);
    left_edge_.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      prefix_[j + 1] = wrap_phase(prefix_[j] + layer_log_factor(c, profile, j));
      if (profile.values()[j] != 0.0)
        left_edge_[j] = log_one_minus_exp(c.log_b[j] + 2.0 * c.p[j] * profile.width(j));
    }
    r_ = cutoff_reflection_at(c, profile, std::nextafter(profile.left(), -kInf));
  }

  std::size_t region_of(double x) const {
    if (x < profile_.left()) return 0;
    if (x > profile_.right()) return n_ + 1;
    return *profile_.layer_at(x) + 1;
  }

  LogWave at(double x) const { return in_region(region_of(x), x); }

  LogWave in_region(std::size_t region, double x) const {
    const double k = c_.k;
    const cplx ikx = I * k * x;
    if (region == 0) return plane(log_a_, r_, k, x);
    if (region == n_ + 1) {
      cplx lp = log_a_ + prefix_[n_] + ikx;
      return {lp, lp + std::log(I * k)};
    }
    const std::size_t j = region - 1;
    const double v = profile_.values()[j];
    if (v == 0.0) return plane(log_a_ + prefix_[j], c_.c[j], k, x);

    const auto bp = profile_.breakpoints();
    const cplx p = c_.p[j];
    const LayerTerms t = layer_terms(k, p, v);
    const cplx lz = c_.log_b[j] + 2.0 * p * (bp[j + 1] - x);
    // psi = A T/T(x) [e^{ikx} + e^{-ikx} R(x)], written as C (k + ip - z (k - ip)) with C carried in log form
    const cplx log_c = log_a_ + prefix_[j] - I * t.kip * (x - bp[j]) - left_edge_[j] + std::log(cplx(2.0 * k / v)) + ikx;
    const cplx lp = log_c + log_linear(t.kip, -t.kim, lz);
    const cplx ld = log_c + std::log(p) + log_linear(t.kip, t.kim, lz);
    return {lp, ld};
  }

 private:
  // amp (e^{ikx} + refl e^{-ikx}), derivative ik amp (e^{ikx} - refl e^{-ikx})
  static LogWave plane(cplx log_amp, cplx refl, double k, double x) {
    cplx fwd = std::exp(I * k * x);
    cplx back = refl * std::conj(fwd);
    return {log_amp + safe_log(fwd + back), log_amp + std::log(I * k) + safe_log(fwd - back)};
  }

  const LayerCoefficients& c_;
  const StepProfile& profile_;
  cplx log_a_;
  std::size_t n_;
  std::vector<cplx> prefix_;
  std::vector<cplx> left_edge_;
  cplx r_;
};

}  // namespace

std::vector<cplx> log_wavefunction(const LayerCoefficients& coeffs, const StepProfile& profile,
                                   std::span<const double> grid, cplx amplitude) {
  if (amplitude == 0.0) throw InvalidArgument("incident amplitude must be nonzero");
  WaveEvaluator w(coeffs, profile, amplitude);
  std::vector<cplx> out;
  out.reserve(grid.size());
  for (double x : grid) {
    if (!std::isfinite(x)) throw InvalidArgument("grid points must be finite");
    out.push_back(w.at(x).log_psi);
  }
  return out;
}

std::vector<cplx> wavefunction(const LayerCoefficients& coeffs, const StepProfile& profile,
                               std::span<const double> grid, cplx amplitude) {
  auto out = log_wavefunction(coeffs, profile, grid, amplitude);
  for (auto& v : out) v = std::exp(v);
  return out;
}

WaveValue wave_value(const LayerCoefficients& coeffs, const StepProfile& profile, double x, cplx amplitude) {
  if (amplitude == 0.0) throw InvalidArgument("incident amplitude must be nonzero");
  WaveEvaluator w(coeffs, profile, amplitude);
  LogWave lw = w.at(x);
  return {std::exp(lw.log_psi), std::exp(lw.log_dpsi)};
}

ContinuityReport check_continuity(const LayerCoefficients& coeffs, const StepProfile& profile) {
  WaveEvaluator w(coeffs, profile, 1.0);
  const auto bp = profile.breakpoints();
  const auto vals = profile.values();
  const std::size_t n = profile.layers();
  const double e = coeffs.energy;

  auto psi = [&](std::size_t region, double x) { return std::exp(w.in_region(region, x).log_psi); };
  // five-point centred derivative of one region's closed form
  auto fd = [&](std::size_t region, double x, double h) {
    return (psi(region, x - 2 * h) - 8.0 * psi(region, x - h) + 8.0 * psi(region, x + h) - psi(region, x + 2 * h)) /
           (12.0 * h);
  };

  ContinuityReport report;
  for (std::size_t i = 0; i <= n; ++i) {
    const double b = bp[i];
    const std::size_t left = i, right = i + 1;  // regions meeting at b_i
    const double v_left = i == 0 ? 0.0 : vals[i - 1];
    const double v_right = i == n ? 0.0 : vals[i];
    const double k_loc = std::sqrt(std::max({e, std::abs(v_left - e), std::abs(v_right - e)}));
    const double h = 1e-2 / k_loc;

    cplx psi_l = psi(left, b), psi_r = psi(right, b);
    cplx d_l = fd(left, b, h), d_r = fd(right, b, h);
    double scale_psi = std::abs(psi_l) + std::abs(d_l) / k_loc;
    double scale_d = std::abs(d_l) + k_loc * std::abs(psi_l);
    if (scale_psi == 0.0 || !std::isfinite(scale_psi)) continue;
    report.max_psi_jump = std::max(report.max_psi_jump, std::abs(psi_l - psi_r) / scale_psi);
    report.max_dpsi_jump = std::max(report.max_dpsi_jump, std::abs(d_l - d_r) / scale_d);
  }
  return report;
}

}  // namespace qsolve
