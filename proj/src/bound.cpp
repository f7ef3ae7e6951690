#include "qsolve/bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsolve/error.hpp"
#include "qsolve/recursion.hpp"

namespace qsolve {

namespace {

// Trapezoid integral of f^2 over the samples with x in `region`.
double l2_squared(std::span<const double> grid, const std::vector<double>& f, Interval region) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!region.contains(grid[i]) || !region.contains(grid[i + 1])) continue;
    sum += 0.5 * (f[i] * f[i] + f[i + 1] * f[i + 1]) * (grid[i + 1] - grid[i]);
  }
  return sum;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  if (n > 1) out.back() = hi;
  return out;
}

EigenResult solve_profile(const StepProfile& profile, double uplift, Interval well_region, Interval support,
                          double barrier_top, const EigenOptions& options) {
  EigenResult result;
  result.window = options.window.value_or(Interval{1e-3 * barrier_top, barrier_top});
  if (!(result.window.lo > 0.0) || !(result.window.hi > result.window.lo))
    throw InvalidArgument("energy window must satisfy 0 < lo < hi");

  LocateOptions locate;
  locate.points = options.points;
  locate.detector = options.detector;
  locate.tol_e = options.tol_e;
  locate.refine_grid = options.refine_grid;
  locate.find.threads = options.threads;
  locate.sweep.threads = options.threads;
  ResonanceSearch search = locate_resonances(profile, result.window, locate);
  result.warnings = std::move(search.warnings);

  std::vector<double> grid = state_grid(well_region, support, options.well_points, options.flank_points);
  int index = 0;
  for (const auto& r : search.resonances) {
    BoundState s = extract_state(profile, r.energy, grid, well_region);
    s.index = index++;
    s.eigenvalue = r.energy - uplift;
    if (options.split_point) s.localization = localization(s, *options.split_point);
    result.states.push_back(std::move(s));
  }
  return result;
}

}  // namespace

std::string to_string(Part part) { return part == Part::real ? "real" : "imaginary"; }

std::string to_string(Localization loc) {
  switch (loc) {
    case Localization::left: return "left";
    case Localization::right: return "right";
    case Localization::delocalized: return "delocalized";
  }
  return "delocalized";
}

std::vector<double> state_grid(Interval well_region, Interval support, int well_points, int flank_points) {
  if (well_points < 2) throw InvalidArgument("well grid needs at least 2 points");
  if (flank_points < 0) throw InvalidArgument("flank point count must be non-negative");
  std::vector<double> grid;
  if (flank_points > 0 && support.lo < well_region.lo) {
    auto left = linspace(support.lo, well_region.lo, flank_points + 1);
    grid.insert(grid.end(), left.begin(), left.end() - 1);
  }
  auto well = linspace(well_region.lo, well_region.hi, well_points);
  grid.insert(grid.end(), well.begin(), well.end());
  if (flank_points > 0 && support.hi > well_region.hi) {
    auto right = linspace(well_region.hi, support.hi, flank_points + 1);
    grid.insert(grid.end(), right.begin() + 1, right.end());
  }
  return grid;
}

BoundState extract_state(const StepProfile& model, double e_res, std::span<const double> grid, Interval well_region) {
  LayerCoefficients coeffs = compute_coefficients(model, Energy(e_res));
  std::vector<cplx> log_psi = log_wavefunction(coeffs, model, grid);

  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (well_region.contains(grid[i])) shift = std::max(shift, log_psi[i].real());
  if (!std::isfinite(shift)) throw SolverError("wave function vanishes on the well region", e_res);

  std::vector<double> re(grid.size()), im(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cplx v = std::exp(log_psi[i] - shift);
    re[i] = v.real();
    im[i] = v.imag();
  }
  double n_re = std::sqrt(l2_squared(grid, re, well_region));
  double n_im = std::sqrt(l2_squared(grid, im, well_region));
  // norms relative to the true amplitude exp(shift)
  double scale = std::exp(std::min(shift, 700.0));
  if (std::max(n_re, n_im) * scale < 1e-12)
    throw SolverError("both parts of the quasi-bound state have negligible norm; refine the resonance", e_res);

  BoundState s;
  s.resonance_energy = e_res;
  s.well_region = well_region;
  s.grid.assign(grid.begin(), grid.end());
  s.part_used = n_re >= n_im ? Part::real : Part::imaginary;
  s.psi = s.part_used == Part::real ? std::move(re) : std::move(im);
  double norm = std::max(n_re, n_im);
  for (double& v : s.psi) v /= norm;

  std::size_t peak = 0;
  double peak_abs = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (well_region.contains(grid[i]) && std::abs(s.psi[i]) > peak_abs) {
      peak_abs = std::abs(s.psi[i]);
      peak = i;
    }
  }
  if (s.psi[peak] < 0.0)
    for (double& v : s.psi) v = -v;

  // sign changes between successive significant samples
  int nodes = 0;
  double last = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!well_region.contains(grid[i]) || std::abs(s.psi[i]) <= kNodeThreshold * peak_abs) continue;
    if (last != 0.0 && (s.psi[i] > 0.0) != (last > 0.0)) ++nodes;
    last = s.psi[i];
  }
  s.node_count = nodes;
  return s;
}

double left_mass(const BoundState& state, double split_point) {
  double left = 0.0, total = 0.0;
  const auto& x = state.grid;
  const auto& f = state.psi;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!state.well_region.contains(x[i]) || !state.well_region.contains(x[i + 1])) continue;
    double piece = 0.5 * (f[i] * f[i] + f[i + 1] * f[i + 1]) * (x[i + 1] - x[i]);
    total += piece;
    if (0.5 * (x[i] + x[i + 1]) < split_point) left += piece;
  }
  return total > 0.0 ? left / total : 0.0;
}

Localization localization(const BoundState& state, double split_point) {
  double m = left_mass(state, split_point);
  if (m >= 0.9) return Localization::left;
  if (m <= 0.1) return Localization::right;
  return Localization::delocalized;
}

double model_barrier_top(const SmoothPotential& model) {
  Interval well = model.well_region();
  double top = std::numeric_limits<double>::infinity();
  constexpr int kSamples = 256;
  for (const auto& piece : model.pieces()) {
    if (piece.span.lo >= well.lo && piece.span.hi <= well.hi) continue;
    for (int i = 0; i <= kSamples; ++i) {
      double x = piece.span.lo + piece.span.width() * i / kSamples;
      if (x > well.lo && x < well.hi) continue;
      top = std::min(top, piece.value(x));
    }
  }
  if (!std::isfinite(top)) {
    Interval s = model.support();
    top = std::min(model(s.lo), model(s.hi));
  }
  if (!(top > 0.0)) throw InvalidArgument("model potential does not form a positive barrier at its flanks");
  return top;
}

EigenResult solve_model(const SmoothPotential& model, const EigenOptions& options) {
  StepProfile profile = discretize(model, options.discretization);
  return solve_profile(profile, model.uplift(), model.well_region(), model.support(), model_barrier_top(model),
                       options);
}

EigenResult solve_well(const SmoothPotential& well, double uplift, double flank_width, const EigenOptions& options) {
  return solve_model(uplift_model(well, uplift, flank_width), options);
}

EigenResult solve_step_model(const StepProfile& model, double uplift, const EigenOptions& options) {
  if (model.layers() < 3) throw InvalidArgument("a step model needs two flank layers around the well");
  auto bp = model.breakpoints();
  auto vals = model.values();
  Interval well{bp[1], bp[bp.size() - 2]};
  double top = std::min(vals.front(), vals.back());
  if (!(top > 0.0)) throw InvalidArgument("model potential does not form a positive barrier at its flanks");
  return solve_profile(model, uplift, well, {model.left(), model.right()}, top, options);
}

}  // namespace qsolve
