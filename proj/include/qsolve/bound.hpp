#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsolve/profile.hpp"
#include "qsolve/spectra.hpp"

namespace qsolve {

enum class Part { real, imaginary };
enum class Localization { left, right, delocalized };

std::string to_string(Part part);
std::string to_string(Localization loc);

/// Samples below this fraction of the well-region maximum are ignored when counting nodes.
inline constexpr double kNodeThreshold = 5e-2;

struct BoundState {
  int index = 0;
  double eigenvalue = 0.0;         ///< resonance energy minus the model's uplift
  double resonance_energy = 0.0;
  Interval well_region;
  std::vector<double> grid;
  std::vector<double> psi;          ///< selected part, L2-normalised over well_region
  Part part_used = Part::real;
  int node_count = 0;
  std::optional<Localization> localization;
};

/// Complex quasi-bound psi on `grid` at e_res, reduced to its dominant real or imaginary part and normalised
/// over `well_region`.
BoundState extract_state(const StepProfile& model, double e_res, std::span<const double> grid, Interval well_region);

/// Left/right if at least 90% of the well-region probability lies on that side of split_point.
Localization localization(const BoundState& state, double split_point);
/// Fraction of the well-region probability left of split_point.
double left_mass(const BoundState& state, double split_point);

/// Uniform samples: `well_points` across the well region plus `flank_points` on each flank.
std::vector<double> state_grid(Interval well_region, Interval support, int well_points = 2001, int flank_points = 200);

struct EigenOptions {
  DiscretizationRule discretization{};
  std::optional<Interval> window;  ///< defaults to (1e-3 * top, top) with top the lower flank height
  std::size_t points = 4000;
  double tol_e = 1e-12;
  /// ln|A_1| dips of deep states are narrower than the double-precision spacing of E, so the default
  /// locates them through the transmission peak.
  Detector detector = Detector::pt_peak;
  bool refine_grid = false;
  int well_points = 2001;
  int flank_points = 200;
  /// Classify localization about this point when set.
  std::optional<double> split_point;
  unsigned threads = 0;
};

struct EigenResult {
  std::vector<BoundState> states;
  std::vector<std::string> warnings;
  Interval window;
};

/// Resonances of an already-uplifted model potential, reported as bound states of the underlying well.
EigenResult solve_model(const SmoothPotential& model, const EigenOptions& options = {});

/// Bound states of `well` through the model uplift_model(well, uplift, flank_width).
EigenResult solve_well(const SmoothPotential& well, double uplift, double flank_width,
                       const EigenOptions& options = {});

/// Same procedure for a step model whose flanks are its first and last layers.
EigenResult solve_step_model(const StepProfile& model, double uplift, const EigenOptions& options = {});

/// Lowest flank barrier of a model: min of the potential over the support outside the well region.
double model_barrier_top(const SmoothPotential& model);

}  // namespace qsolve
