#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsolve/profile.hpp"
#include "qsolve/recursion.hpp"

namespace qsolve {

enum class Engine { recursive, tm };

struct Spectrum {
  std::vector<double> energies;
  std::vector<double> p_t;
  std::vector<double> ln_p_t;
  std::vector<double> ln_a1;
  std::string profile_digest;

  std::size_t size() const { return energies.size(); }
};

/// Stable 64-bit FNV-1a digest of the profile's breakpoints and values, as 16 hex digits.
std::string profile_digest(const StepProfile& profile);

/// Worker count: QSOLVE_THREADS when set (>= 1), else the hardware concurrency.
unsigned default_threads();

struct SweepOptions {
  Engine engine = Engine::recursive;
  unsigned threads = 0;  ///< 0 selects default_threads()
};

ScatteringResult scatter_with(const StepProfile& profile, Energy e, Engine engine);

/// Uniform grid of `points` energies on [e_min, e_max].
Spectrum sweep(const StepProfile& profile, double e_min, double e_max, std::size_t points,
               const SweepOptions& options = {});

enum class Detector { a1_dip, pt_peak };

std::optional<Detector> detector_from_string(std::string_view name);
std::string to_string(Detector detector);

/// ln|A_1| for a1_dip, -ln P_T for pt_peak; resonances are minima of this function.
double resonance_objective(const StepProfile& profile, double e, Detector detector);

struct Resonance {
  double energy = 0.0;
  double ln_a1_min = 0.0;  ///< ln|A_1| at the refined energy
  double ln_p_t = 0.0;     ///< ln P_T at the refined energy
  Detector detector = Detector::a1_dip;
  double refinement_width = 0.0;
  double depth = 0.0;  ///< median objective over the dip's basin minus the refined objective
};

struct ResonanceSearch {
  std::vector<Resonance> resonances;
  std::vector<std::string> warnings;
};

struct FindOptions {
  /// Minimum dip depth, in natural-log units, below the basin median.
  double min_depth = 2.0;
  unsigned threads = 0;
};

ResonanceSearch find_resonances(const Spectrum& spectrum, const StepProfile& profile, Detector detector,
                                double tol_e, const FindOptions& options = {});

/// Golden-section minimisation of the resonance objective on [lo, hi]; stops once the bracket is below tol / 4.
Resonance refine_resonance(const StepProfile& profile, double lo, double hi, Detector detector, double tol_e);

struct LocateOptions {
  std::size_t points = 4000;
  Detector detector = Detector::a1_dip;
  double tol_e = 1e-9;
  /// Re-sweep inter-resonance gaps at 10x density until the count is unchanged twice.
  bool refine_grid = false;
  int max_refine_passes = 4;
  FindOptions find;
  SweepOptions sweep;
};

/// sweep + find_resonances (+ optional grid refinement) over a window.
ResonanceSearch locate_resonances(const StepProfile& profile, Interval window, const LocateOptions& options);

/// Clusters of resonances closer than `gap`; returns the number of clusters.
std::size_t count_groups(const std::vector<Resonance>& resonances, double gap);

}  // namespace qsolve
