#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qsolve {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Piecewise-constant potential in a zero-potential environment.
/// Layer j (0-based) spans [breakpoints[j], breakpoints[j+1]] with value values[j].
class StepProfile {
 public:
  StepProfile(std::vector<double> breakpoints, std::vector<double> values);

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  std::size_t layers() const { return values_.size(); }
  double left() const { return breakpoints_.front(); }
  double right() const { return breakpoints_.back(); }
  double width(std::size_t j) const { return breakpoints_[j + 1] - breakpoints_[j]; }

  /// Layer index containing x, or nullopt outside [left, right]. Breakpoints belong to the layer on their right,
  /// except the last one.
  std::optional<std::size_t> layer_at(double x) const;
  double operator()(double x) const;

  bool operator==(const StepProfile&) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Contiguous piece of a smooth potential. Flat pieces are emitted as a single layer when discretized.
struct PotentialPiece {
  Interval span;
  std::function<double(double)> value;
  bool flat = false;
};

/// Real potential defined on a bounded support (zero outside), possibly assembled from pieces.
/// `uplift` records the constant added to a well to build this potential as a barrier model;
/// `well_region` is the part of the support that reproduces the original well.
class SmoothPotential {
 public:
  SmoothPotential(std::function<double(double)> f, Interval support);
  explicit SmoothPotential(std::vector<PotentialPiece> pieces, double uplift = 0.0,
                           std::optional<Interval> well_region = {});

  double operator()(double x) const;
  Interval support() const { return {pieces_.front().span.lo, pieces_.back().span.hi}; }
  std::span<const PotentialPiece> pieces() const { return pieces_; }
  double uplift() const { return uplift_; }
  Interval well_region() const { return well_region_.value_or(support()); }
  bool has_flanks() const { return well_region_.has_value(); }

 private:
  std::vector<PotentialPiece> pieces_;
  double uplift_ = 0.0;
  std::optional<Interval> well_region_;
};

enum class Sampling { midpoint, average };

struct DiscretizationRule {
  /// Number of layers spread over the non-flat pieces, proportionally to their width.
  int segments = 2000;
  Sampling sampling = Sampling::midpoint;
};

/// Values with magnitude below this are stored as exact zeros.
inline constexpr double kZeroSnap = 1e-14;

StepProfile discretize(const SmoothPotential& potential, const DiscretizationRule& rule);

/// well(x) + uplift on the well's support, constant `uplift` on flanks of `flank_width` on both sides.
SmoothPotential uplift_model(const SmoothPotential& well, double uplift, double flank_width);

using Potential = std::variant<StepProfile, SmoothPotential>;
using Params = std::map<std::string, double, std::less<>>;

Potential builtin(std::string_view name, const Params& params = {});
std::vector<std::string> builtin_names();

/// Parses "k=v,k=v" (whitespace tolerated).
Params parse_params(std::string_view text);

double evaluate(const Potential& potential, double x);

std::optional<Sampling> sampling_from_string(std::string_view name);
std::string to_string(Sampling sampling);

}  // namespace qsolve
