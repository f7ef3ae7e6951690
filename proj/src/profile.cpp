#include "qsolve/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsolve/error.hpp"

namespace qsolve {

std::string SolverError::describe(const std::string& what, double energy, std::optional<std::size_t> layer) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (E=" << energy;
  if (layer) os << ", layer " << *layer;
  os << ")";
  return os.str();
}

StepProfile::StepProfile(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("step profile needs at least one layer");
  if (breakpoints_.size() != values_.size() + 1)
    throw InvalidArgument("step profile needs exactly one more breakpoint than values (got " +
                          std::to_string(breakpoints_.size()) + " breakpoints, " + std::to_string(values_.size()) +
                          " values)");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i])) throw InvalidArgument("breakpoint " + std::to_string(i) + " is not finite");
    if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
      throw InvalidArgument("breakpoints must be strictly increasing (index " + std::to_string(i) + ")");
  }
  for (std::size_t j = 0; j < values_.size(); ++j)
    if (!std::isfinite(values_[j])) throw InvalidArgument("layer value " + std::to_string(j) + " is not finite");
}

std::optional<std::size_t> StepProfile::layer_at(double x) const {
  if (x < left() || x > right()) return std::nullopt;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  auto j = static_cast<std::size_t>(it - breakpoints_.begin());
  if (j == 0) return std::nullopt;
  return std::min(j - 1, layers() - 1);
}

double StepProfile::operator()(double x) const {
  auto j = layer_at(x);
  return j ? values_[*j] : 0.0;
}

SmoothPotential::SmoothPotential(std::function<double(double)> f, Interval support)
    : SmoothPotential(std::vector<PotentialPiece>{{support, std::move(f), false}}) {}

SmoothPotential::SmoothPotential(std::vector<PotentialPiece> pieces, double uplift, std::optional<Interval> well_region)
    : pieces_(std::move(pieces)), uplift_(uplift), well_region_(well_region) {
  if (pieces_.empty()) throw InvalidArgument("smooth potential needs at least one piece");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& s = pieces_[i].span;
    if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !(s.hi > s.lo))
      throw InvalidArgument("support must have positive width");
    if (!pieces_[i].value) throw InvalidArgument("potential piece has no evaluator");
    if (i > 0 && s.lo != pieces_[i - 1].span.hi) throw InvalidArgument("potential pieces must be contiguous");
  }
  if (!std::isfinite(uplift_)) throw InvalidArgument("uplift must be finite");
}

double SmoothPotential::operator()(double x) const {
  if (x < pieces_.front().span.lo || x > pieces_.back().span.hi) return 0.0;
  for (const auto& piece : pieces_)
    if (x <= piece.span.hi) return piece.value(x);
  return 0.0;
}

namespace {

double snap(double v) { return std::abs(v) < kZeroSnap ? 0.0 : v; }

double sample_segment(const PotentialPiece& piece, double a, double b, Sampling sampling, std::size_t segment) {
  double mid = 0.5 * (a + b);
  double v = 0.0;
  if (sampling == Sampling::midpoint) {
    v = piece.value(mid);
  } else {
    // Simpson mean over the segment
    v = (piece.value(a) + 4.0 * piece.value(mid) + piece.value(b)) / 6.0;
  }
  if (!std::isfinite(v))
    throw InvalidArgument("potential is not finite on segment " + std::to_string(segment) + " [" + std::to_string(a) +
                          ", " + std::to_string(b) + "]");
  return snap(v);
}

}  // namespace

StepProfile discretize(const SmoothPotential& potential, const DiscretizationRule& rule) {
  if (rule.segments < 1) throw InvalidArgument("segment count must be at least 1");
  auto pieces = potential.pieces();

  double smooth_width = 0.0;
  for (const auto& p : pieces)
    if (!p.flat) smooth_width += p.span.width();

  std::vector<double> breakpoints{pieces.front().span.lo};
  std::vector<double> values;
  std::size_t segment = 0;
  for (const auto& piece : pieces) {
    int count = 1;
    if (!piece.flat) {
      count = static_cast<int>(std::lround(rule.segments * piece.span.width() / smooth_width));
      count = std::max(count, 1);
    }
    double h = piece.span.width() / count;
    for (int i = 0; i < count; ++i) {
      double a = piece.span.lo + i * h;
      double b = (i + 1 == count) ? piece.span.hi : piece.span.lo + (i + 1) * h;
      values.push_back(piece.flat ? sample_segment(piece, a, b, Sampling::midpoint, segment)
                                  : sample_segment(piece, a, b, rule.sampling, segment));
      breakpoints.push_back(b);
      ++segment;
    }
  }
  return StepProfile(std::move(breakpoints), std::move(values));
}

SmoothPotential uplift_model(const SmoothPotential& well, double uplift, double flank_width) {
  if (!std::isfinite(uplift) || uplift <= 0.0)
    throw InvalidArgument("uplift must be positive: flanks would not form a barrier");
  if (!std::isfinite(flank_width) || flank_width <= 0.0) throw InvalidArgument("flank width must be positive");

  // uplift has to bring the whole well to non-negative values
  constexpr int kProbe = 512;
  for (const auto& piece : well.pieces()) {
    for (int i = 0; i <= kProbe; ++i) {
      double x = piece.span.lo + piece.span.width() * i / kProbe;
      double v = piece.value(x);
      if (!std::isfinite(v)) throw InvalidArgument("well potential is not finite at x=" + std::to_string(x));
      if (v + uplift < -1e-12 * uplift)
        throw InvalidArgument("uplift " + std::to_string(uplift) + " leaves the model negative at x=" +
                              std::to_string(x));
    }
  }

  Interval support = well.support();
  std::vector<PotentialPiece> pieces;
  pieces.push_back({{support.lo - flank_width, support.lo}, [uplift](double) { return uplift; }, true});
  for (const auto& piece : well.pieces()) {
    auto f = piece.value;
    pieces.push_back({piece.span, [f, uplift](double x) { return f(x) + uplift; }, piece.flat});
  }
  pieces.push_back({{support.hi, support.hi + flank_width}, [uplift](double) { return uplift; }, true});
  return SmoothPotential(std::move(pieces), well.uplift() + uplift, support);
}

double evaluate(const Potential& potential, double x) {
  return std::visit([x](const auto& p) { return p(x); }, potential);
}

std::optional<Sampling> sampling_from_string(std::string_view name) {
  if (name == "midpoint") return Sampling::midpoint;
  if (name == "average") return Sampling::average;
  return std::nullopt;
}

std::string to_string(Sampling sampling) { return sampling == Sampling::midpoint ? "midpoint" : "average"; }

}  // namespace qsolve
