#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsolve/bound.hpp"
#include "qsolve/error.hpp"

using namespace qsolve;

namespace {

const EigenResult& harmonic_states() {
  static const EigenResult r = [] {
    EigenOptions o;
    o.window = Interval{0.5, 16};
    o.points = 2000;
    o.tol_e = 1e-10;
    o.split_point = 0.0;
    return solve_model(std::get<SmoothPotential>(builtin("harmonic_model")), o);
  }();
  return r;
}

StepProfile square_well_model(double depth, double uplift, double flank) {
  return StepProfile({-flank, 0, 1, 1 + flank}, {uplift, uplift - depth, uplift});
}

// Levels of a finite square well of depth D and unit width, measured from the bottom.
double finite_well_level(double depth, int n) {
  auto mismatch = [depth, n](double e) {
    double q = std::sqrt(e), kappa = std::sqrt(depth - e);
    return n % 2 == 1 ? q * std::tan(q / 2) - kappa : -q / std::tan(q / 2) - kappa;
  };
  // the n-th level lies in ((n-1) pi, n pi) in q
  double lo = std::pow((n - 1) * std::numbers::pi + 1e-9, 2), hi = std::pow(n * std::numbers::pi - 1e-9, 2);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (mismatch(lo) < 0) == (mismatch(mid) < 0) ? lo = mid : hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("state grid layout") {
  auto g = state_grid({-4, 4}, {-10, 10}, 2001, 200);
  CHECK(g.size() == 2401);
  CHECK(g.front() == -10);
  CHECK(g.back() == 10);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK_THROWS_AS(state_grid({-4, 4}, {-10, 10}, 1, 200), InvalidArgument);
}

TEST_CASE("harmonic model eigenvalues, nodes and normalisation") {
  const auto& r = harmonic_states();
  const double reference[] = {1.000, 3.000, 5.000, 6.9999, 8.999, 10.994, 12.970, 14.857};
  REQUIRE(r.states.size() == 8);
  for (std::size_t n = 0; n < 8; ++n) {
    const auto& s = r.states[n];
    CHECK(s.index == static_cast<int>(n));
    CHECK(std::abs(s.eigenvalue - reference[n]) < 5e-3);
    CHECK(s.node_count == static_cast<int>(n));
    double norm = 0;
    for (std::size_t i = 0; i + 1 < s.grid.size(); ++i)
      if (s.well_region.contains(s.grid[i]) && s.well_region.contains(s.grid[i + 1]))
        norm += 0.5 * (s.psi[i] * s.psi[i] + s.psi[i + 1] * s.psi[i + 1]) * (s.grid[i + 1] - s.grid[i]);
    CHECK(std::abs(norm - 1) < 1e-8);
  }
}

TEST_CASE("harmonic ground state is a single centred lobe and delocalised about x = 0") {
  const auto& s = harmonic_states().states.at(0);
  std::size_t peak = 0;
  // outside the well the incident wave dominates, so look for the peak inside it
  for (std::size_t i = 0; i < s.psi.size(); ++i)
    if (s.well_region.contains(s.grid[i]) && s.psi[i] > s.psi[peak]) peak = i;
  CHECK(std::abs(s.grid[peak]) < 0.05);
  CHECK(s.localization == Localization::delocalized);
  CHECK(left_mass(s, 0.0) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("real and imaginary parts are proportional inside the well") {
  auto model = std::get<SmoothPotential>(builtin("harmonic_model"));
  StepProfile p = discretize(model, {2000, Sampling::midpoint});
  for (const auto& s : harmonic_states().states) {
    auto c = compute_coefficients(p, Energy(s.resonance_energy));
    std::vector<double> g;
    for (int i = 0; i <= 400; ++i) g.push_back(-4 + 8.0 * i / 400);
    auto lp = log_wavefunction(c, p, g);
    double shift = -1e300;
    for (auto v : lp) shift = std::max(shift, v.real());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (auto v : lp) {
      cplx z = std::exp(v - shift);
      sx += z.real();
      sy += z.imag();
      sxx += z.real() * z.real();
      syy += z.imag() * z.imag();
      sxy += z.real() * z.imag();
    }
    double n = static_cast<double>(lp.size());
    double corr = (sxy - sx * sy / n) / std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
    CHECK(std::abs(corr) >= 0.999);
  }
}

TEST_CASE("deep square well levels and uplift independence") {
  const double depth = 1e4, tol = 1e-9;
  std::vector<std::vector<double>> levels;
  for (double uplift : {1.0e4, 1.25e4, 1.5e4}) {
    EigenOptions o;
    o.window = Interval{uplift - depth + 1, uplift - depth + 100};
    o.points = 2000;
    o.tol_e = tol;
    auto r = solve_step_model(square_well_model(depth, uplift, 0.3), uplift, o);
    REQUIRE(r.states.size() == 3);
    std::vector<double> ev;
    for (const auto& s : r.states) ev.push_back(s.eigenvalue);
    levels.push_back(ev);
  }
  for (int n = 1; n <= 3; ++n) {
    double e = levels[1][n - 1];
    double infinite = -depth + n * n * std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(e - infinite) <= 1e-3 * std::abs(infinite));
    CHECK(std::abs(e - (-depth + finite_well_level(depth, n))) < 1e-6);
    CHECK(std::abs(levels[0][n - 1] - e) <= 10 * tol);
    CHECK(std::abs(levels[2][n - 1] - e) <= 10 * tol);
  }
}

TEST_CASE("empty window yields no states") {
  EigenOptions o;
  o.window = Interval{0.5, 0.9};
  o.points = 200;
  auto r = solve_model(std::get<SmoothPotential>(builtin("harmonic_model")), o);
  CHECK(r.states.empty());
}

TEST_CASE("barrier top and preconditions") {
  CHECK(model_barrier_top(std::get<SmoothPotential>(builtin("harmonic_model"))) == 16);
  double top = model_barrier_top(std::get<SmoothPotential>(builtin("asym_double_well_model")));
  CHECK(top == doctest::Approx(65 + std::tanh(-6.0)).epsilon(1e-12));
  CHECK_THROWS_AS(solve_step_model(StepProfile({0, 1}, {1}), 0), InvalidArgument);
}
