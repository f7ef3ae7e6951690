#include "qsolve/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "qsolve/error.hpp"
#include "qsolve/oracle.hpp"

namespace qsolve {

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first exception.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
}

double median(std::vector<double> v) {
  std::erase_if(v, [](double x) { return std::isnan(x); });
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

std::string profile_digest(const StepProfile& profile) {
  std::uint64_t h = 14695981039346656037ULL;
  for (double b : profile.breakpoints()) hash_bytes(h, &b, sizeof b);
  for (double v : profile.values()) hash_bytes(h, &v, sizeof v);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

unsigned default_threads() {
  if (const char* env = std::getenv("QSOLVE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ScatteringResult scatter_with(const StepProfile& profile, Energy e, Engine engine) {
  if (engine == Engine::tm) {
    ScatteringResult out = oracle::tm_scatter(profile, e);
    // the diagnostic only exists in the recursive formulation
    out.ln_a1 = compute_coefficients(profile, e).ln_a1;
    return out;
  }
  return scatter(profile, e);
}

Spectrum sweep(const StepProfile& profile, double e_min, double e_max, std::size_t points,
               const SweepOptions& options) {
  if (!std::isfinite(e_min) || !std::isfinite(e_max) || !(e_min > 0.0) || !(e_max > e_min))
    throw InvalidArgument("energy window must satisfy 0 < emin < emax");
  if (points < 2) throw InvalidArgument("a sweep needs at least 2 points");

  Spectrum s;
  s.energies.resize(points);
  const double step = (e_max - e_min) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) s.energies[i] = e_min + step * static_cast<double>(i);
  s.energies.back() = e_max;
  for (std::size_t i = 1; i < points; ++i)
    if (!(s.energies[i] > s.energies[i - 1])) throw InvalidArgument("energy grid is too fine to be strictly increasing");

  s.p_t.resize(points);
  s.ln_p_t.resize(points);
  s.ln_a1.resize(points);
  parallel_for(points, options.threads, [&](std::size_t i) {
    ScatteringResult r = scatter_with(profile, Energy(s.energies[i]), options.engine);
    s.p_t[i] = r.p_t;
    s.ln_p_t[i] = r.ln_p_t;
    s.ln_a1[i] = r.ln_a1;
  });
  s.profile_digest = profile_digest(profile);
  return s;
}

std::optional<Detector> detector_from_string(std::string_view name) {
  if (name == "a1_dip") return Detector::a1_dip;
  if (name == "pt_peak") return Detector::pt_peak;
  return std::nullopt;
}

std::string to_string(Detector detector) { return detector == Detector::a1_dip ? "a1_dip" : "pt_peak"; }

double resonance_objective(const StepProfile& profile, double e, Detector detector) {
  if (detector == Detector::a1_dip) return compute_coefficients(profile, Energy(e)).ln_a1;
  return -scatter(profile, Energy(e)).ln_p_t;
}

Resonance refine_resonance(const StepProfile& profile, double lo, double hi, Detector detector, double tol_e) {
  if (!(tol_e > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (!(hi > lo) || !(lo > 0.0)) throw InvalidArgument("refinement bracket must satisfy 0 < lo < hi");
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double e) { return resonance_objective(profile, e, detector); };

  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 400 && b - a > tol_e / 4.0; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
    if (!(a < c && c <= d && d < b)) break;  // bracket exhausted at machine resolution
  }

  Resonance r;
  r.detector = detector;
  r.energy = fc < fd ? c : d;
  r.refinement_width = b - a;
  ScatteringResult s = scatter(profile, Energy(r.energy));
  r.ln_a1_min = s.ln_a1;
  r.ln_p_t = s.ln_p_t;
  return r;
}

ResonanceSearch find_resonances(const Spectrum& spectrum, const StepProfile& profile, Detector detector,
                                double tol_e, const FindOptions& options) {
  if (!(tol_e > 0.0)) throw InvalidArgument("tolerance must be positive");
  const std::size_t n = spectrum.size();
  std::vector<double> obj(n);
  for (std::size_t i = 0; i < n; ++i)
    obj[i] = detector == Detector::a1_dip ? spectrum.ln_a1[i] : -spectrum.ln_p_t[i];

  ResonanceSearch out;
  struct Candidate {
    std::size_t i;
    double basin_median;
  };
  std::vector<Candidate> candidates;
  auto is_min = [&](std::size_t i) {
    return !std::isnan(obj[i]) && obj[i] < obj[i - 1] && obj[i] < obj[i + 1];
  };
  auto basin = [&](std::size_t i) {
    std::size_t l = i, r = i;
    while (l > 0 && obj[l - 1] >= obj[l]) --l;
    while (r + 1 < n && obj[r + 1] >= obj[r]) ++r;
    return median(std::vector<double>(obj.begin() + static_cast<std::ptrdiff_t>(l),
                                      obj.begin() + static_cast<std::ptrdiff_t>(r) + 1));
  };

  if (n >= 2) {
    // minima sitting on the grid boundary cannot be bracketed
    if (!std::isnan(obj[0]) && obj[0] < obj[1] && obj[0] + options.min_depth <= basin(0))
      out.warnings.push_back("candidate at grid edge E=" + std::to_string(spectrum.energies[0]) + " skipped");
    if (!std::isnan(obj[n - 1]) && obj[n - 1] < obj[n - 2] && obj[n - 1] + options.min_depth <= basin(n - 1))
      out.warnings.push_back("candidate at grid edge E=" + std::to_string(spectrum.energies[n - 1]) + " skipped");
  }
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (is_min(i)) candidates.push_back({i, basin(i)});

  std::vector<std::optional<Resonance>> refined(candidates.size());
  parallel_for(candidates.size(), options.threads, [&](std::size_t c) {
    const std::size_t i = candidates[c].i;
    Resonance r = refine_resonance(profile, spectrum.energies[i - 1], spectrum.energies[i + 1], detector, tol_e);
    double value = detector == Detector::a1_dip ? r.ln_a1_min : -r.ln_p_t;
    r.depth = candidates[c].basin_median - value;
    if (r.depth >= options.min_depth) refined[c] = r;
  });
  for (auto& r : refined)
    if (r) out.resonances.push_back(*r);
  std::sort(out.resonances.begin(), out.resonances.end(),
            [](const Resonance& a, const Resonance& b) { return a.energy < b.energy; });
  return out;
}

ResonanceSearch locate_resonances(const StepProfile& profile, Interval window, const LocateOptions& options) {
  Spectrum s = sweep(profile, window.lo, window.hi, options.points, options.sweep);
  ResonanceSearch found = find_resonances(s, profile, options.detector, options.tol_e, options.find);
  if (!options.refine_grid) return found;

  const double base_step = window.width() / static_cast<double>(options.points - 1);
  double step = base_step;
  int stable = 0;
  for (int pass = 0; pass < options.max_refine_passes && stable < 2; ++pass) {
    step /= 10.0;
    std::vector<double> edges{window.lo};
    for (const auto& r : found.resonances) edges.push_back(r.energy);
    edges.push_back(window.hi);

    std::vector<Resonance> added;
    for (std::size_t g = 0; g + 1 < edges.size(); ++g) {
      // stay clear of the already known dips at both ends of the gap
      double lo = edges[g] + (g == 0 ? 0.0 : 2.0 * step);
      double hi = edges[g + 1] - (g + 2 == edges.size() ? 0.0 : 2.0 * step);
      if (!(hi > lo) || lo <= 0.0) continue;
      auto points = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
      if (points < 5) continue;
      Spectrum fine = sweep(profile, lo, hi, points, options.sweep);
      ResonanceSearch sub = find_resonances(fine, profile, options.detector, options.tol_e, options.find);
      for (const auto& r : sub.resonances) {
        bool known = std::any_of(found.resonances.begin(), found.resonances.end(), [&](const Resonance& k) {
          return std::abs(k.energy - r.energy) <= std::max(10.0 * options.tol_e, base_step);
        });
        if (!known) added.push_back(r);
      }
    }
    if (added.empty()) {
      ++stable;
    } else {
      stable = 0;
      found.resonances.insert(found.resonances.end(), added.begin(), added.end());
      std::sort(found.resonances.begin(), found.resonances.end(),
                [](const Resonance& a, const Resonance& b) { return a.energy < b.energy; });
    }
  }
  if (stable < 2) found.warnings.push_back("resonance count did not stabilise within the refinement pass limit");
  return found;
}

std::size_t count_groups(const std::vector<Resonance>& resonances, double gap) {
  std::size_t groups = 0;
  for (std::size_t i = 0; i < resonances.size(); ++i)
    if (i == 0 || resonances[i].energy - resonances[i - 1].energy > gap) ++groups;
  return groups;
}

}  // namespace qsolve
