#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "qsolve/error.hpp"
#include "qsolve/profile.hpp"

namespace qsolve {

namespace {

struct BuiltinSpec {
  std::string_view name;
  Params defaults;
};

// Default geometries. The double-barrier dimensions are not fixed by any reference data; these give
// several sharp sub-barrier resonances below V = 1.
const std::vector<BuiltinSpec>& specs() {
  static const std::vector<BuiltinSpec> all = {
      {"rect_double_barrier", {{"height", 1.0}, {"width", 8.0}, {"gap", 6.0}, {"start", 0.0}}},
      {"gaussian_double_barrier", {{"height", 1.0}, {"sigma", 2.0}, {"separation", 14.0}}},
      {"harmonic_model", {{"a", 4.0}, {"flank", 6.0}}},
      {"double_well", {{"a", 4.0}}},
      {"double_well_model", {{"a", 4.0}, {"flank", 2.0}, {"uplift", 64.0}}},
      {"asym_double_well_model", {{"a", 4.0}, {"flank", 2.0}, {"uplift", 64.0}, {"shift", 1.0}}},
  };
  return all;
}

Params merged(const BuiltinSpec& spec, const Params& given) {
  Params out = spec.defaults;
  for (const auto& [key, value] : given) {
    auto it = out.find(key);
    if (it == out.end()) {
      std::string valid;
      for (const auto& [k, v] : spec.defaults) valid += (valid.empty() ? "" : ", ") + k;
      throw InvalidArgument("unknown parameter '" + key + "' for " + std::string(spec.name) + " (valid: " + valid +
                            ")");
    }
    if (!std::isfinite(value)) throw InvalidArgument("parameter '" + key + "' must be finite");
    it->second = value;
  }
  return out;
}

double positive(const Params& p, const char* key) {
  double v = p.at(key);
  if (!(v > 0.0)) throw InvalidArgument(std::string("parameter '") + key + "' must be positive");
  return v;
}

SmoothPotential quartic_well(double a) {
  return SmoothPotential([a](double x) { return x * x * (x * x - a * a); }, {-a, a});
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& s : specs()) names.emplace_back(s.name);
  return names;
}

Potential builtin(std::string_view name, const Params& params) {
  const BuiltinSpec* spec = nullptr;
  for (const auto& s : specs())
    if (s.name == name) spec = &s;
  if (!spec) {
    std::string valid;
    for (const auto& n : builtin_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown builtin potential '" + std::string(name) + "' (valid: " + valid + ")");
  }
  Params p = merged(*spec, params);

  if (name == "rect_double_barrier") {
    double h = p.at("height"), w = positive(p, "width"), g = positive(p, "gap"), x0 = p.at("start");
    return StepProfile({x0, x0 + w, x0 + w + g, x0 + 2 * w + g}, {h, 0.0, h});
  }
  if (name == "gaussian_double_barrier") {
    double h = p.at("height"), s = positive(p, "sigma"), d = positive(p, "separation");
    auto f = [h, s, d](double x) {
      double u = x / s, v = (x - d) / s;
      return h * (std::exp(-0.5 * u * u) + std::exp(-0.5 * v * v));
    };
    return SmoothPotential(f, {-5.0 * s, d + 5.0 * s});
  }
  if (name == "harmonic_model") {
    double a = positive(p, "a"), f = positive(p, "flank");
    double top = a * a;
    std::vector<PotentialPiece> pieces{
        {{-a - f, -a}, [top](double) { return top; }, true},
        {{-a, a}, [](double x) { return x * x; }, false},
        {{a, a + f}, [top](double) { return top; }, true},
    };
    return SmoothPotential(std::move(pieces), 0.0, Interval{-a, a});
  }
  if (name == "double_well") {
    return quartic_well(positive(p, "a"));
  }
  if (name == "double_well_model") {
    return uplift_model(quartic_well(positive(p, "a")), positive(p, "uplift"), positive(p, "flank"));
  }
  // asym_double_well_model: the symmetric model plus tanh(x) + shift across the whole model region
  double a = positive(p, "a"), f = positive(p, "flank"), u = positive(p, "uplift"), shift = p.at("shift");
  auto flank = [u, shift](double x) { return u + std::tanh(x) + shift; };
  auto core = [a, u, shift](double x) { return x * x * (x * x - a * a) + u + std::tanh(x) + shift; };
  std::vector<PotentialPiece> pieces{
      {{-a - f, -a}, flank, false},
      {{-a, a}, core, false},
      {{a, a + f}, flank, false},
  };
  return SmoothPotential(std::move(pieces), u + shift, Interval{-a, a});
}

Params parse_params(std::string_view text) {
  Params out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    item = trim(item);
    if (!item.empty()) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected key=value in '" + std::string(item) + "'", pos);
      std::string key(trim(item.substr(0, eq)));
      std::string value(trim(item.substr(eq + 1)));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (key.empty() || value.empty() || used != value.size())
        throw ParseError("invalid parameter '" + std::string(item) + "'", pos);
      out[key] = v;
    }
    pos = end + 1;
  }
  return out;
}

}  // namespace qsolve
