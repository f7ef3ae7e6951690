#include "qsolve/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qsolve/error.hpp"
#include "qsolve/expr.hpp"

namespace qsolve::io {

using nlohmann::json;

namespace {

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ParseError(std::string("expected an array '") + key + "'");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ParseError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Potential potential_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid profile JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!j.is_object()) throw ParseError("profile JSON must be an object");

  if (j.contains("breakpoints")) return StepProfile(number_array(j, "breakpoints"), number_array(j, "values"));

  if (j.contains("builtin")) {
    if (!j.at("builtin").is_string()) throw ParseError("'builtin' must be a string");
    Params params;
    if (j.contains("params")) {
      if (!j.at("params").is_object()) throw ParseError("'params' must be an object");
      for (const auto& [key, value] : j.at("params").items()) {
        if (!value.is_number()) throw ParseError("parameter '" + key + "' must be a number");
        params[key] = value.get<double>();
      }
    }
    return builtin(j.at("builtin").get<std::string>(), params);
  }

  if (j.contains("expr")) {
    if (!j.at("expr").is_string()) throw ParseError("'expr' must be a string");
    auto support = number_array(j, "support");
    if (support.size() != 2) throw ParseError("'support' must hold two numbers");
    Expression e = Expression::parse(j.at("expr").get<std::string>());
    return SmoothPotential([e](double x) { return e(x); }, Interval{support[0], support[1]});
  }
  throw ParseError("profile JSON needs 'breakpoints', 'builtin' or 'expr'");
}

std::string profile_to_json(const StepProfile& profile) {
  json j;
  j["breakpoints"] = std::vector<double>(profile.breakpoints().begin(), profile.breakpoints().end());
  j["values"] = std::vector<double>(profile.values().begin(), profile.values().end());
  return j.dump() + "\n";
}

Potential load_potential(std::string_view source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.substr(0, prefix.size()) == prefix) {
    std::string_view rest = source.substr(prefix.size());
    auto q = rest.find('?');
    Params params = q == std::string_view::npos ? Params{} : parse_params(rest.substr(q + 1));
    return builtin(rest.substr(0, q), params);
  }
  return potential_from_json(read_file(std::string(source)));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "E,P_T,ln_PT,ln_abs_A1\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out << format_double(s.energies[i]) << ',' << format_double(s.p_t[i]) << ',' << format_double(s.ln_p_t[i]) << ','
        << format_double(s.ln_a1[i]) << '\n';
}

void write_wavefunction_csv(std::ostream& out, std::span<const double> grid, std::span<const std::complex<double>> psi) {
  if (grid.size() != psi.size()) throw InvalidArgument("grid and wave function lengths differ");
  out << "x,re_psi,im_psi,abs_psi\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << format_double(grid[i]) << ',' << format_double(psi[i].real()) << ',' << format_double(psi[i].imag()) << ','
        << format_double(std::abs(psi[i])) << '\n';
}

std::string bound_states_to_json(std::span<const BoundState> states) {
  json out = json::array();
  for (const auto& s : states) {
    json j;
    j["index"] = s.index;
    j["eigenvalue"] = s.eigenvalue;
    j["resonance_energy"] = s.resonance_energy;
    j["part_used"] = to_string(s.part_used);
    j["node_count"] = s.node_count;
    j["localization"] = s.localization ? json(to_string(*s.localization)) : json(nullptr);
    j["grid"] = s.grid;
    j["psi"] = s.psi;
    out.push_back(std::move(j));
  }
  return out.dump() + "\n";
}

std::string spectrum_gnuplot_script(const std::string& csv_path, const std::string& title) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set title '" << title << "'\n"
     << "set xlabel 'E'\n"
     << "set multiplot layout 2,1\n"
     << "set ylabel 'ln P_T'\n"
     << "plot '" << csv_path << "' using 1:3 with lines\n"
     << "set ylabel 'ln|A_1|'\n"
     << "plot '" << csv_path << "' using 1:4 with lines\n"
     << "unset multiplot\n";
  return os.str();
}

std::string wavefunction_gnuplot_script(const std::string& csv_path, const std::string& title) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set title '" << title << "'\n"
     << "set xlabel 'x'\n"
     << "plot '" << csv_path << "' using 1:2 with lines, '' using 1:3 with lines, '' using 1:4 with lines\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return os.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  out.flush();
  if (!out) throw IoError("error writing '" + path + "'");
}

}  // namespace qsolve::io
