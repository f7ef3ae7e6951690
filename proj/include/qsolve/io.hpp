#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsolve/bound.hpp"
#include "qsolve/profile.hpp"
#include "qsolve/spectra.hpp"

namespace qsolve::io {

/// Profile file JSON: {"breakpoints":[..],"values":[..]}, {"builtin":"name","params":{..}}
/// or {"expr":"...","support":[lo,hi]}.
Potential potential_from_json(std::string_view text);
std::string profile_to_json(const StepProfile& profile);

/// "builtin:name?k=v,..." or a path to a profile JSON file.
Potential load_potential(std::string_view source);

/// Round-trip exact formatting (17 significant digits).
std::string format_double(double v);

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
void write_wavefunction_csv(std::ostream& out, std::span<const double> grid, std::span<const std::complex<double>> psi);
std::string bound_states_to_json(std::span<const BoundState> states);

/// Gnuplot script plotting ln P_T and ln|A_1| from a spectrum CSV.
std::string spectrum_gnuplot_script(const std::string& csv_path, const std::string& title);
std::string wavefunction_gnuplot_script(const std::string& csv_path, const std::string& title);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace qsolve::io
