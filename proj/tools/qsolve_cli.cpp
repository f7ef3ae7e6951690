// qsolve command-line front end. Talks to the library only through the C interface.
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsolve/qsolve.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kSolver = 2, kIo = 3 };

struct Failure {
  int exit_code;
  std::string message;
};

int exit_for(qs_status s) {
  switch (s) {
    case QS_OK: return kOk;
    case QS_ERR_INVALID:
    case QS_ERR_PARSE: return kUsage;
    case QS_ERR_IO: return kIo;
    default: return kSolver;
  }
}

void check(qs_status s) {
  if (s != QS_OK) throw Failure{exit_for(s), qs_last_error()};
}

struct PotentialDeleter {
  void operator()(qs_potential* p) const { qs_potential_free(p); }
};
struct SpectrumDeleter {
  void operator()(qs_spectrum* p) const { qs_spectrum_free(p); }
};
struct StatesDeleter {
  void operator()(qs_states* p) const { qs_states_free(p); }
};
using PotentialPtr = std::unique_ptr<qs_potential, PotentialDeleter>;

std::string take_string(char* s) {
  std::string out(s);
  qs_string_free(s);
  return out;
}

std::string script_path(const std::string& data_path) {
  auto slash = data_path.find_last_of('/');
  auto dot = data_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return data_path + ".gp";
  return data_path.substr(0, dot) + ".gp";
}

struct PotentialArgs {
  std::string source;
  int segments = 2000;
  std::string sampling = "midpoint";
  std::optional<double> uplift;
  double flank = 2.0;
};

void add_potential_args(CLI::App* cmd, PotentialArgs& a, bool with_uplift) {
  cmd->add_option("--potential", a.source, "profile JSON file or builtin:name[?k=v,...]")->required();
  cmd->add_option("--segments", a.segments, "layers for smooth potentials")->check(CLI::PositiveNumber);
  cmd->add_option("--sampling", a.sampling, "midpoint or average")->check(CLI::IsMember({"midpoint", "average"}));
  if (with_uplift) {
    cmd->add_option("--uplift", a.uplift, "build a model: well + uplift with flat flanks");
    cmd->add_option("--flank", a.flank, "flank width of the uplift model")->check(CLI::PositiveNumber);
  }
}

PotentialPtr load(const PotentialArgs& a, bool wrap_uplift) {
  qs_potential* raw = nullptr;
  check(qs_potential_load(a.source.c_str(), &raw));
  PotentialPtr p(raw);
  qs_sampling sampling = a.sampling == "average" ? QS_SAMPLING_AVERAGE : QS_SAMPLING_MIDPOINT;
  check(qs_potential_set_discretization(p.get(), a.segments, sampling));
  if (wrap_uplift && a.uplift && qs_potential_is_smooth(p.get())) {
    qs_potential* model = nullptr;
    check(qs_potential_uplift(p.get(), *a.uplift, a.flank, &model));
    p.reset(model);
  }
  return p;
}

qs_engine engine_from(const std::string& name) { return name == "tm" ? QS_ENGINE_TM : QS_ENGINE_RECURSIVE; }

void write_script(bool wavefunction, const std::string& data_path, const std::string& title) {
  char* script = nullptr;
  check(qs_gnuplot_script(wavefunction ? 1 : 0, data_path.c_str(), title.c_str(), &script));
  std::string text = take_string(script);
  check(qs_write_text(script_path(data_path).c_str(), text.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsolve: 1D tunneling spectra and bound states of piecewise-constant potentials"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (default: QSOLVE_THREADS or all cores)");

  // transmit
  PotentialArgs tp;
  double t_emin = 0, t_emax = 0;
  std::size_t t_points = 2000;
  std::string t_engine = "recursive", t_out = "spectrum.csv";
  auto* transmit = app.add_subcommand("transmit", "transmission spectrum P_T(E) and ln|A_1| to CSV");
  add_potential_args(transmit, tp, true);
  transmit->add_option("--emin", t_emin)->required()->check(CLI::PositiveNumber);
  transmit->add_option("--emax", t_emax)->required()->check(CLI::PositiveNumber);
  transmit->add_option("--points", t_points)->check(CLI::Range(2, 100000000));
  transmit->add_option("--engine", t_engine)->check(CLI::IsMember({"recursive", "tm"}));
  transmit->add_option("--out", t_out, "CSV path; a gnuplot script is written next to it");

  // eigen
  PotentialArgs ep;
  std::optional<double> e_emin, e_emax, e_split;
  std::size_t e_points = 4000;
  double e_tol = 1e-12;
  std::string e_detector = "pt_peak", e_out = "states.json";
  bool e_refine = false;
  auto* eigen = app.add_subcommand("eigen", "bound states of a well from the resonances of its model potential");
  add_potential_args(eigen, ep, true);
  eigen->add_option("--emin", e_emin)->check(CLI::PositiveNumber);
  eigen->add_option("--emax", e_emax)->check(CLI::PositiveNumber);
  eigen->add_option("--points", e_points)->check(CLI::Range(3, 100000000));
  eigen->add_option("--tol-e", e_tol)->check(CLI::PositiveNumber);
  eigen->add_option("--detector", e_detector)->check(CLI::IsMember({"a1_dip", "pt_peak"}));
  eigen->add_option("--split", e_split, "classify localization about this x");
  eigen->add_flag("--refine", e_refine, "re-sweep between resonances at 10x density until the count is stable");
  eigen->add_option("--out", e_out, "JSON path");

  // wavefunction
  PotentialArgs wp;
  double w_energy = 0;
  std::optional<double> w_xmin, w_xmax;
  std::size_t w_points = 2001;
  std::string w_out = "wavefunction.csv";
  bool w_check = false;
  auto* wave = app.add_subcommand("wavefunction", "scattering wave function psi(x) at one energy");
  add_potential_args(wave, wp, true);
  wave->add_option("--energy", w_energy)->required()->check(CLI::PositiveNumber);
  wave->add_option("--xmin", w_xmin);
  wave->add_option("--xmax", w_xmax);
  wave->add_option("--points", w_points)->check(CLI::Range(2, 100000000));
  wave->add_option("--out", w_out, "CSV path; a gnuplot script is written next to it");
  wave->add_flag("--check", w_check, "report the largest psi / psi' discontinuity at the breakpoints");

  // discretize
  PotentialArgs dp;
  std::string d_out;
  auto* disc = app.add_subcommand("discretize", "write the step profile of a potential as JSON");
  add_potential_args(disc, dp, true);
  disc->add_option("--out", d_out, "JSON path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*transmit) {
      if (!(t_emax > t_emin)) throw Failure{kUsage, "--emax must exceed --emin"};
      auto p = load(tp, true);
      qs_spectrum* raw = nullptr;
      check(qs_sweep(p.get(), t_emin, t_emax, t_points, engine_from(t_engine), threads, &raw));
      std::unique_ptr<qs_spectrum, SpectrumDeleter> s(raw);
      check(qs_spectrum_write_csv(s.get(), t_out.c_str()));
      write_script(false, t_out, "Transmission spectrum");
      std::printf("wrote %zu energies to %s (profile %s)\n", qs_spectrum_size(s.get()), t_out.c_str(),
                  qs_spectrum_digest(s.get()));
    } else if (*eigen) {
      if (e_emin.has_value() != e_emax.has_value()) throw Failure{kUsage, "give both --emin and --emax or neither"};
      auto p = load(ep, true);
      qs_eigen_options o;
      qs_eigen_options_init(&o);
      if (e_emin) {
        if (!(*e_emax > *e_emin)) throw Failure{kUsage, "--emax must exceed --emin"};
        o.emin = *e_emin;
        o.emax = *e_emax;
      }
      o.points = e_points;
      o.tol_e = e_tol;
      o.detector = e_detector == "a1_dip" ? QS_DETECTOR_A1_DIP : QS_DETECTOR_PT_PEAK;
      o.refine_grid = e_refine ? 1 : 0;
      o.threads = threads;
      if (e_split) {
        o.has_split = 1;
        o.split_point = *e_split;
      }
      if (!qs_potential_is_smooth(p.get()) && ep.uplift) o.step_uplift = *ep.uplift;
      qs_states* raw = nullptr;
      check(qs_eigen_solve(p.get(), &o, &raw));
      std::unique_ptr<qs_states, StatesDeleter> st(raw);
      for (std::size_t i = 0; i < qs_states_warning_count(st.get()); ++i)
        std::fprintf(stderr, "warning: %s\n", qs_states_warning(st.get(), i));
      char* json = nullptr;
      check(qs_states_to_json(st.get(), &json));
      check(qs_write_text(e_out.c_str(), take_string(json).c_str()));

      static const char* loc_names[] = {"left", "right", "delocalized"};
      std::printf("%5s %22s %22s %6s %10s %12s\n", "n", "eigenvalue", "resonance_E", "nodes", "part", "localization");
      for (std::size_t i = 0; i < qs_states_count(st.get()); ++i) {
        int index = 0, nodes = 0, imag = 0;
        double ev = 0, er = 0;
        qs_localization loc = QS_LOC_NONE;
        check(qs_states_get(st.get(), i, &index, &ev, &er, &nodes, &imag, &loc));
        std::printf("%5d %22.15g %22.15g %6d %10s %12s\n", index, ev, er, nodes, imag ? "imaginary" : "real",
                    loc == QS_LOC_NONE ? "-" : loc_names[loc]);
      }
    } else if (*wave) {
      auto p = load(wp, true);
      double lo = 0, hi = 0;
      check(qs_potential_extent(p.get(), &lo, &hi));
      double pad = 0.25 * (hi - lo);
      double xmin = w_xmin.value_or(lo - pad), xmax = w_xmax.value_or(hi + pad);
      if (!(xmax > xmin)) throw Failure{kUsage, "--xmax must exceed --xmin"};
      std::vector<double> grid(w_points);
      for (std::size_t i = 0; i < w_points; ++i)
        grid[i] = xmin + (xmax - xmin) * static_cast<double>(i) / static_cast<double>(w_points - 1);
      grid.back() = xmax;
      check(qs_wavefunction_write_csv(p.get(), w_energy, grid.data(), grid.size(), w_out.c_str()));
      write_script(true, w_out, "Wave function");
      std::printf("wrote %zu points to %s\n", grid.size(), w_out.c_str());
      if (w_check) {
        double jump_psi = 0, jump_dpsi = 0;
        check(qs_continuity(p.get(), w_energy, &jump_psi, &jump_dpsi));
        std::printf("max_psi_jump %.17g\nmax_dpsi_jump %.17g\n", jump_psi, jump_dpsi);
        if (!(jump_psi < 1e-8 && jump_dpsi < 1e-8)) throw Failure{kSolver, "continuity check failed"};
      }
    } else if (*disc) {
      auto p = load(dp, true);
      char* json = nullptr;
      check(qs_potential_to_json(p.get(), &json));
      std::string text = take_string(json);
      if (d_out.empty()) std::fputs(text.c_str(), stdout);
      else check(qs_write_text(d_out.c_str(), text.c_str()));
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "qsolve: %s\n", f.message.c_str());
    return f.exit_code;
  }
  return kOk;
}
