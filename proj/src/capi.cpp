#include "qsolve/qsolve.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "qsolve/bound.hpp"
#include "qsolve/error.hpp"
#include "qsolve/expr.hpp"
#include "qsolve/io.hpp"
#include "qsolve/oracle.hpp"
#include "qsolve/profile.hpp"
#include "qsolve/spectra.hpp"

struct qs_potential {
  qsolve::Potential source;
  qsolve::DiscretizationRule rule;
  qsolve::StepProfile steps;

  static qsolve::StepProfile to_steps(const qsolve::Potential& p, const qsolve::DiscretizationRule& rule) {
    if (auto* s = std::get_if<qsolve::StepProfile>(&p)) return *s;
    return qsolve::discretize(std::get<qsolve::SmoothPotential>(p), rule);
  }

  explicit qs_potential(qsolve::Potential p) : source(std::move(p)), steps(to_steps(source, rule)) {}
};

struct qs_spectrum {
  qsolve::Spectrum data;
};

struct qs_states {
  qsolve::EigenResult result;
};

namespace {

thread_local std::string last_error;

qs_status code_of(qsolve::ErrorCode c) {
  switch (c) {
    case qsolve::ErrorCode::invalid_argument: return QS_ERR_INVALID;
    case qsolve::ErrorCode::solver: return QS_ERR_SOLVER;
    case qsolve::ErrorCode::io: return QS_ERR_IO;
    case qsolve::ErrorCode::parse: return QS_ERR_PARSE;
  }
  return QS_ERR_INTERNAL;
}

template <typename Fn>
qs_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return QS_OK;
  } catch (const qsolve::Error& e) {
    last_error = e.what();
    return code_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return QS_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw qsolve::InvalidArgument(what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qsolve::Detector detector_of(qs_detector d) {
  return d == QS_DETECTOR_PT_PEAK ? qsolve::Detector::pt_peak : qsolve::Detector::a1_dip;
}

qsolve::Engine engine_of(qs_engine e) { return e == QS_ENGINE_TM ? qsolve::Engine::tm : qsolve::Engine::recursive; }

}  // namespace

extern "C" {

const char* qs_version(void) { return "1.0.0"; }

const char* qs_last_error(void) { return last_error.c_str(); }

void qs_string_free(char* s) { delete[] s; }

qs_status qs_potential_load(const char* source, qs_potential** out) {
  return guarded([&] {
    require(source && out, "null argument");
    *out = new qs_potential(qsolve::io::load_potential(source));
  });
}

qs_status qs_potential_from_json(const char* text, qs_potential** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new qs_potential(qsolve::io::potential_from_json(text));
  });
}

qs_status qs_potential_from_steps(const double* breakpoints, const double* values, size_t layers, qs_potential** out) {
  return guarded([&] {
    require(breakpoints && values && out, "null argument");
    qsolve::StepProfile p(std::vector<double>(breakpoints, breakpoints + layers + 1),
                          std::vector<double>(values, values + layers));
    *out = new qs_potential(std::move(p));
  });
}

qs_status qs_potential_from_expr(const char* expr, double lo, double hi, qs_potential** out) {
  return guarded([&] {
    require(expr && out, "null argument");
    auto e = qsolve::Expression::parse(expr);
    *out = new qs_potential(qsolve::SmoothPotential([e](double x) { return e(x); }, {lo, hi}));
  });
}

qs_status qs_potential_uplift(const qs_potential* well, double uplift, double flank, qs_potential** out) {
  return guarded([&] {
    require(well && out, "null argument");
    const auto* smooth = std::get_if<qsolve::SmoothPotential>(&well->source);
    require(smooth != nullptr, "uplift needs a smooth well potential");
    auto* p = new qs_potential(qsolve::uplift_model(*smooth, uplift, flank));
    p->rule = well->rule;
    try {
      p->steps = qs_potential::to_steps(p->source, p->rule);
    } catch (...) {
      delete p;
      throw;
    }
    *out = p;
  });
}

qs_status qs_potential_set_discretization(qs_potential* p, int segments, qs_sampling sampling) {
  return guarded([&] {
    require(p != nullptr, "null argument");
    qsolve::DiscretizationRule rule{segments,
                                    sampling == QS_SAMPLING_AVERAGE ? qsolve::Sampling::average : qsolve::Sampling::midpoint};
    require(segments >= 1, "segment count must be at least 1");
    p->steps = qs_potential::to_steps(p->source, rule);
    p->rule = rule;
  });
}

int qs_potential_is_smooth(const qs_potential* p) {
  return p && std::holds_alternative<qsolve::SmoothPotential>(p->source) ? 1 : 0;
}

double qs_potential_uplift_value(const qs_potential* p) {
  if (!p) return 0.0;
  if (auto* s = std::get_if<qsolve::SmoothPotential>(&p->source)) return s->uplift();
  return 0.0;
}

size_t qs_potential_layers(const qs_potential* p) { return p ? p->steps.layers() : 0; }

qs_status qs_potential_extent(const qs_potential* p, double* lo, double* hi) {
  return guarded([&] {
    require(p && lo && hi, "null argument");
    *lo = p->steps.left();
    *hi = p->steps.right();
  });
}

double qs_potential_eval(const qs_potential* p, double x) { return p ? qsolve::evaluate(p->source, x) : 0.0; }

qs_status qs_potential_to_json(const qs_potential* p, char** json) {
  return guarded([&] {
    require(p && json, "null argument");
    *json = dup_string(qsolve::io::profile_to_json(p->steps));
  });
}

void qs_potential_free(qs_potential* p) { delete p; }

qs_status qs_builtin_names(char** names) {
  return guarded([&] {
    require(names != nullptr, "null argument");
    std::string all;
    for (const auto& n : qsolve::builtin_names()) all += (all.empty() ? "" : ",") + n;
    *names = dup_string(all);
  });
}

qs_status qs_scatter(const qs_potential* p, double energy, qs_engine engine, qs_scattering* out) {
  return guarded([&] {
    require(p && out, "null argument");
    auto r = qsolve::scatter_with(p->steps, qsolve::Energy(energy), engine_of(engine));
    *out = {r.energy, r.r.real(), r.r.imag(), r.t.real(), r.t.imag(), r.log_t.real(), r.log_t.imag(),
            r.p_r,    r.p_t,      r.ln_p_t,   r.ln_a1};
  });
}

qs_status qs_wavefunction(const qs_potential* p, double energy, const double* grid, size_t n, double* re, double* im) {
  return guarded([&] {
    require(p && (n == 0 || (grid && re && im)), "null argument");
    auto c = qsolve::compute_coefficients(p->steps, qsolve::Energy(energy));
    auto psi = qsolve::wavefunction(c, p->steps, std::span<const double>(grid, n));
    for (size_t i = 0; i < n; ++i) {
      re[i] = psi[i].real();
      im[i] = psi[i].imag();
    }
  });
}

qs_status qs_wavefunction_write_csv(const qs_potential* p, double energy, const double* grid, size_t n,
                                    const char* path) {
  return guarded([&] {
    require(p && path && (n == 0 || grid), "null argument");
    auto c = qsolve::compute_coefficients(p->steps, qsolve::Energy(energy));
    std::span<const double> g(grid, n);
    auto psi = qsolve::wavefunction(c, p->steps, g);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw qsolve::IoError(std::string("cannot write '") + path + "'");
    qsolve::io::write_wavefunction_csv(f, g, psi);
    if (!f) throw qsolve::IoError(std::string("error writing '") + path + "'");
  });
}

qs_status qs_continuity(const qs_potential* p, double energy, double* max_psi_jump, double* max_dpsi_jump) {
  return guarded([&] {
    require(p && max_psi_jump && max_dpsi_jump, "null argument");
    auto c = qsolve::compute_coefficients(p->steps, qsolve::Energy(energy));
    auto r = qsolve::check_continuity(c, p->steps);
    *max_psi_jump = r.max_psi_jump;
    *max_dpsi_jump = r.max_dpsi_jump;
  });
}

qs_status qs_sweep(const qs_potential* p, double emin, double emax, size_t points, qs_engine engine,
                   unsigned threads, qs_spectrum** out) {
  return guarded([&] {
    require(p && out, "null argument");
    qsolve::SweepOptions o{engine_of(engine), threads};
    *out = new qs_spectrum{qsolve::sweep(p->steps, emin, emax, points, o)};
  });
}

size_t qs_spectrum_size(const qs_spectrum* s) { return s ? s->data.size() : 0; }

qs_status qs_spectrum_point(const qs_spectrum* s, size_t i, double* energy, double* p_t, double* ln_p_t,
                            double* ln_a1) {
  return guarded([&] {
    require(s != nullptr, "null argument");
    require(i < s->data.size(), "spectrum index out of range");
    if (energy) *energy = s->data.energies[i];
    if (p_t) *p_t = s->data.p_t[i];
    if (ln_p_t) *ln_p_t = s->data.ln_p_t[i];
    if (ln_a1) *ln_a1 = s->data.ln_a1[i];
  });
}

const char* qs_spectrum_digest(const qs_spectrum* s) { return s ? s->data.profile_digest.c_str() : ""; }

qs_status qs_spectrum_write_csv(const qs_spectrum* s, const char* path) {
  return guarded([&] {
    require(s && path, "null argument");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw qsolve::IoError(std::string("cannot write '") + path + "'");
    qsolve::io::write_spectrum_csv(f, s->data);
    if (!f) throw qsolve::IoError(std::string("error writing '") + path + "'");
  });
}

void qs_spectrum_free(qs_spectrum* s) { delete s; }

qs_status qs_find_resonances(const qs_potential* p, const qs_spectrum* s, qs_detector detector, double tol_e,
                             qs_resonance* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(p && s && count && (capacity == 0 || out), "null argument");
    auto found = qsolve::find_resonances(s->data, p->steps, detector_of(detector), tol_e);
    *count = found.resonances.size();
    for (size_t i = 0; i < found.resonances.size() && i < capacity; ++i) {
      const auto& r = found.resonances[i];
      out[i] = {r.energy, r.ln_a1_min, r.ln_p_t, r.refinement_width, r.depth};
    }
  });
}

void qs_eigen_options_init(qs_eigen_options* o) {
  if (!o) return;
  qsolve::EigenOptions d;
  *o = {};
  o->points = d.points;
  o->tol_e = d.tol_e;
  o->detector = d.detector == qsolve::Detector::pt_peak ? QS_DETECTOR_PT_PEAK : QS_DETECTOR_A1_DIP;
  o->refine_grid = d.refine_grid ? 1 : 0;
  o->well_points = d.well_points;
  o->flank_points = d.flank_points;
  o->threads = d.threads;
}

qs_status qs_eigen_solve(const qs_potential* model, const qs_eigen_options* o, qs_states** out) {
  return guarded([&] {
    require(model && o && out, "null argument");
    qsolve::EigenOptions opts;
    opts.discretization = model->rule;
    if (o->emin != 0.0 || o->emax != 0.0) opts.window = qsolve::Interval{o->emin, o->emax};
    opts.points = o->points;
    opts.tol_e = o->tol_e;
    opts.detector = detector_of(o->detector);
    opts.refine_grid = o->refine_grid != 0;
    opts.well_points = o->well_points;
    opts.flank_points = o->flank_points;
    if (o->has_split) opts.split_point = o->split_point;
    opts.threads = o->threads;
    if (auto* smooth = std::get_if<qsolve::SmoothPotential>(&model->source))
      *out = new qs_states{qsolve::solve_model(*smooth, opts)};
    else
      *out = new qs_states{qsolve::solve_step_model(model->steps, o->step_uplift, opts)};
  });
}

size_t qs_states_count(const qs_states* s) { return s ? s->result.states.size() : 0; }

qs_status qs_states_get(const qs_states* s, size_t i, int* index, double* eigenvalue, double* resonance_energy,
                        int* node_count, int* imaginary_part, qs_localization* loc) {
  return guarded([&] {
    require(s != nullptr, "null argument");
    require(i < s->result.states.size(), "state index out of range");
    const auto& st = s->result.states[i];
    if (index) *index = st.index;
    if (eigenvalue) *eigenvalue = st.eigenvalue;
    if (resonance_energy) *resonance_energy = st.resonance_energy;
    if (node_count) *node_count = st.node_count;
    if (imaginary_part) *imaginary_part = st.part_used == qsolve::Part::imaginary ? 1 : 0;
    if (loc) {
      *loc = QS_LOC_NONE;
      if (st.localization) {
        switch (*st.localization) {
          case qsolve::Localization::left: *loc = QS_LOC_LEFT; break;
          case qsolve::Localization::right: *loc = QS_LOC_RIGHT; break;
          case qsolve::Localization::delocalized: *loc = QS_LOC_DELOCALIZED; break;
        }
      }
    }
  });
}

qs_status qs_states_wave(const qs_states* s, size_t i, const double** grid, const double** psi, size_t* n) {
  return guarded([&] {
    require(s && grid && psi && n, "null argument");
    require(i < s->result.states.size(), "state index out of range");
    const auto& st = s->result.states[i];
    *grid = st.grid.data();
    *psi = st.psi.data();
    *n = st.grid.size();
  });
}

size_t qs_states_warning_count(const qs_states* s) { return s ? s->result.warnings.size() : 0; }

const char* qs_states_warning(const qs_states* s, size_t i) {
  if (!s || i >= s->result.warnings.size()) return "";
  return s->result.warnings[i].c_str();
}

qs_status qs_states_to_json(const qs_states* s, char** json) {
  return guarded([&] {
    require(s && json, "null argument");
    *json = dup_string(qsolve::io::bound_states_to_json(s->result.states));
  });
}

void qs_states_free(qs_states* s) { delete s; }

qs_status qs_gnuplot_script(int wavefunction, const char* csv_path, const char* title, char** script) {
  return guarded([&] {
    require(csv_path && title && script, "null argument");
    *script = dup_string(wavefunction ? qsolve::io::wavefunction_gnuplot_script(csv_path, title)
                                      : qsolve::io::spectrum_gnuplot_script(csv_path, title));
  });
}

qs_status qs_write_text(const char* path, const char* text) {
  return guarded([&] {
    require(path && text, "null argument");
    qsolve::io::write_file(path, text);
  });
}

}  // extern "C"
