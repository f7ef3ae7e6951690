#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "qsolve/qsolve.h"

TEST_CASE("C API: potentials and scattering") {
  qs_potential* p = nullptr;
  REQUIRE(qs_potential_load("builtin:rect_double_barrier", &p) == QS_OK);
  CHECK(qs_potential_layers(p) == 3);
  CHECK(qs_potential_is_smooth(p) == 0);
  qs_scattering r{}, t{};
  REQUIRE(qs_scatter(p, 0.5, QS_ENGINE_RECURSIVE, &r) == QS_OK);
  REQUIRE(qs_scatter(p, 0.5, QS_ENGINE_TM, &t) == QS_OK);
  CHECK(std::abs(r.p_t - t.p_t) < 1e-9 * t.p_t);
  CHECK(std::abs(r.p_r + r.p_t - 1) < 1e-10);
  CHECK(qs_scatter(p, -1, QS_ENGINE_RECURSIVE, &r) == QS_ERR_INVALID);
  CHECK(std::string(qs_last_error()).find("energy") != std::string::npos);

  char* json = nullptr;
  REQUIRE(qs_potential_to_json(p, &json) == QS_OK);
  qs_potential* q = nullptr;
  REQUIRE(qs_potential_from_json(json, &q) == QS_OK);
  qs_string_free(json);
  qs_scattering r2{};
  qs_scatter(q, 0.5, QS_ENGINE_RECURSIVE, &r2);
  CHECK(r2.p_t == r.p_t);
  qs_potential_free(q);
  qs_potential_free(p);
}

TEST_CASE("C API: error codes") {
  qs_potential* p = nullptr;
  CHECK(qs_potential_load("/nonexistent.json", &p) == QS_ERR_IO);
  CHECK(qs_potential_load("builtin:nope", &p) == QS_ERR_INVALID);
  CHECK(qs_potential_from_expr("x^", -1, 1, &p) == QS_ERR_PARSE);
  CHECK(std::string(qs_last_error()).find("position 2") != std::string::npos);
  CHECK(qs_potential_load(nullptr, &p) == QS_ERR_INVALID);
  double bp[] = {0, 1};
  double v[] = {1};
  REQUIRE(qs_potential_from_steps(bp, v, 1, &p) == QS_OK);
  CHECK(std::string(qs_last_error()).empty());
  CHECK(qs_potential_uplift(p, 1, 1, &p) == QS_ERR_INVALID);
  qs_potential_free(p);
}

TEST_CASE("C API: sweep, resonances and wave function") {
  qs_potential* p = nullptr;
  REQUIRE(qs_potential_load("builtin:rect_double_barrier", &p) == QS_OK);
  qs_spectrum* s = nullptr;
  REQUIRE(qs_sweep(p, 0.01, 0.99, 1000, QS_ENGINE_RECURSIVE, 1, &s) == QS_OK);
  CHECK(qs_spectrum_size(s) == 1000);
  CHECK(std::string(qs_spectrum_digest(s)).size() == 16);
  double e = 0;
  CHECK(qs_spectrum_point(s, 999, &e, nullptr, nullptr, nullptr) == QS_OK);
  CHECK(e == 0.99);
  CHECK(qs_spectrum_point(s, 1000, &e, nullptr, nullptr, nullptr) == QS_ERR_INVALID);

  size_t count = 0;
  REQUIRE(qs_find_resonances(p, s, QS_DETECTOR_A1_DIP, 1e-8, nullptr, 0, &count) == QS_OK);
  REQUIRE(count == 2);
  std::vector<qs_resonance> res(count);
  REQUIRE(qs_find_resonances(p, s, QS_DETECTOR_A1_DIP, 1e-8, res.data(), res.size(), &count) == QS_OK);
  CHECK(res[0].energy < res[1].energy);
  CHECK(res[0].refinement_width <= 1e-8);

  double grid[] = {-1, 5, 11, 30};
  double re[4], im[4];
  REQUIRE(qs_wavefunction(p, 0.5, grid, 4, re, im) == QS_OK);
  CHECK(std::isfinite(re[2]));
  double jp = 1, jd = 1;
  REQUIRE(qs_continuity(p, 0.5, &jp, &jd) == QS_OK);
  CHECK(jp < 1e-8);
  CHECK(jd < 1e-8);
  qs_spectrum_free(s);
  qs_potential_free(p);
}

TEST_CASE("C API: eigen solve on an uplifted expression well") {
  qs_potential* well = nullptr;
  REQUIRE(qs_potential_from_expr("x^2", -4, 4, &well) == QS_OK);
  qs_potential* model = nullptr;
  REQUIRE(qs_potential_uplift(well, 1, 6, &model) == QS_OK);
  CHECK(qs_potential_uplift_value(model) == 1);
  CHECK(qs_potential_eval(model, -7) == 1);
  CHECK(qs_potential_eval(model, 2) == 5);
  REQUIRE(qs_potential_set_discretization(model, 1000, QS_SAMPLING_MIDPOINT) == QS_OK);
  qs_eigen_options o;
  qs_eigen_options_init(&o);
  o.emin = 1.5;
  o.emax = 5;
  o.points = 600;
  o.tol_e = 1e-10;
  qs_states* st = nullptr;
  REQUIRE(qs_eigen_solve(model, &o, &st) == QS_OK);
  REQUIRE(qs_states_count(st) == 2);  // x^2 levels 1 and 3, shifted by the uplift
  double ev = 0;
  int nodes = -1;
  qs_localization loc = QS_LOC_LEFT;
  REQUIRE(qs_states_get(st, 1, nullptr, &ev, nullptr, &nodes, nullptr, &loc) == QS_OK);
  CHECK(std::abs(ev - 3) < 5e-3);
  CHECK(nodes == 1);
  CHECK(loc == QS_LOC_NONE);
  const double* g = nullptr;
  const double* psi = nullptr;
  size_t n = 0;
  REQUIRE(qs_states_wave(st, 0, &g, &psi, &n) == QS_OK);
  CHECK(n == 2401);
  char* json = nullptr;
  REQUIRE(qs_states_to_json(st, &json) == QS_OK);
  CHECK(std::string(json).find("\"node_count\":1") != std::string::npos);
  qs_string_free(json);
  qs_states_free(st);
  qs_potential_free(model);
  qs_potential_free(well);
}
