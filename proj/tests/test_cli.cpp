#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(QSOLVE_CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> csv_rows(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("cli: discretize an expression") {
  write("cli_x2.json", R"({"expr":"x^2","support":[-4,4]})");
  REQUIRE(run("discretize --potential cli_x2.json --segments 4 --out cli_x2_steps.json") == 0);
  std::string out = slurp("cli_x2_steps.json");
  CHECK(out == "{\"breakpoints\":[-4.0,-2.0,0.0,2.0,4.0],\"values\":[9.0,1.0,1.0,9.0]}\n");
}

TEST_CASE("cli: usage and parse errors exit 1") {
  CHECK(run("transmit --emin 0.1 --emax 1") == 1);
  CHECK(run("bogus") == 1);
  write("cli_bad.json", R"({"expr":"x^*2","support":[-1,1]})");
  CHECK(run("discretize --potential cli_bad.json") == 1);
  CHECK(slurp("cli_stderr.txt").find("position 2") != std::string::npos);
  CHECK(run("transmit --potential builtin:rect_double_barrier --emin 1 --emax 0.5") == 1);
}

TEST_CASE("cli: I/O errors exit 3") {
  CHECK(run("discretize --potential /nonexistent/p.json") == 3);
  CHECK(run("transmit --potential builtin:rect_double_barrier --emin 0.1 --emax 1 --points 5 --out /nonexistent/x.csv") == 3);
}

TEST_CASE("cli: transmit writes CSV and gnuplot script; engines agree") {
  REQUIRE(run("transmit --potential builtin:rect_double_barrier --emin 0.01 --emax 1 --points 300 --out cli_rec.csv") == 0);
  REQUIRE(run("transmit --potential builtin:rect_double_barrier --emin 0.01 --emax 1 --points 300 --engine tm "
              "--out cli_tm.csv") == 0);
  CHECK(slurp("cli_rec.csv").rfind("E,P_T,ln_PT,ln_abs_A1\n", 0) == 0);
  CHECK(slurp("cli_rec.gp").find("cli_rec.csv") != std::string::npos);
  auto a = csv_rows("cli_rec.csv");
  auto b = csv_rows("cli_tm.csv");
  REQUIRE(a.size() == 300);
  REQUIRE(b.size() == 300);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i][0] == b[i][0]);
    CHECK(std::abs(a[i][1] - b[i][1]) <= 1e-9 * std::max(1e-300, b[i][1]));
  }
}

TEST_CASE("cli: zero potential is fully transmitting") {
  write("cli_zero.json", R"({"expr":"0","support":[-1,1]})");
  REQUIRE(run("transmit --potential cli_zero.json --emin 0.1 --emax 3 --points 20 --out cli_zero.csv") == 0);
  for (const auto& row : csv_rows("cli_zero.csv")) CHECK(row[1] == 1.0);
}

TEST_CASE("cli: discretized profile round-trips bit for bit") {
  REQUIRE(run("discretize --potential builtin:gaussian_double_barrier --segments 500 --out cli_g.json") == 0);
  REQUIRE(run("transmit --potential builtin:gaussian_double_barrier --segments 500 --emin 0.05 --emax 1.5 "
              "--points 100 --out cli_g1.csv") == 0);
  REQUIRE(run("transmit --potential cli_g.json --emin 0.05 --emax 1.5 --points 100 --out cli_g2.csv") == 0);
  CHECK(slurp("cli_g1.csv") == slurp("cli_g2.csv"));
}

TEST_CASE("cli: gaussian barrier converges at second order in the segment count") {
  std::vector<std::vector<std::vector<double>>> runs;
  for (int n : {1000, 2000, 4000}) {
    std::string out = "cli_n" + std::to_string(n) + ".csv";
    REQUIRE(run("transmit --potential builtin:gaussian_double_barrier --segments " + std::to_string(n) +
                " --emin 0.05 --emax 1.5 --points 200 --out " + out) == 0);
    runs.push_back(csv_rows(out));
  }
  double d1 = 0, d2 = 0;
  for (std::size_t i = 0; i < runs[0].size(); ++i) {
    d1 = std::max(d1, std::abs(runs[0][i][1] - runs[1][i][1]));
    d2 = std::max(d2, std::abs(runs[1][i][1] - runs[2][i][1]));
  }
  CHECK(d2 < 1e-4);
  CHECK(d2 < d1 / 3);
}

TEST_CASE("cli: plane wave and continuity check") {
  write("cli_zero.json", R"({"expr":"0","support":[-1,1]})");
  REQUIRE(run("wavefunction --potential cli_zero.json --energy 1 --xmin -5 --xmax 5 --points 101 --check "
              "--out cli_wave.csv") == 0);
  for (const auto& row : csv_rows("cli_wave.csv")) {
    CHECK(std::abs(row[1] - std::cos(row[0])) < 1e-12);
    CHECK(std::abs(row[2] - std::sin(row[0])) < 1e-12);
  }
  CHECK(slurp("cli_stdout.txt").find("max_psi_jump") != std::string::npos);
  REQUIRE(run("wavefunction --potential builtin:harmonic_model --energy 1.0 --check --out cli_ho.csv") == 0);
}

TEST_CASE("cli: eigen on an empty window and on the harmonic model") {
  REQUIRE(run("eigen --potential builtin:harmonic_model --emin 0.5 --emax 0.9 --points 100 --out cli_empty.json") == 0);
  CHECK(slurp("cli_empty.json") == "[]\n");
  REQUIRE(run("eigen --potential builtin:harmonic_model --emin 0.5 --emax 4 --points 500 --tol-e 1e-10 "
              "--out cli_ho.json") == 0);
  std::string out = slurp("cli_stdout.txt");
  CHECK(out.find("eigenvalue") != std::string::npos);
  std::string json = slurp("cli_ho.json");
  CHECK(json.find("\"index\":1") != std::string::npos);
  CHECK(json.find("\"index\":2") == std::string::npos);
}

TEST_CASE("cli: output is deterministic") {
  REQUIRE(run("transmit --potential builtin:rect_double_barrier --emin 0.01 --emax 1 --points 50 --out cli_d1.csv") == 0);
  REQUIRE(run("transmit --potential builtin:rect_double_barrier --emin 0.01 --emax 1 --points 50 --threads 1 "
              "--out cli_d2.csv") == 0);
  CHECK(slurp("cli_d1.csv") == slurp("cli_d2.csv"));
}
