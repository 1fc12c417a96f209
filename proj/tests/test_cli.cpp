#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(LSMDG_CLI_PATH) + " " + args + " --log-level off";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_out" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("ode-study writes the default table") {
  const fs::path dir = fresh_dir("ode");
  REQUIRE(run("ode-study --csv-dir " + dir.string()) == 0);
  const auto rows = read_csv(dir / "ode_study.csv");
  REQUIRE(rows.size() == 28);
  CHECK(rows[0] == std::vector<std::string>{"formulation", "cells", "h", "error", "rate"});
}

TEST_CASE("ode-study at degree six is exact") {
  const fs::path dir = fresh_dir("ode6");
  REQUIRE(run("ode-study --p 6 --cells 2 --levels 1 --csv-dir " + dir.string()) == 0);
  const auto rows = read_csv(dir / "ode_study.csv");
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][3]) < 1e-12);
}

TEST_CASE("boundary-layer outputs") {
  const fs::path dir = fresh_dir("bl");
  REQUIRE(run("boundary-layer --pe 10 --p 2 --cells 4 --iteration-log --csv-dir " + dir.string()) == 0);
  CHECK(read_csv(dir / "solution.csv")[0] == std::vector<std::string>{"cell_id", "xi", "x", "y"});
  CHECK(read_csv(dir / "mesh.csv")[0] == std::vector<std::string>{"cell_id", "local_index", "x"});
  CHECK(read_csv(dir / "iterations.csv")[0] ==
        std::vector<std::string>{"iter", "objective", "grad_norm", "lambda_u", "step_scale",
                                 "min_jacobian"});

  REQUIRE(run("boundary-layer --mode interface --pe 100 --p 2 --csv-dir " + dir.string()) == 0);
  const auto t = read_csv(dir / "interface_positions.csv");
  REQUIRE(t.size() == 2);
  CHECK(t[0] == std::vector<std::string>{"Pe", "p", "x_eps"});
  CHECK(std::abs(std::stod(t[1][2]) - 0.96910269349294942) < 1e-3);

  REQUIRE(run("boundary-layer --mode convergence --static --p 2 --cells 2 --levels 3 --csv-dir " +
              dir.string()) == 0);
  const auto c = read_csv(dir / "convergence.csv");
  REQUIRE(c.size() == 4);
  CHECK(c[0] == std::vector<std::string>{"case", "p", "cells", "h", "l2_error", "rate"});
  CHECK(c[1][0] == "boundary_layer_static");
}

TEST_CASE("values are written with 17 significant digits") {
  const fs::path dir = fresh_dir("digits");
  REQUIRE(run("boundary-layer --mode interface --pe 100 --p 2 --csv-dir " + dir.string()) == 0);
  const std::string x = read_csv(dir / "interface_positions.csv")[1][2];
  CHECK(x.size() >= 18);  // "0." plus 17 digits, trailing zeros aside
}

TEST_CASE("configuration errors exit with code 2") {
  const fs::path dir = fresh_dir("bad");
  CHECK(run("boundary-layer --p 0 --csv-dir " + dir.string()) == 2);
  CHECK(run("ode-study --formulation galerkin --csv-dir " + dir.string()) == 2);
  CHECK(run("ns-shock --mach 0.5 --csv-dir " + dir.string()) == 2);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "no_such_key=1\n";
  }
  CHECK(run("boundary-layer --config " + (dir / "bad.cfg").string()) == 2);
}

TEST_CASE("flat config files set options") {
  const fs::path dir = fresh_dir("cfg");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "mode=interface\npe=100\np=2\ncsv-dir=" << dir.string() << "\n";
  }
  REQUIRE(run("boundary-layer --config " + (dir / "run.cfg").string()) == 0);
  CHECK(fs::exists(dir / "interface_positions.csv"));
}

TEST_CASE("a stalled solve exits with code 3") {
  const fs::path dir = fresh_dir("stall");
  CHECK(run("burgers --cells 8 --max-iters 1 --csv-dir " + dir.string()) == 3);
}
