#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fgeo/config.hpp"
#include "fgeo/csv.hpp"
#include "fgeo/runner.hpp"

using namespace fgeo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("fgeo_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("config parser fills defaults") {
  RunConfig cfg = parse_run_config("x0 = 0\ny0 = 1\n", "geodesic");
  CHECK(cfg.model == "flat");
  CHECK(cfg.steps == 1000);
  CHECK(cfg.t_end == 1.0);
  CHECK(cfg.tol == 1e-8);
  CHECK(!cfg.tol_set);
  CHECK(cfg.seed == 42);
}

TEST_CASE("zero steps is rejected by name") {
  try {
    parse_run_config("steps = 0\n", "geodesic");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("steps") != std::string::npos);
  }
}

TEST_CASE("non-positive t_end and tol are rejected") {
  CHECK_THROWS_AS(parse_run_config("t_end = 0\n", "ch"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("tol = -1\n", "ch"), ConfigError);
}

TEST_CASE("duplicate keys are rejected with a line number") {
  try {
    ConfigMap::parse("a = 1\na = 2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("duplicate") != std::string::npos);
  }
}

TEST_CASE("comments and blank lines are ignored") {
  ConfigMap cfg = ConfigMap::parse("# header\n\nkey = 3 # trailing\n");
  CHECK(cfg.get_double("key") == 3.0);
}

TEST_CASE("malformed numbers carry the key and line") {
  ConfigMap cfg = ConfigMap::parse("steps = many\n");
  try {
    cfg.get_int("steps");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("steps") != std::string::npos);
  }
}

TEST_CASE("tower config builds a working tower") {
  std::string text =
      "tower.levels = 2\n"
      "tower.level.0.dim = 2\n"
      "tower.level.1.dim = 3\n"
      "tower.map.1to0 = 1 0 0  0 1 0\n";
  Tower t = tower_from_config(ConfigMap::parse(text));
  CHECK(t.depth() == 2);
  Vec x(3);
  x << 4, 5, 6;
  Vec p = t.project(x, 1, 0);
  CHECK(p[0] == 4.0);
  CHECK(p[1] == 5.0);
}

TEST_CASE("polynomial christoffel config evaluates its terms") {
  std::string text =
      "gamma.dim = 2\n"
      "gamma.symmetric = 1\n"
      "gamma.term.0 = 0 0 0 2\n"    // Gamma(u)(a,b)_0 += 2 a_0 b_0
      "gamma.term.1 = 1 0 1 1 0\n"  // Gamma(u)(a,b)_1 += u_0 (a_0 b_1 + a_1 b_0)
      ;
  ChristoffelField g = polynomial_christoffel_from_config(ConfigMap::parse(text));
  Vec u(2), a(2), b(2);
  u << 3, 0;
  a << 1, 2;
  b << 4, 5;
  Vec out = g(u, a, b);
  CHECK(out[0] == 8.0);                 // 2 * 1 * 4
  CHECK(out[1] == 3.0 * (5.0 + 8.0));   // u_0 (a_0 b_1 + a_1 b_0)
}

TEST_CASE("ch config constructs the requested model") {
  RunConfig cfg = parse_run_config(
      "ch.k = 1\nch.modes = 128\nch.init = 0 1\nt_end = 0.01\nsteps = 5\n", "ch");
  CHECK(cfg.raw.get_int("ch.k") == 1);
  CHECK(cfg.raw.get_int("ch.modes") == 128);
}

TEST_CASE("unknown keys abort the run with their line") {
  TempDir dir("unknown");
  RunConfig cfg = parse_run_config(
      "x0 = 0\ny0 = 1\nmystery = 1\nout = " + dir.path.string() + "\n", "geodesic");
  try {
    fgeo::run(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("mystery") != std::string::npos);
  }
}

TEST_CASE("flat geodesic run writes the line p + t v") {
  TempDir dir("flatgeo");
  RunConfig cfg = parse_run_config(
      "x0 = 1 2\ny0 = 0.5 -1\nsteps = 4\nout = " + dir.path.string() + "\n",
      "geodesic");
  RunResult r = fgeo::run(cfg);
  CHECK(r.exit_code == 0);
  std::vector<std::string> lines = split_lines(slurp(dir.path / "geodesic.csv"));
  REQUIRE(lines.size() == 6);  // header + 5 states
  CHECK(lines[0] == "t,level,x_0,x_1,y_0,y_1");
  CHECK(lines[1] == "0,-1,1,2,0.5,-1");
  CHECK(lines[5] == "1,-1,1.5,1,0.5,-1");
  CHECK(slurp(dir.path / "summary.txt").find("existence_interval_a") !=
        std::string::npos);
}

TEST_CASE("convert-check passes on the seeded instances") {
  TempDir dir("convert");
  RunConfig cfg = parse_run_config("cases = 10\nout = " + dir.path.string() + "\n",
                                   "convert-check");
  RunResult r = fgeo::run(cfg);
  CHECK(r.exit_code == 0);
  CHECK(slurp(dir.path / "summary.txt").find("pass = true") != std::string::npos);
}

TEST_CASE("tower-check validates a config-described tower") {
  TempDir dir("towercheck");
  std::string text =
      "tower.levels = 3\n"
      "tower.level.0.dim = 1\n"
      "tower.level.1.dim = 2\n"
      "tower.level.2.dim = 3\n"
      "tower.map.1to0 = 1 0\n"
      "tower.map.2to1 = 1 0 0  0 1 0\n"
      "out = " + dir.path.string() + "\n";
  RunResult r = fgeo::run(parse_run_config(text, "tower-check"));
  CHECK(r.exit_code == 0);
  CHECK(slurp(dir.path / "tower_coherence.csv").rfind("t,j,i,residual", 0) == 0);
}

TEST_CASE("spectral run conserves energy and reports the seminorm") {
  TempDir dir("chrun");
  std::string text =
      "ch.k = 1\nch.modes = 16\nch.init = 0 1\n"
      "t_end = 0.1\nsteps = 50\nout = " + dir.path.string() + "\n";
  RunResult r = fgeo::run(parse_run_config(text, "ch"));
  CHECK(r.exit_code == 0);
  std::string summary = slurp(dir.path / "summary.txt");
  CHECK(summary.find("initial_sobolev_seminorm = 2.5066282746310002") !=
        std::string::npos);  // sqrt(2 pi) for cos x
  CHECK(summary.find("pass = true") != std::string::npos);
}

TEST_CASE("identical runs are byte identical") {
  TempDir d1("det1"), d2("det2");
  std::string base =
      "ch.k = 1\nch.modes = 16\nch.init = 0 1 0 0.25\nt_end = 0.1\nsteps = 20\n";
  fgeo::run(parse_run_config(base + "out = " + d1.path.string() + "\n", "ch"));
  fgeo::run(parse_run_config(base + "out = " + d2.path.string() + "\n", "ch"));
  CHECK(slurp(d1.path / "ch.csv") == slurp(d2.path / "ch.csv"));
  CHECK(slurp(d1.path / "summary.txt") == slurp(d2.path / "summary.txt"));
}

TEST_CASE("run_from_text maps config errors to exit 2") {
  CHECK(run_from_text("steps = 0\n", "geodesic") == 2);
  CHECK(run_from_text("x0 = 0\n", "no-such-command") == 2);
}

TEST_CASE("doubles are serialized shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  double pi_ish = 3.141592653589793;
  CHECK(std::stod(format_double(pi_ish)) == pi_ish);
}

TEST_CASE("empty trajectories produce a header-only file") {
  TempDir dir("emptycsv");
  Trajectory t;
  fs::path p = dir.path / "empty.csv";
  write_trajectory_csv(p.string(), t);
  std::string text = slurp(p);
  CHECK(text == "t,level\n");
}

TEST_CASE("one-row trajectories produce header plus one line") {
  TempDir dir("onerow");
  Trajectory t;
  t.times = {0.25};
  Vec x(1);
  x << 2.0;
  t.pos = {x};
  fs::path p = dir.path / "one.csv";
  write_trajectory_csv(p.string(), t);
  std::vector<std::string> lines = split_lines(slurp(p));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "t,level,x_0");
  CHECK(lines[1] == "0.25,-1,2");
}
