#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "discoflux/config.hpp"
#include "discoflux/io.hpp"

using namespace discoflux;

TEST_CASE("config parses sections, comments and formats") {
  const RunConfig c = parse_config(R"(# a comment
[state]
kind = kink     # trailing comment
k_left = 2
k_right = 2.5
momentum = 5

[grid]
a = -1
b = 1
n_cells = 1024

[time]
t_max = 1e-4
allow_long_times = yes

[output]
formats = csv, svg
)");
  CHECK(c.state.kind == "kink");
  CHECK(c.state.k_right == 2.5);
  CHECK(c.grid.n_cells == 1024);
  CHECK(c.time.t_max == 1e-4);
  CHECK(c.time.allow_long_times);
  CHECK(c.wants("svg"));
  CHECK_FALSE(c.wants("json"));
  CHECK(classify(make_state(c)).case_label == CaseLabel::C);
  CHECK(make_grid(c).n_cells() == 1024);
}

TEST_CASE("config errors carry line numbers") {
  auto line_of = [](const char* text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("[state]\nbogus = 1\n") == 2);
  CHECK(line_of("[nowhere]\n") == 1);
  CHECK(line_of("x0 = 1\n") == 1);
  CHECK(line_of("[grid]\na = -1\na = -2\n") == 3);
  CHECK(line_of("[grid]\n\nmass = abc\n") == 3);
  CHECK(line_of("[output]\nformats = csv, pdf\n") == 2);
  CHECK(line_of("[grid]\nn_cells = 1e3x\n") == 2);
}

TEST_CASE("time window check uses t0 of the state") {
  RunConfig c = parse_config("[state]\nkind = truncated_well\n[grid]\na = -0.75\nb = 1.25\n[time]\nt_max = 0.2\n");
  CHECK_THROWS_AS(check_time_window(c, make_state(c)), ConfigError);
  c.time.t_max = 0.05;
  CHECK_NOTHROW(check_time_window(c, make_state(c)));
}

TEST_CASE("samples file state and tabulated potential") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "discoflux_cfg_test";
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "psi.dat");
    f << "# x re im\n";
    for (int j = 0; j < 200; ++j) {
      const double x = -0.995 + 0.01 * j;
      f << x << ", " << std::sin(pi * (x + 1.0) / 2.0) << ", 0\n";
    }
    std::ofstream v(dir / "v.dat");
    v << "-1 0\n0 1\n1 0\n";
  }
  std::ofstream(dir / "run.cfg") << "[state]\nkind = samples_file\nfile = psi.dat\n[potential]\nkind = tabulated\nfile = v.dat\n";
  const RunConfig c = load_config((dir / "run.cfg").string());
  const PiecewiseState s = make_state(c);
  CHECK(std::abs(s(0.5) - std::sin(pi * 0.75)) < 1e-5);
  const Potential p = make_potential(c);
  CHECK(p(0.5) == doctest::Approx(0.5));
  fs::remove_all(dir);
}

TEST_CASE("CSV, atomic write and output directory override") {
  CsvTable t;
  t.comments = {"demo"};
  t.columns = {"a", "b"};
  t.rows = {{0.1, 2.0}};
  CHECK(t.str() == "# demo\na,b\n0.10000000000000001,2\n");

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "discoflux_io_test" / "nested";
  write_file_atomic((dir / "x.csv").string(), t.str());
  std::ifstream in(dir / "x.csv");
  std::string first;
  std::getline(in, first);
  CHECK(first == "# demo");
  write_meta_sidecar((dir / "x.csv").string(), {"prog", "arg"});
  CHECK(fs::exists(dir / "x.csv.meta.json"));
  fs::remove_all(dir.parent_path());

  const std::string svg = svg_line_plot("t", "x", {1.0, 2.0, 3.0}, {{"y", {1.0, 4.0, 9.0}}});
  CHECK(svg.find("<polyline") != std::string::npos);

  ::setenv("DISCOFLUX_OUT", "/tmp/elsewhere", 1);
  CHECK(output_dir("out") == "/tmp/elsewhere");
  ::unsetenv("DISCOFLUX_OUT");
  CHECK(output_dir("out") == "out");
}
