#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "geopic/config.hpp"
#include "geopic/simulation.hpp"

using geopic::CaseId;
using geopic::ConfigError;
using geopic::SimConfig;

TEST_CASE("presets round-trip through TOML") {
  for (auto id : {CaseId::weibel, CaseId::streaming_weibel, CaseId::landau}) {
    const SimConfig c = SimConfig::preset(id);
    const std::string text = geopic::serialize_config(c);
    CHECK(geopic::parse_config(text) == c);
    CHECK(geopic::serialize_config(geopic::parse_config(text)) == text);
  }
}

TEST_CASE("an edited configuration round-trips exactly") {
  SimConfig c = SimConfig::preset(CaseId::streaming_weibel);
  c.propagator.kind = geopic::PropagatorKind::order4_10lie;
  c.propagator.alpha = 0.2;
  c.dt = 0.1 / 3.0;
  c.t_end = 12.345678901234567;
  c.init.beta = -1.0 / 7.0;
  c.n_particles = 1234;
  c.antithetic = true;
  c.diagnostic_stride = 7;
  c.sobol_skip = 0;
  c.output_path = "out/run 1.csv";
  c.fit_window.reset();
  c.fit_mode = geopic::FitMode::local_maxima;
  CHECK(geopic::parse_config(geopic::serialize_config(c)) == c);

  const auto path = std::filesystem::temp_directory_path() / "geopic_roundtrip.toml";
  std::ofstream(path) << geopic::serialize_config(c);
  CHECK(geopic::load_config(path.string()) == c);
  std::filesystem::remove(path);
}

TEST_CASE("missing keys keep the preset of the named case") {
  const SimConfig c = geopic::parse_config(R"(
# only override a few things
[case]
name = "landau"

[time]
propagator = "lie"
dt = 0.025

[particles]
count = 2_000
)");
  SimConfig expected = SimConfig::preset(CaseId::landau);
  expected.propagator.kind = geopic::PropagatorKind::lie;
  expected.dt = 0.025;
  expected.n_particles = 2000;
  CHECK(c == expected);
  CHECK(geopic::parse_config("") == SimConfig::preset(CaseId::weibel));
}

TEST_CASE("malformed configurations are rejected") {
  CHECK_THROWS_AS(geopic::parse_config("[case]\nname = \"plasma\"\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("[grid]\ncells = 16\nfoo = 1\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("[gird]\ncells = 16\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("[grid]\ncells = \"many\"\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("[grid]\ncells = 16.5\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("[time]\ndt = -0.1\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("[time]\ndt 0.1\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("cells = 3\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("[grid]\ndegree = 1\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("[particles]\ncount = 11\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("[output]\nfit_window = [1.0]\n"), ConfigError);
  CHECK_THROWS_AS(geopic::parse_config("[grid]\ncells = 8\n[grid]\ndegree = 3\n"), ConfigError);
  CHECK_THROWS_AS(geopic::load_config("/nonexistent/geopic.toml"), ConfigError);
}

TEST_CASE("CSV rows survive a write and read at full precision") {
  geopic::DiagnosticsRecord r;
  r.time = 0.1 + 0.2;
  r.kinetic_energy = 1.0 / 3.0;
  r.e1_energy = 1e-300;
  r.e2_energy = 2.5e-17;
  r.b_energy = 12345.678;
  r.total_energy = 7.0 / 11.0;
  r.total_error = -3e-9;
  r.modified_error = 4e-12;
  r.modified_energy = r.total_energy + 7e-12;
  r.gauss_residual = 1e-15;
  r.momentum_p1 = -0.125;
  r.momentum_p2 = 1.0 / 9.0;
  r.momentum_ref_p1 = -0.25;
  r.momentum_ref_p2 = 2.0 / 9.0;
  std::stringstream io;
  geopic::write_csv(io, {r, r});
  std::string header;
  std::getline(io, header);
  CHECK(header == "time,kinetic,e1_energy,e2_energy,b_energy,total,total_err,modified_err,"
                  "gauss_residual,p1,p2,p1_ref,p2_ref");
  io.seekg(0);
  const auto back = geopic::read_csv(io);
  REQUIRE(back.size() == 2);
  CHECK(back[1].time == r.time);
  CHECK(back[1].kinetic_energy == r.kinetic_energy);
  CHECK(back[1].e1_energy == r.e1_energy);
  CHECK(back[1].total_error == r.total_error);
  CHECK(back[1].momentum_ref_p2 == r.momentum_ref_p2);
  std::stringstream bad("time,kinetic\n1,2\n");
  CHECK_THROWS(geopic::read_csv(bad));
}

TEST_CASE("run_simulation emits one record per stride") {
  SimConfig c = SimConfig::preset(CaseId::weibel);
  c.n_particles = 1000;
  c.n_cells = 16;
  c.t_end = 0.0;
  CHECK(geopic::run_simulation(c).size() == 1);
  c.t_end = 1.0;
  c.diagnostic_stride = 5;
  int seen = 0;
  const auto records = geopic::run_simulation(c, [&](const geopic::DiagnosticsRecord&) { ++seen; });
  CHECK(records.size() == 5);
  CHECK(seen == 5);
  CHECK(records.back().time == doctest::Approx(1.0));
  CHECK(records.front().total_error == 0.0);
  c.propagator.kind = geopic::PropagatorKind::boris;
  const auto boris = geopic::run_simulation(c);
  CHECK(boris.size() == 5);
  CHECK(boris.back().gauss_residual > 1e-12);
  c.dt = 0.0;
  CHECK_THROWS_AS(geopic::run_simulation(c), std::invalid_argument);
}

#ifdef GEOPIC_CLI_PATH
namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(GEOPIC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("command line: zero steps, exit codes and config files") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto csv = (dir / "geopic_cli_zero.csv").string();
  REQUIRE(run("--case weibel --steps 0 --out " + csv) == 0);
  std::ifstream in(csv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2);

  CHECK(run("--case nonsense") == 1);
  CHECK(run("--case weibel --dt -1") == 1);
  CHECK(run("--case weibel --bogus-flag") == 1);
  CHECK(run("--config /nonexistent/file.toml") == 1);
  CHECK(run("--case weibel --steps 0 --out /nonexistent/dir/out.csv") == 2);

  const auto toml = dir / "geopic_cli.toml";
  SimConfig c = SimConfig::preset(CaseId::landau);
  c.n_particles = 500;
  c.t_end = 0.5;
  c.output_path = (dir / "geopic_cli_landau.csv").string();
  std::ofstream(toml) << geopic::serialize_config(c);
  REQUIRE(run("--config " + toml.string()) == 0);
  std::ifstream landau(c.output_path);
  const auto rows = geopic::read_csv(landau);
  CHECK(rows.size() == 11);
  std::filesystem::remove(toml);
  std::filesystem::remove(csv);
  std::filesystem::remove(c.output_path);
}
#endif
