#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geopic/config.hpp"
#include "geopic/simulation.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Overrides {
  std::string config_path;
  std::string case_name;
  std::string propagator;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<int> steps;
  std::optional<int> cells;
  std::optional<int> particles;
  std::optional<int> degree;
  std::optional<int> stride;
  std::optional<int> seed_skip;
  std::optional<bool> antithetic;
  std::string out;
  std::vector<double> fit_window;
  std::string fit_field;
  std::string fit_mode;
};

geopic::SimConfig build_config(const Overrides& o) {
  using geopic::ConfigError;
  geopic::SimConfig c;
  if (!o.config_path.empty()) {
    c = geopic::load_config(o.config_path);
  } else {
    const auto id = geopic::parse_case_id(o.case_name.empty() ? "weibel" : o.case_name);
    if (!id) {
      throw ConfigError("unknown case '" + o.case_name + "'");
    }
    c = geopic::SimConfig::preset(*id);
  }
  if (!o.propagator.empty()) {
    const auto kind = geopic::parse_propagator(o.propagator);
    if (!kind) {
      throw ConfigError("unknown propagator '" + o.propagator + "'");
    }
    c.propagator.kind = *kind;
  }
  if (o.dt) c.dt = *o.dt;
  if (o.t_end) c.t_end = *o.t_end;
  if (o.steps) {
    if (*o.steps < 0) {
      throw ConfigError("--steps must be nonnegative");
    }
    c.t_end = *o.steps * c.dt;
  }
  if (o.cells) c.n_cells = *o.cells;
  if (o.particles) c.n_particles = *o.particles;
  if (o.degree) c.degree = *o.degree;
  if (o.stride) c.diagnostic_stride = *o.stride;
  if (o.seed_skip) c.sobol_skip = *o.seed_skip;
  if (o.antithetic) c.antithetic = *o.antithetic;
  if (!o.out.empty()) c.output_path = o.out;
  if (!o.fit_window.empty()) {
    c.fit_window = std::pair{o.fit_window[0], o.fit_window[1]};
  }
  if (!o.fit_field.empty()) {
    const auto f = geopic::parse_fit_field(o.fit_field);
    if (!f) {
      throw ConfigError("unknown fit field '" + o.fit_field + "'");
    }
    c.fit_field = *f;
  }
  if (!o.fit_mode.empty()) {
    const auto m = geopic::parse_fit_mode(o.fit_mode);
    if (!m) {
      throw ConfigError("unknown fit mode '" + o.fit_mode + "'");
    }
    c.fit_mode = *m;
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric particle-in-cell solver for the 1d2v Vlasov-Maxwell system"};
  Overrides o;
  auto* config_opt = app.add_option("--config", o.config_path, "TOML configuration file");
  app.add_option("--case", o.case_name, "built-in preset: weibel, streaming_weibel, landau")
      ->excludes(config_opt);
  app.add_option("--propagator", o.propagator,
                 "lie, strang, order2_4lie, order4_3strang, order4_10lie or boris");
  app.add_option("--dt", o.dt, "time step");
  app.add_option("--t-end", o.t_end, "final time");
  app.add_option("--steps", o.steps, "number of steps (sets t_end = steps * dt)");
  app.add_option("--cells", o.cells, "number of grid cells");
  app.add_option("--particles", o.particles, "number of particles");
  app.add_option("--degree", o.degree, "spline degree p of V0");
  app.add_option("--stride", o.stride, "write diagnostics every N steps");
  app.add_option("--seed-skip", o.seed_skip, "initial Sobol points to skip");
  app.add_option("--antithetic", o.antithetic, "mirror every sampled particle (true/false)");
  app.add_option("--out", o.out, "CSV output path");
  app.add_option("--fit-window", o.fit_window, "growth fit window A B")->expected(2);
  app.add_option("--fit-field", o.fit_field, "energy to fit: e1, e2 or b");
  app.add_option("--fit-mode", o.fit_mode, "fit all samples or local peaks: samples, peaks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  geopic::SimConfig config;
  try {
    config = build_config(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    std::ofstream csv(config.output_path);
    if (!csv) {
      throw std::runtime_error("cannot open '" + config.output_path + "' for writing");
    }
    geopic::write_csv_header(csv);
    const auto records = geopic::run_simulation(
        config, [&](const geopic::DiagnosticsRecord& r) { geopic::write_csv_row(csv, r); });
    csv.close();
    if (!csv) {
      throw std::runtime_error("failed writing '" + config.output_path + "'");
    }

    double max_energy_error = 0.0;
    double max_gauss = 0.0;
    for (const auto& r : records) {
      max_energy_error = std::max(max_energy_error, std::abs(r.total_error));
      max_gauss = std::max(max_gauss, r.gauss_residual);
    }
    std::printf("case               %s\n", std::string(geopic::to_string(config.init.id)).c_str());
    std::printf("propagator         %s\n",
                std::string(geopic::to_string(config.propagator.kind)).c_str());
    std::printf("steps              %d\n", config.n_steps());
    std::printf("records            %zu -> %s\n", records.size(), config.output_path.c_str());
    std::printf("max energy error   %.6e\n", max_energy_error);
    std::printf("max gauss residual %.6e\n", max_gauss);
    if (config.fit_window) {
      const auto [a, b] = *config.fit_window;
      const bool covered = !records.empty() && records.back().time >= b;
      if (covered) {
        std::printf("fitted rate        %.6f  (%s energy, t in [%g, %g])\n",
                    geopic::fitted_growth_rate(config, records),
                    std::string(geopic::to_string(config.fit_field)).c_str(), a, b);
      } else {
        std::printf("fitted rate        n/a (run ends before t = %g)\n", b);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
