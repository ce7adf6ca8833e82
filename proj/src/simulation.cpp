#include "geopic/simulation.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "geopic/borisyee.hpp"
#include "geopic/feec.hpp"

namespace geopic {

std::string_view to_string(FitField field) {
  switch (field) {
    case FitField::e1:
      return "e1";
    case FitField::e2:
      return "e2";
    case FitField::b:
      return "b";
  }
  return "unknown";
}

std::optional<FitField> parse_fit_field(std::string_view name) {
  if (name == "e1") return FitField::e1;
  if (name == "e2") return FitField::e2;
  if (name == "b") return FitField::b;
  return std::nullopt;
}

std::string_view to_string(FitMode mode) {
  return mode == FitMode::samples ? "samples" : "peaks";
}

std::optional<FitMode> parse_fit_mode(std::string_view name) {
  if (name == "samples") return FitMode::samples;
  if (name == "peaks") return FitMode::local_maxima;
  return std::nullopt;
}

SimConfig SimConfig::preset(CaseId id) {
  SimConfig c;
  c.init = InitialCase::preset(id);
  switch (id) {
    case CaseId::weibel:
      c.n_cells = 32;
      c.n_particles = 100000;
      c.dt = 0.05;
      c.t_end = 500.0;
      c.fit_field = FitField::b;
      c.fit_window = {{kWeibelFitWindow[0], kWeibelFitWindow[1]}};
      break;
    case CaseId::streaming_weibel:
      c.n_cells = 128;
      c.n_particles = 200000;
      c.dt = 0.01;
      c.t_end = 150.0;
      c.fit_field = FitField::e2;
      c.fit_window = {{kStreamingFitWindow[0], kStreamingFitWindow[1]}};
      break;
    case CaseId::landau:
      c.n_cells = 32;
      c.n_particles = 100000;
      c.dt = 0.05;
      c.t_end = 50.0;
      c.fit_field = FitField::e1;
      c.fit_mode = FitMode::local_maxima;
      c.fit_window = {{kLandauDampingWindow[0], kLandauDampingWindow[1]}};
      break;
  }
  return c;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end must be nonnegative");
  if (n_particles < 1) fail("need at least one particle");
  if (degree < 2) fail("spline degree must be at least 2");
  if (degree > kMaxSplineDegree) fail("spline degree too large");
  if (n_cells <= degree) fail("n_cells must exceed the spline degree");
  if (diagnostic_stride < 1) fail("diagnostic stride must be positive");
  if (sobol_skip < 0) fail("sobol skip must be nonnegative");
  if (antithetic && n_particles % 2 != 0) fail("antithetic sampling needs an even particle count");
  if (!(init.k > 0.0)) fail("wave number must be positive");
  if (fit_window && !(fit_window->second > fit_window->first)) fail("empty fit window");
}

int SimConfig::n_steps() const { return static_cast<int>(std::llround(t_end / dt)); }

namespace {

void finish_record(DiagnosticsRecord& r, const DiagnosticsRecord& first, double residual,
                   std::pair<double, double> momentum, const MomentumReference& ref) {
  r.total_error = r.total_energy - first.total_energy;
  r.modified_error = r.modified_energy - first.modified_energy;
  r.gauss_residual = residual;
  r.momentum_p1 = momentum.first;
  r.momentum_p2 = momentum.second;
  r.momentum_ref_p1 = ref.p1;
  r.momentum_ref_p2 = ref.p2;
}

}  // namespace

std::vector<DiagnosticsRecord> run_simulation(const SimConfig& config,
                                              const RecordObserver& observer) {
  config.validate();
  const DeRhamComplex1d complex(config.degree, config.n_cells, config.init.domain_length());
  auto [particles, fields] = sample_initial(config.init, config.n_particles, config.antithetic,
                                            complex, config.sobol_skip);
  SimState state{std::move(particles), std::move(fields), 0.0};

  const bool lie = config.propagator.kind == PropagatorKind::lie;
  const int steps = config.n_steps();
  const double dt = config.dt;
  std::vector<DiagnosticsRecord> records;
  records.reserve(static_cast<std::size_t>(steps / config.diagnostic_stride + 1));

  auto emit = [&](DiagnosticsRecord r) {
    records.push_back(r);
    if (observer) {
      observer(records.back());
    }
  };

  // Initial record, shared by both schemes.
  DiagnosticsRecord first = energy_report(state, complex, dt, lie);
  MomentumReference ref;
  {
    const auto mom = momentum_report(state.particles, state.fields, complex);
    ref.p1 = mom.first;
    ref.p2 = mom.second;
    DiagnosticsRecord r = first;
    finish_record(r, first, gauss_residual(state.particles, state.fields.d, complex), mom, ref);
    emit(r);
  }

  if (config.propagator.is_splitting()) {
    const auto stages = composition_stages(config.propagator, dt);
    Eigen::VectorXd d_prev = state.fields.d;
    Eigen::VectorXd e_prev = state.fields.e;
    for (int step = 1; step <= steps; ++step) {
      for (const auto& stage : stages) {
        flow(stage.sub, state, stage.dt, complex);
      }
      state.time = step * dt;
      ref.update(d_prev, e_prev, state.fields.d, state.fields.e, dt, complex);
      d_prev = state.fields.d;
      e_prev = state.fields.e;
      if (step % config.diagnostic_stride == 0) {
        DiagnosticsRecord r = energy_report(state, complex, dt, lie);
        finish_record(r, first, gauss_residual(state.particles, state.fields.d, complex),
                      momentum_report(state.particles, state.fields, complex), ref);
        emit(r);
      }
    }
  } else {
    StaggeredState stag = boris_init(state, dt, complex);
    for (int step = 1; step <= steps; ++step) {
      const Eigen::VectorXd d_prev = stag.d_half;
      const Eigen::VectorXd e_prev = stag.e_half;
      boris_step(stag, dt, complex);
      stag.time = step * dt;
      ref.update(d_prev, e_prev, stag.d_half, stag.e_half, dt, complex);
      if (step % config.diagnostic_stride == 0) {
        DiagnosticsRecord r = energy_report(stag, complex);
        const FieldCoeffs half_fields{stag.d_half, stag.e_half, stag.b};
        finish_record(r, first, gauss_residual(stag.particles, stag.d_half, complex),
                      momentum_report(stag.particles, half_fields, complex), ref);
        emit(r);
      }
    }
  }
  return records;
}

std::vector<double> field_energy_series(const std::vector<DiagnosticsRecord>& records,
                                        FitField field) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    switch (field) {
      case FitField::e1:
        out.push_back(r.e1_energy);
        break;
      case FitField::e2:
        out.push_back(r.e2_energy);
        break;
      case FitField::b:
        out.push_back(r.b_energy);
        break;
    }
  }
  return out;
}

double fitted_growth_rate(const SimConfig& config, const std::vector<DiagnosticsRecord>& records) {
  if (!config.fit_window) {
    throw std::invalid_argument("fitted_growth_rate: no fit window configured");
  }
  std::vector<double> times;
  times.reserve(records.size());
  for (const auto& r : records) {
    times.push_back(r.time);
  }
  const auto values = field_energy_series(records, config.fit_field);
  return fit_growth_rate(times, values, config.fit_window->first, config.fit_window->second,
                         RateConvention::energy, config.fit_mode);
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const DiagnosticsRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                r.time, r.kinetic_energy, r.e1_energy, r.e2_energy, r.b_energy, r.total_energy,
                r.total_error, r.modified_error, r.gauss_residual, r.momentum_p1, r.momentum_p2,
                r.momentum_ref_p1, r.momentum_ref_p2);
  out << buf;
}

void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  write_csv_header(out);
  for (const auto& r : records) {
    write_csv_row(out, r);
  }
}

std::vector<DiagnosticsRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("read_csv: missing or unexpected header");
  }
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream row(line);
    std::array<double, 13> v{};
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::string cell;
      if (!std::getline(row, cell, ',')) {
        throw std::runtime_error("read_csv: short row");
      }
      v[i] = std::stod(cell);
    }
    DiagnosticsRecord r;
    r.time = v[0];
    r.kinetic_energy = v[1];
    r.e1_energy = v[2];
    r.e2_energy = v[3];
    r.b_energy = v[4];
    r.total_energy = v[5];
    r.total_error = v[6];
    r.modified_error = v[7];
    r.gauss_residual = v[8];
    r.momentum_p1 = v[9];
    r.momentum_p2 = v[10];
    r.momentum_ref_p1 = v[11];
    r.momentum_ref_p2 = v[12];
    r.modified_energy = r.total_energy + (r.modified_error - r.total_error);
    out.push_back(r);
  }
  return out;
}

}  // namespace geopic
