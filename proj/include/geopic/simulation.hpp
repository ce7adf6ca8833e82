#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geopic/diagnostics.hpp"
#include "geopic/hamsplit.hpp"
#include "geopic/particles.hpp"

namespace geopic {

enum class FitField { e1, e2, b };

std::string_view to_string(FitField field);
std::optional<FitField> parse_fit_field(std::string_view name);
std::string_view to_string(FitMode mode);
std::optional<FitMode> parse_fit_mode(std::string_view name);

/// Fit windows of the presets: the linear phase of each instability, and for
/// Landau damping the initial decay and the later regrowth of the E1 energy.
inline constexpr std::array<double, 2> kWeibelFitWindow{80.0, 200.0};
inline constexpr std::array<double, 2> kStreamingFitWindow{20.0, 50.0};
inline constexpr std::array<double, 2> kLandauDampingWindow{0.0, 12.0};
inline constexpr std::array<double, 2> kLandauGrowthWindow{20.0, 40.0};

struct SimConfig {
  InitialCase init = InitialCase::weibel();
  PropagatorId propagator;
  int degree = 3;
  int n_cells = 32;
  int n_particles = 100000;
  double dt = 0.05;
  double t_end = 500.0;
  int diagnostic_stride = 1;
  bool antithetic = true;
  int sobol_skip = 1;
  std::string output_path = "diagnostics.csv";
  std::optional<std::pair<double, double>> fit_window;
  FitField fit_field = FitField::b;
  FitMode fit_mode = FitMode::samples;

  /// Defaults of the three benchmark problems.
  static SimConfig preset(CaseId id);

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  int n_steps() const;

  bool operator==(const SimConfig&) const = default;
};

/// Called with every record as it is produced.
using RecordObserver = std::function<void(const DiagnosticsRecord&)>;

/// Samples the initial state, steps to t_end, and returns one record per
/// diagnostic stride (the initial state included).
std::vector<DiagnosticsRecord> run_simulation(const SimConfig& config,
                                              const RecordObserver& observer = {});

/// Energy series selected by a FitField.
std::vector<double> field_energy_series(const std::vector<DiagnosticsRecord>& records,
                                        FitField field);

/// Growth rate of the configured field energy over the configured window.
double fitted_growth_rate(const SimConfig& config, const std::vector<DiagnosticsRecord>& records);

inline constexpr std::string_view kCsvHeader =
    "time,kinetic,e1_energy,e2_energy,b_energy,total,total_err,modified_err,gauss_residual,p1,p2,"
    "p1_ref,p2_ref";

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const DiagnosticsRecord& r);
void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_csv(std::istream& in);

}  // namespace geopic
