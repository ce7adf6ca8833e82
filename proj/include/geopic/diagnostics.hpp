#pragma once

#include <span>
#include <utility>

#include <Eigen/Core>

#include "geopic/borisyee.hpp"
#include "geopic/feec.hpp"
#include "geopic/hamsplit.hpp"

namespace geopic {

/// One row of the diagnostics time series.
struct DiagnosticsRecord {
  double time = 0.0;
  double kinetic_energy = 0.0;
  double e1_energy = 0.0;
  double e2_energy = 0.0;
  double b_energy = 0.0;
  double total_energy = 0.0;
  /// H + dt * H1 (first-order modified energy of the Lie map); equals
  /// total_energy when not requested.
  double modified_energy = 0.0;
  double total_error = 0.0;
  double modified_error = 0.0;
  double gauss_residual = 0.0;
  double momentum_p1 = 0.0;
  double momentum_p2 = 0.0;
  double momentum_ref_p1 = 0.0;
  double momentum_ref_p2 = 0.0;
};

/// Energies of a state. With include_modified, also the first-order
/// correction from backward error analysis of the Lie map that applies HDE,
/// HB, Hp1, Hp2 in this order:
///   H1 = -1/2 [ e^T G^T M1 b + sum q w v1 B(x) v2
///               - sum q w v1 D(x) - sum q w v2 E(x) ].
DiagnosticsRecord energy_report(const SimState& state, const DeRhamComplex1d& complex, double dt,
                                bool include_modified);

/// Energies of a Boris-Yee state at t^n, with the staggered products
/// d^{n-1/2} M1 d^{n+1/2} and e^{n-1/2} M0 e^{n+1/2}.
DiagnosticsRecord energy_report(const StaggeredState& state, const DeRhamComplex1d& complex);

/// The first-order correction H1 alone.
double modified_energy_correction(const SimState& state, const DeRhamComplex1d& complex);

/// max_j |d_j - d_poisson,j| with d_poisson solved from the current charge.
/// Gauss' law leaves the constant mode of d free (its mean follows the total
/// current), so d_poisson is shifted to the mean of d before comparing.
double gauss_residual(const ParticleSet& particles, const Eigen::VectorXd& d,
                      const DeRhamComplex1d& complex);

/// (P1, P2) = (sum m w v1 + int E_h B_h, sum m w v2 - int D_h B_h).
std::pair<double, double> momentum_report(const ParticleSet& particles, const FieldCoeffs& fields,
                                          const DeRhamComplex1d& complex);

/// Time-integrated momentum balance dP1/dt = -int D_h, dP2/dt = -int E_h,
/// advanced with the trapezoidal rule.
struct MomentumReference {
  double p1 = 0.0;
  double p2 = 0.0;

  void update(const Eigen::VectorXd& d_prev, const Eigen::VectorXd& e_prev,
              const Eigen::VectorXd& d_now, const Eigen::VectorXd& e_now, double dt,
              const DeRhamComplex1d& complex);
};

enum class RateConvention { amplitude, energy };
enum class FitMode { samples, local_maxima };

/// Least-squares slope of ln(values) against time over [t_a, t_b]; halved for
/// energies (energy ~ exp(2 gamma t)). local_maxima restricts the fit to
/// samples larger than both neighbours.
double fit_growth_rate(std::span<const double> times, std::span<const double> values, double t_a,
                       double t_b, RateConvention convention, FitMode mode = FitMode::samples);

}  // namespace geopic
