#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "geopic/feec.hpp"

namespace geopic {

/// Single-species macro-particles with a common weight. Positions are kept
/// in [0, L).
struct ParticleSet {
  Eigen::VectorXd x;
  Eigen::VectorXd v1;
  Eigen::VectorXd v2;
  double weight = 0.0;
  double charge = -1.0;
  double mass = 1.0;

  Eigen::Index size() const { return x.size(); }
  double charge_weight() const { return charge * weight; }
  double charge_over_mass() const { return charge / mass; }

  static ParticleSet with_size(Eigen::Index n, double weight, double charge = -1.0,
                               double mass = 1.0);
};

enum class CaseId { weibel, streaming_weibel, landau };

std::string_view to_string(CaseId id);
std::optional<CaseId> parse_case_id(std::string_view name);

/// Initial distribution and fields of one of the three benchmark problems.
/// Unused parameters are ignored by the case.
struct InitialCase {
  CaseId id = CaseId::weibel;
  double sigma1 = 0.0;  // thermal spread in v1 (sigma for single-sigma cases)
  double sigma2 = 0.0;  // thermal spread in v2
  double k = 1.0;       // wave number; the domain is [0, 2 pi / k)
  double alpha = 0.0;   // density perturbation amplitude
  double beta = 0.0;    // initial B3 amplitude
  double v01 = 0.0;     // streaming: drift of the first v2 beam
  double v02 = 0.0;     // streaming: drift of the second v2 beam
  double delta = 0.0;   // streaming: fraction of the first beam

  static InitialCase weibel();
  static InitialCase streaming_weibel();
  static InitialCase landau();
  static InitialCase preset(CaseId id);

  double domain_length() const;
  /// B3(x, 0).
  double initial_b(double x) const;

  bool operator==(const InitialCase&) const = default;
};

/// Loads particles from the Sobol sequence and sets the initial fields: b by
/// L2 projection, e = 0, d from the Poisson solve.
///
/// Sobol coordinates: 0 -> x (inverse CDF of the density in x), 1 -> v1,
/// 2 -> v2, 3 -> beam selection (streaming case only). With antithetic
/// sampling each draw is followed by its mirror (L - x, 2 mu - v).
std::pair<ParticleSet, FieldCoeffs> sample_initial(const InitialCase& init, int n_particles,
                                                   bool antithetic,
                                                   const DeRhamComplex1d& complex,
                                                   int sobol_skip = 1);

/// V0 load vector of the electron charge plus the uniform neutralizing
/// background; sums to zero.
Eigen::VectorXd deposit_charge(const ParticleSet& particles, const DeRhamComplex1d& complex);

/// sum_a q w int_{x_a}^{x_a + dt v1_a} N_j^{p-1}(s) ds for every V1 index j.
Eigen::VectorXd deposit_current_line_integral(const ParticleSet& particles, double dt,
                                              const DeRhamComplex1d& complex);

/// sum_a y_a N_j(x_a) in the given space (scatter).
Eigen::VectorXd scatter(const SplineSpace<double>& space, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y);

/// Field values at every particle position (gather).
Eigen::VectorXd gather(const SplineSpace<double>& space, const Eigen::VectorXd& coeffs,
                       const Eigen::VectorXd& x);

}  // namespace geopic
