#pragma once

#include <utility>

#include <Eigen/Core>

#include "geopic/feec.hpp"
#include "geopic/hamsplit.hpp"

namespace geopic {

/// Leapfrog state of the Boris-Yee scheme after step n: positions and
/// electric coefficients at t^{n+1/2}, velocities and b at t^n.
struct StaggeredState {
  ParticleSet particles;  // x at t^{n+1/2}, v1 and v2 at t^n
  Eigen::VectorXd d_half;
  Eigen::VectorXd e_half;
  Eigen::VectorXd b;
  /// Electric coefficients one half step earlier, for the staggered energy.
  Eigen::VectorXd d_prev_half;
  Eigen::VectorXd e_prev_half;
  /// t^n.
  double time = 0.0;
};

/// Exact rotation of (v1, v2) by the tan-half-angle parameter
/// alpha = (q/m)(dt/2) B.
inline std::pair<double, double> boris_rotate(double alpha, double v1, double v2) {
  const double inv = 1.0 / (1.0 + alpha * alpha);
  const double c = (1.0 - alpha * alpha) * inv;
  const double s = 2.0 * alpha * inv;
  return {c * v1 + s * v2, -s * v1 + c * v2};
}

/// Half step from t = 0 with b^0 and v^0 standing in for quarter-step values.
StaggeredState boris_init(const SimState& state, double dt, const DeRhamComplex1d& complex);

/// One Boris-Yee step t^{n} -> t^{n+1}, in place.
void boris_step(StaggeredState& state, double dt, const DeRhamComplex1d& complex);

}  // namespace geopic
