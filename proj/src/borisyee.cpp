#include "geopic/borisyee.hpp"

#include <array>

#include "kernels.hpp"

namespace geopic {
namespace {

// j1 (into V1) and j2 (into V0) from particles moving x_old -> x_new with the
// given velocities, basis functions taken at the unwrapped midpoint.
void accumulate_midpoint_currents(const ParticleSet& pt, const Eigen::VectorXd& x_old,
                                  const Eigen::VectorXd& x_new_unwrapped,
                                  const DeRhamComplex1d& cx, Eigen::VectorXd& j1,
                                  Eigen::VectorXd& j2) {
  const int n = cx.n_cells();
  const double inv_dx = 1.0 / cx.cell_width();
  const double qw = pt.charge_weight();
  j1 = Eigen::VectorXd::Zero(n);
  j2 = Eigen::VectorXd::Zero(n);
  detail::dispatch_degree(cx.degree(), [&](auto deg) {
    constexpr int P = decltype(deg)::value;
    const int p = detail::resolve_degree<P>(cx.degree());
    std::array<double, kMaxSplineDegree + 1> lo{};
    std::array<double, kMaxSplineDegree + 1> hi{};
    for (Eigen::Index a = 0; a < pt.size(); ++a) {
      const double mid = cx.v0().wrap(0.5 * (x_old(a) + x_new_unwrapped(a)));
      const auto loc = detail::locate_inside(mid, inv_dx, n);
      detail::basis_pair<P>(p, loc.t, lo.data(), hi.data());
      const int first0 = cx.v0().index(loc.cell - p);
      const int first1 = first0 + 1 == n ? 0 : first0 + 1;
      detail::add_wrapped(j1, first1, p, lo.data(), qw * pt.v1(a), n);
      detail::add_wrapped(j2, first0, p + 1, hi.data(), qw * pt.v2(a), n);
    }
  });
}

// Drift by dt*v1, deposit currents, and update d and e:
//   M1 d' = M1 d - dt j1,   M0 e' = M0 e + dt G^T M1 b - dt j2.
void drift_and_update_fields(ParticleSet& pt, Eigen::VectorXd& d, Eigen::VectorXd& e,
                             const Eigen::VectorXd& b, double dt, const DeRhamComplex1d& cx) {
  const Eigen::VectorXd x_old = pt.x;
  const Eigen::VectorXd x_new = x_old + dt * pt.v1;
  Eigen::VectorXd j1;
  Eigen::VectorXd j2;
  accumulate_midpoint_currents(pt, x_old, x_new, cx, j1, j2);
  for (Eigen::Index a = 0; a < pt.size(); ++a) {
    pt.x(a) = cx.v0().wrap(x_new(a));
  }
  d -= dt * cx.solve_mass(MassId::m1, j1);
  const Eigen::VectorXd rhs = cx.deriv().transpose() * (cx.m1() * b) - j2;
  e += dt * cx.solve_mass(MassId::m0, rhs);
}

}  // namespace

StaggeredState boris_init(const SimState& state, double dt, const DeRhamComplex1d& complex) {
  StaggeredState out;
  out.particles = state.particles;
  out.d_half = state.fields.d;
  out.e_half = state.fields.e;
  out.b = state.fields.b;
  out.d_prev_half = state.fields.d;
  out.e_prev_half = state.fields.e;
  out.time = state.time;
  drift_and_update_fields(out.particles, out.d_half, out.e_half, out.b, 0.5 * dt, complex);
  return out;
}

void boris_step(StaggeredState& s, double dt, const DeRhamComplex1d& cx) {
  auto& pt = s.particles;
  const int p = cx.degree();
  const int n = cx.n_cells();

  // 1. b^{n} and the time-centred b^{n-1/2}.
  const Eigen::VectorXd b_old = s.b;
  s.b -= dt * (cx.deriv() * s.e_half);
  const Eigen::VectorXd b_mid = 0.5 * (b_old + s.b);

  // 2. Velocity: half kick, rotation, half kick, fields at x^{n-1/2}.
  const double half = 0.5 * dt * pt.charge_over_mass();
  const double inv_dx = 1.0 / cx.cell_width();
  detail::dispatch_degree(p, [&](auto deg) {
    constexpr int P = decltype(deg)::value;
    std::array<double, kMaxSplineDegree + 1> lo{};
    std::array<double, kMaxSplineDegree + 1> hi{};
    for (Eigen::Index a = 0; a < pt.size(); ++a) {
      const auto loc = detail::locate_inside(pt.x(a), inv_dx, n);
      detail::basis_pair<P>(p, loc.t, lo.data(), hi.data());
      const int first0 = cx.v0().index(loc.cell - p);
      const int first1 = first0 + 1 == n ? 0 : first0 + 1;
      const double e1 = detail::dot_wrapped(s.d_half, first1, p, lo.data(), n);
      const double bz = detail::dot_wrapped(b_mid, first1, p, lo.data(), n);
      const double e2 = detail::dot_wrapped(s.e_half, first0, p + 1, hi.data(), n);
      const double vm1 = pt.v1(a) + half * e1;
      const double vm2 = pt.v2(a) + half * e2;
      const auto [vp1, vp2] = boris_rotate(half * bz, vm1, vm2);
      pt.v1(a) = vp1 + half * e1;
      pt.v2(a) = vp2 + half * e2;
    }
  });

  // 3-4. Drift to x^{n+1/2}, currents at the midpoint, d and e to t^{n+1/2}.
  s.d_prev_half = s.d_half;
  s.e_prev_half = s.e_half;
  drift_and_update_fields(pt, s.d_half, s.e_half, s.b, dt, cx);
  s.time += dt;
}

}  // namespace geopic
