#include "geopic/hamsplit.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "kernels.hpp"

namespace geopic {
namespace {

void flow_hde(SimState& s, double dt, const DeRhamComplex1d& cx) {
  auto& pt = s.particles;
  const auto& f = s.fields;
  const int n = cx.n_cells();
  const double inv_dx = 1.0 / cx.cell_width();
  const double kick = dt * pt.charge_over_mass();
  detail::dispatch_degree(cx.degree(), [&](auto deg) {
    constexpr int P = decltype(deg)::value;
    const int p = detail::resolve_degree<P>(cx.degree());
    std::array<double, kMaxSplineDegree + 1> lo{};
    std::array<double, kMaxSplineDegree + 1> hi{};
    for (Eigen::Index a = 0; a < pt.size(); ++a) {
      const auto loc = detail::locate_inside(pt.x(a), inv_dx, n);
      detail::basis_pair<P>(p, loc.t, lo.data(), hi.data());
      const int first0 = cx.v0().index(loc.cell - p);
      const int first1 = first0 + 1 == n ? 0 : first0 + 1;
      pt.v1(a) += kick * detail::dot_wrapped(f.d, first1, p, lo.data(), n);
      pt.v2(a) += kick * detail::dot_wrapped(f.e, first0, p + 1, hi.data(), n);
    }
  });
  s.fields.b -= dt * (cx.deriv() * f.e);
}

void flow_hb(SimState& s, double dt, const DeRhamComplex1d& cx) {
  const Eigen::VectorXd rhs = cx.deriv().transpose() * (cx.m1() * s.fields.b);
  s.fields.e += dt * cx.solve_mass(MassId::m0, rhs);
}

void flow_hp1(SimState& s, double dt, const DeRhamComplex1d& cx) {
  auto& pt = s.particles;
  const Eigen::VectorXd& b = s.fields.b;
  const auto& v0 = cx.v0();
  const double qm = pt.charge_over_mass();
  Eigen::VectorXd current = Eigen::VectorXd::Zero(cx.dimension());
  // The V1 degree is p - 1.
  detail::dispatch_degree(cx.degree() - 1, [&](auto deg) {
    constexpr int Q = decltype(deg)::value;
    for (Eigen::Index a = 0; a < pt.size(); ++a) {
      const double x0 = pt.x(a);
      const double x1 = x0 + dt * pt.v1(a);
      if (!std::isfinite(x1)) {
        throw std::runtime_error("flow Hp1: particle position is not finite (unstable time step?)");
      }
      double b_integral = 0.0;
      detail::segment_integrals<Q>(cx.v1(), x0, x1, [&](int j, double value) {
        b_integral += b(j) * value;
        current(j) += value;
      });
      pt.v2(a) -= qm * b_integral;
      pt.x(a) = v0.wrap(x1);
    }
  });
  s.fields.d -= cx.solve_mass(MassId::m1, pt.charge_weight() * current);
}

void flow_hp2(SimState& s, double dt, const DeRhamComplex1d& cx) {
  auto& pt = s.particles;
  const Eigen::VectorXd& b = s.fields.b;
  const int n = cx.n_cells();
  const double inv_dx = 1.0 / cx.cell_width();
  const double kick = dt * pt.charge_over_mass();
  Eigen::VectorXd current = Eigen::VectorXd::Zero(cx.dimension());
  detail::dispatch_degree(cx.degree(), [&](auto deg) {
    constexpr int P = decltype(deg)::value;
    const int p = detail::resolve_degree<P>(cx.degree());
    std::array<double, kMaxSplineDegree + 1> lo{};
    std::array<double, kMaxSplineDegree + 1> hi{};
    for (Eigen::Index a = 0; a < pt.size(); ++a) {
      const auto loc = detail::locate_inside(pt.x(a), inv_dx, n);
      detail::basis_pair<P>(p, loc.t, lo.data(), hi.data());
      const int first0 = cx.v0().index(loc.cell - p);
      const int first1 = first0 + 1 == n ? 0 : first0 + 1;
      const double v2 = pt.v2(a);
      pt.v1(a) += kick * detail::dot_wrapped(b, first1, p, lo.data(), n) * v2;
      detail::add_wrapped(current, first0, p + 1, hi.data(), v2, n);
    }
  });
  s.fields.e -= (dt * pt.charge_weight()) * cx.solve_mass(MassId::m0, current);
}

void append(std::vector<Stage>& out, SubHamiltonian sub, double dt) {
  if (!out.empty() && out.back().sub == sub) {
    out.back().dt += dt;
    return;
  }
  out.push_back({sub, dt});
}

void append_lie(std::vector<Stage>& out, double dt) {
  append(out, SubHamiltonian::HDE, dt);
  append(out, SubHamiltonian::HB, dt);
  append(out, SubHamiltonian::Hp1, dt);
  append(out, SubHamiltonian::Hp2, dt);
}

void append_lie_adjoint(std::vector<Stage>& out, double dt) {
  append(out, SubHamiltonian::Hp2, dt);
  append(out, SubHamiltonian::Hp1, dt);
  append(out, SubHamiltonian::HB, dt);
  append(out, SubHamiltonian::HDE, dt);
}

void append_strang(std::vector<Stage>& out, double dt) {
  append_lie(out, 0.5 * dt);
  append_lie_adjoint(out, 0.5 * dt);
}

}  // namespace

std::string_view to_string(PropagatorKind kind) {
  switch (kind) {
    case PropagatorKind::lie:
      return "lie";
    case PropagatorKind::strang:
      return "strang";
    case PropagatorKind::order2_4lie:
      return "order2_4lie";
    case PropagatorKind::order4_3strang:
      return "order4_3strang";
    case PropagatorKind::order4_10lie:
      return "order4_10lie";
    case PropagatorKind::boris:
      return "boris";
  }
  return "unknown";
}

std::optional<PropagatorKind> parse_propagator(std::string_view name) {
  for (auto k : {PropagatorKind::lie, PropagatorKind::strang, PropagatorKind::order2_4lie,
                 PropagatorKind::order4_3strang, PropagatorKind::order4_10lie,
                 PropagatorKind::boris}) {
    if (name == to_string(k)) {
      return k;
    }
  }
  return std::nullopt;
}

void flow(SubHamiltonian sub, SimState& state, double dt, const DeRhamComplex1d& complex) {
  switch (sub) {
    case SubHamiltonian::HDE:
      flow_hde(state, dt, complex);
      return;
    case SubHamiltonian::HB:
      flow_hb(state, dt, complex);
      return;
    case SubHamiltonian::Hp1:
      flow_hp1(state, dt, complex);
      return;
    case SubHamiltonian::Hp2:
      flow_hp2(state, dt, complex);
      return;
  }
  throw std::invalid_argument("flow: unknown sub-Hamiltonian");
}

void lie_map(SimState& state, double dt, const DeRhamComplex1d& complex) {
  flow(SubHamiltonian::HDE, state, dt, complex);
  flow(SubHamiltonian::HB, state, dt, complex);
  flow(SubHamiltonian::Hp1, state, dt, complex);
  flow(SubHamiltonian::Hp2, state, dt, complex);
}

void lie_adjoint_map(SimState& state, double dt, const DeRhamComplex1d& complex) {
  flow(SubHamiltonian::Hp2, state, dt, complex);
  flow(SubHamiltonian::Hp1, state, dt, complex);
  flow(SubHamiltonian::HB, state, dt, complex);
  flow(SubHamiltonian::HDE, state, dt, complex);
}

double CompositionCoefficients::gamma1() { return 1.0 / (2.0 - std::cbrt(2.0)); }
double CompositionCoefficients::gamma2() { return -std::cbrt(2.0) / (2.0 - std::cbrt(2.0)); }

std::array<double, 5> CompositionCoefficients::a() {
  const double r = std::sqrt(19.0);
  return {(146.0 + 5.0 * r) / 540.0, (-2.0 + 10.0 * r) / 135.0, 1.0 / 5.0,
          (-23.0 - 20.0 * r) / 270.0, (14.0 - r) / 108.0};
}

std::array<double, 5> CompositionCoefficients::b() {
  const auto a = CompositionCoefficients::a();
  return {a[4], a[3], a[2], a[1], a[0]};
}

std::vector<Stage> composition_stages(const PropagatorId& prop, double dt) {
  std::vector<Stage> out;
  switch (prop.kind) {
    case PropagatorKind::lie:
      append_lie(out, dt);
      break;
    case PropagatorKind::strang:
      append_strang(out, dt);
      break;
    case PropagatorKind::order2_4lie: {
      const double al = prop.alpha;
      append_lie(out, al * dt);
      append_lie_adjoint(out, (0.5 - al) * dt);
      append_lie(out, (0.5 - al) * dt);
      append_lie_adjoint(out, al * dt);
      break;
    }
    case PropagatorKind::order4_3strang:
      append_strang(out, CompositionCoefficients::gamma1() * dt);
      append_strang(out, CompositionCoefficients::gamma2() * dt);
      append_strang(out, CompositionCoefficients::gamma1() * dt);
      break;
    case PropagatorKind::order4_10lie: {
      const auto a = CompositionCoefficients::a();
      const auto b = CompositionCoefficients::b();
      for (int i = 4; i >= 0; --i) {
        append_lie(out, a[i] * dt);
        append_lie_adjoint(out, b[i] * dt);
      }
      break;
    }
    case PropagatorKind::boris:
      throw std::invalid_argument("composition_stages: boris is not a splitting propagator");
  }
  return out;
}

void compose(const PropagatorId& prop, SimState& state, double dt, const DeRhamComplex1d& complex) {
  for (const auto& stage : composition_stages(prop, dt)) {
    flow(stage.sub, state, stage.dt, complex);
  }
  state.time += dt;
}

}  // namespace geopic
