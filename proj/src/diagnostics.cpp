#include "geopic/diagnostics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "geopic/particles.hpp"
#include "kernels.hpp"

namespace geopic {

double modified_energy_correction(const SimState& state, const DeRhamComplex1d& cx) {
  const auto& pt = state.particles;
  const auto& f = state.fields;
  const int n = cx.n_cells();
  const double inv_dx = 1.0 / cx.cell_width();
  const double eb = (cx.deriv() * f.e).dot(cx.m1() * f.b);
  double lorentz = 0.0;
  double work1 = 0.0;
  double work2 = 0.0;
  detail::dispatch_degree(cx.degree(), [&](auto deg) {
    constexpr int P = decltype(deg)::value;
    const int p = detail::resolve_degree<P>(cx.degree());
    std::array<double, kMaxSplineDegree + 1> lo{};
    std::array<double, kMaxSplineDegree + 1> hi{};
    for (Eigen::Index a = 0; a < pt.size(); ++a) {
      const auto loc = detail::locate_inside(cx.v0().wrap(pt.x(a)), inv_dx, n);
      detail::basis_pair<P>(p, loc.t, lo.data(), hi.data());
      const int first0 = cx.v0().index(loc.cell - p);
      const int first1 = first0 + 1 == n ? 0 : first0 + 1;
      const double b = detail::dot_wrapped(f.b, first1, p, lo.data(), n);
      const double d = detail::dot_wrapped(f.d, first1, p, lo.data(), n);
      const double e = detail::dot_wrapped(f.e, first0, p + 1, hi.data(), n);
      lorentz += pt.v1(a) * b * pt.v2(a);
      work1 += pt.v1(a) * d;
      work2 += pt.v2(a) * e;
    }
  });
  // The sub-flows act in the time order HDE, HB, Hp1, Hp2, so the bracket
  // terms enter with the opposite sign of the composition written right to left.
  return -0.5 * (eb + pt.charge_weight() * (lorentz - work1 - work2));
}

DiagnosticsRecord energy_report(const SimState& state, const DeRhamComplex1d& cx, double dt,
                                bool include_modified) {
  const auto& pt = state.particles;
  const auto& f = state.fields;
  DiagnosticsRecord r;
  r.time = state.time;
  const double mw = pt.mass * pt.weight;
  r.kinetic_energy = 0.5 * mw * (pt.v1.squaredNorm() + pt.v2.squaredNorm());
  r.e1_energy = 0.5 * f.d.dot(cx.m1() * f.d);
  r.e2_energy = 0.5 * f.e.dot(cx.m0() * f.e);
  r.b_energy = 0.5 * f.b.dot(cx.m1() * f.b);
  r.total_energy = r.kinetic_energy + r.e1_energy + r.e2_energy + r.b_energy;
  r.modified_energy = r.total_energy;
  if (include_modified) {
    r.modified_energy += dt * modified_energy_correction(state, cx);
  }
  return r;
}

DiagnosticsRecord energy_report(const StaggeredState& state, const DeRhamComplex1d& cx) {
  const auto& pt = state.particles;
  DiagnosticsRecord r;
  r.time = state.time;
  const double mw = pt.mass * pt.weight;
  r.kinetic_energy = 0.5 * mw * (pt.v1.squaredNorm() + pt.v2.squaredNorm());
  r.e1_energy = 0.5 * state.d_prev_half.dot(cx.m1() * state.d_half);
  r.e2_energy = 0.5 * state.e_prev_half.dot(cx.m0() * state.e_half);
  r.b_energy = 0.5 * state.b.dot(cx.m1() * state.b);
  r.total_energy = r.kinetic_energy + r.e1_energy + r.e2_energy + r.b_energy;
  r.modified_energy = r.total_energy;
  return r;
}

double gauss_residual(const ParticleSet& particles, const Eigen::VectorXd& d,
                      const DeRhamComplex1d& cx) {
  Eigen::VectorXd d_poisson = cx.poisson_solve_initial_field(deposit_charge(particles, cx));
  d_poisson.array() += d.mean() - d_poisson.mean();
  return (d - d_poisson).cwiseAbs().maxCoeff();
}

std::pair<double, double> momentum_report(const ParticleSet& particles, const FieldCoeffs& fields,
                                          const DeRhamComplex1d& cx) {
  const double mw = particles.mass * particles.weight;
  const double p1 = mw * particles.v1.sum() + cx.mixed_inner(fields.e, fields.b);
  const double p2 = mw * particles.v2.sum() - fields.d.dot(cx.m1() * fields.b);
  return {p1, p2};
}

void MomentumReference::update(const Eigen::VectorXd& d_prev, const Eigen::VectorXd& e_prev,
                               const Eigen::VectorXd& d_now, const Eigen::VectorXd& e_now,
                               double dt, const DeRhamComplex1d& cx) {
  p1 -= 0.5 * dt * (cx.field_integral(SpaceId::v1, d_prev) + cx.field_integral(SpaceId::v1, d_now));
  p2 -= 0.5 * dt * (cx.field_integral(SpaceId::v0, e_prev) + cx.field_integral(SpaceId::v0, e_now));
}

double fit_growth_rate(std::span<const double> times, std::span<const double> values, double t_a,
                       double t_b, RateConvention convention, FitMode mode) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("fit_growth_rate: times and values differ in length");
  }
  if (!(t_b > t_a)) {
    throw std::invalid_argument("fit_growth_rate: empty window");
  }
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_a || times[i] > t_b) {
      continue;
    }
    if (mode == FitMode::local_maxima) {
      if (i == 0 || i + 1 == times.size()) {
        continue;
      }
      if (!(values[i] > values[i - 1] && values[i] >= values[i + 1])) {
        continue;
      }
    }
    if (!(values[i] > 0.0)) {
      throw std::domain_error("fit_growth_rate: nonpositive value inside the window");
    }
    ts.push_back(times[i]);
    ys.push_back(std::log(values[i]));
  }
  const std::size_t min_samples = mode == FitMode::local_maxima ? 2 : 4;
  if (ts.size() < min_samples) {
    throw std::invalid_argument("fit_growth_rate: too few samples in the window");
  }
  const Eigen::Map<const Eigen::VectorXd> t(ts.data(), static_cast<Eigen::Index>(ts.size()));
  const Eigen::Map<const Eigen::VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
  const Eigen::VectorXd tc = t.array() - t.mean();
  const double slope = tc.dot(y.array().matrix() - Eigen::VectorXd::Constant(y.size(), y.mean())) /
                       tc.squaredNorm();
  return convention == RateConvention::energy ? 0.5 * slope : slope;
}

}  // namespace geopic
