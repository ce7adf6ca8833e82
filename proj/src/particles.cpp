#include "geopic/particles.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "geopic/sampling.hpp"
#include "kernels.hpp"

namespace geopic {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Inverts F(x) = (x + (alpha/k) sin(kx)) / L, the CDF of (1 + alpha cos kx) / L.
double invert_cosine_density(double u, double alpha, double k, double length) {
  if (alpha == 0.0) {
    return u * length;
  }
  const double target = u * length;
  double x = target;
  for (int iter = 0; iter < 60; ++iter) {
    const double f = x + alpha / k * std::sin(k * x) - target;
    const double df = 1.0 + alpha * std::cos(k * x);
    const double step = f / df;
    x -= step;
    x = std::clamp(x, 0.0, length);
    if (std::abs(step) < 1e-15 * length) {
      break;
    }
  }
  return x;
}

}  // namespace

ParticleSet ParticleSet::with_size(Eigen::Index n, double weight, double charge, double mass) {
  ParticleSet p;
  p.x = Eigen::VectorXd::Zero(n);
  p.v1 = Eigen::VectorXd::Zero(n);
  p.v2 = Eigen::VectorXd::Zero(n);
  p.weight = weight;
  p.charge = charge;
  p.mass = mass;
  return p;
}

std::string_view to_string(CaseId id) {
  switch (id) {
    case CaseId::weibel:
      return "weibel";
    case CaseId::streaming_weibel:
      return "streaming_weibel";
    case CaseId::landau:
      return "landau";
  }
  return "unknown";
}

std::optional<CaseId> parse_case_id(std::string_view name) {
  if (name == "weibel") return CaseId::weibel;
  if (name == "streaming_weibel") return CaseId::streaming_weibel;
  if (name == "landau") return CaseId::landau;
  return std::nullopt;
}

InitialCase InitialCase::weibel() {
  InitialCase c;
  c.id = CaseId::weibel;
  c.sigma1 = 0.02 / std::numbers::sqrt2;
  c.sigma2 = std::sqrt(12.0) * c.sigma1;
  c.k = 1.25;
  c.alpha = 0.0;
  c.beta = -1e-4;
  return c;
}

InitialCase InitialCase::streaming_weibel() {
  InitialCase c;
  c.id = CaseId::streaming_weibel;
  c.sigma1 = 0.1 / std::numbers::sqrt2;
  c.sigma2 = c.sigma1;
  c.k = 0.2;
  c.beta = -1e-3;
  c.v01 = 0.5;
  c.v02 = -0.1;
  c.delta = 1.0 / 6.0;
  return c;
}

InitialCase InitialCase::landau() {
  InitialCase c;
  c.id = CaseId::landau;
  c.sigma1 = 1.0;
  c.sigma2 = 1.0;
  c.k = 0.5;
  c.alpha = 0.5;
  c.beta = 0.0;
  return c;
}

InitialCase InitialCase::preset(CaseId id) {
  switch (id) {
    case CaseId::weibel:
      return weibel();
    case CaseId::streaming_weibel:
      return streaming_weibel();
    case CaseId::landau:
      return landau();
  }
  throw std::invalid_argument("InitialCase::preset: unknown case");
}

double InitialCase::domain_length() const { return kTwoPi / k; }

double InitialCase::initial_b(double x) const {
  switch (id) {
    case CaseId::weibel:
      return beta * std::cos(k * x);
    case CaseId::streaming_weibel:
      return beta * std::sin(k * x);
    case CaseId::landau:
      return 0.0;
  }
  return 0.0;
}

std::pair<ParticleSet, FieldCoeffs> sample_initial(const InitialCase& init, int n_particles,
                                                   bool antithetic,
                                                   const DeRhamComplex1d& complex,
                                                   int sobol_skip) {
  if (n_particles < 1) {
    throw std::invalid_argument("sample_initial: need at least one particle");
  }
  if (antithetic && n_particles % 2 != 0) {
    throw std::invalid_argument("sample_initial: antithetic sampling needs an even particle count");
  }
  const double length = init.domain_length();
  if (std::abs(length - complex.domain_length()) > 1e-12 * length) {
    throw std::invalid_argument("sample_initial: complex domain does not match 2 pi / k");
  }
  const bool streaming = init.id == CaseId::streaming_weibel;
  const int dims = streaming ? 4 : 3;
  SobolSequence sobol(dims);
  sobol.seek(static_cast<std::uint64_t>(sobol_skip));

  ParticleSet particles =
      ParticleSet::with_size(n_particles, length / static_cast<double>(n_particles));
  const int draws = antithetic ? n_particles / 2 : n_particles;
  std::array<double, SobolSequence::kMaxDimension> u{};
  for (int i = 0; i < draws; ++i) {
    sobol.next(u);
    const double x = invert_cosine_density(u[0], init.alpha, init.k, length);
    double mean2 = 0.0;
    if (streaming) {
      mean2 = u[3] < init.delta ? init.v01 : init.v02;
    }
    const double v1 = init.sigma1 * inverse_normal_cdf(u[1]);
    const double v2 = mean2 + init.sigma2 * inverse_normal_cdf(u[2]);
    const int a = antithetic ? 2 * i : i;
    particles.x(a) = complex.v0().wrap(x);
    particles.v1(a) = v1;
    particles.v2(a) = v2;
    if (antithetic) {
      particles.x(a + 1) = complex.v0().wrap(length - x);
      particles.v1(a + 1) = -v1;
      particles.v2(a + 1) = 2.0 * mean2 - v2;
    }
  }

  FieldCoeffs fields = FieldCoeffs::zeros(complex.dimension());
  fields.b = complex.l2_project(SpaceId::v1, [&](double x) { return init.initial_b(x); });
  fields.d = complex.poisson_solve_initial_field(deposit_charge(particles, complex));
  return {std::move(particles), std::move(fields)};
}

Eigen::VectorXd scatter(const SplineSpace<double>& space, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y) {
  const int n = space.n_cells();
  const double inv_dx = 1.0 / space.cell_width();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  detail::dispatch_degree(space.degree(), [&](auto deg) {
    constexpr int P = decltype(deg)::value;
    const int p = detail::resolve_degree<P>(space.degree());
    std::array<double, kMaxSplineDegree + 1> vals{};
    for (Eigen::Index a = 0; a < x.size(); ++a) {
      const auto loc = detail::locate_inside(space.wrap(x(a)), inv_dx, n);
      uniform_bspline_values(p, loc.t, vals.data());
      detail::add_wrapped(out, space.index(loc.cell - p), p + 1, vals.data(), y(a), n);
    }
  });
  return out;
}

Eigen::VectorXd gather(const SplineSpace<double>& space, const Eigen::VectorXd& coeffs,
                       const Eigen::VectorXd& x) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    out(a) = eval_field(space, coeffs, x(a));
  }
  return out;
}

Eigen::VectorXd deposit_charge(const ParticleSet& particles, const DeRhamComplex1d& complex) {
  const auto& space = complex.v0();
  Eigen::VectorXd rho = scatter(space, particles.x,
                                Eigen::VectorXd::Constant(particles.size(), particles.charge_weight()));
  // Uniform background rho_B = -q w N_p / L; each basis function integrates to dx.
  const double background = -particles.charge_weight() * static_cast<double>(particles.size()) /
                            complex.domain_length();
  rho.array() += background * complex.cell_width();
  return rho;
}

Eigen::VectorXd deposit_current_line_integral(const ParticleSet& particles, double dt,
                                              const DeRhamComplex1d& complex) {
  Eigen::VectorXd j = Eigen::VectorXd::Zero(complex.dimension());
  const double qw = particles.charge_weight();
  for (Eigen::Index a = 0; a < particles.size(); ++a) {
    const double x0 = particles.x(a);
    for_each_segment_integral(complex.v1(), x0, x0 + dt * particles.v1(a),
                              [&](int i, double value) { j(i) += qw * value; });
  }
  return j;
}

}  // namespace geopic
