#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <stdexcept>

namespace geopic {

/// Largest Gauss-Legendre rule carried in the table.
inline constexpr int kMaxGaussPoints = 10;

/// Nodes and weights of an n-point Gauss-Legendre rule on [0, 1].
template <typename Scalar = double>
struct GaussRule {
  int size = 0;
  std::array<Scalar, kMaxGaussPoints> nodes{};
  std::array<Scalar, kMaxGaussPoints> weights{};
};

namespace detail {

template <typename Scalar>
GaussRule<Scalar> compute_gauss_rule(int n) {
  // Newton iteration on P_n in long double, mapped from [-1, 1] to [0, 1].
  GaussRule<Scalar> rule;
  rule.size = n;
  using Real = long double;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real z = std::cos(std::numbers::pi_v<Real> * (i + Real(0.75)) / (n + Real(0.5)));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        const Real p2 = p1;
        p1 = p0;
        p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      const Real dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < Real(1e-19)) {
        break;
      }
    }
    const Real w = 2 / ((1 - z * z) * dp * dp);
    rule.nodes[i] = static_cast<Scalar>((1 - z) / 2);
    rule.nodes[n - 1 - i] = static_cast<Scalar>((1 + z) / 2);
    rule.weights[i] = static_cast<Scalar>(w / 2);
    rule.weights[n - 1 - i] = static_cast<Scalar>(w / 2);
  }
  return rule;
}

}  // namespace detail

/// Gauss-Legendre rule with n points on the unit interval, exact for
/// polynomials of degree 2n-1. Tables are built once per scalar type.
template <typename Scalar = double>
const GaussRule<Scalar>& gauss_legendre(int n) {
  static const auto table = [] {
    std::array<GaussRule<Scalar>, kMaxGaussPoints + 1> t{};
    for (int k = 1; k <= kMaxGaussPoints; ++k) {
      t[k] = detail::compute_gauss_rule<Scalar>(k);
    }
    return t;
  }();
  if (n < 1 || n > kMaxGaussPoints) {
    throw std::out_of_range("gauss_legendre: supported sizes are 1.." +
                            std::to_string(kMaxGaussPoints));
  }
  return table[n];
}

/// Fewest Gauss points integrating a polynomial of the given degree exactly.
constexpr int gauss_points_for_degree(int polynomial_degree) {
  return polynomial_degree / 2 + 1;
}

}  // namespace geopic
