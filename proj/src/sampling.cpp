#include "geopic/sampling.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace geopic {
namespace {

struct PrimitivePolynomial {
  int degree;
  std::uint32_t coefficients;
  std::array<std::uint32_t, 8> initial;
};

// new-joe-kuo-6.21201, dimensions 2..8. Dimension 1 is the van der Corput sequence.
constexpr std::array<PrimitivePolynomial, SobolSequence::kMaxDimension - 1> kJoeKuo{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
}};

}  // namespace

SobolSequence::SobolSequence(int dimension) : dimension_(dimension) {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw std::invalid_argument("SobolSequence: dimension must be in 1.." +
                                std::to_string(kMaxDimension));
  }
  for (int k = 0; k < kBits; ++k) {
    directions_[0][k] = std::uint32_t{1} << (kBits - 1 - k);
  }
  for (int d = 1; d < dimension_; ++d) {
    const auto& poly = kJoeKuo[d - 1];
    const int s = poly.degree;
    auto& v = directions_[d];
    for (int k = 0; k < s && k < kBits; ++k) {
      v[k] = poly.initial[k] << (kBits - 1 - k);
    }
    for (int k = s; k < kBits; ++k) {
      std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
      for (int l = 1; l < s; ++l) {
        if ((poly.coefficients >> (s - 1 - l)) & 1U) {
          value ^= v[k - l];
        }
      }
      v[k] = value;
    }
  }
}

void SobolSequence::seek(std::uint64_t n) {
  if (n >> kBits) {
    throw std::out_of_range("SobolSequence: index exceeds 2^32");
  }
  index_ = n;
  const std::uint64_t gray = n ^ (n >> 1);
  for (int d = 0; d < dimension_; ++d) {
    std::uint32_t x = 0;
    for (int k = 0; k < kBits; ++k) {
      if ((gray >> k) & 1U) {
        x ^= directions_[d][k];
      }
    }
    state_[d] = x;
  }
}

void SobolSequence::next(std::span<double> out) {
  if (static_cast<int>(out.size()) < dimension_) {
    throw std::invalid_argument("SobolSequence::next: output span too small");
  }
  constexpr double scale = 1.0 / 4294967296.0;
  for (int d = 0; d < dimension_; ++d) {
    out[d] = static_cast<double>(state_[d]) * scale;
  }
  // Gray-code update: flip the direction of the lowest zero bit of the index.
  const int bit = std::countr_one(index_);
  if (bit >= kBits) {
    throw std::out_of_range("SobolSequence: sequence exhausted");
  }
  for (int d = 0; d < dimension_; ++d) {
    state_[d] ^= directions_[d][bit];
  }
  ++index_;
}

Eigen::MatrixXd sobol_points(int dimension, int count, int skip) {
  if (count < 1) {
    throw std::invalid_argument("sobol_points: count must be positive");
  }
  if (skip < 0) {
    throw std::invalid_argument("sobol_points: skip must be nonnegative");
  }
  SobolSequence seq(dimension);
  seq.seek(static_cast<std::uint64_t>(skip));
  Eigen::MatrixXd pts(count, dimension);
  std::array<double, SobolSequence::kMaxDimension> buf{};
  for (int i = 0; i < count; ++i) {
    seq.next(buf);
    for (int d = 0; d < dimension; ++d) {
      pts(i, d) = buf[d];
    }
  }
  return pts;
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) {
      return -std::numeric_limits<double>::infinity();
    }
    if (p == 1.0) {
      return std::numeric_limits<double>::infinity();
    }
    throw std::domain_error("inverse_normal_cdf: probability outside [0, 1]");
  }
  // Acklam's rational approximation.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley step on Phi(x) - p, with Phi from erfc.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace geopic
