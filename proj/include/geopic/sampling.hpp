#pragma once

#include <array>
#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace geopic {

/// Sobol low-discrepancy sequence in gray-code order with the Joe-Kuo
/// direction numbers. Point 0 is the origin.
class SobolSequence {
 public:
  static constexpr int kMaxDimension = 8;
  static constexpr int kBits = 32;

  explicit SobolSequence(int dimension);

  int dimension() const { return dimension_; }
  std::uint64_t position() const { return index_; }

  /// Jumps to point number n of the sequence.
  void seek(std::uint64_t n);
  void skip(std::uint64_t n) { seek(index_ + n); }

  /// Writes the current point into out and advances.
  void next(std::span<double> out);

 private:
  int dimension_;
  std::uint64_t index_ = 0;
  std::array<std::array<std::uint32_t, kBits>, kMaxDimension> directions_{};
  std::array<std::uint32_t, kMaxDimension> state_{};
};

/// count points of the sequence after skipping the first `skip`; row i is one point.
Eigen::MatrixXd sobol_points(int dimension, int count, int skip);

/// Inverse of the standard normal CDF on (0, 1): rational approximation
/// (relative error below 1.2e-9) followed by one Halley refinement step.
double inverse_normal_cdf(double p);

}  // namespace geopic
