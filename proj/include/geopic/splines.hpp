#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "geopic/quadrature.hpp"

namespace geopic {

inline constexpr int kMaxSplineDegree = 8;

/// Values of the degree+1 uniform B-splines that are nonzero in one cell,
/// evaluated at local coordinate t in [0, 1]. out[r] belongs to the spline
/// whose support starts r - degree cells to the left of the current cell.
///
/// Cox-de Boor on equidistant knots: with x = x_j + t*dx the recursion
///   N_i^k = (x - x_i)/(k dx) N_i^{k-1} + (x_{i+k+1} - x)/(k dx) N_{i+1}^{k-1}
/// reads b^k_r = ((t + k - r) b^{k-1}_{r-1} + (r + 1 - t) b^{k-1}_r) / k.
template <typename Scalar>
inline void uniform_bspline_values(int degree, Scalar t, Scalar* out) {
  out[0] = Scalar(1);
  for (int k = 1; k <= degree; ++k) {
    const Scalar inv_k = Scalar(1) / Scalar(k);
    Scalar carry = Scalar(0);
    for (int r = 0; r < k; ++r) {
      const Scalar prev = out[r];
      const Scalar left = (Scalar(r + 1) - t) * prev * inv_k;
      out[r] = carry + left;
      carry = (t + Scalar(k - r - 1)) * prev * inv_k;
    }
    out[k] = carry;
  }
}

/// Active basis functions at a point: global index of the first one (already
/// reduced modulo n_cells) and degree+1 values. Index first_index + r wraps.
template <typename Scalar = double>
struct LocalBasis {
  int first_index = 0;
  int count = 0;
  std::array<Scalar, kMaxSplineDegree + 1> values{};

  std::span<const Scalar> view() const { return {values.data(), static_cast<std::size_t>(count)}; }
};

/// Periodic uniform B-spline basis of fixed degree on [0, L).
template <typename Scalar = double>
class SplineSpace {
 public:
  struct Location {
    int cell = 0;
    Scalar offset = 0;  // in [0, 1]
  };

  SplineSpace(int degree, int n_cells, Scalar domain_length)
      : degree_(degree), n_cells_(n_cells), length_(domain_length) {
    if (degree < 0 || degree > kMaxSplineDegree) {
      throw std::invalid_argument("SplineSpace: degree out of range");
    }
    if (n_cells < degree + 1) {
      throw std::invalid_argument("SplineSpace: need n_cells >= degree + 1");
    }
    if (!(domain_length > 0) || !std::isfinite(static_cast<double>(domain_length))) {
      throw std::invalid_argument("SplineSpace: domain length must be positive");
    }
    dx_ = length_ / Scalar(n_cells_);
    inv_dx_ = Scalar(n_cells_) / length_;
  }

  int degree() const { return degree_; }
  int n_cells() const { return n_cells_; }
  int dimension() const { return n_cells_; }
  Scalar cell_width() const { return dx_; }
  Scalar domain_length() const { return length_; }

  /// x - L floor(x / L), folded so the result lies in [0, L).
  Scalar wrap(Scalar x) const {
    Scalar w = x - length_ * std::floor(x / length_);
    if (w >= length_) {
      w -= length_;
    }
    if (w < Scalar(0)) {
      w = Scalar(0);
    }
    return w;
  }

  int index(int i) const {
    const int r = i % n_cells_;
    return r < 0 ? r + n_cells_ : r;
  }

  /// Cell and local coordinate of a point; knots belong to the cell on their right.
  Location locate(Scalar x) const {
    const Scalar u = wrap(x) * inv_dx_;
    int cell = static_cast<int>(std::floor(u));
    cell = std::clamp(cell, 0, n_cells_ - 1);
    Scalar t = u - Scalar(cell);
    t = std::clamp(t, Scalar(0), Scalar(1));
    return {cell, t};
  }

  /// Global index of the first spline active in a cell.
  int first_active(int cell) const { return index(cell - degree_); }

 private:
  int degree_;
  int n_cells_;
  Scalar length_;
  Scalar dx_{};
  Scalar inv_dx_{};
};

template <typename Scalar>
LocalBasis<Scalar> eval_basis(const SplineSpace<Scalar>& space, Scalar x) {
  const auto loc = space.locate(x);
  LocalBasis<Scalar> basis;
  basis.first_index = space.first_active(loc.cell);
  basis.count = space.degree() + 1;
  uniform_bspline_values(space.degree(), loc.offset, basis.values.data());
  return basis;
}

/// d/dx N_j^p = (N_j^{p-1} - N_{j+1}^{p-1}) / dx for the active splines.
template <typename Scalar>
LocalBasis<Scalar> eval_basis_derivative(const SplineSpace<Scalar>& space, Scalar x) {
  const int p = space.degree();
  if (p < 1) {
    throw std::invalid_argument("eval_basis_derivative: degree 0 has no derivative in the complex");
  }
  const auto loc = space.locate(x);
  std::array<Scalar, kMaxSplineDegree + 1> lower{};
  uniform_bspline_values(p - 1, loc.offset, lower.data());
  LocalBasis<Scalar> basis;
  basis.first_index = space.first_active(loc.cell);
  basis.count = p + 1;
  const Scalar inv_dx = Scalar(1) / space.cell_width();
  for (int r = 0; r <= p; ++r) {
    const Scalar left = r > 0 ? lower[r - 1] : Scalar(0);
    const Scalar right = r < p ? lower[r] : Scalar(0);
    basis.values[r] = (left - right) * inv_dx;
  }
  return basis;
}

/// Calls visit(j, value) with the integral of N_j^p over each piece of the
/// straight segment [x0, x1] (signed: reversed segments give negative values).
/// The segment is not wrapped; the basis is extended periodically. Pieces are
/// split at every knot and integrated with the Gauss rule exact for degree p.
/// The same index may be visited once per crossed cell.
template <typename Scalar, typename Visitor>
void for_each_segment_integral(const SplineSpace<Scalar>& space, Scalar x0, Scalar x1,
                               Visitor&& visit) {
  if (x0 == x1) {
    return;
  }
  Scalar sign = Scalar(1);
  if (x1 < x0) {
    std::swap(x0, x1);
    sign = Scalar(-1);
  }
  const int p = space.degree();
  const Scalar dx = space.cell_width();
  const Scalar u0 = x0 / dx;
  const Scalar u1 = x1 / dx;
  const auto c0 = static_cast<long>(std::floor(u0));
  const auto c1 = static_cast<long>(std::floor(u1));
  const auto& rule = gauss_legendre<Scalar>(gauss_points_for_degree(p));
  std::array<Scalar, kMaxSplineDegree + 1> vals{};
  std::array<Scalar, kMaxSplineDegree + 1> acc{};
  for (long c = c0; c <= c1; ++c) {
    const Scalar a = std::max(u0, Scalar(c)) - Scalar(c);
    const Scalar b = std::min(u1, Scalar(c + 1)) - Scalar(c);
    if (!(b > a)) {
      continue;
    }
    const Scalar len = b - a;
    std::fill_n(acc.begin(), p + 1, Scalar(0));
    for (int q = 0; q < rule.size; ++q) {
      uniform_bspline_values(p, a + len * rule.nodes[q], vals.data());
      for (int r = 0; r <= p; ++r) {
        acc[r] += rule.weights[q] * vals[r];
      }
    }
    const Scalar scale = sign * dx * len;
    const long wrapped = c % space.n_cells();
    int j = space.first_active(static_cast<int>(wrapped));
    for (int r = 0; r <= p; ++r) {
      visit(j, scale * acc[r]);
      if (++j == space.n_cells()) {
        j = 0;
      }
    }
  }
}

/// Integrals of every basis function along [x0, x1]; entries that are never
/// touched are absent (zero).
template <typename Scalar>
std::map<int, Scalar> integrate_basis_along_segment(const SplineSpace<Scalar>& space, Scalar x0,
                                                    Scalar x1) {
  std::map<int, Scalar> out;
  for_each_segment_integral(space, x0, x1, [&](int j, Scalar v) { out[j] += v; });
  return out;
}

/// Sum_j coeffs_j N_j^p(x) over the active splines.
template <typename Scalar, typename Derived>
Scalar eval_field(const SplineSpace<Scalar>& space, const Eigen::MatrixBase<Derived>& coeffs,
                  Scalar x) {
  if (coeffs.size() != space.dimension()) {
    throw std::invalid_argument("eval_field: coefficient length does not match the space");
  }
  const auto basis = eval_basis(space, x);
  Scalar sum = Scalar(0);
  int j = basis.first_index;
  for (int r = 0; r < basis.count; ++r) {
    sum += static_cast<Scalar>(coeffs(j)) * basis.values[r];
    if (++j == space.n_cells()) {
      j = 0;
    }
  }
  return sum;
}

}  // namespace geopic
