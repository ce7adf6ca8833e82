#pragma once

// Per-particle helpers shared by the particle loops. The loops are
// instantiated for small fixed degrees so the spline recursions unroll; a
// template argument of 0 means "degree known only at run time".

#include <algorithm>
#include <array>
#include <type_traits>

#include <Eigen/Core>

#include "geopic/splines.hpp"

namespace geopic::detail {

template <int P>
using Degree = std::integral_constant<int, P>;

template <typename F>
decltype(auto) dispatch_degree(int p, F&& f) {
  switch (p) {
    case 1:
      return f(Degree<1>{});
    case 2:
      return f(Degree<2>{});
    case 3:
      return f(Degree<3>{});
    case 4:
      return f(Degree<4>{});
    case 5:
      return f(Degree<5>{});
    default:
      return f(Degree<0>{});
  }
}

template <int P>
constexpr int resolve_degree(int runtime_p) {
  return P > 0 ? P : runtime_p;
}

// N^{p-1} (p values) and N^p (p+1 values) in one cell; the degree-p recursion
// passes through p-1.
template <int P>
inline void basis_pair(int runtime_p, double t, double* lower, double* upper) {
  const int p = resolve_degree<P>(runtime_p);
  uniform_bspline_values(p - 1, t, lower);
  std::copy_n(lower, p, upper);
  const double inv_p = 1.0 / p;
  double carry = 0.0;
  for (int r = 0; r < p; ++r) {
    const double prev = upper[r];
    upper[r] = carry + (r + 1 - t) * prev * inv_p;
    carry = (t + (p - r - 1)) * prev * inv_p;
  }
  upper[p] = carry;
}

inline double dot_wrapped(const Eigen::VectorXd& c, int first, int count, const double* vals,
                          int n) {
  double s = 0.0;
  int j = first;
  for (int r = 0; r < count; ++r) {
    s += c(j) * vals[r];
    if (++j == n) {
      j = 0;
    }
  }
  return s;
}

inline void add_wrapped(Eigen::VectorXd& acc, int first, int count, const double* vals,
                        double scale, int n) {
  int j = first;
  for (int r = 0; r < count; ++r) {
    acc(j) += scale * vals[r];
    if (++j == n) {
      j = 0;
    }
  }
}

// Cell index and local coordinate of a point already inside [0, L).
struct CellPoint {
  int cell;
  double t;
};

inline CellPoint locate_inside(double x, double inv_dx, int n) {
  const double u = x * inv_dx;
  int cell = static_cast<int>(u);
  cell = std::clamp(cell, 0, n - 1);
  return {cell, std::clamp(u - cell, 0.0, 1.0)};
}

// Same as for_each_segment_integral for the spline degree Q (0: run time).
template <int Q, typename Visitor>
void segment_integrals(const SplineSpace<double>& space, double x0, double x1, Visitor&& visit) {
  if (x0 == x1) {
    return;
  }
  double sign = 1.0;
  if (x1 < x0) {
    std::swap(x0, x1);
    sign = -1.0;
  }
  const int q = resolve_degree<Q>(space.degree());
  const int n = space.n_cells();
  const double dx = space.cell_width();
  const double u0 = x0 / dx;
  const double u1 = x1 / dx;
  const long c0 = static_cast<long>(std::floor(u0));
  const long c1 = static_cast<long>(std::floor(u1));
  const auto& rule = gauss_legendre<double>(gauss_points_for_degree(q));
  std::array<double, kMaxSplineDegree + 1> vals{};
  std::array<double, kMaxSplineDegree + 1> acc{};
  // First active index in cell c0, advanced by one per crossed cell.
  int first = space.index(static_cast<int>(c0 % n) - q);
  for (long c = c0; c <= c1; ++c, first = first + 1 == n ? 0 : first + 1) {
    const double a = std::max(u0, double(c)) - double(c);
    const double b = std::min(u1, double(c + 1)) - double(c);
    if (!(b > a)) {
      continue;
    }
    const double len = b - a;
    std::fill_n(acc.begin(), q + 1, 0.0);
    for (int k = 0; k < rule.size; ++k) {
      uniform_bspline_values(q, a + len * rule.nodes[k], vals.data());
      for (int r = 0; r <= q; ++r) {
        acc[r] += rule.weights[k] * vals[r];
      }
    }
    const double scale = sign * dx * len;
    int j = first;
    for (int r = 0; r <= q; ++r) {
      visit(j, scale * acc[r]);
      if (++j == n) {
        j = 0;
      }
    }
  }
}

}  // namespace geopic::detail
