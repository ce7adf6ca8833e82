#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "geopic/quadrature.hpp"
#include "geopic/splines.hpp"

namespace geopic {

enum class MassId { m0, m1 };
enum class SpaceId { v0, v1 };

/// One-dimensional discrete deRham complex on a periodic uniform grid:
/// V0 holds splines of degree p, V1 splines of degree p-1, and the derivative
/// matrix maps V0 coefficients to V1 coefficients so that
/// d/dx sum_j c_j N_j^p = sum_i (G c)_i N_i^{p-1} holds exactly.
template <typename Scalar = double>
class BasicDeRhamComplex1d {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicDeRhamComplex1d(int degree_p, int n_cells, Scalar domain_length)
      : v0_(check_args(degree_p, n_cells), n_cells, domain_length),
        v1_(degree_p - 1, n_cells, domain_length) {
    const int n = n_cells;
    const Scalar inv_dx = Scalar(1) / v0_.cell_width();
    deriv_ = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      deriv_(i, i) = inv_dx;
      deriv_(i, v0_.index(i - 1)) -= inv_dx;
    }
    assemble_mass();
    m0_llt_.compute(m0_);
    m1_llt_.compute(m1_);
    if (m0_llt_.info() != Eigen::Success || m1_llt_.info() != Eigen::Success) {
      throw std::runtime_error("BasicDeRhamComplex1d: mass matrix is not positive definite");
    }
    // The periodic stiffness G^T M1 G has the constants as its kernel; adding
    // the rank-one 11^T makes it SPD and selects the zero-mean solution for
    // compatible right-hand sides.
    stiffness_ = deriv_.transpose() * m1_ * deriv_;
    poisson_llt_.compute(stiffness_ + Matrix::Constant(n, n, Scalar(1)));
    if (poisson_llt_.info() != Eigen::Success) {
      throw std::runtime_error("BasicDeRhamComplex1d: Poisson operator factorization failed");
    }
  }

  int degree() const { return v0_.degree(); }
  int n_cells() const { return v0_.n_cells(); }
  int dimension() const { return v0_.n_cells(); }
  Scalar cell_width() const { return v0_.cell_width(); }
  Scalar domain_length() const { return v0_.domain_length(); }

  const SplineSpace<Scalar>& v0() const { return v0_; }
  const SplineSpace<Scalar>& v1() const { return v1_; }
  const SplineSpace<Scalar>& space(SpaceId id) const { return id == SpaceId::v0 ? v0_ : v1_; }

  const Matrix& deriv() const { return deriv_; }
  const Matrix& m0() const { return m0_; }
  const Matrix& m1() const { return m1_; }
  /// (m01)_{ij} = int N_i^p N_j^{p-1} dx.
  const Matrix& m01() const { return m01_; }
  const Matrix& mass(MassId id) const { return id == MassId::m0 ? m0_ : m1_; }

  template <typename Derived>
  Vector solve_mass(MassId id, const Eigen::MatrixBase<Derived>& rhs) const {
    check_length(rhs.size(), "solve_mass");
    return id == MassId::m0 ? Vector(m0_llt_.solve(rhs)) : Vector(m1_llt_.solve(rhs));
  }

  /// Solves G^T M1 G phi = rho_dofs with sum(phi) = 0 and returns d = -G phi,
  /// so that G^T M1 d = -rho_dofs.
  template <typename Derived>
  Vector poisson_solve_initial_field(const Eigen::MatrixBase<Derived>& rho_dofs) const {
    check_length(rho_dofs.size(), "poisson_solve_initial_field");
    const Scalar total = rho_dofs.sum();
    const Scalar scale = std::max(Scalar(1), rho_dofs.cwiseAbs().sum());
    if (std::abs(total) > Scalar(1e-10) * scale) {
      throw std::invalid_argument("poisson_solve_initial_field: total charge is not zero (sum = " +
                                  std::to_string(static_cast<double>(total)) + ")");
    }
    // Remove the round-off mean so the solve stays in the range of G^T M1 G.
    const Vector rho = rho_dofs - Vector::Constant(rho_dofs.size(), total / Scalar(rho_dofs.size()));
    const Vector phi = poisson_llt_.solve(rho);
    return -(deriv_ * phi);
  }

  /// Integral over the domain of the field with the given coefficients.
  template <typename Derived>
  Scalar field_integral(SpaceId, const Eigen::MatrixBase<Derived>& coeffs) const {
    check_length(coeffs.size(), "field_integral");
    return cell_width() * coeffs.sum();
  }

  /// int E_h B_h dx for E_h in V0 and B_h in V1.
  template <typename DerivedE, typename DerivedB>
  Scalar mixed_inner(const Eigen::MatrixBase<DerivedE>& e, const Eigen::MatrixBase<DerivedB>& b) const {
    check_length(e.size(), "mixed_inner");
    check_length(b.size(), "mixed_inner");
    return e.dot(m01_ * b);
  }

  /// L2 projection of a function onto V0 or V1.
  Vector l2_project(SpaceId id, const std::function<Scalar(Scalar)>& f, int points_per_cell = 0) const {
    const auto& sp = space(id);
    const int npts = points_per_cell > 0 ? points_per_cell : std::min(kMaxGaussPoints, sp.degree() + 4);
    const auto& rule = gauss_legendre<Scalar>(npts);
    Vector rhs = Vector::Zero(dimension());
    std::array<Scalar, kMaxSplineDegree + 1> vals{};
    const Scalar dx = cell_width();
    for (int c = 0; c < n_cells(); ++c) {
      for (int q = 0; q < rule.size; ++q) {
        const Scalar t = rule.nodes[q];
        const Scalar fx = f((Scalar(c) + t) * dx);
        uniform_bspline_values(sp.degree(), t, vals.data());
        int j = sp.first_active(c);
        for (int r = 0; r <= sp.degree(); ++r) {
          rhs(j) += rule.weights[q] * dx * fx * vals[r];
          if (++j == n_cells()) {
            j = 0;
          }
        }
      }
    }
    return solve_mass(id == SpaceId::v0 ? MassId::m0 : MassId::m1, rhs);
  }

 private:
  static int check_args(int degree_p, int n_cells) {
    if (degree_p < 1) {
      throw std::invalid_argument("BasicDeRhamComplex1d: degree must be at least 1");
    }
    if (n_cells <= degree_p) {
      throw std::invalid_argument("BasicDeRhamComplex1d: n_cells must exceed the degree");
    }
    return degree_p;
  }

  void check_length(Eigen::Index n, const char* what) const {
    if (n != dimension()) {
      throw std::invalid_argument(std::string(what) + ": vector length does not match the complex");
    }
  }

  void assemble_mass() {
    const int n = n_cells();
    const int p = degree();
    m0_ = Matrix::Zero(n, n);
    m1_ = Matrix::Zero(n, n);
    m01_ = Matrix::Zero(n, n);
    // p+1 points integrate products of degree <= 2p exactly.
    const auto& rule = gauss_legendre<Scalar>(p + 1);
    std::array<Scalar, kMaxSplineDegree + 1> b0{};
    std::array<Scalar, kMaxSplineDegree + 1> b1{};
    const Scalar dx = cell_width();
    for (int c = 0; c < n; ++c) {
      const int f0 = v0_.first_active(c);
      const int f1 = v1_.first_active(c);
      for (int q = 0; q < rule.size; ++q) {
        const Scalar w = rule.weights[q] * dx;
        uniform_bspline_values(p, rule.nodes[q], b0.data());
        uniform_bspline_values(p - 1, rule.nodes[q], b1.data());
        for (int r = 0; r <= p; ++r) {
          const int i = v0_.index(f0 + r);
          for (int s = 0; s <= p; ++s) {
            m0_(i, v0_.index(f0 + s)) += w * b0[r] * b0[s];
          }
          for (int s = 0; s < p; ++s) {
            m01_(i, v1_.index(f1 + s)) += w * b0[r] * b1[s];
          }
        }
        for (int r = 0; r < p; ++r) {
          const int i = v1_.index(f1 + r);
          for (int s = 0; s < p; ++s) {
            m1_(i, v1_.index(f1 + s)) += w * b1[r] * b1[s];
          }
        }
      }
    }
  }

  SplineSpace<Scalar> v0_;
  SplineSpace<Scalar> v1_;
  Matrix deriv_;
  Matrix m0_;
  Matrix m1_;
  Matrix m01_;
  Matrix stiffness_;
  Eigen::LLT<Matrix> m0_llt_;
  Eigen::LLT<Matrix> m1_llt_;
  Eigen::LLT<Matrix> poisson_llt_;
};

using DeRhamComplex1d = BasicDeRhamComplex1d<double>;

/// Coefficients of E1 (d, in V1), E2 (e, in V0) and B3 (b, in V1).
struct FieldCoeffs {
  Eigen::VectorXd d;
  Eigen::VectorXd e;
  Eigen::VectorXd b;

  static FieldCoeffs zeros(int n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  }
};

}  // namespace geopic
