#pragma once

// Vector fields on G/H given through the coefficients of their horizontal
// lift in a left-invariant frame, X(g) = x^i(g) A_i^L(g), and the frame
// linearization (d_A X)^i_j = L_{A_j^L} x^i + x^k alpha^i_{jk}.

#include <functional>
#include <string>
#include <vector>

#include "hcontract/smallmat.hpp"
#include "hcontract/spaces.hpp"

namespace hcontract {

/// Lift coefficients x(g, t) in R^m.
using CoeffFn = std::function<Vector(const Matrix& g, double t)>;
/// Analytic Lie derivatives: D(i, j) = L_{A_j^L} x^i at (g, t).
using LieDerivFn = std::function<Matrix(const Matrix& g, double t)>;

struct HorizontalField {
  std::string name;
  std::string space;  ///< id of the space whose m basis the coefficients refer to
  std::size_t m = 0;
  CoeffFn coeff;
  LieDerivFn lie_derivatives;  ///< optional; bypasses finite differences when set
  /// -1 for smooth; otherwise the expected differentiability class.
  int smoothness_hint = -1;

  /// coeff(g, t) with a length and finiteness check.
  Vector eval(const Matrix& g, double t = 0.0) const;
  bool has_analytic_derivatives() const noexcept { return static_cast<bool>(lie_derivatives); }
};

struct FdConfig {
  double step = 1e-5;
  bool richardson = false;   ///< one extra level at step/2
  bool use_analytic = true;  ///< prefer HorizontalField::lie_derivatives when available
};

/// d/ds x(g expm(s A_j), t) at s = 0 by central differences.
Vector lie_derivative(const HorizontalField& f, const SpaceDescriptor& space, std::size_t j, const Matrix& g,
                      const FdConfig& cfg = {}, double t = 0.0);

struct LinearizationMatrix {
  Matrix mat;  ///< m x m
  Matrix at;   ///< representative g
  double time = 0.0;
  std::string basis_id;
  /// max |D(h) - D(h/2)| over entries when Richardson is on, 0 otherwise
  /// (also 0 for analytic derivatives).
  double fd_residual = 0.0;
};

LinearizationMatrix linearize(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g,
                              const FdConfig& cfg = {}, double t = 0.0);

/// Frame coordinates of the covariant derivative along v^j A_j: linearize(...) v.
Vector covariant_apply(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g,
                       std::span<const double> v, const FdConfig& cfg = {}, double t = 0.0);

struct CosetReport {
  double max_gap = 0.0;     ///< max ||d_A X(g) - d_A X(g h)||_max
  double threshold = 1e-6;  ///< 10x the finite-difference tolerance
  std::size_t pairs = 0;
  bool pass = false;
};

CosetReport coset_consistency_check(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g,
                                    const std::vector<Matrix>& h_samples, const FdConfig& cfg = {});

/// The field expressed in the basis A'_j = sum_k Q(k, j) A_k, i.e. x' = Q^T x.
HorizontalField change_basis(const HorizontalField& f, const Matrix& q);

/// a F + b G
HorizontalField linear_combination(double a, const HorizontalField& f, double b, const HorizontalField& g);

// --- demo fields --------------------------------------------------------------

/// Constant lift coefficients u on any space (analytic derivatives zero).
HorizontalField constant_field(const SpaceDescriptor& space, Vector u);

/// State-independent input u(t) on a Lie group: X_u(R) = u^i(t) A_i^L(R).
HorizontalField open_loop_field(const SpaceDescriptor& space, std::function<Vector(double)> u);

/// u(t) = [(5 - t)/5, 1 - (t/5)^2, sin(pi t / 2)]
Vector attitude_demo_input(double t);

/// x(g) = M * position(g) on R^n, with exact Jacobian.
HorizontalField linear_field(const SpaceDescriptor& euclidean, Matrix m);

/// Circle field x(g) = fn(theta), theta = atan2(g10, g00); dfn is its derivative
/// (optional).
HorizontalField circle_field(const SpaceDescriptor& circle, std::function<double(double)> fn,
                             std::function<double(double)> dfn = {}, std::string name = "circle");

/// Gradient of the height p -> o.p on S^2: x^i(R) = (R A_i o).(o - (o.Ro) Ro).
HorizontalField sphere_height_gradient(const SpaceDescriptor& sphere);
/// Rotation about o: x^i(R) = (R A_i o).(o x Ro).
HorizontalField sphere_rotation(const SpaceDescriptor& sphere);
/// gradient + w * rotation
HorizontalField sphere_spiral(const SpaceDescriptor& sphere, double w = 0.5);
/// x(R) = (R02, 0): constant on cosets but not Ad_H-equivariant, so its
/// linearization depends on the representative; the coset check must fail.
HorizontalField sphere_nonequivariant(const SpaceDescriptor& sphere);

}  // namespace hcontract
