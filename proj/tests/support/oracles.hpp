#pragma once

// Reference computations that share no code path with the library kernels
// they check.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "hcontract/smallmat.hpp"

namespace oracle {

using hcontract::Matrix;
using hcontract::Vector;

/// Plain Taylor sum of exp(A), no scaling, `terms` terms.
inline Matrix series_expm(const Matrix& a, int terms = 30) {
  const std::size_t n = a.rows();
  Matrix sum = Matrix::identity(n), term = Matrix::identity(n);
  for (int k = 1; k < terms; ++k) {
    Matrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += term(i, l) * a(l, j);
        next(i, j) = s / k;
      }
    term = next;
    sum += term;
  }
  return sum;
}

/// Largest eigenvalue of the symmetric part of a 2x2 matrix, closed form.
inline double mu2_closed_form(double a, double b, double c, double d) {
  const double off = 0.5 * (b + c);
  const double half = 0.5 * (a - d);
  return 0.5 * (a + d) + std::sqrt(half * half + off * off);
}

/// Orthonormal basis E_i = A_i / sqrt(g_i) of so(3) under the left-invariant
/// metric with diagonal Gram g on (A_X, A_Y, A_Z), and U^i_{jk} obtained by
/// solving <U(E_j, E_k), E_l> = (<[E_j, E_l], E_k> + <E_j, [E_k, E_l]>) / 2
/// for all l with a Cramer-rule 3x3 solve against the Gram matrix of E.
struct LeftInvariantSO3 {
  std::array<double, 3> g;
  std::array<Vector, 3> e;  // coordinates of E_i in (A_X, A_Y, A_Z)

  explicit LeftInvariantSO3(std::array<double, 3> gram) : g(gram) {
    for (int i = 0; i < 3; ++i) {
      e[i] = Vector(3, 0.0);
      e[i][i] = 1.0 / std::sqrt(g[i]);
    }
  }

  double inner(const Vector& x, const Vector& y) const {
    return g[0] * x[0] * y[0] + g[1] * x[1] * y[1] + g[2] * x[2] * y[2];
  }

  // so(3) bracket in (A_X, A_Y, A_Z) coordinates is the cross product.
  static Vector br(const Vector& x, const Vector& y) {
    return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
  }

  static Vector cramer(const std::array<std::array<double, 3>, 3>& m, const Vector& r) {
    auto det = [](const std::array<std::array<double, 3>, 3>& a) {
      return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double d = det(m);
    Vector out(3);
    for (int c = 0; c < 3; ++c) {
      auto mc = m;
      for (int r0 = 0; r0 < 3; ++r0) mc[r0][c] = r[r0];
      out[c] = det(mc) / d;
    }
    return out;
  }

  /// U^i_{jk}
  double U(int i, int j, int k) const {
    std::array<std::array<double, 3>, 3> gram{};
    Vector rhs(3);
    for (int l = 0; l < 3; ++l) {
      for (int p = 0; p < 3; ++p) gram[l][p] = inner(e[l], e[p]);
      rhs[l] = 0.5 * (inner(br(e[j], e[l]), e[k]) + inner(e[j], br(e[k], e[l])));
    }
    return cramer(gram, rhs)[i];
  }

  /// alpha^i_{jk} = coordinate i of [E_j, E_k] / 2 + U^i_{jk}
  double alpha(int i, int j, int k) const {
    const Vector b = br(e[j], e[k]);
    std::array<std::array<double, 3>, 3> gram{};
    Vector rhs(3);
    for (int l = 0; l < 3; ++l) {
      for (int p = 0; p < 3; ++p) gram[l][p] = inner(e[l], e[p]);
      rhs[l] = inner(b, e[l]);
    }
    return 0.5 * cramer(gram, rhs)[i] + U(i, j, k);
  }
};

/// Rotation by angle t about the unit axis w (explicit Rodrigues matrix).
inline Matrix axis_rotation(const Vector& w, double t) {
  const double c = std::cos(t), s = std::sin(t), v = 1.0 - c;
  return Matrix{{c + w[0] * w[0] * v, w[0] * w[1] * v - w[2] * s, w[0] * w[2] * v + w[1] * s},
                {w[1] * w[0] * v + w[2] * s, c + w[1] * w[1] * v, w[1] * w[2] * v - w[0] * s},
                {w[2] * w[0] * v - w[1] * s, w[2] * w[1] * v + w[0] * s, c + w[2] * w[2] * v}};
}

/// Hessian of the height h(p) = o.p on S^2 in the frame (R A_X o, R A_Y o),
/// from second differences of h along geodesics t -> R expm(t v) o with v
/// in span(A_X, A_Y) (rotation about the axis (v0, v1, 0)).
inline std::array<std::array<double, 2>, 2> height_hessian(const Matrix& r, double step = 1e-4) {
  const Vector o{0.0, 0.0, 1.0};
  auto second = [&](double v0, double v1) {
    const double n = std::hypot(v0, v1);
    const Vector axis{v0 / n, v1 / n, 0.0};
    auto h = [&](double t) {
      const Matrix q = r * axis_rotation(axis, t * n);
      return q(2, 2);  // o . (q o)
    };
    return (h(step) - 2.0 * h(0.0) + h(-step)) / (step * step);
  };
  const double d00 = second(1, 0), d11 = second(0, 1);
  const double d01 = 0.25 * (second(1, 1) - second(1, -1));
  return {{{d00, d01}, {d01, d11}}};
}

inline double hessian_lambda_max(const std::array<std::array<double, 2>, 2>& h) {
  return mu2_closed_form(h[0][0], h[0][1], h[1][0], h[1][1]);
}

/// Haar-like random rotation from a random unit quaternion.
inline Matrix random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double q[4];
  double s = 0.0;
  for (double& x : q) {
    x = n(rng);
    s += x * x;
  }
  s = std::sqrt(s);
  for (double& x : q) x /= s;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  return Matrix{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
                {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
                {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
}

}  // namespace oracle
