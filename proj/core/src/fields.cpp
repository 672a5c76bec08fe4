#include "hcontract/fields.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hcontract {

namespace {

std::string describe_point(const Matrix& g, double t) {
  std::ostringstream os;
  os << "g = " << to_string(g) << ", t = " << t;
  return os.str();
}

void check_space(const HorizontalField& f, const SpaceDescriptor& space) {
  if (f.m != space.m_dim())
    throw std::invalid_argument("field '" + f.name + "' has " + std::to_string(f.m) +
                                " coefficients but the space has dim m = " + std::to_string(space.m_dim()));
}

Vector central_difference(const HorizontalField& f, const Matrix& g, const Matrix& a, double h, double t) {
  const Vector plus = f.eval(g * expm(a * h), t);
  const Vector minus = f.eval(g * expm(a * (-h)), t);
  Vector d(plus.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (plus[i] - minus[i]) / (2.0 * h);
  return d;
}

Vector cross3(std::span<const double> a, std::span<const double> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

Vector HorizontalField::eval(const Matrix& g, double t) const {
  Vector x;
  try {
    x = coeff(g, t);
  } catch (const NumericalError& e) {
    throw NumericalError("field '" + name + "' is not finite at " + describe_point(g, t) + ": " + e.what());
  }
  if (x.size() != m)
    throw std::invalid_argument("field '" + name + "' returned " + std::to_string(x.size()) +
                                " coefficients, expected " + std::to_string(m));
  for (double v : x)
    if (!std::isfinite(v)) throw NumericalError("field '" + name + "' is not finite at " + describe_point(g, t));
  return x;
}

Vector lie_derivative(const HorizontalField& f, const SpaceDescriptor& space, std::size_t j, const Matrix& g,
                      const FdConfig& cfg, double t) {
  check_space(f, space);
  if (j >= space.m_dim()) throw std::invalid_argument("frame index out of range");
  if (f.has_analytic_derivatives() && cfg.use_analytic) return f.lie_derivatives(g, t).col(j);
  if (!(cfg.step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const Matrix& a = space.dec().m_basis()[j];
  Vector d = central_difference(f, g, a, cfg.step, t);
  if (cfg.richardson) {
    const Vector d2 = central_difference(f, g, a, cfg.step / 2.0, t);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (4.0 * d2[i] - d[i]) / 3.0;
  }
  return d;
}

LinearizationMatrix linearize(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g,
                              const FdConfig& cfg, double t) {
  check_space(f, space);
  const std::size_t m = space.m_dim();
  const auto& alpha = space.alpha();
  const Vector x = f.eval(g, t);

  Matrix lie(m, m);
  double residual = 0.0;
  if (f.has_analytic_derivatives() && cfg.use_analytic) {
    lie = f.lie_derivatives(g, t);
    if (lie.rows() != m || lie.cols() != m)
      throw std::invalid_argument("analytic Lie derivatives of '" + f.name + "' have the wrong shape");
  } else {
    if (!(cfg.step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    for (std::size_t j = 0; j < m; ++j) {
      const Matrix& a = space.dec().m_basis()[j];
      Vector d = central_difference(f, g, a, cfg.step, t);
      if (cfg.richardson) {
        const Vector d2 = central_difference(f, g, a, cfg.step / 2.0, t);
        for (std::size_t i = 0; i < m; ++i) {
          residual = std::max(residual, std::abs(d2[i] - d[i]));
          d[i] = (4.0 * d2[i] - d[i]) / 3.0;
        }
      }
      for (std::size_t i = 0; i < m; ++i) lie(i, j) = d[i];
    }
  }

  Matrix out = lie;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += x[k] * alpha(i, j, k);
      out(i, j) += s;
    }
  return {std::move(out), g, t, space.name(), residual};
}

Vector covariant_apply(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g,
                       std::span<const double> v, const FdConfig& cfg, double t) {
  if (v.size() != space.m_dim()) throw std::invalid_argument("direction has the wrong dimension");
  return linearize(f, space, g, cfg, t).mat * v;
}

CosetReport coset_consistency_check(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g,
                                    const std::vector<Matrix>& h_samples, const FdConfig& cfg) {
  CosetReport rep;
  const Matrix base = linearize(f, space, g, cfg).mat;
  for (const auto& h : h_samples) {
    if (!space.dec().in_isotropy(h))
      throw std::invalid_argument("coset_consistency_check: sample is not in the isotropy group");
    const Matrix other = linearize(f, space, g * h, cfg).mat;
    rep.max_gap = std::max(rep.max_gap, (base - other).max_abs());
    ++rep.pairs;
  }
  rep.pass = rep.max_gap <= rep.threshold;
  return rep;
}

HorizontalField change_basis(const HorizontalField& f, const Matrix& q) {
  if (q.rows() != f.m || q.cols() != f.m) throw std::invalid_argument("basis change has the wrong size");
  HorizontalField out = f;
  const Matrix qt = q.transpose();
  out.coeff = [coeff = f.coeff, qt](const Matrix& g, double t) { return qt * coeff(g, t); };
  if (f.lie_derivatives)
    out.lie_derivatives = [d = f.lie_derivatives, q, qt](const Matrix& g, double t) { return qt * d(g, t) * q; };
  return out;
}

HorizontalField linear_combination(double a, const HorizontalField& f, double b, const HorizontalField& g) {
  if (f.m != g.m || f.space != g.space) throw std::invalid_argument("fields live on different spaces");
  HorizontalField out;
  out.name = "combination";
  out.space = f.space;
  out.m = f.m;
  out.smoothness_hint = std::min(f.smoothness_hint < 0 ? 1000 : f.smoothness_hint,
                                 g.smoothness_hint < 0 ? 1000 : g.smoothness_hint);
  if (out.smoothness_hint == 1000) out.smoothness_hint = -1;
  out.coeff = [a, b, cf = f.coeff, cg = g.coeff](const Matrix& x, double t) {
    Vector u = cf(x, t);
    const Vector v = cg(x, t);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = a * u[i] + b * v[i];
    return u;
  };
  if (f.lie_derivatives && g.lie_derivatives)
    out.lie_derivatives = [a, b, df = f.lie_derivatives, dg = g.lie_derivatives](const Matrix& x, double t) {
      return a * df(x, t) + b * dg(x, t);
    };
  return out;
}

// --- demo fields --------------------------------------------------------------

HorizontalField constant_field(const SpaceDescriptor& space, Vector u) {
  if (u.size() != space.m_dim()) throw std::invalid_argument("constant field has the wrong dimension");
  const std::size_t m = space.m_dim();
  HorizontalField f;
  f.name = "constant";
  f.space = space.name();
  f.m = m;
  f.coeff = [u = std::move(u)](const Matrix&, double) { return u; };
  f.lie_derivatives = [m](const Matrix&, double) { return Matrix(m, m); };
  return f;
}

HorizontalField open_loop_field(const SpaceDescriptor& space, std::function<Vector(double)> u) {
  const std::size_t m = space.m_dim();
  HorizontalField f;
  f.name = "open-loop";
  f.space = space.name();
  f.m = m;
  f.coeff = [u = std::move(u)](const Matrix&, double t) { return u(t); };
  f.lie_derivatives = [m](const Matrix&, double) { return Matrix(m, m); };
  return f;
}

Vector attitude_demo_input(double t) {
  return {(5.0 - t) / 5.0, 1.0 - (t / 5.0) * (t / 5.0), std::sin(std::numbers::pi * t / 2.0)};
}

HorizontalField linear_field(const SpaceDescriptor& euclidean, Matrix m) {
  if (euclidean.group().kind != GroupKind::Translation)
    throw std::invalid_argument("linear_field needs a Euclidean space");
  const std::size_t n = euclidean.m_dim();
  if (m.rows() != n || m.cols() != n) throw std::invalid_argument("linear_field matrix has the wrong size");
  HorizontalField f;
  f.name = "linear";
  f.space = euclidean.name();
  f.m = n;
  f.coeff = [m, n](const Matrix& g, double) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = g(i, n);
    return m * x;
  };
  f.lie_derivatives = [m](const Matrix&, double) { return m; };
  return f;
}

HorizontalField circle_field(const SpaceDescriptor& circle, std::function<double(double)> fn,
                             std::function<double(double)> dfn, std::string name) {
  if (circle.kind() != SpaceKind::Circle) throw std::invalid_argument("circle_field needs the circle space");
  HorizontalField f;
  f.name = std::move(name);
  f.space = circle.name();
  f.m = 1;
  f.coeff = [fn](const Matrix& g, double) { return Vector{fn(std::atan2(g(1, 0), g(0, 0)))}; };
  if (dfn)
    f.lie_derivatives = [dfn](const Matrix& g, double) {
      return Matrix(1, 1, dfn(std::atan2(g(1, 0), g(0, 0))));
    };
  return f;
}

namespace {

HorizontalField sphere_field(const SpaceDescriptor& sphere, std::string name,
                             std::function<Vector(std::span<const double>)> ambient) {
  if (sphere.kind() != SpaceKind::Sphere2) throw std::invalid_argument("field needs the sphere2 space");
  const auto basis = sphere.dec().m_basis();
  const Vector o = *sphere.base_point();
  HorizontalField f;
  f.name = std::move(name);
  f.space = sphere.name();
  f.m = basis.size();
  f.coeff = [basis, o, ambient = std::move(ambient)](const Matrix& r, double) {
    const Vector p = r * std::span<const double>(o);
    const Vector v = ambient(p);
    Vector x(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) x[i] = dot((r * basis[i]) * std::span<const double>(o), v);
    return x;
  };
  return f;
}

}  // namespace

HorizontalField sphere_height_gradient(const SpaceDescriptor& sphere) {
  const Vector o = sphere.base_point().value_or(Vector{0, 0, 1});
  return sphere_field(sphere, "height-gradient", [o](std::span<const double> p) {
    const double h = dot(o, p);
    return Vector{o[0] - h * p[0], o[1] - h * p[1], o[2] - h * p[2]};
  });
}

HorizontalField sphere_rotation(const SpaceDescriptor& sphere) {
  const Vector o = sphere.base_point().value_or(Vector{0, 0, 1});
  return sphere_field(sphere, "rotation", [o](std::span<const double> p) { return cross3(o, p); });
}

HorizontalField sphere_spiral(const SpaceDescriptor& sphere, double w) {
  HorizontalField f = linear_combination(1.0, sphere_height_gradient(sphere), w, sphere_rotation(sphere));
  f.name = "spiral";
  return f;
}

HorizontalField sphere_nonequivariant(const SpaceDescriptor& sphere) {
  if (sphere.kind() != SpaceKind::Sphere2) throw std::invalid_argument("field needs the sphere2 space");
  HorizontalField f;
  f.name = "nonequivariant";
  f.space = sphere.name();
  f.m = 2;
  f.coeff = [](const Matrix& r, double) { return Vector{r(0, 2), 0.0}; };
  return f;
}

}  // namespace hcontract
