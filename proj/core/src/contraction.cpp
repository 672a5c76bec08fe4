#include "hcontract/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hcontract/parallel.hpp"

namespace hcontract {

double matrix_measure(const Matrix& p) { return sym_eig_max(p).lambda_max; }

double matrix_measure(const LinearizationMatrix& p) { return matrix_measure(p.mat); }

std::string to_string(Verdict v) { return v == Verdict::Pass ? "PASS" : "FAIL"; }

// --- Region ---------------------------------------------------------------------

Region Region::polar_cap(double max_angle, std::size_t n_radial, std::size_t n_angular, Matrix center) {
  if (!(max_angle >= 0.0) || n_radial < 2 || n_angular < 1)
    throw std::invalid_argument("polar cap needs max_angle >= 0, n_radial >= 2, n_angular >= 1");
  Region r;
  r.kind_ = Kind::PolarCap;
  r.dim_ = 2;
  r.radius_ = max_angle;
  r.n1_ = n_radial;
  r.n2_ = n_angular;
  r.center_ = std::move(center);
  return r;
}

Region Region::box(Vector lo, Vector hi, std::size_t per_axis, Matrix center) {
  if (lo.size() != hi.size() || lo.empty() || per_axis < 1)
    throw std::invalid_argument("box region needs matching non-empty bounds and per_axis >= 1");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw std::invalid_argument("box region has lo > hi");
  Region r;
  r.kind_ = Kind::Box;
  r.dim_ = lo.size();
  r.lo_ = std::move(lo);
  r.hi_ = std::move(hi);
  r.n1_ = per_axis;
  r.center_ = std::move(center);
  return r;
}

Region Region::ball(std::size_t dim, double radius, std::size_t count, std::uint64_t seed, Matrix center) {
  if (dim == 0 || dim > 6 || !(radius >= 0.0) || count == 0)
    throw std::invalid_argument("ball region needs 1 <= dim <= 6, radius >= 0, count >= 1");
  Region r;
  r.kind_ = Kind::Ball;
  r.dim_ = dim;
  r.radius_ = radius;
  r.n1_ = count;
  r.seed_ = seed;
  r.center_ = std::move(center);
  return r;
}

Region Region::explicit_points(std::vector<Vector> points, double radius, Matrix center) {
  if (points.empty()) throw std::invalid_argument("explicit region needs at least one point");
  Region r;
  r.kind_ = Kind::Explicit;
  r.dim_ = points[0].size();
  r.radius_ = radius;
  r.points_ = std::move(points);
  r.center_ = std::move(center);
  return r;
}

std::size_t Region::sample_count() const {
  switch (kind_) {
    case Kind::PolarCap: return n1_ * n2_;
    case Kind::Box: {
      std::size_t n = 1;
      for (std::size_t i = 0; i < dim_; ++i) n *= n1_;
      return n;
    }
    case Kind::Ball: return n1_;
    case Kind::Explicit: return points_.size();
  }
  return 0;
}

namespace {

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13};

}  // namespace

std::vector<Vector> Region::generator_samples() const {
  std::vector<Vector> out;
  out.reserve(sample_count());
  switch (kind_) {
    case Kind::PolarCap:
      for (std::size_t a = 0; a < n1_; ++a) {
        const double theta = radius_ * static_cast<double>(a) / static_cast<double>(n1_ - 1);
        for (std::size_t b = 0; b < n2_; ++b) {
          const double phi = 2.0 * std::numbers::pi * static_cast<double>(b) / static_cast<double>(n2_);
          out.push_back({theta * std::cos(phi), theta * std::sin(phi)});
        }
      }
      break;
    case Kind::Box: {
      const std::size_t total = sample_count();
      for (std::size_t idx = 0; idx < total; ++idx) {
        Vector v(dim_);
        std::size_t rem = idx;
        for (std::size_t i = 0; i < dim_; ++i) {
          const std::size_t k = rem % n1_;
          rem /= n1_;
          v[i] = n1_ == 1 ? 0.5 * (lo_[i] + hi_[i])
                          : lo_[i] + (hi_[i] - lo_[i]) * static_cast<double>(k) / static_cast<double>(n1_ - 1);
        }
        out.push_back(std::move(v));
      }
      break;
    }
    case Kind::Ball: {
      std::uint64_t index = seed_ + 1;
      while (out.size() < n1_) {
        Vector v(dim_);
        for (std::size_t i = 0; i < dim_; ++i) v[i] = radius_ * (2.0 * radical_inverse(index, kPrimes[i]) - 1.0);
        ++index;
        if (norm2(v) <= radius_) out.push_back(std::move(v));
      }
      break;
    }
    case Kind::Explicit:
      out = points_;
      break;
  }
  return out;
}

bool Region::contains(std::span<const double> v) const {
  if (v.size() != dim_) return false;
  switch (kind_) {
    case Kind::Box:
      for (std::size_t i = 0; i < dim_; ++i) {
        const double slack = 1e-12 * std::max(1.0, std::abs(hi_[i] - lo_[i]));
        if (v[i] < lo_[i] - slack || v[i] > hi_[i] + slack) return false;
      }
      return true;
    default:
      return norm2(v) <= radius_ * (1.0 + 1e-12) + 1e-15;
  }
}

std::string Region::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::PolarCap:
      os << "polar-cap(max_angle=" << radius_ << ", n_radial=" << n1_ << ", n_angular=" << n2_ << ")";
      break;
    case Kind::Box:
      os << "box(dim=" << dim_ << ", per_axis=" << n1_ << ")";
      break;
    case Kind::Ball:
      os << "ball(dim=" << dim_ << ", radius=" << radius_ << ", count=" << n1_ << ", seed=" << seed_ << ")";
      break;
    case Kind::Explicit:
      os << "explicit(count=" << points_.size() << ", radius=" << radius_ << ")";
      break;
  }
  return os.str();
}

// --- certification ------------------------------------------------------------

ContractionCertificate certify_region(const HorizontalField& f, const SpaceDescriptor& space, const Region& region,
                                      double c, const CertifyOptions& opt) {
  if (!std::isfinite(c)) throw std::invalid_argument("rate c must be finite");
  if (region.dim() != space.m_dim()) throw std::invalid_argument("region dimension does not match dim m");
  if (!space.group().contains(region.center(), 1e-9))
    throw std::invalid_argument("region center is not a group element");

  ContractionCertificate cert;
  cert.space_id = space.name();
  cert.field_id = f.name;
  cert.region = region.describe();
  cert.rate_c = c;
  cert.time = opt.time;
  const bool analytic = f.has_analytic_derivatives() && opt.fd.use_analytic;
  cert.tolerance = opt.tolerance >= 0.0 ? opt.tolerance : (analytic ? 0.0 : 1e-7);

  cert.sample_coords = region.generator_samples();
  for (const auto& v : cert.sample_coords)
    if (!region.contains(v)) throw std::invalid_argument("region sampler produced a point outside the region");

  const std::size_t n = cert.sample_coords.size();
  cert.sample_mu.assign(n, 0.0);
  std::vector<double> residual(n, 0.0);
  std::vector<Matrix> points(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        points[i] = region.center() * expm(space.dec().m_combination(cert.sample_coords[i]));
        const auto lin = linearize(f, space, points[i], opt.fd, opt.time);
        cert.sample_mu[i] = matrix_measure(lin);
        residual[i] = lin.fd_residual;
      },
      opt.threads);

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (cert.sample_mu[i] > cert.sample_mu[best]) best = i;
  cert.argmax_index = best;
  cert.mu_max = cert.sample_mu[best];
  cert.mu_argmax = points[best];
  cert.samples_evaluated = n;
  cert.max_fd_residual = *std::max_element(residual.begin(), residual.end());
  cert.verdict = cert.mu_max <= c + cert.tolerance ? Verdict::Pass : Verdict::Fail;
  return cert;
}

// --- basis independence -------------------------------------------------------

Matrix random_orthogonal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> cols;
  while (cols.size() < n) {
    Vector v(n);
    for (double& x : v) x = normal(rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : cols) {
        const double p = dot(v, u);
        for (std::size_t i = 0; i < n; ++i) v[i] -= p * u[i];
      }
    const double nv = norm2(v);
    if (nv < 1e-8) continue;
    for (double& x : v) x /= nv;
    cols.push_back(std::move(v));
  }
  Matrix q(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) q(i, j) = cols[j][i];
  return q;
}

std::vector<Matrix> rotate_m_basis(const SpaceDescriptor& space, const Matrix& q) {
  const auto& a = space.dec().m_basis();
  if (q.rows() != a.size() || q.cols() != a.size()) throw std::invalid_argument("basis change has the wrong size");
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < a.size(); ++j) out.push_back(space.dec().m_combination(q.col(j)));
  return out;
}

BasisIndependenceReport basis_independence_check(const HorizontalField& f, const SpaceDescriptor& space,
                                                 const Matrix& g, std::size_t trials, std::uint64_t seed,
                                                 const FdConfig& fd) {
  BasisIndependenceReport rep;
  rep.mu.push_back(matrix_measure(linearize(f, space, g, fd)));
  for (std::size_t k = 0; k < trials; ++k) {
    const Matrix q = random_orthogonal(space.m_dim(), seed + k);
    const SpaceDescriptor rotated = space.with_m_basis(rotate_m_basis(space, q));
    rep.mu.push_back(matrix_measure(linearize(change_basis(f, q), rotated, g, fd)));
  }
  const auto [lo, hi] = std::minmax_element(rep.mu.begin(), rep.mu.end());
  rep.max_deviation = *hi - *lo;
  rep.pass = rep.max_deviation <= 1e-7;
  return rep;
}

// --- loops ----------------------------------------------------------------------

std::optional<double> find_period(const Matrix& a, double t_max) {
  if (!a.square()) throw std::invalid_argument("find_period needs a square generator");
  if (a.max_abs() == 0.0) throw std::invalid_argument("find_period: generator is zero");
  if (!(t_max > 0.0)) throw std::invalid_argument("find_period: t_max must be positive");
  const Matrix eye = Matrix::identity(a.rows());
  auto phi = [&](double t) { return (expm(a * t) - eye).max_abs(); };

  constexpr int kScan = 10000;
  const double step = t_max / kScan;
  const double gate = 2.0 * step * a.norm1();
  double prev = phi(0.0), cur = phi(step);
  for (int k = 1; k <= kScan; ++k) {
    const double next = k < kScan ? phi((k + 1) * step) : INFINITY;
    if (prev > cur && cur <= next && cur <= gate) {
      // Bisection on the sign of the slope inside [t_{k-1}, t_{k+1}].
      double lo = (k - 1) * step, hi = std::min((k + 1) * step, t_max);
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double d = 1e-3 * (hi - lo);
        if (phi(mid + d) < phi(mid - d))
          lo = mid;
        else
          hi = mid;
      }
      const double t = 0.5 * (lo + hi);
      if (phi(t) <= 1e-8) return t;
    }
    prev = cur;
    cur = next;
  }
  return std::nullopt;
}

std::vector<Matrix> basis_with_first(const SpaceDescriptor& space, const Matrix& first) {
  const auto& dec = space.dec();
  const double scale = std::max(1.0, first.max_abs());
  if (dec.algebra_residual(first) > 1e-9 * scale || dec.project_h(first).max_abs() > 1e-9 * scale)
    throw std::invalid_argument("loop generator is not an element of m");
  const double n = std::sqrt(dec.inner_m(first, first));
  if (!(n > 0.0)) throw std::invalid_argument("loop generator is zero");

  std::vector<Matrix> out{first * (1.0 / n)};
  for (const auto& a : dec.m_basis()) {
    if (out.size() == dec.m_dim()) break;
    Matrix v = a;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : out) v -= dec.inner_m(v, u) * u;
    const double nv = std::sqrt(dec.inner_m(v, v));
    if (nv < 1e-8) continue;
    out.push_back(v * (1.0 / nv));
  }
  return out;
}

LoopReport loop_obstruction_check(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& generator,
                                  const Matrix& g, const LoopOptions& opt) {
  if (opt.n_quad < 2) throw std::invalid_argument("loop quadrature needs n_quad >= 2");
  const auto basis = basis_with_first(space, generator);
  const auto period = find_period(basis[0], opt.t_max);
  if (!period) throw std::invalid_argument("loop generator has no period within t_max");

  Matrix q(space.m_dim(), space.m_dim());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const Vector c = space.dec().m_coords(basis[j]);
    for (std::size_t k = 0; k < c.size(); ++k) q(k, j) = c[k];
  }
  const SpaceDescriptor rotated = space.with_m_basis(basis);
  const HorizontalField rf = change_basis(f, q);

  LoopReport rep;
  rep.generator = basis[0];
  rep.base = g;
  rep.period = *period;
  rep.claimed_c = opt.claimed_c;
  const std::size_t n = opt.n_quad;
  rep.t.resize(n);
  rep.f.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const double t = rep.period * static_cast<double>(k) / static_cast<double>(n);
    rep.t[k] = t;
    rep.f[k] = linearize(rf, rotated, g * expm(basis[0] * t), opt.fd).mat(0, 0);
  });

  double sum = 0.0, sum_even = 0.0;
  std::size_t best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += rep.f[k];
    if (k % 2 == 0) sum_even += rep.f[k];
    if (rep.f[k] > rep.f[best]) best = k;
  }
  rep.integral = sum * rep.period / static_cast<double>(n);
  rep.integral_half = sum_even * rep.period / static_cast<double>((n + 1) / 2);
  rep.max_f = rep.f[best];
  rep.argmax_t = rep.t[best];
  rep.inconsistent = opt.claimed_c && *opt.claimed_c < 0.0 && rep.max_f <= *opt.claimed_c;
  return rep;
}

}  // namespace hcontract
