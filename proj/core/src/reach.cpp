#include "hcontract/reach.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hcontract/parallel.hpp"

namespace hcontract {

std::string to_string(Integrator m) { return m == Integrator::LieEuler ? "lie-euler" : "rkmk4"; }

Integrator integrator_from_string(const std::string& s) {
  if (s == "lie-euler") return Integrator::LieEuler;
  if (s == "rkmk4") return Integrator::RKMK4;
  throw std::invalid_argument("unknown integrator '" + s + "' (expected lie-euler or rkmk4)");
}

namespace {

Matrix algebra_field(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g, double t,
                     std::size_t step) {
  try {
    return space.dec().m_combination(f.eval(g, t));
  } catch (const NumericalError& e) {
    throw NumericalError("integration step " + std::to_string(step) + ": " + e.what());
  }
}

// Inverse of the left-trivialized dexp, truncated after the third term.
Matrix dexp_inv(const Matrix& u, const Matrix& k) {
  const Matrix uk = commutator(u, k);
  return k + 0.5 * uk + (1.0 / 12.0) * commutator(u, uk);
}

Matrix rkmk4_step(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g, double t, double h,
                  std::size_t step) {
  const Matrix k1 = algebra_field(f, space, g, t, step);
  const Matrix u2 = (0.5 * h) * k1;
  const Matrix k2 = dexp_inv(u2, algebra_field(f, space, g * expm(u2), t + 0.5 * h, step));
  const Matrix u3 = (0.5 * h) * k2;
  const Matrix k3 = dexp_inv(u3, algebra_field(f, space, g * expm(u3), t + 0.5 * h, step));
  const Matrix u4 = h * k3;
  const Matrix k4 = dexp_inv(u4, algebra_field(f, space, g * expm(u4), t + h, step));
  return g * expm((h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

}  // namespace

Trajectory integrate(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g0, double horizon,
                     double dt, Integrator method) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("integrate: horizon must be >= 0");
  if (!space.group().contains(g0, 1e-8)) throw std::invalid_argument("integrate: g0 is not a group element");
  if (f.m != space.m_dim()) throw std::invalid_argument("integrate: field and space dimensions differ");

  const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
  const double h = n == 0 ? 0.0 : horizon / static_cast<double>(n);
  Trajectory traj;
  traj.method = method;
  traj.step_size = n == 0 ? dt : h;
  traj.space_id = space.name();
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(g0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * h;
    const Matrix& g = traj.states.back();
    Matrix next = method == Integrator::LieEuler ? g * expm(h * algebra_field(f, space, g, t, k))
                                                 : rkmk4_step(f, space, g, t, h, k);
    traj.states.push_back(std::move(next));
    traj.times.push_back(static_cast<double>(k + 1) * h);
  }
  return traj;
}

double max_constraint_drift(const SpaceDescriptor& space, const Trajectory& traj) {
  double drift = 0.0;
  for (const auto& g : traj.states) {
    drift = std::max(drift, space.group().constraint_defect(g));
    if (space.kind() == SpaceKind::Sphere2) drift = std::max(drift, std::abs(norm2(project_point(space, g)) - 1.0));
  }
  return drift;
}

Distance distance(const SpaceDescriptor& space, const Matrix& p, const Matrix& q) {
  switch (space.kind()) {
    case SpaceKind::SO3BiInvariant: {
      const RotationLog log = logm_rotation(p.transpose() * q);
      return {log.angle, log.cut_locus};
    }
    case SpaceKind::Sphere2: {
      const Vector a = project_point(space, p), b = project_point(space, q);
      const Vector x{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
      return {std::atan2(norm2(x), dot(a, b)), false};
    }
    case SpaceKind::Euclidean: {
      const std::size_t n = space.m_dim();
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += (p(i, n) - q(i, n)) * (p(i, n) - q(i, n));
      return {std::sqrt(s), false};
    }
    case SpaceKind::Circle: {
      const double a = std::atan2(p(1, 0), p(0, 0)), b = std::atan2(q(1, 0), q(0, 0));
      const double d = std::abs(wrap_angle(b - a));
      return {d, d >= std::numbers::pi - 1e-7};
    }
    default:
      throw std::invalid_argument("no closed-form distance on space '" + space.name() + "'");
  }
}

double ReachTube::radius(double t) const { return K * std::exp(c * t) * r0; }

ReachTube reach_tube(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g0, double r0,
                     const ContractionCertificate& certificate, double horizon, double dt, Integrator method,
                     double K) {
  if (certificate.verdict != Verdict::Pass)
    throw std::invalid_argument("reach_tube: certificate verdict is FAIL, no sound tube exists");
  if (!(r0 >= 0.0)) throw std::invalid_argument("reach_tube: r0 must be >= 0");
  if (!(K >= 1.0)) throw std::invalid_argument("reach_tube: K must be >= 1");
  ReachTube tube;
  tube.center = integrate(f, space, g0, horizon, dt, method);
  tube.K = K;
  tube.c = certificate.rate_c;
  tube.r0 = r0;
  tube.metric_id = space.name();
  return tube;
}

Vector sample_ball(std::size_t m, double r, std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vector v(m);
  double n = 0.0;
  while (!(n > 1e-12)) {
    for (double& x : v) x = normal(rng);
    n = norm2(v);
  }
  const double rho = r * std::pow(uniform(rng), 1.0 / static_cast<double>(m));
  for (double& x : v) x *= rho / n;
  return v;
}

ContainmentReport monte_carlo_containment(const ReachTube& tube, const HorizontalField& f,
                                          const SpaceDescriptor& space, std::size_t n_samples, std::uint64_t seed,
                                          unsigned threads) {
  ContainmentReport rep;
  rep.n_samples = n_samples;
  rep.seed = seed;
  const auto& center = tube.center;
  if (center.states.empty()) throw std::invalid_argument("monte_carlo_containment: empty center trajectory");
  const double horizon = center.times.back();
  const Matrix& g0 = center.states.front();

  rep.initial_coords.resize(n_samples);
  rep.distances.resize(n_samples);
  std::vector<double> excess(n_samples, -INFINITY), excess_late(n_samples, -INFINITY), drift(n_samples, 0.0);
  std::vector<char> cut(n_samples, 0);
  parallel_for(
      n_samples,
      [&](std::size_t s) {
        const Vector v = sample_ball(space.m_dim(), tube.r0, seed, s);
        rep.initial_coords[s] = v;
        const Matrix start = g0 * expm(space.dec().m_combination(v));
        const Trajectory traj = integrate(f, space, start, horizon, center.step_size, center.method);
        if (traj.states.size() != center.states.size())
          throw std::logic_error("sample trajectory length differs from the center");
        auto& d = rep.distances[s];
        d.resize(traj.states.size());
        for (std::size_t k = 0; k < d.size(); ++k) {
          const Distance dist = distance(space, traj.states[k], center.states[k]);
          d[k] = dist.value;
          cut[s] = cut[s] || dist.cut_locus;
          const double e = d[k] - tube.radius(center.times[k]);
          excess[s] = std::max(excess[s], e);
          if (center.times[k] >= 1.0) excess_late[s] = std::max(excess_late[s], e);
          drift[s] = std::max(drift[s], std::abs(d[k] - d[0]));
        }
      },
      threads);

  rep.max_excess = n_samples ? *std::max_element(excess.begin(), excess.end()) : 0.0;
  rep.max_excess_after_t1 = n_samples ? *std::max_element(excess_late.begin(), excess_late.end()) : 0.0;
  rep.max_distance_drift = n_samples ? *std::max_element(drift.begin(), drift.end()) : 0.0;
  rep.cut_locus_seen = std::any_of(cut.begin(), cut.end(), [](char c) { return c != 0; });
  rep.pass = rep.max_excess <= rep.tolerance;
  return rep;
}

}  // namespace hcontract
