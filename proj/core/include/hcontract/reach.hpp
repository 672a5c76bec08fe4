#pragma once

// Lie-group integration of horizontal lifts, Riemannian distances on the
// shipped spaces, contraction-based reach tubes and their Monte Carlo check.

#include <cstdint>
#include <string>
#include <vector>

#include "hcontract/contraction.hpp"

namespace hcontract {

enum class Integrator { LieEuler, RKMK4 };

std::string to_string(Integrator m);
Integrator integrator_from_string(const std::string& s);

struct Trajectory {
  std::vector<double> times;  ///< times[0] = 0, uniform spacing
  std::vector<Matrix> states;
  Integrator method = Integrator::RKMK4;
  double step_size = 0.0;
  std::string space_id;
};

/// Solves g' = g xi(g, t), xi = x^i(g, t) A_i, from g0 over [0, horizon].
/// The step is horizon / round(horizon / dt). Every update is a right
/// multiplication by expm of an algebra element, so states stay on the group.
Trajectory integrate(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g0, double horizon,
                     double dt, Integrator method = Integrator::RKMK4);

/// max over states of MatrixGroup::constraint_defect; for the sphere also
/// |norm(g o) - 1|.
double max_constraint_drift(const SpaceDescriptor& space, const Trajectory& traj);

struct Distance {
  double value = 0.0;
  bool cut_locus = false;  ///< SO(3): the relative rotation angle is pi
};

/// Riemannian distance between the points represented by p and q.
/// SO(3) bi-invariant: rotation angle of p^T q. Sphere: great-circle angle
/// between p o and q o. Euclidean: norm of the position difference. Circle:
/// wrapped angle difference. Other spaces throw std::invalid_argument.
Distance distance(const SpaceDescriptor& space, const Matrix& p, const Matrix& q);

struct ReachTube {
  Trajectory center;
  double K = 1.0;
  double c = 0.0;
  double r0 = 0.0;
  std::string metric_id;

  /// K e^{c t} r0
  double radius(double t) const;
};

/// Integrates the center and attaches the schedule K e^{c t} r0 with c taken
/// from the certificate. Throws std::invalid_argument on a FAIL certificate.
ReachTube reach_tube(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& g0, double r0,
                     const ContractionCertificate& certificate, double horizon, double dt,
                     Integrator method = Integrator::RKMK4, double K = 1.0);

struct ContainmentReport {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-4;
  /// max over samples and times of d(sample(t), center(t)) - radius(t)
  double max_excess = 0.0;
  /// the same maximum restricted to t >= 1
  double max_excess_after_t1 = 0.0;
  /// max over samples and times of |d(sample(t), center(t)) - d(sample(0), center(0))|
  double max_distance_drift = 0.0;
  bool cut_locus_seen = false;
  std::vector<Vector> initial_coords;          ///< V per sample
  std::vector<std::vector<double>> distances;  ///< per sample, per time index
  bool pass = false;                           ///< max_excess <= tolerance
};

/// Samples g0 expm(V) with V uniform in the r0-ball of m coordinates and
/// integrates each with the tube's method and step. Samples run in parallel.
ContainmentReport monte_carlo_containment(const ReachTube& tube, const HorizontalField& f,
                                          const SpaceDescriptor& space, std::size_t n_samples, std::uint64_t seed,
                                          unsigned threads = 0);

/// Uniform sample from the radius-r ball in R^m.
Vector sample_ball(std::size_t m, double r, std::uint64_t seed, std::size_t index);

}  // namespace hcontract
