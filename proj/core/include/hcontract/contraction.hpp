#pragma once

// Matrix measures of frame linearizations, sampled contraction certificates,
// basis-independence checks and the loop obstruction along circular
// one-parameter subgroups generated from m.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcontract/fields.hpp"

namespace hcontract {

/// lambda_max of the symmetric part. The frame is orthonormal, so this is
/// max over unit v of <P v, v>.
double matrix_measure(const Matrix& p);
double matrix_measure(const LinearizationMatrix& p);

/// Sampling description for a region U = { pi(center expm(v^i A_i)) }.
class Region {
public:
  enum class Kind { PolarCap, Box, Ball, Explicit };

  /// m = 2 only: v = theta (cos phi, sin phi), theta = max_angle * a / (n_radial - 1),
  /// phi = 2 pi b / n_angular.
  static Region polar_cap(double max_angle, std::size_t n_radial, std::size_t n_angular, Matrix center);
  /// Tensor grid over [lo, hi] (endpoints included) with `per_axis` points per axis.
  static Region box(Vector lo, Vector hi, std::size_t per_axis, Matrix center);
  /// Halton points in the ball ||v|| <= radius; `seed` offsets the sequence.
  static Region ball(std::size_t dim, double radius, std::size_t count, std::uint64_t seed, Matrix center);
  /// User-supplied generator coordinates, all required to satisfy ||v|| <= radius.
  static Region explicit_points(std::vector<Vector> points, double radius, Matrix center);

  Kind kind() const noexcept { return kind_; }
  const Matrix& center() const noexcept { return center_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t sample_count() const;
  std::vector<Vector> generator_samples() const;
  bool contains(std::span<const double> v) const;
  std::string describe() const;

  double max_angle() const noexcept { return radius_; }
  double radius() const noexcept { return radius_; }
  std::size_t n_radial() const noexcept { return n1_; }
  std::size_t n_angular() const noexcept { return n2_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const Vector& lo() const noexcept { return lo_; }
  const Vector& hi() const noexcept { return hi_; }

private:
  Kind kind_ = Kind::Ball;
  std::size_t dim_ = 0;
  Matrix center_;
  double radius_ = 0.0;
  std::size_t n1_ = 0, n2_ = 0;
  std::uint64_t seed_ = 0;
  Vector lo_, hi_;
  std::vector<Vector> points_;
};

enum class Verdict { Pass, Fail };
std::string to_string(Verdict v);

struct ContractionCertificate {
  std::string space_id;
  std::string field_id;
  std::string region;  ///< Region::describe()
  std::string label = "sampled certificate";
  double rate_c = 0.0;
  double tolerance = 0.0;  ///< verdict slack for finite-difference noise
  double time = 0.0;
  double mu_max = 0.0;
  Matrix mu_argmax;
  std::size_t argmax_index = 0;
  std::size_t samples_evaluated = 0;
  double max_fd_residual = 0.0;
  Verdict verdict = Verdict::Fail;
  std::vector<Vector> sample_coords;  ///< generator coordinates, in evaluation order
  std::vector<double> sample_mu;

  bool nonexpansive_only() const noexcept { return rate_c == 0.0; }
};

struct CertifyOptions {
  FdConfig fd{};
  double time = 0.0;
  /// Verdict slack; negative selects the default: 1e-7 with finite
  /// differences, 0 with analytic derivatives.
  double tolerance = -1.0;
  unsigned threads = 0;
};

/// Evaluates mu(d_A X) at every sample of the region; PASS iff
/// mu_max <= c + tolerance. Ties for the maximum go to the lowest index.
ContractionCertificate certify_region(const HorizontalField& f, const SpaceDescriptor& space, const Region& region,
                                      double c, const CertifyOptions& opt = {});

struct BasisIndependenceReport {
  std::vector<double> mu;  ///< mu in the original basis first, then per trial
  double max_deviation = 0.0;
  bool pass = false;  ///< max_deviation <= 1e-7
};

/// Uniformly random orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Matrix random_orthogonal(std::size_t n, std::uint64_t seed);

/// The basis A'_j = sum_k Q(k, j) A_k of the space's m.
std::vector<Matrix> rotate_m_basis(const SpaceDescriptor& space, const Matrix& q);

BasisIndependenceReport basis_independence_check(const HorizontalField& f, const SpaceDescriptor& space,
                                                 const Matrix& g, std::size_t trials, std::uint64_t seed = 7,
                                                 const FdConfig& fd = {});

/// Smallest T in (0, t_max] with ||expm(T A) - I||_max <= 1e-8: coarse scan
/// with step t_max / 1e4, then bisection on the local minimum.
std::optional<double> find_period(const Matrix& a, double t_max = 100.0);

struct LoopReport {
  Matrix generator;  ///< unit-norm A_1 in m
  Matrix base;       ///< g
  double period = 0.0;
  std::vector<double> t;
  std::vector<double> f;
  double integral = 0.0;
  double integral_half = 0.0;  ///< same quadrature with every other node
  double max_f = 0.0;
  double argmax_t = 0.0;
  std::optional<double> claimed_c;
  /// claimed_c < 0 and max_f <= claimed_c: the samples would certify a
  /// contracting loop, which is impossible for a smooth field
  bool inconsistent = false;
};

struct LoopOptions {
  std::size_t n_quad = 1024;
  double t_max = 100.0;
  std::optional<double> claimed_c;
  FdConfig fd{};
};

/// f(t) = (d_A X)^1_1(g expm(t A_1)) in an orthonormal basis whose first
/// element is A_1, sampled over one period with the composite trapezoid rule.
LoopReport loop_obstruction_check(const HorizontalField& f, const SpaceDescriptor& space, const Matrix& generator,
                                  const Matrix& g, const LoopOptions& opt = {});

/// Orthonormal basis of m with `first` (normalized) as its first element.
std::vector<Matrix> basis_with_first(const SpaceDescriptor& space, const Matrix& first);

}  // namespace hcontract
