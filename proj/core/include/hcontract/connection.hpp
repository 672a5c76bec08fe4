#pragma once

// Invariant Levi-Civita connection of a reductive Riemannian homogeneous
// space, encoded by the bilinear map alpha(X, Y) = [X, Y]_m / 2 + U(X, Y) on m.

#include <vector>

#include "hcontract/liealg.hpp"

namespace hcontract {

/// Three-index array t(i, j, k); for alpha, alpha(A_j, A_k) = t(i, j, k) A_i.
class Tensor3 {
public:
  Tensor3() = default;
  explicit Tensor3(std::size_t dim) : dim_(dim), coeffs_(dim * dim * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return coeffs_[(i * dim_ + j) * dim_ + k];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return coeffs_[(i * dim_ + j) * dim_ + k];
  }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double max_abs() const;

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
  std::size_t dim_ = 0;
  std::vector<double> coeffs_;
};

using AlphaTensor = Tensor3;

/// U^i_{jk} = ( <[A_j, A_i]_m, A_k> + <A_j, [A_k, A_i]_m> ) / 2, symmetric in (j, k).
Tensor3 compute_U(const ReductiveDecomposition& dec);

/// alpha^i_{jk} = coords_i([A_j, A_k]_m) / 2 + U^i_{jk}.
AlphaTensor compute_alpha(const ReductiveDecomposition& dec);

struct SpaceClassification {
  bool is_symmetric = false;
  bool is_naturally_reductive = false;
  double max_U_norm = 0.0;     ///< max |U^i_{jk}|
  double max_mm_h_leak = 0.0;  ///< max ||[A_j, A_k]_m||, how far [m, m] sticks out of h
};

SpaceClassification classify(const ReductiveDecomposition& dec);

struct AlphaInvariantReport {
  /// max |alpha^i_{jk} - alpha^i_{kj} - coords_i([A_j, A_k]_m)|
  double torsion_defect = 0.0;
  /// max |alpha^j_{jk}|, i.e. <alpha(A_j, A_k), A_j>
  double self_orthogonality_defect = 0.0;
  bool pass = false;  ///< both defects <= 1e-10
};

AlphaInvariantReport check_alpha_invariants(const ReductiveDecomposition& dec, const AlphaTensor& alpha);

}  // namespace hcontract
