#pragma once

// Matrix Lie groups in an explicit embedding, their Lie algebras, and the
// reductive splitting g = h + m of a homogeneous space G/H.

#include <optional>
#include <string>
#include <vector>

#include "hcontract/smallmat.hpp"

namespace hcontract {

/// SO(n) in its defining representation, or R^n as (n+1)x(n+1) unipotent
/// translation matrices [[I, x], [0, 1]].
enum class GroupKind { SpecialOrthogonal, Translation };

struct MatrixGroup {
  GroupKind kind = GroupKind::SpecialOrthogonal;
  std::size_t embed_dim = 3;

  /// Dimension of the Lie algebra.
  std::size_t algebra_dim() const;
  /// True when g satisfies the defining constraint within tol.
  bool contains(const Matrix& g, double tol = 1e-9) const;
  /// Constraint residual: ||g^T g - I||_max + |det g - 1| for SO(n), the
  /// deviation from the unipotent pattern for translations.
  double constraint_defect(const Matrix& g) const;
  Matrix inverse(const Matrix& g) const;
  Matrix identity() const { return Matrix::identity(embed_dim); }
};

std::string to_string(GroupKind kind);
GroupKind group_kind_from_string(const std::string& s);

struct GroupElement {
  Matrix mat;
  GroupKind kind = GroupKind::SpecialOrthogonal;
  std::string space;
};

struct AlgebraElement {
  Matrix mat;
  std::string space;
  std::optional<Vector> coords;
};

/// Coordinates of matrices in a fixed list of basis matrices, computed by
/// least squares in the Frobenius inner product of the embedding.
class BasisCoordinates {
public:
  BasisCoordinates() = default;
  explicit BasisCoordinates(std::vector<Matrix> basis);

  std::size_t size() const noexcept { return basis_.size(); }
  const std::vector<Matrix>& basis() const noexcept { return basis_; }
  Vector coords(const Matrix& x) const;
  Matrix combine(std::span<const double> c) const;
  /// ||x - combine(coords(x))||_max
  double residual(const Matrix& x) const;

private:
  std::vector<Matrix> basis_;
  Matrix projector_;  // (B^T B)^{-1} B^T, size k x N^2
};

/// An inner product on (a subspace of) the Lie algebra: either the scaled
/// trace form scale * tr(X^T Y) / 2, or a Gram matrix on a reference basis.
class InnerProduct {
public:
  static InnerProduct trace_form(double scale = 1.0);
  static InnerProduct from_gram(std::vector<Matrix> reference, Matrix gram);

  double operator()(const Matrix& x, const Matrix& y) const;
  bool is_trace_form() const noexcept { return !gram_.has_value(); }
  double scale() const noexcept { return scale_; }
  const std::optional<Matrix>& gram() const noexcept { return gram_; }
  const BasisCoordinates& reference() const noexcept { return reference_; }

private:
  double scale_ = 1.0;
  std::optional<Matrix> gram_;
  BasisCoordinates reference_;
};

/// Gram-Schmidt (two passes) under `inner`. The first output is parallel to
/// raw[0]. Throws std::invalid_argument on rank deficiency.
std::vector<Matrix> orthonormalize_basis(const std::vector<Matrix>& raw, const InnerProduct& inner);

/// g = h + m with m orthonormal under the metric inner product.
class ReductiveDecomposition {
public:
  /// Validates independence, spanning, and Gram(m_basis) == I within 1e-10.
  /// H is the stabilizer of `base_point` when given, otherwise {e} when
  /// h_basis is empty; with neither, only the group constraint is checked.
  ReductiveDecomposition(MatrixGroup group, std::vector<Matrix> h_basis, std::vector<Matrix> m_basis,
                         InnerProduct metric, std::optional<Vector> base_point = std::nullopt,
                         std::string space_id = {});

  const MatrixGroup& group() const noexcept { return group_; }
  const std::vector<Matrix>& h_basis() const noexcept { return h_basis_; }
  const std::vector<Matrix>& m_basis() const noexcept { return m_basis_; }
  std::size_t m_dim() const noexcept { return m_basis_.size(); }
  std::size_t h_dim() const noexcept { return h_basis_.size(); }
  const InnerProduct& metric() const noexcept { return metric_; }
  const std::optional<Vector>& base_point() const noexcept { return base_point_; }
  const std::string& space_id() const noexcept { return space_id_; }

  /// Coordinates of x in h_basis followed by m_basis.
  Vector split_coords(const Matrix& x) const;
  Vector m_coords(const Matrix& x) const;
  Vector h_coords(const Matrix& x) const;
  Matrix project_m(const Matrix& x) const;
  Matrix project_h(const Matrix& x) const;
  /// sum_i c^i A_i over the m basis.
  Matrix m_combination(std::span<const double> c) const;
  /// <x, y>_m = m_coords(x) . m_coords(y) (the m basis is orthonormal).
  double inner_m(const Matrix& x, const Matrix& y) const;
  /// Distance of x from span(h + m), max-entry norm.
  double algebra_residual(const Matrix& x) const { return split_.residual(x); }

  bool in_isotropy(const Matrix& h, double tol = 1e-9) const;

  /// Same space with a different orthonormal m basis (h unchanged).
  ReductiveDecomposition with_m_basis(std::vector<Matrix> m_basis) const;

private:
  MatrixGroup group_;
  std::vector<Matrix> h_basis_;
  std::vector<Matrix> m_basis_;
  InnerProduct metric_;
  std::optional<Vector> base_point_;
  std::string space_id_;
  BasisCoordinates split_;
};

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x);
/// g X g^{-1} using the group's own inverse.
Matrix adjoint(const MatrixGroup& group, const Matrix& g, const Matrix& x);

AlgebraElement project_m(const AlgebraElement& x, const ReductiveDecomposition& dec);
AlgebraElement project_h(const AlgebraElement& x, const ReductiveDecomposition& dec);

struct AdInvarianceReport {
  double max_leak = 0.0;           ///< max ||project_h(Ad_h A)||_F over samples and m basis
  double max_metric_defect = 0.0;  ///< max |<Ad_h A_i, Ad_h A_j>_m - delta_ij|
  std::size_t samples = 0;
  bool pass = false;  ///< max_leak <= 1e-8
  bool metric_invariant = false;  ///< max_metric_defect <= 1e-8
};

/// Samples must lie in H (throws std::invalid_argument otherwise).
AdInvarianceReport check_ad_invariance(const ReductiveDecomposition& dec,
                                       const std::vector<Matrix>& h_samples);

}  // namespace hcontract
