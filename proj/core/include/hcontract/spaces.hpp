#pragma once

// Built-in reductive Riemannian homogeneous spaces.

#include <optional>
#include <string>
#include <vector>

#include "hcontract/connection.hpp"
#include "hcontract/liealg.hpp"

namespace hcontract {

enum class SpaceKind { Euclidean, Circle, Sphere2, SO3BiInvariant, SO3LeftInvariant, Custom };

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& s);

/// Immutable description of (G, H, <.,.>_m): decomposition, cached alpha
/// tensor and classification.
class SpaceDescriptor {
public:
  /// Computes alpha and the classification from the decomposition.
  SpaceDescriptor(std::string name, SpaceKind kind, ReductiveDecomposition dec);
  /// Uses a stored alpha after checking it against the recomputed one (1e-10).
  SpaceDescriptor(std::string name, SpaceKind kind, ReductiveDecomposition dec, AlphaTensor stored_alpha);

  const std::string& name() const noexcept { return name_; }
  SpaceKind kind() const noexcept { return kind_; }
  const ReductiveDecomposition& dec() const noexcept { return dec_; }
  const MatrixGroup& group() const noexcept { return dec_.group(); }
  const AlphaTensor& alpha() const noexcept { return alpha_; }
  const SpaceClassification& classification() const noexcept { return classification_; }
  std::size_t m_dim() const noexcept { return dec_.m_dim(); }
  const std::optional<Vector>& base_point() const noexcept { return dec_.base_point(); }

  /// Deterministic elements of H: {e} when H is trivial, otherwise 16 angles
  /// per isotropy generator (golden-ratio multiples of 2 pi).
  std::vector<Matrix> h_samples() const;

  /// The same space with another orthonormal m basis; alpha is recomputed.
  SpaceDescriptor with_m_basis(std::vector<Matrix> m_basis) const;

  GroupElement element(Matrix g) const;
  AlgebraElement algebra(Matrix x) const;

private:
  std::string name_;
  SpaceKind kind_;
  ReductiveDecomposition dec_;
  AlphaTensor alpha_;
  SpaceClassification classification_;
};

/// A_X, A_Y, A_Z: infinitesimal rotations about the x, y, z axes.
std::vector<Matrix> so3_basis();
/// [[0, -1], [1, 0]]
Matrix so2_generator();

/// R^n as translations, H = {e}, standard metric.
SpaceDescriptor make_euclidean(int n);
/// SO(2) with H = {e}, unit generator.
SpaceDescriptor make_circle();
/// S^2 = SO(3)/SO(2), o = (0, 0, 1), m = span(A_X, A_Y), h = span(A_Z), tr(X^T Y)/2.
SpaceDescriptor make_sphere2();
/// SO(3) with the bi-invariant metric tr(X^T Y)/2, H = {e}.
SpaceDescriptor make_so3_biinvariant();
/// SO(3) with the left-invariant metric whose Gram on (A_X, A_Y, A_Z) is
/// diag(d); the m basis is re-orthonormalized.
SpaceDescriptor make_so3_left_invariant(std::span<const double> gram_diag);

/// Parses "sphere2", "so3", "circle", "euclidean:N", "so3-left:a,b,c".
SpaceDescriptor make_space(const std::string& spec);

/// g A_i o: the i-th frame direction pushed to the embedded orbit at g o.
Vector tangent_action(const SpaceDescriptor& space, const Matrix& g, std::size_t i);

/// g o for spaces with an embedded base point.
Vector project_point(const SpaceDescriptor& space, const Matrix& g);

}  // namespace hcontract
