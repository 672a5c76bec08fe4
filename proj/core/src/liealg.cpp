#include "hcontract/liealg.hpp"

#include <algorithm>
#include <cmath>

namespace hcontract {

namespace {

bool in_algebra(const MatrixGroup& group, const Matrix& x, double tol) {
  const std::size_t n = group.embed_dim;
  if (x.rows() != n || x.cols() != n) return false;
  if (group.kind == GroupKind::SpecialOrthogonal) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        if (std::abs(x(i, j) + x(j, i)) > tol) return false;
    return true;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < n; ++j)
      if (std::abs(x(i, j)) > tol) return false;
  return std::abs(x(n - 1, n - 1)) <= tol;
}

}  // namespace

std::size_t MatrixGroup::algebra_dim() const {
  if (kind == GroupKind::SpecialOrthogonal) return embed_dim * (embed_dim - 1) / 2;
  return embed_dim - 1;
}

double MatrixGroup::constraint_defect(const Matrix& g) const {
  if (g.rows() != embed_dim || g.cols() != embed_dim) return INFINITY;
  if (kind == GroupKind::SpecialOrthogonal)
    return (g.transpose() * g - Matrix::identity(embed_dim)).max_abs() +
           std::abs(determinant(g) - 1.0);
  double d = 0.0;
  for (std::size_t i = 0; i < embed_dim; ++i)
    for (std::size_t j = 0; j + 1 < embed_dim; ++j)
      d = std::max(d, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return std::max(d, std::abs(g(embed_dim - 1, embed_dim - 1) - 1.0));
}

bool MatrixGroup::contains(const Matrix& g, double tol) const {
  return constraint_defect(g) <= tol;
}

Matrix MatrixGroup::inverse(const Matrix& g) const {
  if (g.rows() != embed_dim || g.cols() != embed_dim)
    throw std::invalid_argument("group element has the wrong embedding size");
  if (kind == GroupKind::SpecialOrthogonal) return g.transpose();
  Matrix inv = g;
  for (std::size_t i = 0; i + 1 < embed_dim; ++i) inv(i, embed_dim - 1) = -g(i, embed_dim - 1);
  return inv;
}

std::string to_string(GroupKind kind) {
  return kind == GroupKind::SpecialOrthogonal ? "SO" : "translation";
}

GroupKind group_kind_from_string(const std::string& s) {
  if (s == "SO") return GroupKind::SpecialOrthogonal;
  if (s == "translation") return GroupKind::Translation;
  throw std::invalid_argument("unknown group kind '" + s + "'");
}

// --- BasisCoordinates -------------------------------------------------------

BasisCoordinates::BasisCoordinates(std::vector<Matrix> basis) : basis_(std::move(basis)) {
  const std::size_t k = basis_.size();
  if (k == 0) return;
  const std::size_t rows = basis_[0].rows(), cols = basis_[0].cols();
  for (const auto& b : basis_)
    if (b.rows() != rows || b.cols() != cols)
      throw std::invalid_argument("basis matrices have inconsistent shapes");

  // Independence test by Gram-Schmidt on the flattened matrices.
  std::vector<Vector> q;
  for (const auto& b : basis_) {
    Vector v(b.data().begin(), b.data().end());
    const double n0 = norm2(v);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : q) {
        const double p = dot(v, u);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p * u[i];
      }
    const double n1 = norm2(v);
    if (!(n0 > 0.0) || n1 <= 1e-10 * n0)
      throw std::invalid_argument("basis matrices are linearly dependent");
    for (double& x : v) x /= n1;
    q.push_back(std::move(v));
  }

  Matrix gram(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gram(i, j) = frobenius_inner(basis_[i], basis_[j]);
  const std::size_t flat = rows * cols;
  projector_ = Matrix(k, flat);
  for (std::size_t e = 0; e < flat; ++e) {
    Vector rhs(k);
    for (std::size_t i = 0; i < k; ++i) rhs[i] = basis_[i].data()[e];
    const Vector col = cholesky_solve(gram, rhs);
    for (std::size_t i = 0; i < k; ++i) projector_(i, e) = col[i];
  }
}

Vector BasisCoordinates::coords(const Matrix& x) const {
  if (basis_.empty()) return {};
  if (x.rows() != basis_[0].rows() || x.cols() != basis_[0].cols())
    throw std::invalid_argument("matrix shape does not match the basis");
  return projector_ * x.data();
}

Matrix BasisCoordinates::combine(std::span<const double> c) const {
  if (c.size() != basis_.size()) throw std::invalid_argument("coordinate count does not match basis");
  if (basis_.empty()) throw std::invalid_argument("cannot combine an empty basis");
  Matrix out(basis_[0].rows(), basis_[0].cols());
  for (std::size_t i = 0; i < c.size(); ++i) out += c[i] * basis_[i];
  return out;
}

double BasisCoordinates::residual(const Matrix& x) const {
  if (basis_.empty()) return x.max_abs();
  return (x - combine(coords(x))).max_abs();
}

// --- InnerProduct -------------------------------------------------------------

InnerProduct InnerProduct::trace_form(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("trace-form scale must be positive");
  InnerProduct ip;
  ip.scale_ = scale;
  return ip;
}

InnerProduct InnerProduct::from_gram(std::vector<Matrix> reference, Matrix gram) {
  if (gram.rows() != reference.size() || !gram.square())
    throw std::invalid_argument("Gram matrix size does not match reference basis");
  (void)cholesky(gram);
  InnerProduct ip;
  ip.gram_ = std::move(gram);
  ip.reference_ = BasisCoordinates(std::move(reference));
  return ip;
}

double InnerProduct::operator()(const Matrix& x, const Matrix& y) const {
  if (!gram_) return scale_ * frobenius_inner(x, y) / 2.0;
  if (reference_.residual(x) > 1e-9 || reference_.residual(y) > 1e-9)
    throw std::invalid_argument("inner product argument outside the reference span");
  const Vector cx = reference_.coords(x), cy = reference_.coords(y);
  return dot(cx, *gram_ * cy);
}

std::vector<Matrix> orthonormalize_basis(const std::vector<Matrix>& raw, const InnerProduct& inner) {
  std::vector<Matrix> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    Matrix v = r;
    const double n0 = std::sqrt(std::max(0.0, inner(v, v)));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : out) v -= inner(v, u) * u;
    const double n1 = std::sqrt(std::max(0.0, inner(v, v)));
    if (!(n0 > 0.0) || n1 <= 1e-10 * n0)
      throw std::invalid_argument("orthonormalize_basis: input is rank deficient");
    v *= 1.0 / n1;
    out.push_back(std::move(v));
  }
  return out;
}

// --- ReductiveDecomposition ---------------------------------------------------

ReductiveDecomposition::ReductiveDecomposition(MatrixGroup group, std::vector<Matrix> h_basis,
                                               std::vector<Matrix> m_basis, InnerProduct metric,
                                               std::optional<Vector> base_point, std::string space_id)
    : group_(group),
      h_basis_(std::move(h_basis)),
      m_basis_(std::move(m_basis)),
      metric_(std::move(metric)),
      base_point_(std::move(base_point)),
      space_id_(std::move(space_id)) {
  if (m_basis_.empty()) throw std::invalid_argument("m basis must be non-empty");
  if (h_basis_.size() + m_basis_.size() != group_.algebra_dim())
    throw std::invalid_argument("h and m bases do not span the Lie algebra");
  for (const auto* list : {&h_basis_, &m_basis_})
    for (const auto& x : *list)
      if (!in_algebra(group_, x, 1e-9))
        throw std::invalid_argument("basis element is not in the Lie algebra");
  std::vector<Matrix> all = h_basis_;
  all.insert(all.end(), m_basis_.begin(), m_basis_.end());
  split_ = BasisCoordinates(std::move(all));

  for (std::size_t i = 0; i < m_basis_.size(); ++i)
    for (std::size_t j = 0; j < m_basis_.size(); ++j) {
      const double g = metric_(m_basis_[i], m_basis_[j]);
      if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-10)
        throw std::invalid_argument("m basis is not orthonormal under the metric");
    }
  if (base_point_ && base_point_->size() != group_.embed_dim)
    throw std::invalid_argument("base point has the wrong dimension");
}

Vector ReductiveDecomposition::split_coords(const Matrix& x) const { return split_.coords(x); }

Vector ReductiveDecomposition::m_coords(const Matrix& x) const {
  const Vector c = split_.coords(x);
  return Vector(c.begin() + static_cast<std::ptrdiff_t>(h_basis_.size()), c.end());
}

Vector ReductiveDecomposition::h_coords(const Matrix& x) const {
  const Vector c = split_.coords(x);
  return Vector(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(h_basis_.size()));
}

Matrix ReductiveDecomposition::m_combination(std::span<const double> c) const {
  if (c.size() != m_basis_.size()) throw std::invalid_argument("m coordinate count mismatch");
  Matrix out(group_.embed_dim, group_.embed_dim);
  for (std::size_t i = 0; i < c.size(); ++i) out += c[i] * m_basis_[i];
  return out;
}

Matrix ReductiveDecomposition::project_m(const Matrix& x) const {
  return m_combination(m_coords(x));
}

Matrix ReductiveDecomposition::project_h(const Matrix& x) const {
  const Vector c = h_coords(x);
  Matrix out(group_.embed_dim, group_.embed_dim);
  for (std::size_t i = 0; i < c.size(); ++i) out += c[i] * h_basis_[i];
  return out;
}

double ReductiveDecomposition::inner_m(const Matrix& x, const Matrix& y) const {
  return dot(m_coords(x), m_coords(y));
}

bool ReductiveDecomposition::in_isotropy(const Matrix& h, double tol) const {
  if (!group_.contains(h, tol)) return false;
  if (base_point_) {
    const Vector ho = h * std::span<const double>(*base_point_);
    for (std::size_t i = 0; i < ho.size(); ++i)
      if (std::abs(ho[i] - (*base_point_)[i]) > tol) return false;
    return true;
  }
  if (h_basis_.empty()) return (h - group_.identity()).max_abs() <= tol;
  return true;
}

ReductiveDecomposition ReductiveDecomposition::with_m_basis(std::vector<Matrix> m_basis) const {
  return ReductiveDecomposition(group_, h_basis_, std::move(m_basis), metric_, base_point_, space_id_);
}

// --- algebra operations -------------------------------------------------------

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.space != y.space) throw std::invalid_argument("bracket of elements from different spaces");
  return {commutator(x.mat, y.mat), x.space, std::nullopt};
}

Matrix adjoint(const MatrixGroup& group, const Matrix& g, const Matrix& x) {
  return g * x * group.inverse(g);
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) {
  if (g.space != x.space) throw std::invalid_argument("adjoint of elements from different spaces");
  const MatrixGroup group{g.kind, g.mat.rows()};
  return {adjoint(group, g.mat, x.mat), x.space, std::nullopt};
}

AlgebraElement project_m(const AlgebraElement& x, const ReductiveDecomposition& dec) {
  Vector c = dec.m_coords(x.mat);
  Matrix m = dec.m_combination(c);
  return {std::move(m), x.space, std::move(c)};
}

AlgebraElement project_h(const AlgebraElement& x, const ReductiveDecomposition& dec) {
  Vector c = dec.h_coords(x.mat);
  return {dec.project_h(x.mat), x.space, std::move(c)};
}

AdInvarianceReport check_ad_invariance(const ReductiveDecomposition& dec,
                                       const std::vector<Matrix>& h_samples) {
  AdInvarianceReport rep;
  const auto& m = dec.m_basis();
  for (const auto& h : h_samples) {
    if (!dec.in_isotropy(h))
      throw std::invalid_argument("check_ad_invariance: sample is not in the isotropy group");
    std::vector<Vector> coords;
    for (const auto& a : m) {
      const Matrix y = adjoint(dec.group(), h, a);
      rep.max_leak = std::max(rep.max_leak, dec.project_h(y).frobenius_norm() +
                                                 dec.algebra_residual(y));
      coords.push_back(dec.m_coords(y));
    }
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        rep.max_metric_defect = std::max(
            rep.max_metric_defect, std::abs(dot(coords[i], coords[j]) - (i == j ? 1.0 : 0.0)));
    ++rep.samples;
  }
  rep.pass = rep.max_leak <= 1e-8;
  rep.metric_invariant = rep.max_metric_defect <= 1e-8;
  return rep;
}

}  // namespace hcontract
