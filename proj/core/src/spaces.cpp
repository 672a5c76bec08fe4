#include "hcontract/spaces.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hcontract {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Euclidean: return "euclidean";
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Sphere2: return "sphere2";
    case SpaceKind::SO3BiInvariant: return "so3";
    case SpaceKind::SO3LeftInvariant: return "so3-left";
    case SpaceKind::Custom: return "custom";
  }
  return "custom";
}

SpaceKind space_kind_from_string(const std::string& s) {
  for (auto k : {SpaceKind::Euclidean, SpaceKind::Circle, SpaceKind::Sphere2, SpaceKind::SO3BiInvariant,
                 SpaceKind::SO3LeftInvariant, SpaceKind::Custom})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown space kind '" + s + "'");
}

SpaceDescriptor::SpaceDescriptor(std::string name, SpaceKind kind, ReductiveDecomposition dec)
    : name_(std::move(name)),
      kind_(kind),
      dec_(std::move(dec)),
      alpha_(compute_alpha(dec_)),
      classification_(classify(dec_)) {
  const auto inv = check_alpha_invariants(dec_, alpha_);
  if (!inv.pass) throw NumericalError("alpha tensor violates torsion/self-orthogonality identities");
}

SpaceDescriptor::SpaceDescriptor(std::string name, SpaceKind kind, ReductiveDecomposition dec,
                                 AlphaTensor stored_alpha)
    : SpaceDescriptor(std::move(name), kind, std::move(dec)) {
  if (stored_alpha.dim() != alpha_.dim())
    throw std::invalid_argument("stored alpha tensor has the wrong dimension");
  for (std::size_t n = 0; n < alpha_.coeffs().size(); ++n)
    if (std::abs(stored_alpha.coeffs()[n] - alpha_.coeffs()[n]) > 1e-10)
      throw std::invalid_argument("stored alpha tensor disagrees with the bracket structure");
  alpha_ = std::move(stored_alpha);
}

std::vector<Matrix> SpaceDescriptor::h_samples() const {
  const auto& h = dec_.h_basis();
  if (h.empty()) return {group().identity()};
  constexpr double golden = 0.6180339887498949;
  std::vector<Matrix> out;
  out.reserve(16);
  for (int k = 0; k < 16; ++k) {
    Matrix x(group().embed_dim, group().embed_dim);
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double frac = std::fmod((k + 1) * golden * std::sqrt(static_cast<double>(i + 2)), 1.0);
      x += (2.0 * std::numbers::pi * frac) * h[i];
    }
    out.push_back(expm(x));
  }
  return out;
}

SpaceDescriptor SpaceDescriptor::with_m_basis(std::vector<Matrix> m_basis) const {
  return SpaceDescriptor(name_, kind_, dec_.with_m_basis(std::move(m_basis)));
}

GroupElement SpaceDescriptor::element(Matrix g) const {
  if (!group().contains(g, 1e-9)) throw std::invalid_argument("matrix is not an element of " + name_);
  return {std::move(g), group().kind, name_};
}

AlgebraElement SpaceDescriptor::algebra(Matrix x) const {
  if (dec_.algebra_residual(x) > 1e-9) throw std::invalid_argument("matrix is not in the Lie algebra of " + name_);
  Vector c = dec_.split_coords(x);
  return {std::move(x), name_, std::move(c)};
}

std::vector<Matrix> so3_basis() {
  return {Matrix{{0, 0, 0}, {0, 0, -1}, {0, 1, 0}},
          Matrix{{0, 0, 1}, {0, 0, 0}, {-1, 0, 0}},
          Matrix{{0, -1, 0}, {1, 0, 0}, {0, 0, 0}}};
}

Matrix so2_generator() { return Matrix{{0, -1}, {1, 0}}; }

SpaceDescriptor make_euclidean(int n) {
  if (n < 1) throw std::invalid_argument("make_euclidean: n must be >= 1");
  const auto dim = static_cast<std::size_t>(n);
  const MatrixGroup group{GroupKind::Translation, dim + 1};
  std::vector<Matrix> m;
  for (std::size_t i = 0; i < dim; ++i) {
    Matrix e(dim + 1, dim + 1);
    e(i, dim) = 1.0;
    m.push_back(std::move(e));
  }
  Vector origin(dim + 1, 0.0);
  origin[dim] = 1.0;
  const std::string name = "euclidean:" + std::to_string(n);
  // scale 2 turns tr(X^T Y)/2 into the standard dot product on translations
  return SpaceDescriptor(name, SpaceKind::Euclidean,
                         ReductiveDecomposition(group, {}, std::move(m), InnerProduct::trace_form(2.0),
                                                std::move(origin), name));
}

SpaceDescriptor make_circle() {
  const MatrixGroup group{GroupKind::SpecialOrthogonal, 2};
  return SpaceDescriptor("circle", SpaceKind::Circle,
                         ReductiveDecomposition(group, {}, {so2_generator()}, InnerProduct::trace_form(),
                                                std::nullopt, "circle"));
}

SpaceDescriptor make_sphere2() {
  const auto b = so3_basis();
  const MatrixGroup group{GroupKind::SpecialOrthogonal, 3};
  return SpaceDescriptor("sphere2", SpaceKind::Sphere2,
                         ReductiveDecomposition(group, {b[2]}, {b[0], b[1]}, InnerProduct::trace_form(),
                                                Vector{0.0, 0.0, 1.0}, "sphere2"));
}

SpaceDescriptor make_so3_biinvariant() {
  const MatrixGroup group{GroupKind::SpecialOrthogonal, 3};
  return SpaceDescriptor("so3", SpaceKind::SO3BiInvariant,
                         ReductiveDecomposition(group, {}, so3_basis(), InnerProduct::trace_form(),
                                                std::nullopt, "so3"));
}

SpaceDescriptor make_so3_left_invariant(std::span<const double> gram_diag) {
  if (gram_diag.size() != 3) throw std::invalid_argument("so3-left expects three Gram entries");
  const auto raw = so3_basis();
  const InnerProduct metric = InnerProduct::from_gram(raw, Matrix::diagonal(gram_diag));
  auto m = orthonormalize_basis(raw, metric);
  std::ostringstream name;
  name.precision(17);
  name << "so3-left:" << gram_diag[0] << ',' << gram_diag[1] << ',' << gram_diag[2];
  const MatrixGroup group{GroupKind::SpecialOrthogonal, 3};
  return SpaceDescriptor(name.str(), SpaceKind::SO3LeftInvariant,
                         ReductiveDecomposition(group, {}, std::move(m), metric, std::nullopt, name.str()));
}

SpaceDescriptor make_space(const std::string& spec) {
  if (spec == "sphere2") return make_sphere2();
  if (spec == "so3") return make_so3_biinvariant();
  if (spec == "circle") return make_circle();
  if (spec.rfind("euclidean:", 0) == 0) return make_euclidean(std::stoi(spec.substr(10)));
  if (spec.rfind("so3-left:", 0) == 0) {
    Vector d;
    std::stringstream ss(spec.substr(9));
    std::string tok;
    while (std::getline(ss, tok, ',')) d.push_back(std::stod(tok));
    return make_so3_left_invariant(d);
  }
  throw std::invalid_argument("unknown space '" + spec + "'");
}

Vector project_point(const SpaceDescriptor& space, const Matrix& g) {
  if (!space.base_point()) throw std::invalid_argument("space " + space.name() + " has no embedded base point");
  return g * std::span<const double>(*space.base_point());
}

Vector tangent_action(const SpaceDescriptor& space, const Matrix& g, std::size_t i) {
  if (!space.base_point()) throw std::invalid_argument("space " + space.name() + " has no embedded base point");
  if (i >= space.m_dim()) throw std::invalid_argument("frame index out of range");
  return (g * space.dec().m_basis()[i]) * std::span<const double>(*space.base_point());
}

}  // namespace hcontract
