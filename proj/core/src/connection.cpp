#include "hcontract/connection.hpp"

#include <algorithm>
#include <cmath>

namespace hcontract {

namespace {

// brackets[a][b] = m-coordinates of [A_a, A_b]_m
std::vector<std::vector<Vector>> bracket_table(const ReductiveDecomposition& dec) {
  const auto& m = dec.m_basis();
  std::vector<std::vector<Vector>> t(m.size(), std::vector<Vector>(m.size()));
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b) t[a][b] = dec.m_coords(commutator(m[a], m[b]));
  return t;
}

}  // namespace

double Tensor3::max_abs() const {
  double best = 0.0;
  for (double x : coeffs_) best = std::max(best, std::abs(x));
  return best;
}

Tensor3 compute_U(const ReductiveDecomposition& dec) {
  const std::size_t m = dec.m_dim();
  const auto c = bracket_table(dec);
  Tensor3 u(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) u(i, j, k) = 0.5 * (c[j][i][k] + c[k][i][j]);
  return u;
}

AlphaTensor compute_alpha(const ReductiveDecomposition& dec) {
  const std::size_t m = dec.m_dim();
  const auto c = bracket_table(dec);
  const Tensor3 u = compute_U(dec);
  AlphaTensor alpha(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) alpha(i, j, k) = 0.5 * c[j][k][i] + u(i, j, k);
  return alpha;
}

SpaceClassification classify(const ReductiveDecomposition& dec) {
  SpaceClassification out;
  out.max_U_norm = compute_U(dec).max_abs();
  for (const auto& row : bracket_table(dec))
    for (const auto& v : row) out.max_mm_h_leak = std::max(out.max_mm_h_leak, norm2(v));
  out.is_naturally_reductive = out.max_U_norm <= 1e-10;
  out.is_symmetric = out.max_mm_h_leak <= 1e-10;
  return out;
}

AlphaInvariantReport check_alpha_invariants(const ReductiveDecomposition& dec, const AlphaTensor& alpha) {
  const std::size_t m = dec.m_dim();
  if (alpha.dim() != m) throw std::invalid_argument("alpha tensor dimension does not match space");
  const auto c = bracket_table(dec);
  AlphaInvariantReport rep;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        rep.torsion_defect = std::max(
            rep.torsion_defect, std::abs(alpha(i, j, k) - alpha(i, k, j) - c[j][k][i]));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      rep.self_orthogonality_defect = std::max(rep.self_orthogonality_defect, std::abs(alpha(j, j, k)));
  rep.pass = rep.torsion_defect <= 1e-10 && rep.self_orthogonality_defect <= 1e-10;
  return rep;
}

}  // namespace hcontract
