#pragma once

// Fields given as tabulated lift coefficients.
//
// CSV layout: a header `g00,g01,...,g{n-1}{n-1},x1,...,xm` followed by one row
// per sample: the group element flattened row-major, then its m coefficients.
// Queries use the nearest sample plus a local linear correction fitted on the
// neighbouring samples in first-order algebra coordinates.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hcontract/fields.hpp"

namespace hcontract {

struct CoefficientTable {
  std::size_t embed_dim = 0;
  std::size_t m = 0;
  std::vector<Matrix> points;
  std::vector<Vector> values;
};

CoefficientTable read_coefficient_table(std::istream& in, std::size_t embed_dim, std::size_t m);
CoefficientTable load_coefficient_table(const std::filesystem::path& path, const SpaceDescriptor& space);
void write_coefficient_table(std::ostream& out, const CoefficientTable& table);

/// Samples `f` at the given points (t = 0).
CoefficientTable tabulate(const HorizontalField& f, const std::vector<Matrix>& points);

/// Interpolating field; `neighbors` = 0 picks 2 * dim(g) + 1.
HorizontalField table_field(const SpaceDescriptor& space, CoefficientTable table, std::size_t neighbors = 0);

}  // namespace hcontract
