#include "hcontract/table_field.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

namespace hcontract {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t\r");
    const auto e = tok.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : tok.substr(b, e - b + 1));
  }
  return out;
}

std::vector<std::string> expected_header(std::size_t n, std::size_t m) {
  std::vector<std::string> h;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) h.push_back("g" + std::to_string(r) + std::to_string(c));
  for (std::size_t i = 1; i <= m; ++i) h.push_back("x" + std::to_string(i));
  return h;
}

}  // namespace

CoefficientTable read_coefficient_table(std::istream& in, std::size_t embed_dim, std::size_t m) {
  CoefficientTable table{embed_dim, m, {}, {}};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("coefficient table is empty");
  if (split_csv(line) != expected_header(embed_dim, m))
    throw std::invalid_argument("coefficient table header does not match g00..g" + std::to_string(embed_dim - 1) +
                                std::to_string(embed_dim - 1) + ",x1..x" + std::to_string(m));
  const std::size_t width = embed_dim * embed_dim + m;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto tok = split_csv(line);
    if (tok.size() != width)
      throw std::invalid_argument("coefficient table line " + std::to_string(lineno) + " has " +
                                  std::to_string(tok.size()) + " fields, expected " + std::to_string(width));
    std::vector<double> vals(width);
    for (std::size_t i = 0; i < width; ++i) {
      std::size_t used = 0;
      try {
        vals[i] = std::stod(tok[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != tok[i].size())
        throw std::invalid_argument("coefficient table line " + std::to_string(lineno) + ": bad number '" +
                                    tok[i] + "'");
    }
    table.points.emplace_back(embed_dim, embed_dim,
                              std::vector<double>(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(embed_dim * embed_dim)));
    table.values.emplace_back(vals.begin() + static_cast<std::ptrdiff_t>(embed_dim * embed_dim), vals.end());
  }
  if (table.points.empty()) throw std::invalid_argument("coefficient table has no rows");
  return table;
}

CoefficientTable load_coefficient_table(const std::filesystem::path& path, const SpaceDescriptor& space) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open coefficient table " + path.string());
  CoefficientTable t = read_coefficient_table(in, space.group().embed_dim, space.m_dim());
  for (const auto& g : t.points)
    if (!space.group().contains(g, 1e-6))
      throw std::invalid_argument("coefficient table row is not an element of " + space.name());
  return t;
}

void write_coefficient_table(std::ostream& out, const CoefficientTable& table) {
  const auto header = expected_header(table.embed_dim, table.m);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  out.precision(17);
  for (std::size_t r = 0; r < table.points.size(); ++r) {
    bool first = true;
    for (double v : table.points[r].data()) {
      out << (first ? "" : ",") << v;
      first = false;
    }
    for (double v : table.values[r]) out << ',' << v;
    out << '\n';
  }
}

CoefficientTable tabulate(const HorizontalField& f, const std::vector<Matrix>& points) {
  if (points.empty()) throw std::invalid_argument("tabulate needs at least one point");
  CoefficientTable t{points[0].rows(), f.m, points, {}};
  for (const auto& g : points) t.values.push_back(f.eval(g));
  return t;
}

HorizontalField table_field(const SpaceDescriptor& space, CoefficientTable table, std::size_t neighbors) {
  if (table.embed_dim != space.group().embed_dim || table.m != space.m_dim())
    throw std::invalid_argument("coefficient table does not match the space");
  const std::size_t d = space.group().algebra_dim();
  if (neighbors == 0) neighbors = 2 * d + 1;
  auto shared = std::make_shared<const CoefficientTable>(std::move(table));
  const ReductiveDecomposition dec = space.dec();

  HorizontalField f;
  f.name = "table";
  f.space = space.name();
  f.m = space.m_dim();
  f.smoothness_hint = 1;
  f.coeff = [shared, dec, d, neighbors](const Matrix& g, double) {
    const auto& t = *shared;
    const std::size_t n = t.points.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = (t.points[i] - g).frobenius_norm();
    const std::size_t k = std::min(neighbors, n);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });
    const std::size_t nn = order[0];
    Vector x = t.values[nn];
    if (k < 2) return x;

    // First-order algebra coordinates relative to the nearest sample.
    const Matrix inv = dec.group().inverse(t.points[nn]);
    const Matrix eye = dec.group().identity();
    auto local = [&](const Matrix& h) { return dec.split_coords(inv * h - eye); };

    Matrix ata(d, d);
    std::vector<Vector> atb(t.m, Vector(d, 0.0));
    for (std::size_t r = 1; r < k; ++r) {
      const std::size_t s = order[r];
      const Vector delta = local(t.points[s]);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) ata(a, b) += delta[a] * delta[b];
      for (std::size_t i = 0; i < t.m; ++i)
        for (std::size_t a = 0; a < d; ++a) atb[i][a] += delta[a] * (t.values[s][i] - t.values[nn][i]);
    }
    if (!(ata.trace() > 0.0)) return x;
    const double ridge = 1e-12 * ata.trace();
    for (std::size_t a = 0; a < d; ++a) ata(a, a) += ridge;
    const Vector dq = local(g);
    for (std::size_t i = 0; i < t.m; ++i) {
      const Vector grad = cholesky_solve(ata, atb[i]);
      x[i] += dot(grad, dq);
    }
    return x;
  };
  return f;
}

}  // namespace hcontract
