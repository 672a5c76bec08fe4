#include "hcontract/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hcontract {

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json flat(const Matrix& m) {
  json a = json::array();
  for (double v : m.data()) a.push_back(v);
  return a;
}

Matrix unflat(const json& j, std::size_t n) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != n * n)
    throw std::invalid_argument("basis matrix has " + std::to_string(v.size()) + " entries, expected " +
                                std::to_string(n * n));
  return Matrix(n, n, v);
}

json vec(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(vec(m.row(r)));
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw std::invalid_argument("ragged matrix in JSON");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

// --- spaces ---------------------------------------------------------------------

json space_to_json(const SpaceDescriptor& space) {
  const auto& dec = space.dec();
  json j;
  j["name"] = space.name();
  j["kind"] = to_string(space.kind());
  j["n"] = space.group().algebra_dim();
  j["embed_dim"] = space.group().embed_dim;
  j["group"] = to_string(space.group().kind);
  j["h_basis"] = json::array();
  for (const auto& h : dec.h_basis()) j["h_basis"].push_back(flat(h));
  j["m_basis"] = json::array();
  for (const auto& a : dec.m_basis()) j["m_basis"].push_back(flat(a));
  if (dec.metric().is_trace_form()) {
    j["metric_kind"] = "trace_form";
    j["gram_scale"] = dec.metric().scale();
  } else {
    j["metric_kind"] = "basis_orthonormal";
    j["gram_scale"] = nullptr;
  }
  j["base_point"] = dec.base_point() ? vec(*dec.base_point()) : json(nullptr);
  const auto& alpha = space.alpha();
  json a = json::array();
  for (std::size_t i = 0; i < alpha.dim(); ++i) {
    json ai = json::array();
    for (std::size_t jj = 0; jj < alpha.dim(); ++jj) {
      json aij = json::array();
      for (std::size_t k = 0; k < alpha.dim(); ++k) aij.push_back(alpha(i, jj, k));
      ai.push_back(std::move(aij));
    }
    a.push_back(std::move(ai));
  }
  j["alpha"] = std::move(a);
  j["flags"] = {{"symmetric", space.classification().is_symmetric},
                {"naturally_reductive", space.classification().is_naturally_reductive}};
  return j;
}

SpaceDescriptor space_from_json(const json& j) {
  try {
    const std::string name = j.at("name").get<std::string>();
    const SpaceKind kind = space_kind_from_string(j.value("kind", std::string("custom")));
    const auto n = j.at("embed_dim").get<std::size_t>();
    const MatrixGroup group{group_kind_from_string(j.at("group").get<std::string>()), n};
    std::vector<Matrix> h, m;
    for (const auto& e : j.at("h_basis")) h.push_back(unflat(e, n));
    for (const auto& e : j.at("m_basis")) m.push_back(unflat(e, n));
    if (m.empty()) throw std::invalid_argument("m_basis is empty");

    const std::string metric_kind = j.value("metric_kind", std::string("trace_form"));
    InnerProduct metric = InnerProduct::trace_form();
    if (metric_kind == "trace_form") {
      metric = InnerProduct::trace_form(j.at("gram_scale").get<double>());
    } else if (metric_kind == "basis_orthonormal") {
      std::vector<Matrix> ref = h;
      ref.insert(ref.end(), m.begin(), m.end());
      const std::size_t k = ref.size();
      metric = InnerProduct::from_gram(std::move(ref), Matrix::identity(k));
    } else {
      throw std::invalid_argument("unknown metric_kind '" + metric_kind + "'");
    }

    std::optional<Vector> base;
    if (j.contains("base_point") && !j.at("base_point").is_null()) base = j.at("base_point").get<Vector>();

    ReductiveDecomposition dec(group, std::move(h), std::move(m), std::move(metric), std::move(base), name);
    if (j.contains("n") && j.at("n").get<std::size_t>() != group.algebra_dim())
      throw std::invalid_argument("n does not match the group dimension");
    if (!j.contains("alpha") || j.at("alpha").is_null()) return SpaceDescriptor(name, kind, std::move(dec));

    const auto nested = j.at("alpha").get<std::vector<std::vector<std::vector<double>>>>();
    AlphaTensor alpha(nested.size());
    for (std::size_t i = 0; i < nested.size(); ++i) {
      if (nested[i].size() != nested.size()) throw std::invalid_argument("alpha is not a cube");
      for (std::size_t jj = 0; jj < nested.size(); ++jj) {
        if (nested[i][jj].size() != nested.size()) throw std::invalid_argument("alpha is not a cube");
        for (std::size_t k = 0; k < nested.size(); ++k) alpha(i, jj, k) = nested[i][jj][k];
      }
    }
    SpaceDescriptor space(name, kind, std::move(dec), std::move(alpha));
    if (j.contains("flags")) {
      const auto& fl = j.at("flags");
      if (fl.value("symmetric", space.classification().is_symmetric) != space.classification().is_symmetric ||
          fl.value("naturally_reductive", space.classification().is_naturally_reductive) !=
              space.classification().is_naturally_reductive)
        throw std::invalid_argument("stored flags disagree with the recomputed classification");
    }
    return space;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed space descriptor: ") + e.what());
  }
}

void save_space(const std::filesystem::path& path, const SpaceDescriptor& space) {
  write_text_file(path, space_to_json(space).dump(2) + "\n");
}

SpaceDescriptor load_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open space descriptor " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("cannot parse " + path.string() + ": " + e.what());
  }
  return space_from_json(j);
}

// --- results --------------------------------------------------------------------

json classification_to_json(const SpaceDescriptor& space) {
  const auto& c = space.classification();
  const auto inv = check_alpha_invariants(space.dec(), space.alpha());
  json j;
  j["space"] = space.name();
  j["symmetric"] = c.is_symmetric;
  j["naturally_reductive"] = c.is_naturally_reductive;
  j["max_U_norm"] = num(c.max_U_norm);
  j["max_mm_h_leak"] = num(c.max_mm_h_leak);
  j["alpha_max_abs"] = num(space.alpha().max_abs());
  j["alpha_zero"] = space.alpha().max_abs() == 0.0;
  j["torsion_defect"] = num(inv.torsion_defect);
  j["self_orthogonality_defect"] = num(inv.self_orthogonality_defect);
  j["dim_m"] = space.m_dim();
  j["dim_h"] = space.dec().h_dim();
  return j;
}

json region_to_json(const Region& region) {
  json j;
  j["description"] = region.describe();
  switch (region.kind()) {
    case Region::Kind::PolarCap:
      j["kind"] = "polar-cap";
      j["max_angle"] = region.max_angle();
      j["n_radial"] = region.n_radial();
      j["n_angular"] = region.n_angular();
      break;
    case Region::Kind::Box:
      j["kind"] = "box";
      j["lo"] = vec(region.lo());
      j["hi"] = vec(region.hi());
      j["per_axis"] = region.n_radial();
      break;
    case Region::Kind::Ball:
      j["kind"] = "ball";
      j["radius"] = region.radius();
      j["count"] = region.n_radial();
      j["seed"] = region.seed();
      break;
    case Region::Kind::Explicit:
      j["kind"] = "explicit";
      j["radius"] = region.radius();
      break;
  }
  j["center"] = to_json(region.center());
  return j;
}

json certificate_to_json(const ContractionCertificate& cert, bool include_samples) {
  json j;
  j["label"] = cert.label;
  j["space"] = cert.space_id;
  j["field"] = cert.field_id;
  j["region"] = cert.region;
  j["rate_c"] = num(cert.rate_c);
  j["tolerance"] = num(cert.tolerance);
  j["time"] = num(cert.time);
  j["verdict"] = to_string(cert.verdict);
  j["nonexpansive_only"] = cert.nonexpansive_only();
  j["mu_max"] = num(cert.mu_max);
  j["argmax_index"] = cert.argmax_index;
  j["argmax_coords"] = cert.sample_coords.empty() ? json(nullptr) : vec(cert.sample_coords[cert.argmax_index]);
  j["mu_argmax"] = to_json(cert.mu_argmax);
  j["samples_evaluated"] = cert.samples_evaluated;
  j["max_fd_residual"] = num(cert.max_fd_residual);
  if (include_samples) {
    json s = json::array();
    for (std::size_t i = 0; i < cert.sample_coords.size(); ++i)
      s.push_back({{"v", vec(cert.sample_coords[i])}, {"mu", num(cert.sample_mu[i])}});
    j["samples"] = std::move(s);
  }
  return j;
}

json loop_report_to_json(const LoopReport& rep) {
  json j;
  j["generator"] = to_json(rep.generator);
  j["base"] = to_json(rep.base);
  j["period"] = num(rep.period);
  j["n_quad"] = rep.t.size();
  j["integral"] = num(rep.integral);
  j["integral_half_nodes"] = num(rep.integral_half);
  j["quadrature_gap"] = num(std::abs(rep.integral - rep.integral_half));
  j["max_f"] = num(rep.max_f);
  j["argmax_t"] = num(rep.argmax_t);
  j["claimed_c"] = rep.claimed_c ? num(*rep.claimed_c) : json(nullptr);
  j["inconsistent"] = rep.inconsistent;
  j["t"] = vec(rep.t);
  j["f"] = vec(rep.f);
  return j;
}

json tube_to_json(const ReachTube& tube, const SpaceDescriptor& space) {
  json j;
  j["metric"] = tube.metric_id;
  j["K"] = num(tube.K);
  j["c"] = num(tube.c);
  j["r0"] = num(tube.r0);
  j["integrator"] = to_string(tube.center.method);
  j["step_size"] = num(tube.center.step_size);
  const double horizon = tube.center.times.empty() ? 0.0 : tube.center.times.back();
  j["horizon"] = num(horizon);
  j["steps"] = tube.center.times.empty() ? 0 : tube.center.times.size() - 1;
  j["constraint_drift"] = num(max_constraint_drift(space, tube.center));
  if (!tube.center.states.empty()) {
    j["center_start"] = to_json(tube.center.states.front());
    j["center_end"] = to_json(tube.center.states.back());
  }
  json sched = json::array();
  const std::size_t n = tube.center.times.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 100);
  for (std::size_t k = 0; k < n; k += stride) {
    const double t = tube.center.times[k];
    sched.push_back({{"t", t}, {"radius", num(tube.radius(t))}});
  }
  if (n > 0 && (n - 1) % stride != 0) sched.push_back({{"t", horizon}, {"radius", num(tube.radius(horizon))}});
  j["radius_schedule"] = std::move(sched);
  return j;
}

json containment_to_json(const ContainmentReport& rep, bool include_traces) {
  json j;
  j["n_samples"] = rep.n_samples;
  j["seed"] = rep.seed;
  j["tolerance"] = num(rep.tolerance);
  j["max_excess"] = num(rep.max_excess);
  j["max_excess_after_t1"] = num(rep.max_excess_after_t1);
  j["max_distance_drift"] = num(rep.max_distance_drift);
  j["cut_locus_seen"] = rep.cut_locus_seen;
  j["verdict"] = rep.pass ? "PASS" : "FAIL";
  json init = json::array();
  for (const auto& v : rep.initial_coords) init.push_back(vec(v));
  j["initial_coords"] = std::move(init);
  if (include_traces) {
    json tr = json::array();
    for (const auto& d : rep.distances) tr.push_back(vec(d));
    j["distances"] = std::move(tr);
  }
  return j;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const SpaceDescriptor& space) {
  out << std::setprecision(17);
  const std::size_t n = space.group().embed_dim;
  out << 't';
  if (space.kind() == SpaceKind::Sphere2) {
    out << ",p0,p1,p2";
  } else if (space.kind() == SpaceKind::Euclidean) {
    for (std::size_t i = 0; i < space.m_dim(); ++i) out << ",x" << i + 1;
  } else {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) out << ",g" << r << c;
  }
  out << '\n';
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << traj.times[k];
    const Matrix& g = traj.states[k];
    if (space.kind() == SpaceKind::Sphere2) {
      for (double p : project_point(space, g)) out << ',' << p;
    } else if (space.kind() == SpaceKind::Euclidean) {
      for (std::size_t i = 0; i < space.m_dim(); ++i) out << ',' << g(i, n - 1);
    } else {
      for (double v : g.data()) out << ',' << v;
    }
    out << '\n';
  }
}

// --- SVG --------------------------------------------------------------------------

namespace {

constexpr double kW = 720, kH = 440, kL = 80, kR = 170, kT = 40, kB = 60;

struct Axes {
  double x0, x1, y0, y1;
  double px(double x) const { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); }
  double py(double y) const { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); }
};

Axes make_axes(double xmin, double xmax, double ymin, double ymax) {
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) {
    const double pad = std::max(1e-12, std::abs(ymin) * 0.1 + 1e-3);
    ymin -= pad;
    ymax += pad;
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }
  return {xmin, xmax, ymin, ymax};
}

void frame(std::ostringstream& os, const Axes& ax, const std::string& title, const std::string& xl,
           const std::string& yl) {
  os << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title)
     << "</text>\n";
  os << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\"" << kH - kT - kB
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = ax.x0 + (ax.x1 - ax.x0) * i / 4.0, yv = ax.y0 + (ax.y1 - ax.y0) * i / 4.0;
    os << "<text x=\"" << ax.px(xv) << "\" y=\"" << kH - kB + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << fmt(xv) << "</text>\n";
    os << "<text x=\"" << kL - 6 << "\" y=\"" << ax.py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
       << fmt(yv) << "</text>\n";
  }
  os << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\" font-size=\"13\">"
     << xml_escape(xl) << "</text>\n";
  os << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
     << "transform=\"rotate(-90 18 " << (kT + kH - kB) / 2 << ")\">" << xml_escape(yl) << "</text>\n";
}

std::string header() {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
     << kW << ' ' << kH << "\" font-family=\"sans-serif\">\n";
  return os.str();
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  const Axes ax = make_axes(xmin, xmax, ymin, ymax);
  std::ostringstream os;
  os << std::setprecision(6) << header();
  frame(os, ax, title, x_label, y_label);
  int legend = 0;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width << '"';
    if (s.dashed) os << " stroke-dasharray=\"6,4\"";
    os << " points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << ax.px(s.x[i]) << ',' << ax.py(s.y[i]) << ' ';
    os << "\"/>\n";
    if (!s.label.empty()) {
      const double y = kT + 16 + 18 * legend++;
      os << "<line x1=\"" << kW - kR + 12 << "\" y1=\"" << y << "\" x2=\"" << kW - kR + 36 << "\" y2=\"" << y
         << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
         << "/>\n";
      os << "<text x=\"" << kW - kR + 42 << "\" y=\"" << y + 4 << "\" font-size=\"12\">" << xml_escape(s.label)
         << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_heat_scatter(const std::string& title, const std::string& x_label, const std::string& y_label,
                             const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& value) {
  if (x.size() != y.size() || x.size() != value.size())
    throw std::invalid_argument("svg_heat_scatter: x, y and value lengths differ");
  const std::size_t n = x.size();
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    xmin = std::min(xmin, x[i]);
    xmax = std::max(xmax, x[i]);
    ymin = std::min(ymin, y[i]);
    ymax = std::max(ymax, y[i]);
    vmin = std::min(vmin, value[i]);
    vmax = std::max(vmax, value[i]);
  }
  if (n == 0) xmin = ymin = vmin = 0, xmax = ymax = vmax = 1;
  const Axes ax = make_axes(xmin, xmax, ymin, ymax);
  auto color = [&](double v) {
    const double s = vmax > vmin ? (v - vmin) / (vmax - vmin) : 0.5;
    const int r = static_cast<int>(std::lround(40 + 215 * s)), b = static_cast<int>(std::lround(255 - 215 * s));
    std::ostringstream c;
    c << "rgb(" << r << ",60," << b << ')';
    return c.str();
  };
  std::ostringstream os;
  os << std::setprecision(6) << header();
  frame(os, ax, title, x_label, y_label);
  for (std::size_t i = 0; i < n; ++i)
    os << "<circle cx=\"" << ax.px(x[i]) << "\" cy=\"" << ax.py(y[i]) << "\" r=\"2.5\" fill=\"" << color(value[i])
       << "\"/>\n";
  for (int k = 0; k <= 10; ++k) {
    const double v = vmin + (vmax - vmin) * (10 - k) / 10.0;
    os << "<rect x=\"" << kW - kR + 20 << "\" y=\"" << kT + 20 * k << "\" width=\"20\" height=\"20\" fill=\""
       << color(v) << "\"/>\n";
    if (k % 5 == 0)
      os << "<text x=\"" << kW - kR + 46 << "\" y=\"" << kT + 20 * k + 14 << "\" font-size=\"11\">" << fmt(v)
         << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace hcontract
