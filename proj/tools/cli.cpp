#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "hcontract/table_field.hpp"

namespace hcontract::cli {

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

bool is_so3_like(const SpaceDescriptor& s) {
  return s.group().kind == GroupKind::SpecialOrthogonal && s.group().embed_dim == 3 && s.dec().h_dim() == 0;
}

std::filesystem::path output_dir(const RunConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("HCONTRACT_OUT"); env && *env) return env;
  return "hcontract-out";
}

FdConfig fd_config(const RunConfig& cfg) { return FdConfig{cfg.fd_step, cfg.richardson, !cfg.fd_only}; }

Region make_region(const RunConfig& cfg, const SpaceDescriptor& space, const Matrix& center) {
  const std::size_t m = space.m_dim();
  if (cfg.region == "cap") {
    if (m != 2) throw std::invalid_argument("--region cap needs dim m = 2");
    return Region::polar_cap(cfg.max_angle_deg * std::numbers::pi / 180.0, cfg.n_radial, cfg.n_angular, center);
  }
  if (cfg.region == "ball") return Region::ball(m, cfg.radius, cfg.count, cfg.seed, center);
  if (cfg.region == "box") {
    Vector lo = cfg.lo, hi = cfg.hi;
    if (lo.empty()) lo.assign(m, -cfg.radius);
    if (hi.empty()) hi.assign(m, cfg.radius);
    if (lo.size() != m || hi.size() != m) throw std::invalid_argument("--lo/--hi need dim m entries");
    return Region::box(lo, hi, cfg.per_axis, center);
  }
  throw std::invalid_argument("unknown region '" + cfg.region + "' (expected cap, ball or box)");
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

void save_json(const std::filesystem::path& path, const json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

// --- subcommands ------------------------------------------------------------------

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const SpaceDescriptor space = resolve_space(cfg.space);
  json doc;
  doc["config"] = to_json(cfg);
  doc["classification"] = classification_to_json(space);
  const auto& a = space.alpha();
  json nz = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < a.dim(); ++k)
        if (std::abs(a(i, j, k)) > 1e-14) nz.push_back({{"i", i}, {"j", j}, {"k", k}, {"value", a(i, j, k)}});
  doc["alpha_nonzero"] = std::move(nz);
  save_json(output_dir(cfg) / "classify.json", doc);
  emit(out, doc);
  return kExitPass;
}

int cmd_export_space(const RunConfig& cfg, std::ostream& out) {
  const SpaceDescriptor space = resolve_space(cfg.space);
  const std::filesystem::path path = cfg.file.empty() ? output_dir(cfg) / "space.json" : std::filesystem::path(cfg.file);
  save_space(path, space);
  emit(out, space_to_json(space));
  return kExitPass;
}

int cmd_linearize(const RunConfig& cfg, std::ostream& out) {
  const SpaceDescriptor space = resolve_space(cfg.space);
  const std::string field_name = cfg.field.empty() ? default_field(space) : cfg.field;
  const HorizontalField f = resolve_field(space, field_name);
  const Matrix g = element_from_coords(space, cfg.at);
  const auto lin = linearize(f, space, g, fd_config(cfg), cfg.time);
  json doc;
  doc["config"] = to_json(cfg);
  doc["space"] = space.name();
  doc["field"] = f.name;
  doc["g"] = to_json(g);
  doc["time"] = cfg.time;
  doc["x"] = f.eval(g, cfg.time);
  doc["linearization"] = to_json(lin.mat);
  doc["symmetric_eigenvalues"] = sym_eigenvalues(lin.mat);
  doc["mu"] = matrix_measure(lin);
  doc["fd_residual"] = lin.fd_residual;
  doc["analytic"] = f.has_analytic_derivatives() && !cfg.fd_only;
  save_json(output_dir(cfg) / "linearize.json", doc);
  emit(out, doc);
  return kExitPass;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.c) throw std::invalid_argument("certify needs --c");
  const SpaceDescriptor space = resolve_space(cfg.space);
  const std::string field_name = cfg.field.empty() ? default_field(space) : cfg.field;
  const HorizontalField f = resolve_field(space, field_name);
  const Region region = make_region(cfg, space, element_from_coords(space, cfg.center));
  CertifyOptions opt;
  opt.fd = fd_config(cfg);
  opt.time = cfg.time;
  opt.threads = cfg.threads;
  const auto cert = certify_region(f, space, region, *cfg.c, opt);

  json doc;
  doc["config"] = to_json(cfg);
  doc["region"] = region_to_json(region);
  doc["certificate"] = certificate_to_json(cert);
  const auto dir = output_dir(cfg);
  save_json(dir / "certificate.json", doc);

  std::string svg;
  if (space.m_dim() >= 2) {
    std::vector<double> x, y;
    for (const auto& v : cert.sample_coords) {
      x.push_back(v[0]);
      y.push_back(v[1]);
    }
    svg = svg_heat_scatter("matrix measure over the region (" + f.name + ")", "v1", "v2", x, y, cert.sample_mu);
  } else {
    PlotSeries s{"mu", {}, cert.sample_mu};
    for (const auto& v : cert.sample_coords) s.x.push_back(v[0]);
    PlotSeries bound{"c", {s.x.front(), s.x.back()}, {*cfg.c, *cfg.c}, "#d62728", 1.0, true};
    svg = svg_line_plot("matrix measure over the region (" + f.name + ")", "v1", "mu", {s, bound});
  }
  write_text_file(dir / "certificate.svg", svg);

  json summary = doc;
  summary["certificate"] = certificate_to_json(cert, false);
  emit(out, summary);
  return cert.verdict == Verdict::Pass ? kExitPass : kExitFail;
}

int cmd_loop_check(const RunConfig& cfg, std::ostream& out) {
  const SpaceDescriptor space = resolve_space(cfg.space);
  const std::string field_name = cfg.field.empty() ? default_field(space) : cfg.field;
  const HorizontalField f = resolve_field(space, field_name);
  Vector gen = cfg.generator;
  if (gen.empty()) {
    gen.assign(space.m_dim(), 0.0);
    gen[0] = 1.0;
  }
  if (gen.size() != space.m_dim()) throw std::invalid_argument("--generator needs dim m entries");
  LoopOptions opt;
  opt.n_quad = cfg.n_quad;
  opt.t_max = cfg.t_max;
  opt.claimed_c = cfg.c;
  opt.fd = fd_config(cfg);
  const auto rep =
      loop_obstruction_check(f, space, space.dec().m_combination(gen), element_from_coords(space, cfg.base), opt);

  json doc;
  doc["config"] = to_json(cfg);
  doc["loop"] = loop_report_to_json(rep);
  const auto dir = output_dir(cfg);
  save_json(dir / "loop.json", doc);
  PlotSeries fs{"f(t)", rep.t, rep.f};
  PlotSeries zero{"0", {0.0, rep.period}, {0.0, 0.0}, "#7f7f7f", 1.0, true};
  std::vector<PlotSeries> series{fs, zero};
  if (rep.claimed_c)
    series.push_back({"claimed c", {0.0, rep.period}, {*rep.claimed_c, *rep.claimed_c}, "#d62728", 1.0, true});
  write_text_file(dir / "loop.svg", svg_line_plot("frame-aligned linearization along the loop", "t", "f", series));

  json summary = doc;
  summary["loop"].erase("t");
  summary["loop"].erase("f");
  emit(out, summary);
  return rep.inconsistent ? kExitFail : kExitPass;
}

int cmd_reach(const RunConfig& cfg, std::ostream& out) {
  const SpaceDescriptor space = resolve_space(cfg.space);
  const std::string field_name = cfg.field.empty() ? default_field(space) : cfg.field;
  const HorizontalField f = resolve_field(space, field_name);
  const double c = cfg.c.value_or(0.0);
  const Matrix g0 = element_from_coords(space, cfg.center);
  const auto dir = output_dir(cfg);

  // The field may depend on time: certify the region at five instants and keep the worst.
  RunConfig region_cfg = cfg;
  if (cfg.region == "cap" && space.m_dim() != 2) {
    region_cfg.region = "ball";
    region_cfg.radius = 3.0;
  }
  const Region region = make_region(region_cfg, space, Matrix::identity(space.group().embed_dim));
  ContractionCertificate worst;
  bool first = true;
  for (int k = 0; k <= 4; ++k) {
    CertifyOptions opt;
    opt.fd = fd_config(cfg);
    opt.time = cfg.horizon * k / 4.0;
    opt.threads = cfg.threads;
    auto cert = certify_region(f, space, region, c, opt);
    if (first || cert.mu_max > worst.mu_max) worst = std::move(cert);
    first = false;
  }

  json doc;
  doc["config"] = to_json(cfg);
  doc["certificate"] = certificate_to_json(worst, false);
  if (worst.verdict != Verdict::Pass) {
    save_json(dir / "reach.json", doc);
    emit(out, doc);
    return kExitFail;
  }

  const Integrator method = integrator_from_string(cfg.method);
  const ReachTube tube = reach_tube(f, space, g0, cfg.r0, worst, cfg.horizon, cfg.dt, method, cfg.K);
  const auto rep = monte_carlo_containment(tube, f, space, cfg.n_samples, cfg.seed, cfg.threads);
  doc["tube"] = tube_to_json(tube, space);
  doc["containment"] = containment_to_json(rep);
  save_json(dir / "reach.json", doc);

  {
    std::ostringstream csv;
    write_trajectory_csv(csv, tube.center, space);
    write_text_file(dir / "center.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv.precision(17);
    csv << "t,radius";
    for (std::size_t s = 0; s < rep.distances.size(); ++s) csv << ",d" << s + 1;
    csv << '\n';
    for (std::size_t k = 0; k < tube.center.times.size(); ++k) {
      csv << tube.center.times[k] << ',' << tube.radius(tube.center.times[k]);
      for (const auto& d : rep.distances) csv << ',' << d[k];
      csv << '\n';
    }
    write_text_file(dir / "sample_distances.csv", csv.str());
  }
  {
    const std::size_t n = tube.center.times.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 500);
    std::vector<PlotSeries> series;
    for (std::size_t s = 0; s < rep.distances.size(); ++s) {
      PlotSeries p{s == 0 ? "samples" : "", {}, {}, "#9ecae1", 0.8};
      for (std::size_t k = 0; k < n; k += stride) {
        p.x.push_back(tube.center.times[k]);
        p.y.push_back(rep.distances[s][k]);
      }
      series.push_back(std::move(p));
    }
    PlotSeries r{"tube radius", {}, {}, "#d62728", 2.0};
    for (std::size_t k = 0; k < n; k += stride) {
      r.x.push_back(tube.center.times[k]);
      r.y.push_back(tube.radius(tube.center.times[k]));
    }
    series.push_back(std::move(r));
    write_text_file(dir / "reach.svg", svg_line_plot("distance to the center trajectory", "t", "d", series));
  }

  emit(out, doc);
  return rep.pass ? kExitPass : kExitFail;
}

}  // namespace

json to_json(const RunConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  j["space"] = cfg.space;
  j["field"] = cfg.field;
  j["out_dir"] = output_dir(cfg).string();
  j["region"] = cfg.region;
  j["max_angle_deg"] = cfg.max_angle_deg;
  j["n_radial"] = cfg.n_radial;
  j["n_angular"] = cfg.n_angular;
  j["radius"] = cfg.radius;
  j["count"] = cfg.count;
  j["lo"] = cfg.lo;
  j["hi"] = cfg.hi;
  j["per_axis"] = cfg.per_axis;
  j["center"] = cfg.center;
  j["c"] = cfg.c ? json(*cfg.c) : json(nullptr);
  j["time"] = cfg.time;
  j["at"] = cfg.at;
  j["generator"] = cfg.generator;
  j["base"] = cfg.base;
  j["n_quad"] = cfg.n_quad;
  j["t_max"] = cfg.t_max;
  j["r0"] = cfg.r0;
  j["horizon"] = cfg.horizon;
  j["dt"] = cfg.dt;
  j["n_samples"] = cfg.n_samples;
  j["method"] = cfg.method;
  j["K"] = cfg.K;
  j["seed"] = cfg.seed;
  j["fd_step"] = cfg.fd_step;
  j["richardson"] = cfg.richardson;
  j["fd_only"] = cfg.fd_only;
  return j;
}

SpaceDescriptor resolve_space(const std::string& spec) {
  if (spec.ends_with(".json")) return load_space(spec);
  return make_space(spec);
}

std::string default_field(const SpaceDescriptor& space) {
  switch (space.kind()) {
    case SpaceKind::Sphere2: return "height-gradient";
    case SpaceKind::SO3BiInvariant:
    case SpaceKind::SO3LeftInvariant: return "attitude-demo";
    case SpaceKind::Circle: return "sin";
    default: return "zero";
  }
}

HorizontalField resolve_field(const SpaceDescriptor& space, const std::string& spec) {
  if (spec.rfind("table:", 0) == 0) {
    auto table = load_coefficient_table(spec.substr(6), space);
    return table_field(space, std::move(table));
  }
  if (spec == "zero") return constant_field(space, Vector(space.m_dim(), 0.0));
  if (space.kind() == SpaceKind::Sphere2) {
    if (spec == "height-gradient") return sphere_height_gradient(space);
    if (spec == "rotation") return sphere_rotation(space);
    if (spec == "spiral") return sphere_spiral(space);
    if (spec == "nonequivariant") return sphere_nonequivariant(space);
  }
  if (is_so3_like(space)) {
    if (spec == "attitude-demo") {
      auto f = open_loop_field(space, attitude_demo_input);
      f.name = "attitude-demo";
      return f;
    }
    if (spec.rfind("constant:", 0) == 0) return constant_field(space, parse_list(spec.substr(9)));
  }
  if (space.kind() == SpaceKind::Circle) {
    if (spec == "sin")
      return circle_field(space, [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }, "sin");
    if (spec == "cos")
      return circle_field(space, [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }, "cos");
  }
  if (space.kind() == SpaceKind::Euclidean && spec.rfind("linear:", 0) == 0) {
    const auto v = parse_list(spec.substr(7));
    const std::size_t n = space.m_dim();
    if (v.size() != n * n) throw std::invalid_argument("linear field needs n*n entries");
    return linear_field(space, Matrix(n, n, v));
  }
  throw std::invalid_argument("unknown field '" + spec + "' on space '" + space.name() + "'");
}

Matrix element_from_coords(const SpaceDescriptor& space, const std::vector<double>& v) {
  if (v.empty()) return space.group().identity();
  const auto& dec = space.dec();
  if (v.size() == dec.m_dim()) return expm(dec.m_combination(v));
  if (v.size() == dec.m_dim() + dec.h_dim()) {
    Matrix x = dec.m_combination(std::span<const double>(v).first(dec.m_dim()));
    for (std::size_t i = 0; i < dec.h_dim(); ++i) x += v[dec.m_dim() + i] * dec.h_basis()[i];
    return expm(x);
  }
  throw std::invalid_argument("group element needs dim m (or dim m + dim h) generator coordinates");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant contraction analysis on reductive homogeneous spaces"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.space.clear();
  std::optional<double> c;
  std::string out_dir;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--space", cfg.space, "space name (sphere2, so3, so3-left:a,b,c, circle, euclidean:N) or descriptor .json; "
                                    "default so3 for reach, sphere2 otherwise");
    sub->add_option("--out", out_dir, "output directory (default: $HCONTRACT_OUT or ./hcontract-out)");
  };
  auto field_opts = [&](CLI::App* sub) {
    sub->add_option("--field", cfg.field, "demo field name or table:<file.csv>");
    sub->add_option("--fd-step", cfg.fd_step, "central difference step")->check(CLI::PositiveNumber);
    sub->add_flag("--richardson", cfg.richardson, "one Richardson extrapolation level");
    sub->add_flag("--fd-only", cfg.fd_only, "ignore analytic Lie derivatives");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  };
  auto region_opts = [&](CLI::App* sub) {
    sub->add_option("--region", cfg.region, "cap, ball or box")->check(CLI::IsMember({"cap", "ball", "box"}));
    sub->add_option("--max-angle-deg", cfg.max_angle_deg, "cap half-angle in degrees");
    sub->add_option("--n-radial", cfg.n_radial, "cap radial samples");
    sub->add_option("--n-angular", cfg.n_angular, "cap angular samples");
    sub->add_option("--radius", cfg.radius, "ball radius / default box half-width");
    sub->add_option("--count", cfg.count, "ball sample count");
    sub->add_option("--lo", cfg.lo, "box lower corner")->delimiter(',');
    sub->add_option("--hi", cfg.hi, "box upper corner")->delimiter(',');
    sub->add_option("--per-axis", cfg.per_axis, "box samples per axis");
    sub->add_option("--c", c, "contraction rate to certify");
    sub->add_option("--time", cfg.time, "evaluation time for time-dependent fields");
  };

  auto* classify = app.add_subcommand("classify", "symmetric / naturally reductive classification and alpha");
  common(classify);

  auto* export_space = app.add_subcommand("export-space", "write a space descriptor as JSON");
  common(export_space);
  export_space->add_option("--file", cfg.file, "descriptor path (default <out>/space.json)");

  auto* lin = app.add_subcommand("linearize", "frame linearization and matrix measure at a point");
  common(lin);
  field_opts(lin);
  lin->add_option("--at", cfg.at, "generator coordinates v, g = expm(v^i A_i)")->delimiter(',');
  lin->add_option("--time", cfg.time, "evaluation time");

  auto* certify = app.add_subcommand("certify", "sampled contraction certificate on a region");
  common(certify);
  field_opts(certify);
  region_opts(certify);
  certify->add_option("--center", cfg.center, "generator coordinates of the region center")->delimiter(',');

  auto* loop = app.add_subcommand("loop-check", "linearization along a closed one-parameter orbit");
  common(loop);
  field_opts(loop);
  loop->add_option("--generator", cfg.generator, "m coordinates of the loop generator")->delimiter(',');
  loop->add_option("--base", cfg.base, "generator coordinates of the base element")->delimiter(',');
  loop->add_option("--n-quad", cfg.n_quad, "quadrature nodes")->check(CLI::Range(2, 1 << 22));
  loop->add_option("--t-max", cfg.t_max, "period search bound")->check(CLI::PositiveNumber);
  loop->add_option("--c", c, "claimed contraction rate to test for consistency");

  auto* reach = app.add_subcommand("reach", "reach tube from the center trajectory with Monte Carlo check");
  common(reach);
  field_opts(reach);
  region_opts(reach);
  reach->add_option("--center", cfg.center, "generator coordinates of the initial ball center")->delimiter(',');
  reach->add_option("--r0", cfg.r0, "initial ball radius")->check(CLI::NonNegativeNumber);
  reach->add_option("--horizon", cfg.horizon, "final time")->check(CLI::NonNegativeNumber);
  reach->add_option("--dt", cfg.dt, "integration step")->check(CLI::PositiveNumber);
  reach->add_option("--samples", cfg.n_samples, "Monte Carlo samples");
  reach->add_option("--seed", cfg.seed, "Monte Carlo seed");
  reach->add_option("--method", cfg.method, "rkmk4 or lie-euler")->check(CLI::IsMember({"rkmk4", "lie-euler"}));
  reach->add_option("--K", cfg.K, "overshoot constant of the tube")->check(CLI::Range(1.0, 1e300));
  certify->add_option("--seed", cfg.seed, "ball sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  cfg.c = c;
  cfg.out_dir = out_dir;

  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  if (cfg.space.empty()) cfg.space = sub == reach ? "so3" : "sphere2";

  try {
    if (sub == classify) return cmd_classify(cfg, out);
    if (sub == export_space) return cmd_export_space(cfg, out);
    if (sub == lin) return cmd_linearize(cfg, out);
    if (sub == certify) return cmd_certify(cfg, out);
    if (sub == loop) return cmd_loop_check(cfg, out);
    if (sub == reach) return cmd_reach(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hcontract::cli
