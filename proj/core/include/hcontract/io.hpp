#pragma once

// JSON, CSV and SVG serialization of spaces and verification results.
// Doubles are written in their shortest round-trip decimal form; non-finite
// values become null.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcontract/contraction.hpp"
#include "hcontract/reach.hpp"

namespace hcontract {

using json = nlohmann::ordered_json;

json to_json(const Matrix& m);  ///< rows as nested arrays
Matrix matrix_from_json(const json& j);

/// {name, kind, n, embed_dim, group, h_basis, m_basis, gram_scale,
///  metric_kind, base_point, alpha, flags}. Basis matrices are flattened
/// row-major. metric_kind is "trace_form" (scaled by gram_scale) or
/// "basis_orthonormal" (the metric making h_basis + m_basis orthonormal).
json space_to_json(const SpaceDescriptor& space);
SpaceDescriptor space_from_json(const json& j);

void save_space(const std::filesystem::path& path, const SpaceDescriptor& space);
SpaceDescriptor load_space(const std::filesystem::path& path);

json classification_to_json(const SpaceDescriptor& space);
json region_to_json(const Region& region);
/// include_samples adds the per-sample generator coordinates and measures.
json certificate_to_json(const ContractionCertificate& cert, bool include_samples = true);
json loop_report_to_json(const LoopReport& rep);
json tube_to_json(const ReachTube& tube, const SpaceDescriptor& space);
json containment_to_json(const ContainmentReport& rep, bool include_traces = false);

/// Header `t,<state columns>`: sphere points p0..p2, Euclidean positions
/// x1..xn, otherwise the flattened group element g00..g{n-1}{n-1}.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const SpaceDescriptor& space);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  double width = 1.5;
  bool dashed = false;
};

/// Polyline plot with linear axes and a legend for labelled series.
std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series);

/// Scatter of (x, y) points coloured by value on a blue-to-red ramp.
std::string svg_heat_scatter(const std::string& title, const std::string& x_label, const std::string& y_label,
                             const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& value);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hcontract
