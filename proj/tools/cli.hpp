#pragma once

// Subcommand plumbing of the `hcontract` tool, kept in a library so tests can
// drive it in-process.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hcontract/io.hpp"

namespace hcontract::cli {

/// Exit codes: check passed, usage or I/O error, check failed.
inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;

struct RunConfig {
  std::string subcommand;
  std::string space = "sphere2";
  std::string field;
  std::filesystem::path out_dir;

  // certify / reach region
  std::string region = "cap";
  double max_angle_deg = 60.0;
  std::size_t n_radial = 64;
  std::size_t n_angular = 64;
  double radius = 1.0;
  std::size_t count = 512;
  std::vector<double> lo, hi;
  std::size_t per_axis = 9;
  std::vector<double> center;  ///< generator coordinates of the region / tube center
  std::optional<double> c;
  double time = 0.0;

  // linearize
  std::vector<double> at;

  // loop-check
  std::vector<double> generator;
  std::vector<double> base;
  std::size_t n_quad = 1024;
  double t_max = 100.0;

  // reach
  double r0 = 0.1;
  double horizon = 5.0;
  double dt = 1e-3;
  std::size_t n_samples = 100;
  std::string method = "rkmk4";
  double K = 1.0;

  std::uint64_t seed = 42;
  double fd_step = 1e-5;
  bool richardson = false;
  bool fd_only = false;
  unsigned threads = 0;
  std::string file;  ///< export-space target
};

json to_json(const RunConfig& cfg);

/// Resolves a space name (see make_space) or a path to a JSON descriptor.
SpaceDescriptor resolve_space(const std::string& spec);

/// Named demo field for `space`, or `table:<path.csv>`.
/// sphere2: height-gradient, rotation, spiral, nonequivariant;
/// SO(3) spaces: attitude-demo, constant:a,b,c;
/// circle: sin, cos; euclidean:n: linear:m11,m12,...; any space: zero.
HorizontalField resolve_field(const SpaceDescriptor& space, const std::string& spec);

/// Default field name for a space when --field is omitted.
std::string default_field(const SpaceDescriptor& space);

/// Group element g = expm(v^i A_i) from generator coordinates (identity when empty).
Matrix element_from_coords(const SpaceDescriptor& space, const std::vector<double>& v);

/// Parses argv, runs the subcommand, writes outputs; returns the exit code.
/// Diagnostics go to `err`, the main JSON document to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hcontract::cli
