#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qhgeo/arc.hpp"
#include "qhgeo/domain.hpp"

namespace qhgeo {

// Domain files are JSON:
//   {"dimension": 2, "norm_p": 2,
//    "shape": {"type": "ball", "center": [0, 0], "radius": 1},
//    "punctures": {"b": 0.5, "points": [[0, 0]]}}
// with shape types half_space, ball (center, radius), box (lo, hi) and
// polygon (vertices). "norm_p" may be the string "inf"; "punctures" is optional.
// Errors are ParseError with the line and column of the offending text.
DomainSpec parse_domain(const std::string& text);
DomainSpec load_domain(const std::string& path);
std::string domain_to_json(const DomainSpec& d);

/// CSV with header x1,...,xn,s and one vertex per row; s is the cumulative
/// arclength. Coordinates are printed with 17 significant digits, so reading
/// back a written arc is exact.
std::string arc_to_csv(const Arc& a);
/// The s column is checked for being numeric and otherwise ignored.
Arc parse_arc_csv(const std::string& text, Norm norm = Norm{});
Arc load_arc(const std::string& path, Norm norm = Norm{});

struct SvgStyle {
  int width = 640;
  int height = 640;
};

/// Domain boundary, punctures and arcs in the (x1, x2) plane, drawn over the
/// sampling window of the domain grown to contain the arcs. Output depends only
/// on the inputs.
std::string render_svg(const DomainSpec& d, const std::vector<Arc>& arcs, const SvgStyle& style = {});

/// FNV-1a 64-bit hash, printed as 16 hex digits by hex_digest.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex_digest(const std::string& bytes);

std::string read_file(const std::string& path);
/// Writes to a temporary file next to `path` and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::string tool_version;
  /// Input path -> hex digest of its bytes.
  std::map<std::string, std::string> input_digests;
  double wall_time_s = 0.0;
  int threads = 1;

  std::string to_json() const;
};

/// Version string of the library, also recorded in run manifests.
const char* version() noexcept;

}  // namespace qhgeo
