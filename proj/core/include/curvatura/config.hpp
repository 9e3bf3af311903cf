#pragma once

#include <array>
#include <optional>
#include <string>

namespace curvatura {

// Run parameters shared by CLI flags and config files. The file format is
// line-oriented `key = value` with '#' comments; serialize/parse round-trip
// bit-exactly (doubles via shortest-roundtrip decimals).
struct RunConfig {
  double radius = 0.31622776601683794;  // 1/sqrt(10)
  int p = 2;
  int q = 3;
  double step = 0;  // <= 0: derived as 1e-3 * radius
  int seeds = 20;
  int mesh_rings = 48;
  std::optional<std::array<double, 4>> pole;  // unset: (0, 0, radius, 0)
  std::string format = "json";                // json | csv | ply | obj
  std::string out = "curvatura_out";
  bool quick = false;
  int threads = 0;
  double theta_perturb = 0;  // nonzero corrupts the reduced system (negative control)

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);
void save_config(const std::string& path, const RunConfig& cfg);

// Validates ranges (radius > 0, p,q >= 2, seeds > 0, known format, ...);
// throws invalid_parameter with the offending key in the message.
void validate_config(const RunConfig& cfg);

}  // namespace curvatura
