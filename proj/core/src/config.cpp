#include "curvatura/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "curvatura/geom_export.hpp"
#include "curvatura/types.hpp"

namespace curvatura {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  double x = std::strtod(begin, &end);
  if (end == begin || trim(end).size())
    throw invalid_parameter("config: bad number for '" + key + "': " + value);
  return x;
}

int parse_int(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  long x = std::strtol(begin, &end, 10);
  if (end == begin || trim(end).size())
    throw invalid_parameter("config: bad integer for '" + key + "': " + value);
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw invalid_parameter("config: bad boolean for '" + key + "': " + value);
}

std::array<double, 4> parse_vec4(const std::string& key,
                                 const std::string& value) {
  std::array<double, 4> out{};
  std::string item;
  std::istringstream is(value);
  int i = 0;
  while (std::getline(is, item, ',')) {
    if (i >= 4) throw invalid_parameter("config: too many entries for '" + key + "'");
    out[i++] = parse_double(key, trim(item));
  }
  if (i != 4)
    throw invalid_parameter("config: expected 4 comma-separated numbers for '" +
                            key + "': " + value);
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw invalid_parameter("config: missing '=' on line " +
                              std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "radius")
      cfg.radius = parse_double(key, value);
    else if (key == "p")
      cfg.p = parse_int(key, value);
    else if (key == "q")
      cfg.q = parse_int(key, value);
    else if (key == "step")
      cfg.step = parse_double(key, value);
    else if (key == "seeds")
      cfg.seeds = parse_int(key, value);
    else if (key == "mesh_rings")
      cfg.mesh_rings = parse_int(key, value);
    else if (key == "pole")
      cfg.pole = parse_vec4(key, value);
    else if (key == "format")
      cfg.format = value;
    else if (key == "out")
      cfg.out = value;
    else if (key == "quick")
      cfg.quick = parse_bool(key, value);
    else if (key == "threads")
      cfg.threads = parse_int(key, value);
    else if (key == "theta_perturb")
      cfg.theta_perturb = parse_double(key, value);
    else
      throw invalid_parameter("config: unknown key '" + key + "' on line " +
                              std::to_string(lineno));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_failure("cannot open config: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "radius = " << format_g17(cfg.radius) << "\n";
  os << "p = " << cfg.p << "\n";
  os << "q = " << cfg.q << "\n";
  os << "step = " << format_g17(cfg.step) << "\n";
  os << "seeds = " << cfg.seeds << "\n";
  os << "mesh_rings = " << cfg.mesh_rings << "\n";
  if (cfg.pole) {
    const auto& p = *cfg.pole;
    os << "pole = " << format_g17(p[0]) << ", " << format_g17(p[1]) << ", "
       << format_g17(p[2]) << ", " << format_g17(p[3]) << "\n";
  }
  os << "format = " << cfg.format << "\n";
  os << "out = " << cfg.out << "\n";
  os << "quick = " << (cfg.quick ? "true" : "false") << "\n";
  os << "threads = " << cfg.threads << "\n";
  os << "theta_perturb = " << format_g17(cfg.theta_perturb) << "\n";
  return os.str();
}

void save_config(const std::string& path, const RunConfig& cfg) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_failure("cannot open for writing: " + path);
  os << serialize_config(cfg);
  os.flush();
  if (!os) throw io_failure("write failed: " + path);
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.radius > 0) || !std::isfinite(cfg.radius))
    throw invalid_parameter("config: radius must be positive and finite");
  if (cfg.p < 2) throw invalid_parameter("config: p must be >= 2");
  if (cfg.q < 2) throw invalid_parameter("config: q must be >= 2");
  if (!std::isfinite(cfg.step))
    throw invalid_parameter("config: step must be finite");
  if (cfg.seeds <= 0) throw invalid_parameter("config: seeds must be positive");
  if (cfg.mesh_rings < 8)
    throw invalid_parameter("config: mesh_rings must be >= 8");
  if (cfg.pole)
    for (double c : *cfg.pole)
      if (!std::isfinite(c))
        throw invalid_parameter("config: pole entries must be finite");
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "ply" &&
      cfg.format != "obj")
    throw invalid_parameter("config: unknown format '" + cfg.format + "'");
  if (cfg.out.empty()) throw invalid_parameter("config: out must be nonempty");
  if (cfg.threads < 0)
    throw invalid_parameter("config: threads must be >= 0");
  if (!std::isfinite(cfg.theta_perturb))
    throw invalid_parameter("config: theta_perturb must be finite");
}

}  // namespace curvatura
