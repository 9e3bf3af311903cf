// Tests for the run-configuration file format and its validation.

#include <filesystem>
#include <fstream>
#include <string>

#include "curvatura/config.hpp"
#include "curvatura/types.hpp"
#include "doctest.h"

using namespace curvatura;

TEST_CASE("defaults serialize and parse back bit-exactly") {
  const RunConfig def;
  CHECK(def.radius == 0.31622776601683794);
  CHECK(def.p == 2);
  CHECK(def.q == 3);
  CHECK(def.seeds == 20);
  CHECK(def.mesh_rings == 48);
  CHECK(!def.pole.has_value());
  CHECK(def.format == "json");
  CHECK(def.quick == false);

  const std::string text = serialize_config(def);
  const RunConfig back = parse_config(text);
  CHECK(back == def);

  // a fully customized config round-trips too, including the pole
  RunConfig c;
  c.radius = 1.0 / 3.0;
  c.p = 2;
  c.q = 3;
  c.step = 7.25e-5;
  c.seeds = 11;
  c.mesh_rings = 96;
  c.pole = {0.0, 0.0, -1.0 / 3.0, 0.0};
  c.format = "ply";
  c.out = "some/dir/run7";
  c.quick = true;
  c.threads = 3;
  c.theta_perturb = 1e-7;
  CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("parser accepts comments, blank lines, and loose spacing") {
  const std::string text =
      "# run configuration\n"
      "\n"
      "radius = 0.5   # trailing comment\n"
      "  seeds=7\n"
      "format =  csv\n"
      "quick = true\n"
      "pole = 0, 0, -0.5, 0\n"
      "\t\n";
  const RunConfig c = parse_config(text);
  CHECK(c.radius == 0.5);
  CHECK(c.seeds == 7);
  CHECK(c.format == "csv");
  CHECK(c.quick == true);
  REQUIRE(c.pole.has_value());
  CHECK((*c.pole)[2] == -0.5);
  // untouched keys keep their defaults
  CHECK(c.p == 2);
  CHECK(c.mesh_rings == 48);
}

TEST_CASE("parser reports the offending line") {
  auto message_of = [](const std::string& text) {
    try {
      (void)parse_config(text);
    } catch (const invalid_parameter& e) {
      return std::string(e.what());
    }
    return std::string();
  };

  // unknown key
  std::string msg = message_of("radius = 0.5\nbogus_key = 3\n");
  CHECK(msg.find("bogus_key") != std::string::npos);
  CHECK(msg.find("2") != std::string::npos);  // line number

  // missing '='
  msg = message_of("radius 0.5\n");
  CHECK(msg.find("=") != std::string::npos);

  // malformed numbers
  CHECK(message_of("radius = abc\n").find("radius") != std::string::npos);
  CHECK(message_of("seeds = 3.5\n").find("seeds") != std::string::npos);
  CHECK(message_of("seeds = 3x\n").find("seeds") != std::string::npos);
  CHECK(message_of("quick = maybe\n").find("quick") != std::string::npos);
  CHECK(message_of("pole = 1, 2, 3\n").find("pole") != std::string::npos);
  CHECK(!message_of("radius = 1e\n").empty());
}

TEST_CASE("validation names the offending key") {
  auto rejects = [](RunConfig c, const std::string& key) {
    try {
      validate_config(c);
    } catch (const invalid_parameter& e) {
      return std::string(e.what()).find(key) != std::string::npos;
    }
    return false;
  };

  CHECK_NOTHROW(validate_config(RunConfig{}));

  RunConfig c;
  c.radius = 0;
  CHECK(rejects(c, "radius"));
  c = RunConfig{};
  c.radius = -2;
  CHECK(rejects(c, "radius"));
  c = RunConfig{};
  c.radius = std::numeric_limits<double>::quiet_NaN();
  CHECK(rejects(c, "radius"));
  c = RunConfig{};
  c.p = 1;
  CHECK(rejects(c, "p"));
  c = RunConfig{};
  c.q = 0;
  CHECK(rejects(c, "q"));
  c = RunConfig{};
  c.seeds = 0;
  CHECK(rejects(c, "seeds"));
  c = RunConfig{};
  c.mesh_rings = 7;
  CHECK(rejects(c, "mesh_rings"));
  c = RunConfig{};
  c.format = "stl";
  CHECK(rejects(c, "format"));
  c = RunConfig{};
  c.out = "";
  CHECK(rejects(c, "out"));
  c = RunConfig{};
  c.threads = -1;
  CHECK(rejects(c, "threads"));
  c = RunConfig{};
  c.pole = {0.0, std::numeric_limits<double>::infinity(), 0.0, 0.0};
  CHECK(rejects(c, "pole"));
  c = RunConfig{};
  c.step = std::numeric_limits<double>::quiet_NaN();
  CHECK(rejects(c, "step"));

  // every supported format passes
  for (const char* f : {"json", "csv", "ply", "obj"}) {
    c = RunConfig{};
    c.format = f;
    CHECK_NOTHROW(validate_config(c));
  }
}

TEST_CASE("save and load round-trip through a file") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "curvatura_config_test";
  fs::create_directories(dir);
  const std::string path = (dir / "run.cfg").string();

  RunConfig c;
  c.radius = 0.25;
  c.seeds = 5;
  c.pole = {0.0, 0.25, 0.0, 0.0};
  save_config(path, c);
  CHECK(load_config(path) == c);

  CHECK_THROWS_AS((void)load_config((dir / "missing.cfg").string()), io_failure);
  fs::remove_all(dir);
}
