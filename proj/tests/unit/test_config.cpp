#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "epr/config.hpp"
#include "epr/errors.hpp"

using namespace epr;
using nlohmann::json;

namespace {

json base() { return {{"epsilon", 0.2}, {"P", 1}, {"a", 1}, {"t_final", 2}}; }

}  // namespace

TEST_CASE("minimal config uses defaults") {
  const Config c = parse_config(base());
  CHECK(c.model.params.epsilon() == 0.2);
  CHECK(c.model.envelope.shape() == Envelope::Shape::Gaussian);
  CHECK(c.model.potential.shape() == Potential::Shape::Gaussian);
  CHECK_FALSE(c.grid.has_value());
  CHECK(c.resolve_dt() == doctest::Approx(0.01));
  CHECK(c.resolve_half_width() == doctest::Approx(0.5));
  CHECK(c.resolve_grid() == default_grid(c.model.params));
  CHECK(c.sweep.eps == std::vector<double>{0.4, 0.3, 0.2, 0.15});
  CHECK(c.sweep.max_grid_points == 8192);
}

TEST_CASE("full config") {
  json doc = base();
  doc["grid"] = {{"n", 1024}, {"x_min", -10}, {"dx", 0.02}};
  doc["envelope"] = "sech";
  doc["potential"] = "sech2";
  doc["dt"] = 0.005;
  doc["window_half_width"] = 0.3;
  doc["sweep"] = {{"eps", {0.3, 0.2}}, {"observables", {"theorem_residual"}}, {"max_grid_points", 4096}};
  const Config c = parse_config(doc);
  REQUIRE(c.grid.has_value());
  CHECK(c.grid->size() == 1024);
  CHECK(c.grid->dx() == 0.02);
  CHECK(c.model.envelope.shape() == Envelope::Shape::Sech);
  CHECK(c.model.potential.shape() == Potential::Shape::Sech2);
  CHECK(c.resolve_dt() == 0.005);
  CHECK(c.resolve_half_width() == 0.3);
  CHECK(c.sweep.eps.size() == 2);
  CHECK(c.sweep.max_grid_points == 4096);
  const Config again = parse_config(c.to_json());
  CHECK(again.to_json() == c.to_json());
}

TEST_CASE("unknown keys are rejected at every level") {
  json top = base();
  top["epsilon_typo"] = 1;
  CHECK_THROWS_AS(parse_config(top), ConfigError);
  json grid = base();
  grid["grid"] = {{"n", 64}, {"x_min", 0}, {"dx", 0.1}, {"dy", 1}};
  CHECK_THROWS_AS(parse_config(grid), ConfigError);
  json sweep = base();
  sweep["sweep"] = {{"eps", {0.3}}, {"seed", 1}};
  CHECK_THROWS_AS(parse_config(sweep), ConfigError);
}

TEST_CASE("malformed values are configuration errors") {
  for (const char* key : {"epsilon", "P", "a", "t_final"}) {
    json missing = base();
    missing.erase(key);
    CHECK_THROWS_AS(parse_config(missing), ConfigError);
    json negative = base();
    negative[key] = -1;
    CHECK_THROWS_AS(parse_config(negative), ConfigError);
    json text = base();
    text[key] = "one";
    CHECK_THROWS_AS(parse_config(text), ConfigError);
  }
  json grid = base();
  grid["grid"] = {{"n", 1000}, {"x_min", 0}, {"dx", 0.1}};
  CHECK_THROWS_AS(parse_config(grid), ConfigError);
  json env = base();
  env["envelope"] = "box";
  CHECK_THROWS_AS(parse_config(env), ConfigError);
  json dt = base();
  dt["dt"] = 0;
  CHECK_THROWS_AS(parse_config(dt), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("loading from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "epr_config_test";
  std::filesystem::create_directories(dir);
  CHECK_THROWS_AS(load_config(dir / "does_not_exist.json"), ConfigError);
  {
    std::ofstream(dir / "broken.json") << "{\"epsilon\": 0.2,";
  }
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
  {
    std::ofstream(dir / "ok.json") << base().dump();
  }
  CHECK(load_config(dir / "ok.json").model.params.P() == 1.0);
  std::filesystem::remove_all(dir);
}
