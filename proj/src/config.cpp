#include "epr/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "epr/errors.hpp"

namespace epr {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("key '" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

}  // namespace

Grid Config::resolve_grid() const { return grid ? *grid : default_grid(model.params); }

double Config::resolve_dt() const { return dt ? *dt : default_time_step(model.params); }

double Config::resolve_half_width() const { return window_half_width ? *window_half_width : 0.5 * model.params.P(); }

json Config::to_json() const {
  const auto& p = model.params;
  json out = {{"epsilon", p.epsilon()},
              {"P", p.P()},
              {"a", p.a()},
              {"t_final", p.t_final()},
              {"envelope", model.envelope.name()},
              {"potential", model.potential.name()}};
  if (grid) out["grid"] = {{"n", grid->size()}, {"x_min", grid->x_min()}, {"dx", grid->dx()}};
  if (dt) out["dt"] = *dt;
  if (window_half_width) out["window_half_width"] = *window_half_width;
  out["sweep"] = {{"eps", sweep.eps}, {"observables", sweep.observables}, {"max_grid_points", sweep.max_grid_points}};
  return out;
}

Config parse_config(const json& doc) {
  reject_unknown(doc,
                 {"epsilon", "P", "a", "t_final", "grid", "envelope", "potential", "dt", "window_half_width", "sweep"},
                 "config");
  try {
    Config cfg{.model = {.params = PhysParams(number(doc, "epsilon", "config"), number(doc, "P", "config"),
                                              number(doc, "a", "config"), number(doc, "t_final", "config"))},
               .grid = std::nullopt,
               .dt = std::nullopt,
               .window_half_width = std::nullopt,
               .sweep = {}};
    if (doc.contains("envelope")) cfg.model.envelope = Envelope::from_name(doc.at("envelope").get<std::string>());
    if (doc.contains("potential")) cfg.model.potential = Potential::from_name(doc.at("potential").get<std::string>());
    if (doc.contains("grid")) {
      const auto& g = doc.at("grid");
      reject_unknown(g, {"n", "x_min", "dx"}, "grid");
      const double n = number(g, "n", "grid");
      if (n < 2 || n != static_cast<double>(static_cast<std::size_t>(n))) {
        throw ConfigError("grid.n must be a positive integer");
      }
      cfg.grid = Grid(number(g, "x_min", "grid"), number(g, "dx", "grid"), static_cast<std::size_t>(n));
    }
    if (doc.contains("dt")) {
      cfg.dt = number(doc, "dt", "config");
      if (!(*cfg.dt > 0.0)) throw ConfigError("dt must be > 0");
    }
    if (doc.contains("window_half_width")) {
      cfg.window_half_width = number(doc, "window_half_width", "config");
      if (!(*cfg.window_half_width > 0.0)) throw ConfigError("window_half_width must be > 0");
    }
    if (doc.contains("sweep")) {
      const auto& s = doc.at("sweep");
      reject_unknown(s, {"eps", "observables", "max_grid_points"}, "sweep");
      if (s.contains("eps")) cfg.sweep.eps = s.at("eps").get<std::vector<double>>();
      if (s.contains("observables")) cfg.sweep.observables = s.at("observables").get<std::vector<std::string>>();
      if (s.contains("max_grid_points")) cfg.sweep.max_grid_points = s.at("max_grid_points").get<std::size_t>();
    }
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace epr
