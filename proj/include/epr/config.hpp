#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "epr/grid.hpp"
#include "epr/model.hpp"

namespace epr {

struct SweepSettings {
  std::vector<double> eps{0.4, 0.3, 0.2, 0.15};
  std::vector<std::string> observables;  // empty: all known observables
  std::size_t max_grid_points = 8192;
};

/// Run configuration. JSON layout:
///
///   {"epsilon": 0.2, "P": 1, "a": 1, "t_final": 2,
///    "grid": {"n": 2048, "x_min": -13, "dx": 0.0127},      (optional)
///    "envelope": "gaussian", "potential": "gaussian",     (optional)
///    "dt": 0.01, "window_half_width": 0.5,                (optional)
///    "sweep": {"eps": [...], "observables": [...], "max_grid_points": 8192}}
///
/// Unknown keys at any level are rejected.
struct Config {
  Model model;
  std::optional<Grid> grid;
  std::optional<double> dt;
  std::optional<double> window_half_width;
  SweepSettings sweep;

  /// Explicit grid, or the default box for the model parameters.
  Grid resolve_grid() const;
  double resolve_dt() const;
  double resolve_half_width() const;

  nlohmann::json to_json() const;
};

Config parse_config(const nlohmann::json& doc);
Config load_config(const std::filesystem::path& path);

}  // namespace epr
