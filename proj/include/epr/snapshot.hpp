#pragma once

#include "json.hpp"

#include "epr/field.hpp"

// Lossless JSON snapshots: {grid: {x_min, dx, n}, re: [...], im: [...]}.
// Doubles are written in shortest round-trip form.
namespace epr {

nlohmann::json to_json(const Grid& grid);
nlohmann::json to_json(const ComplexField& field);
nlohmann::json to_json(const SpinorField& spinor);
nlohmann::json to_json(const TwoParticleState& state);

Grid grid_from_json(const nlohmann::json& doc);
ComplexField field_from_json(const nlohmann::json& doc);
SpinorField spinor_from_json(const nlohmann::json& doc);
TwoParticleState state_from_json(const nlohmann::json& doc);

}  // namespace epr
