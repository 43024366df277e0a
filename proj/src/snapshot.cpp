#include "epr/snapshot.hpp"

#include "epr/errors.hpp"

namespace epr {

using nlohmann::json;

json to_json(const Grid& grid) { return {{"x_min", grid.x_min()}, {"dx", grid.dx()}, {"n", grid.size()}}; }

json to_json(const ComplexField& field) {
  json re = json::array(), im = json::array();
  for (const auto& v : field.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return {{"grid", to_json(field.grid())}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json to_json(const SpinorField& spinor) { return {{"up", to_json(spinor.up())}, {"down", to_json(spinor.down())}}; }

json to_json(const TwoParticleState& state) {
  json terms = json::array();
  for (const auto& term : state.terms()) {
    terms.push_back({{"coefficient", {{"re", term.coefficient.real()}, {"im", term.coefficient.imag()}}},
                     {"particle1", to_json(term.particle1)},
                     {"particle2", to_json(term.particle2)}});
  }
  return {{"terms", std::move(terms)}};
}

Grid grid_from_json(const json& doc) {
  try {
    return Grid(doc.at("x_min").get<double>(), doc.at("dx").get<double>(), doc.at("n").get<std::size_t>());
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed grid snapshot: ") + e.what());
  }
}

ComplexField field_from_json(const json& doc) {
  try {
    const Grid grid = grid_from_json(doc.at("grid"));
    const auto& re = doc.at("re");
    const auto& im = doc.at("im");
    if (re.size() != grid.size() || im.size() != grid.size())
      throw InvalidInput("field snapshot length does not match its grid");
    std::vector<cplx> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = {re[i].get<double>(), im[i].get<double>()};
    return ComplexField(grid, std::move(values));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed field snapshot: ") + e.what());
  }
}

SpinorField spinor_from_json(const json& doc) {
  try {
    return SpinorField(field_from_json(doc.at("up")), field_from_json(doc.at("down")));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed spinor snapshot: ") + e.what());
  }
}

TwoParticleState state_from_json(const json& doc) {
  try {
    TwoParticleState state;
    for (const auto& term : doc.at("terms")) {
      const auto& c = term.at("coefficient");
      state.add({spinor_from_json(term.at("particle1")), field_from_json(term.at("particle2")),
                 cplx(c.at("re").get<double>(), c.at("im").get<double>())});
    }
    return state;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed state snapshot: ") + e.what());
  }
}

}  // namespace epr
