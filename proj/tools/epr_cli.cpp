#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "epr/config.hpp"
#include "epr/duhamel.hpp"
#include "epr/errors.hpp"
#include "epr/log.hpp"
#include "epr/observables.hpp"
#include "epr/oracle.hpp"
#include "epr/snapshot.hpp"
#include "epr/spectral.hpp"
#include "epr/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kConfigError = 2;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw epr::Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw epr::Error("failed while writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw epr::ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print(const json& doc) { std::cout << doc.dump(2) << "\n"; }

json grid_json(const epr::Grid& g) { return {{"x_min", g.x_min()}, {"dx", g.dx()}, {"n", g.size()}}; }

int run_evolve(const epr::Config& cfg, const std::string& dump) {
  const auto& p = cfg.model.params;
  const auto grid = cfg.resolve_grid();
  const double dt = cfg.resolve_dt();
  const auto state = epr::assemble_full_state(cfg.model, grid, p.t_final(), dt);
  if (!dump.empty()) write_file(dump, epr::to_json(state).dump() + "\n");
  print({{"epsilon", p.epsilon()},
         {"t", p.t_final()},
         {"dt", dt},
         {"grid", grid_json(grid)},
         {"norm", state.norm()},
         {"P_u", epr::spin_up_probability(state)},
         {"terms", state.term_count()}});
  return kOk;
}

int run_predict(const epr::Config& cfg) {
  const auto& p = cfg.model.params;
  const double eps = p.epsilon();
  const double alpha = epr::alpha(p, cfg.model.potential);
  const double N = epr::normalization_constant(p, cfg.model.envelope);
  const double nA = epr::norm_A(cfg.model);
  const auto cp = epr::CriticalPoint::of(p.a(), p.P());
  print({{"epsilon", eps},
         {"alpha", alpha},
         {"norm_A", nA},
         {"N", N},
         {"predicted_P_u", alpha * eps * eps},
         {"first_order_P_u", eps * eps * N * N * nA * nA},
         {"predicted_P_minus_u", alpha * eps * eps},
         {"predicted_P_minus_d", 0.5},
         {"mean_p1_up", p.P() - eps / p.P()},
         {"mean_x1_up", epr::flipped_branch_position(p, p.t_final())},
         {"t", p.t_final()},
         {"T_coll", p.t_coll()},
         {"T_spin", p.t_spin()},
         {"T_int", p.t_int()},
         {"critical_point", {{"tau_c", cp.tau_c}, {"xi_c", cp.xi_c}}}});
  return kOk;
}

int run_measure(const epr::Config& cfg) {
  const auto& p = cfg.model.params;
  const auto grid = cfg.resolve_grid();
  const auto state = epr::assemble_full_state(cfg.model, grid, p.t_final(), cfg.resolve_dt());
  auto doc = epr::to_json(epr::measure(state, p, cfg.resolve_half_width()));
  doc["epsilon"] = p.epsilon();
  doc["t"] = p.t_final();
  print(doc);
  return kOk;
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw epr::ConfigError("--eps: '" + item + "' is not a number");
    }
    if (used != item.size()) throw epr::ConfigError("--eps: '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

int run_sweep(epr::Config cfg, const std::optional<std::string>& eps_text, const std::string& out_dir, bool timings) {
  if (eps_text) cfg.sweep.eps = parse_eps_list(*eps_text);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const fs::path partial = dir / "sweep.csv.partial";
  {
    std::ofstream progress(partial, std::ios::trunc);
    progress << "epsilon,observable,measured,predicted,seconds\n";
  }
  std::ofstream progress(partial, std::ios::app);
  const auto result = epr::run_sweep(cfg, [&](const epr::SweepRecord& r) {
    progress << epr::csv_line(r, timings) << "\n";
    progress.flush();
  });
  progress.close();
  write_file(dir / "sweep.csv", epr::to_csv(result.records, timings));
  fs::remove(partial);
  const auto summary = epr::summary_json(cfg, result);
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  print(summary);
  return kOk;
}

struct Check {
  std::string name;
  double value;
  double tolerance;
};

int run_validate(const epr::Config& cfg) {
  const auto& p = cfg.model.params;
  const auto grid = cfg.resolve_grid();
  if (grid.size() > epr::kOracleMaxPoints) {
    std::ostringstream msg;
    msg << "validate runs O(n^2) oracles and needs n <= " << epr::kOracleMaxPoints << " (grid has " << grid.size()
        << ")";
    throw epr::ConfigError(msg.str());
  }
  std::vector<Check> checks;
  const auto phi = epr::sample_wavepacket(grid, p, cfg.model.envelope, p.P());

  for (double t : {0.1, 1.0}) {
    const auto spectral = epr::free_propagate(phi, t, p);
    const auto kernel = epr::kernel_propagate(phi, t, p);
    const std::string tag = "t=" + std::to_string(t).substr(0, 3);
    checks.push_back({"kernel_vs_spectral_" + tag, epr::distance(spectral, kernel) / spectral.norm(), 1e-6});
    checks.push_back({"kernel_norm_" + tag, std::abs(kernel.norm() - phi.norm()), 1e-6});
    checks.push_back({"spectral_norm_" + tag, std::abs(spectral.norm() - phi.norm()), 1e-12});
  }
  {
    const auto there = epr::kernel_propagate(phi, 1.0, p);
    const auto back = epr::kernel_propagate(there, -1.0, p);
    checks.push_back({"kernel_round_trip", epr::distance(back, phi) / phi.norm(), 1e-5});
  }
  {
    const auto spinor = epr::SpinorField::spin_down(phi);
    const auto evolved = epr::evolve_interacting(spinor, p.t_final(), cfg.resolve_dt(), p, cfg.model.potential);
    checks.push_back({"interacting_norm", std::abs(evolved.norm() - spinor.norm()), 1e-10});
  }
  {
    const auto A = epr::leading_order_A(grid, cfg.model);
    checks.push_back({"norm_A", std::abs(A.norm() - epr::norm_A(cfg.model)), 1e-8});
  }
  if (p.t_final() > 0.0) {
    const auto consistency = epr::i_operator_consistency(p.t_final(), cfg.model, grid);
    checks.push_back({"i_operator_form_vs_reduced", consistency.relative_distance, 1e-3});
  }

  bool all = true;
  json rows = json::array();
  for (const auto& c : checks) {
    const bool ok = std::isfinite(c.value) && c.value < c.tolerance;
    all = all && ok;
    rows.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", ok}});
  }
  print({{"checks", rows}, {"passed", all}, {"grid", grid_json(grid)}});
  return all ? kOk : kValidationFailed;
}

int run_plot(const std::string& out_dir) {
  const fs::path dir(out_dir);
  const auto records = epr::parse_csv(read_file(dir / "sweep.csv"));
  std::vector<std::string> seen;
  for (const auto& r : records)
    if (std::find(seen.begin(), seen.end(), r.observable) == seen.end()) seen.push_back(r.observable);
  json written = json::array();
  for (const auto& name : seen) {
    const auto rows = epr::select(records, name);
    std::optional<epr::PowerLawFit> fit;
    try {
      fit = epr::fit_power_law(rows);
    } catch (const epr::FitError&) {
    }
    write_file(dir / (name + ".svg"), epr::render_svg(name, rows, fit));
    write_file(dir / (name + ".dat"), epr::render_dat(rows, fit));
    written.push_back(name);
  }
  print({{"plotted", written}, {"directory", dir.string()}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EPR spin-flip laboratory: simulate, predict, measure, sweep, validate, plot"};
  app.require_subcommand(1, 1);
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging on stderr");
  app.add_flag("-q,--quiet", quiet, "Only warnings and errors on stderr");

  std::string config_path;
  auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    return sub;
  };
  auto* evolve = with_config(app.add_subcommand("evolve", "Evolve the entangled state to t_final"));
  std::string dump;
  evolve->add_option("--dump", dump, "Write the final state snapshot (JSON) to this path");
  auto* predict = with_config(app.add_subcommand("predict", "First-order predictions in closed form"));
  auto* measure = with_config(app.add_subcommand("measure", "Evolve and report spin/momentum probabilities"));
  auto* sweep = with_config(app.add_subcommand("sweep", "Epsilon sweep with power-law fits"));
  std::string eps_text;
  std::string sweep_out = "sweep_out";
  bool timings = false;
  sweep->add_option("--eps", eps_text, "Comma-separated, strictly decreasing epsilons");
  sweep->add_option("--out", sweep_out, "Output directory for sweep.csv and summary.json");
  sweep->add_flag("--timings", timings, "Fill the seconds column (output is then not reproducible)");
  auto* validate = with_config(app.add_subcommand("validate", "Run the oracle suite"));
  auto* plot = with_config(app.add_subcommand("plot", "SVG and .dat charts from <out>/sweep.csv"));
  std::string plot_out = "sweep_out";
  plot->add_option("--out", plot_out, "Directory holding sweep.csv; charts are written next to it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  epr::log::set_level(quiet ? epr::log::Level::Warn : verbose ? epr::log::Level::Debug : epr::log::Level::Info);

  try {
    const auto cfg = epr::load_config(config_path);
    if (*evolve) return run_evolve(cfg, dump);
    if (*predict) return run_predict(cfg);
    if (*measure) return run_measure(cfg);
    if (*sweep) return run_sweep(cfg, sweep->count("--eps") ? std::optional(eps_text) : std::nullopt, sweep_out, timings);
    if (*validate) return run_validate(cfg);
    if (*plot) return run_plot(plot_out);
  } catch (const epr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const epr::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailed;
  }
  return kConfigError;
}
