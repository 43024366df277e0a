#include "epr/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>

#include "epr/duhamel.hpp"
#include "epr/errors.hpp"
#include "epr/log.hpp"
#include "epr/observables.hpp"
#include "epr/parallel.hpp"
#include "epr/spectral.hpp"

namespace epr {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw InvalidInput("not a number in CSV: '" + text + "'");
  return v;
}

std::size_t observable_rank(const std::string& name) {
  const auto& all = known_observables();
  return static_cast<std::size_t>(std::find(all.begin(), all.end(), name) - all.begin());
}

std::vector<std::string> selected_observables(const Config& config) {
  if (config.sweep.observables.empty()) return known_observables();
  std::vector<std::string> out;
  for (const auto& name : known_observables())
    if (std::find(config.sweep.observables.begin(), config.sweep.observables.end(), name) !=
        config.sweep.observables.end())
      out.push_back(name);
  for (const auto& name : config.sweep.observables)
    if (observable_rank(name) == known_observables().size()) throw ConfigError("unknown observable '" + name + "'");
  return out;
}

bool wants(const std::vector<std::string>& list, const char* name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

}  // namespace

double PowerLawFit::prefactor() const { return std::exp(log_prefactor); }

const std::vector<std::string>& known_observables() {
  static const std::vector<std::string> names{
      "theorem_residual", "stationary_phase_residual", "spin_up_probability", "joint_minus_up", "joint_minus_down",
      "ratio_up",         "l_term_bound",              "mean_p1_up",          "mean_x1_up"};
  return names;
}

const std::vector<std::string>& fitted_observables() {
  static const std::vector<std::string> names{"theorem_residual", "stationary_phase_residual", "spin_up_probability",
                                              "joint_minus_up", "l_term_bound"};
  return names;
}

std::vector<SweepRecord> measure_point(const Config& config, double epsilon, const std::vector<std::string>& observables) {
  const auto start = std::chrono::steady_clock::now();
  Model model = config.model;
  model.params = model.params.with_epsilon(epsilon);
  const auto& p = model.params;
  const double t = p.t_final();
  const Grid grid = config.grid ? *config.grid : default_grid(p, config.sweep.max_grid_points);
  require_resolved(grid, epsilon, p.P());
  const double dt = config.dt ? *config.dt : default_time_step(p);

  std::vector<std::pair<std::string, std::pair<double, std::optional<double>>>> values;
  auto put = [&](const char* name, double measured, std::optional<double> predicted = std::nullopt) {
    if (wants(observables, name)) values.push_back({name, {measured, predicted}});
  };

  const bool needs_state = std::any_of(observables.begin(), observables.end(), [](const std::string& o) {
    return o != "stationary_phase_residual" && o != "l_term_bound";
  });
  if (needs_state) {
    const auto state = assemble_full_state(model, grid, t, dt);
    if (wants(observables, "theorem_residual"))
      put("theorem_residual", theorem_remainder(state.terms().front().particle1, model, t));
    const double a = alpha(p, model.potential);
    const MomentumWindow window(-p.P(), config.resolve_half_width());
    const double P_u = spin_probability(state, Spin::Up);
    put("spin_up_probability", P_u, a * epsilon * epsilon);
    if (wants(observables, "joint_minus_up") || wants(observables, "ratio_up")) {
      const double joint_u = joint_momentum_spin_probability(state, window, Spin::Up, p);
      put("joint_minus_up", joint_u, a * epsilon * epsilon);
      put("ratio_up", P_u > 0.0 ? joint_u / P_u : 0.0, 1.0);
    }
    if (wants(observables, "joint_minus_down"))
      put("joint_minus_down", joint_momentum_spin_probability(state, window, Spin::Down, p), 0.5);
    if (wants(observables, "mean_p1_up"))
      put("mean_p1_up", particle1_momentum_given_spin(state, Spin::Up, p), p.P() - epsilon / p.P());
    if (wants(observables, "mean_x1_up"))
      put("mean_x1_up", particle1_position_given_spin(state, Spin::Up), flipped_branch_position(p, t));
  }
  if (wants(observables, "stationary_phase_residual")) put("stationary_phase_residual", residual_Q(t, model, grid));
  if (wants(observables, "l_term_bound")) put("l_term_bound", l_term_bound(t, model, grid));

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<SweepRecord> records;
  for (const auto& [name, mp] : values) records.push_back({epsilon, name, mp.first, mp.second, seconds});
  std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return observable_rank(a.observable) < observable_rank(b.observable);
  });
  return records;
}

SweepResult run_sweep(const Config& config, const RecordSink& sink) {
  const auto& eps = config.sweep.eps;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !std::isfinite(eps[i])) throw ConfigError("sweep epsilons must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError("sweep epsilons must be strictly decreasing");
  }
  const auto observables = selected_observables(config);

  std::vector<std::vector<SweepRecord>> per_eps(eps.size());
  std::vector<std::optional<SweepFailure>> failures(eps.size());
  std::mutex sink_mutex;
  parallel_for(eps.size(), thread_budget(), [&](std::size_t i) {
    try {
      per_eps[i] = measure_point(config, eps[i], observables);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "eps = " << eps[i] << " failed: " << e.what();
      log::warn(msg.str());
      failures[i] = SweepFailure{eps[i], e.what()};
      return;
    }
    if (sink) {
      std::lock_guard lock(sink_mutex);
      for (const auto& r : per_eps[i]) sink(r);
    }
  });

  SweepResult result;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    for (auto& r : per_eps[i]) result.records.push_back(std::move(r));
    if (failures[i]) result.failures.push_back(*failures[i]);
  }
  std::stable_sort(result.records.begin(), result.records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    if (a.epsilon != b.epsilon) return a.epsilon > b.epsilon;
    return observable_rank(a.observable) < observable_rank(b.observable);
  });
  return result;
}

PowerLawFit fit_power_law(std::span<const double> eps, std::span<const double> values) {
  if (eps.size() != values.size()) throw FitError("fit needs as many values as epsilons");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(values[i] > 0.0) || !(eps[i] > 0.0) || !std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << "dropping non-positive point (eps = " << eps[i] << ", value = " << values[i] << ") from power-law fit";
      log::warn(msg.str());
      continue;
    }
    lx.push_back(std::log(eps[i]));
    ly.push_back(std::log(values[i]));
  }
  const std::size_t n = lx.size();
  if (n < 3) throw FitError("power-law fit needs at least 3 positive points, have " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("power-law fit needs at least two distinct epsilons");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss += r * r;
  }
  return PowerLawFit{slope, intercept, std::sqrt(ss / static_cast<double>(n)), n};
}

PowerLawFit fit_power_law(std::span<const SweepRecord> records) {
  std::vector<double> eps, values;
  for (const auto& r : records) {
    eps.push_back(r.epsilon);
    values.push_back(r.measured);
  }
  return fit_power_law(eps, values);
}

std::vector<SweepRecord> select(std::span<const SweepRecord> records, const std::string& observable) {
  std::vector<SweepRecord> out;
  for (const auto& r : records)
    if (r.observable == observable) out.push_back(r);
  return out;
}

std::string csv_line(const SweepRecord& record, bool include_timings) {
  std::string line = format_double(record.epsilon) + "," + record.observable + "," + format_double(record.measured) + ",";
  if (record.predicted) line += format_double(*record.predicted);
  line += ",";
  if (include_timings) line += format_double(record.seconds);
  return line;
}

std::string to_csv(std::span<const SweepRecord> records, bool include_timings) {
  std::string out = "epsilon,observable,measured,predicted,seconds\n";
  for (const auto& r : records) out += csv_line(r, include_timings) + "\n";
  return out;
}

std::vector<SweepRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<SweepRecord> out;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("epsilon,", 0) == 0) continue;
    }
    std::vector<std::string> cols;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cols.push_back(cell);
    if (line.back() == ',') cols.emplace_back();
    if (cols.size() != 5) throw InvalidInput("CSV row needs 5 columns: '" + line + "'");
    SweepRecord r{parse_double(cols[0]), cols[1], parse_double(cols[2]), std::nullopt, 0.0};
    if (!cols[3].empty()) r.predicted = parse_double(cols[3]);
    if (!cols[4].empty()) r.seconds = parse_double(cols[4]);
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json summary_json(const Config& config, const SweepResult& result) {
  using nlohmann::json;
  json fits = json::object();
  for (const auto& name : fitted_observables()) {
    const auto rows = select(result.records, name);
    if (rows.empty()) continue;
    try {
      const auto fit = fit_power_law(rows);
      fits[name] = {{"exponent", fit.exponent},
                    {"log_prefactor", fit.log_prefactor},
                    {"prefactor", fit.prefactor()},
                    {"rms_residual", fit.rms_residual},
                    {"points", fit.points}};
    } catch (const FitError& e) {
      fits[name] = {{"error", e.what()}};
    }
  }
  json failures = json::array();
  for (const auto& f : result.failures) failures.push_back({{"epsilon", f.epsilon}, {"message", f.message}});
  const auto& p = config.model.params;
  return {{"config", config.to_json()},
          {"alpha", alpha(p, config.model.potential)},
          {"window", {{"center", -p.P()}, {"half_width", config.resolve_half_width()}}},
          {"records", result.records.size()},
          {"fits", std::move(fits)},
          {"failures", std::move(failures)}};
}

namespace {

struct LogAxis {
  double lo, hi;
  double pixel_lo, pixel_hi;
  double map(double v) const {
    return pixel_lo + (std::log10(v) - lo) / (hi - lo) * (pixel_hi - pixel_lo);
  }
};

LogAxis axis_for(std::vector<double> values, double pixel_lo, double pixel_hi) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    lo = std::min(lo, std::log10(v));
    hi = std::max(hi, std::log10(v));
  }
  if (!std::isfinite(lo)) lo = -1.0, hi = 0.0;
  lo = std::floor(lo * 4.0) / 4.0 - 0.25;
  hi = std::ceil(hi * 4.0) / 4.0 + 0.25;
  return {lo, hi, pixel_lo, pixel_hi};
}

}  // namespace

std::string render_svg(const std::string& observable, std::span<const SweepRecord> records,
                       const std::optional<PowerLawFit>& fit) {
  const double width = 640, height = 480, left = 80, right = 600, top = 50, bottom = 410;
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    xs.push_back(r.epsilon);
    ys.push_back(r.measured);
    if (r.predicted) ys.push_back(*r.predicted);
  }
  const LogAxis ax = axis_for(xs, left, right);
  const LogAxis ay = axis_for(ys, bottom, top);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"16\">" << observable
      << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left << "\" height=\"" << bottom - top
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(ax.lo)); d <= static_cast<int>(std::floor(ax.hi)); ++d) {
    const double px = ax.map(std::pow(10.0, d));
    svg << "<line x1=\"" << px << "\" y1=\"" << bottom << "\" x2=\"" << px << "\" y2=\"" << bottom + 6
        << "\" stroke=\"black\"/><text x=\"" << px << "\" y=\"" << bottom + 20 << "\" text-anchor=\"middle\">1e" << d
        << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ay.lo)); d <= static_cast<int>(std::floor(ay.hi)); ++d) {
    const double py = ay.map(std::pow(10.0, d));
    svg << "<line x1=\"" << left - 6 << "\" y1=\"" << py << "\" x2=\"" << left << "\" y2=\"" << py
        << "\" stroke=\"black\"/><text x=\"" << left - 10 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">1e" << d
        << "</text>\n";
  }
  svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 25 << "\" text-anchor=\"middle\">epsilon</text>\n";
  if (fit) {
    const double e0 = std::pow(10.0, ax.lo), e1 = std::pow(10.0, ax.hi);
    auto model = [&](double e) { return std::exp(fit->log_prefactor) * std::pow(e, fit->exponent); };
    svg << "<line x1=\"" << ax.map(e0) << "\" y1=\"" << ay.map(model(e0)) << "\" x2=\"" << ax.map(e1) << "\" y2=\""
        << ay.map(model(e1)) << "\" stroke=\"steelblue\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + 10 << "\" y=\"" << top + 20 << "\">fit: exponent " << format_double(fit->exponent)
        << ", prefactor " << format_double(fit->prefactor()) << "</text>\n";
  }
  for (const auto& r : records) {
    if (r.predicted && *r.predicted > 0.0)
      svg << "<rect x=\"" << ax.map(r.epsilon) - 4 << "\" y=\"" << ay.map(*r.predicted) - 4
          << "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"darkorange\"/>\n";
    if (r.measured > 0.0)
      svg << "<circle cx=\"" << ax.map(r.epsilon) << "\" cy=\"" << ay.map(r.measured)
          << "\" r=\"4\" fill=\"black\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_dat(std::span<const SweepRecord> records, const std::optional<PowerLawFit>& fit) {
  std::string out = "# epsilon measured predicted fitted\n";
  for (const auto& r : records) {
    const double fitted = fit ? fit->prefactor() * std::pow(r.epsilon, fit->exponent)
                              : std::numeric_limits<double>::quiet_NaN();
    out += format_double(r.epsilon) + " " + format_double(r.measured) + " " +
           format_double(r.predicted ? *r.predicted : std::numeric_limits<double>::quiet_NaN()) + " " +
           format_double(fitted) + "\n";
  }
  return out;
}

}  // namespace epr
