#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "epr/config.hpp"

namespace epr {

/// One measurement at one epsilon.
struct SweepRecord {
  double epsilon;
  std::string observable;
  double measured;
  std::optional<double> predicted;
  double seconds;
};

struct SweepFailure {
  double epsilon;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<SweepFailure> failures;
};

/// value ~ exp(log_prefactor) * eps^exponent, least squares in log-log.
struct PowerLawFit {
  double exponent;
  double log_prefactor;
  double rms_residual;
  std::size_t points;

  double prefactor() const;
};

/// Observables a sweep can record, in output order.
const std::vector<std::string>& known_observables();

/// Observables whose power-law fit goes into the summary.
const std::vector<std::string>& fitted_observables();

using RecordSink = std::function<void(const SweepRecord&)>;

/// Runs every epsilon of the configuration (strictly decreasing list) and
/// records the selected observables. Per-epsilon failures are collected and
/// the sweep continues. Records are returned sorted by descending epsilon,
/// then by observable order; `sink` sees them as soon as each epsilon
/// finishes.
SweepResult run_sweep(const Config& config, const RecordSink& sink = {});

/// Measurements at a single epsilon; throws on failure.
std::vector<SweepRecord> measure_point(const Config& config, double epsilon,
                                       const std::vector<std::string>& observables);

PowerLawFit fit_power_law(std::span<const double> eps, std::span<const double> values);
/// Fit over the records of one observable. Non-positive values are dropped
/// with a warning.
PowerLawFit fit_power_law(std::span<const SweepRecord> records);

std::vector<SweepRecord> select(std::span<const SweepRecord> records, const std::string& observable);

/// CSV columns: epsilon,observable,measured,predicted,seconds. The seconds
/// column is left empty unless include_timings is set, so repeated runs are
/// byte-identical.
std::string to_csv(std::span<const SweepRecord> records, bool include_timings);
std::vector<SweepRecord> parse_csv(const std::string& text);
std::string csv_line(const SweepRecord& record, bool include_timings);

nlohmann::json summary_json(const Config& config, const SweepResult& result);

/// Log-log chart of measured points and fitted line.
std::string render_svg(const std::string& observable, std::span<const SweepRecord> records,
                       const std::optional<PowerLawFit>& fit);
/// Whitespace-separated columns: epsilon measured predicted fitted.
std::string render_dat(std::span<const SweepRecord> records, const std::optional<PowerLawFit>& fit);

}  // namespace epr
