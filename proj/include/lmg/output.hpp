#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmg/ensemble.hpp"
#include "lmg/exact.hpp"
#include "lmg/model.hpp"

namespace lmg {

enum class OutputFormat { csv, json };

OutputFormat format_from_string(const std::string& name);
const char* to_string(OutputFormat format);

/// One record of the shared time-series schema. CSV columns, in this order:
///   t,Jx,Jy,Jz,var_x,var_y,var_z,energy
struct TimeSeriesRow {
  double t = 0.0;
  std::array<double, 3> mean_J{};
  std::array<double, 3> var_J{};
  double energy = 0.0;

  bool operator==(const TimeSeriesRow&) const = default;
};

TimeSeriesRow to_row(const ExactObservables& obs);
/// SMF row; the energy column is N * mean_energy so it is comparable with
/// the exact <H> column.
TimeSeriesRow to_row(const EnsembleStats& stats, int n_particles);

/// Run provenance written into the JSON metadata header.
struct RunMetadata {
  std::string solver;
  int n_particles = 0;
  double epsilon = 1.0;
  double chi = 0.0;
  std::optional<double> dt;
  std::optional<std::string> scheme;
  std::optional<std::int64_t> n_trajectories;
  std::optional<std::uint64_t> seed;
  std::optional<bool> antithetic;
};

/// Writes rows to `path`. CSV: fixed header, floats with 17 significant
/// digits (a double-text round trip is bitwise). JSON: object with
/// "metadata" and "rows". Empty rows are rejected before the file is
/// created; I/O failures are reported with the path.
void emit_timeseries(std::span<const TimeSeriesRow> rows, OutputFormat format,
                     const std::filesystem::path& path,
                     const RunMetadata& meta);

std::vector<TimeSeriesRow> parse_timeseries_csv(
    const std::filesystem::path& path);
std::vector<TimeSeriesRow> parse_timeseries_json(
    const std::filesystem::path& path);

/// hf-scan output: columns alpha,phi,energy (CSV) or the JSON mirror.
void emit_landscape(std::span<const HfPoint> points, OutputFormat format,
                    const std::filesystem::path& path, const RunMetadata& meta);

/// Closed time window [lo, hi].
struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

/// Per-observable deviation summary between two series on a shared grid.
struct ObservableSummary {
  std::string name;
  double max_abs_dev_early = 0.0;     ///< max |exact - smf| over the early window
  double time_avg_exact_late = 0.0;   ///< trapezoid average over the late window
  double time_avg_smf_late = 0.0;
  double time_avg_abs_diff_late = 0.0;
};

struct ComparisonReport {
  std::vector<TimeSeriesRow> exact_rows;
  std::vector<TimeSeriesRow> smf_rows;
  Window early;
  Window late;
  std::array<ObservableSummary, 7> summary;  ///< Jx,Jy,Jz,var_x,var_y,var_z,energy
};

/// Requires identical time grids and windows inside the simulated range,
/// each containing at least two grid points.
ComparisonReport compare_report(std::span<const TimeSeriesRow> exact_rows,
                                std::span<const TimeSeriesRow> smf_rows,
                                Window early, Window late);

/// JSON: one file with metadata, summary and both row sets. CSV: writes the
/// two series in the standard schema to "<stem>.exact.csv" and
/// "<stem>.smf.csv" next to `path`; the summary goes to the CLI's stdout.
void emit_comparison(const ComparisonReport& report, OutputFormat format,
                     const std::filesystem::path& path, const RunMetadata& meta);

std::string format_comparison_summary(const ComparisonReport& report);

/// Trapezoid-rule average of `values` over the grid points of `times` lying
/// in the window (at least two required).
double trapezoid_average(std::span<const double> times,
                         std::span<const double> values, Window window);

}  // namespace lmg
