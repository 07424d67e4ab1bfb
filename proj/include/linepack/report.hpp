#pragma once

// Machine-readable output: JSON objects for metrics, runs and comparisons,
// and the SweepRecord row shared by the sweep CSV and JSON outputs.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linepack/ingest.hpp"
#include "linepack/metrics.hpp"
#include "linepack/optimizer.hpp"

namespace linepack {

/// One (d, N, s) experiment outcome.
struct SweepRecord {
  int d = 0;
  int n = 0;
  std::string s;  ///< exponent in shortest round-trip form, or "fp"
  double best_energy = 0.0;
  double coherence = 0.0;
  double tightness_residual = 0.0;
  double welch = 0.0;
  std::optional<double> levenstein;
  std::optional<double> sep_bound;
  int restarts_used = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  double wall_time_ms = 0.0;

  bool operator==(const SweepRecord&) const = default;
};

/// Header row, in SweepRecord field order:
/// d,N,s,best_energy,coherence,tightness_residual,welch,levenstein,sep_bound,
/// restarts_used,seed,converged,wall_time_ms
const std::vector<std::string>& sweep_csv_columns();
std::string sweep_csv_header();
std::string to_csv_row(const SweepRecord& r);
/// Parses a data row produced by to_csv_row. Throws std::invalid_argument.
SweepRecord sweep_record_from_csv(const std::string& line);

/// "fp" for the frame potential, otherwise the shortest decimal that round
/// trips the exponent.
std::string exponent_label(const KernelSpec& k);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

SweepRecord make_sweep_record(const RunResult& run, int restarts, std::uint64_t seed,
                              bool with_timing);

nlohmann::json to_json(const SweepRecord& r);
SweepRecord sweep_record_from_json(const nlohmann::json& j);

/// Flat object with keys coherence, chordal_separation, tightness_residual,
/// frame_lower, frame_upper, welch, levenstein, sep_bound_rhs, equiangular,
/// distinct_abs_inners ([{value, multiplicity}]). Absent optionals are null.
nlohmann::json to_json(const MetricsReport& m);

/// Keys kernel, s, d, N, energy, grad_norm, iterations, converged,
/// stop_reason, restart_index, wall_time_ms.
nlohmann::json to_json(const RunResult& r, bool with_timing);

/// Keys coherence_a, coherence_b, coherence_diff, residual_a, residual_b,
/// residual_diff, equivalent.
nlohmann::json to_json(const ComparisonRecord& c);

/// Array of N arrays of d coordinates.
nlohmann::json vectors_to_json(const Frame& x);

}  // namespace linepack
