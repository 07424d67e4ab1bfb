#pragma once

// Grids of (d, N, s) multistart experiments, one SweepRecord per cell.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linepack/report.hpp"

namespace linepack {

struct SweepSpec {
  int d = 3;
  int n_min = 3;
  int n_max = 3;
  std::vector<KernelSpec> kernels;  ///< in output order within each N
  OptimizerSettings settings;
  bool with_timing = false;
};

/// Parses "A:B" (inclusive). Throws std::invalid_argument.
std::pair<int, int> parse_n_range(const std::string& text);

/// Parses a comma list of exponents; "fp" selects the frame potential and a
/// number s the projective Riesz kernel. Throws std::invalid_argument.
std::vector<KernelSpec> parse_s_list(const std::string& text);

/// Cells are ordered by N, then by position in `spec.kernels`. Records in
/// `existing` whose (d, N, s) match a cell are reused instead of recomputed.
/// `on_record` (if set) is called after each cell, in output order.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec,
                                   const std::vector<SweepRecord>& existing = {},
                                   const std::function<void(const SweepRecord&)>& on_record = {});

}  // namespace linepack
