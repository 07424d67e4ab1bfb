#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "linepack/energy.hpp"

namespace linepack {

enum class Parametrization {
  Tangent,    ///< Riemannian gradient, step, then renormalize columns
  Spherical,  ///< unconstrained descent over hyperspherical angles
};

struct OptimizerSettings {
  double grad_tol = 1e-8;
  int max_iters = 10000;
  int restarts = 20;
  std::uint64_t seed = 0;
  Parametrization parametrization = Parametrization::Tangent;
  double step_init = 1.0;
  double backtrack_factor = 0.5;
  double armijo_c = 1e-4;

  /// Throws std::invalid_argument if any field is out of range.
  void validate() const;
};

enum class StopReason { Converged, MaxIterations, LineSearchFailed };

std::string to_string(StopReason r);

struct RunResult {
  Frame config;
  EnergyReport report;
  int restart_index = 0;
  KernelSpec kernel;
  StopReason stop = StopReason::MaxIterations;
  /// Energy after each accepted step, starting with the initial energy.
  std::vector<double> energy_trace;
};

/// Raised when minimization cannot start (non-finite initial energy) or when
/// every restart of a multistart failed.
class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gradient descent with Armijo backtracking from `x0`.
///
/// Each iteration tries a Barzilai-Borwein step (`step_init` on the first
/// iteration) and halves it by `backtrack_factor` until the Armijo condition
/// E(new) <= E - armijo_c * step * |g|^2 holds, so accepted energies never
/// increase. After 60 failed backtracks the current iterate is returned with
/// `converged == false`.
RunResult minimize(const KernelSpec& k, const Frame& x0, const OptimizerSettings& settings);

/// Per-restart seed derived from the master seed:
/// splitmix64(master + 0x9E3779B97F4A7C15 * (index + 1)).
std::uint64_t restart_seed(std::uint64_t master, int index);

/// N i.i.d. uniform points on S^(d-1): normalized standard Gaussians drawn
/// from mt19937_64(seed), column by column.
Frame random_uniform_frame(int d, int n, std::uint64_t seed);

/// Runs `settings.restarts` minimizations from random frames seeded by
/// restart_seed(settings.seed, r) and returns the lowest energy, the lowest
/// restart index winning ties. Restarts run in parallel; the reduction is in
/// index order.
RunResult multistart(const KernelSpec& k, int d, int n, const OptimizerSettings& settings);

struct PipelineResult {
  RunResult separated;  ///< after the projective Riesz s_sep stage
  RunResult tight;      ///< after frame-potential polishing
  std::vector<std::string> warnings;
};

/// Well-separated tight frames: random starts, projective Riesz s_sep
/// multistart, then frame-potential descent from the best separated
/// configuration without perturbation. Warns when s_sep <= d - 1.
PipelineResult pipeline_tight_separated(int d, int n, double s_sep,
                                        const OptimizerSettings& settings);

}  // namespace linepack
