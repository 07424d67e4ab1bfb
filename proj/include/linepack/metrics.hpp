#pragma once

// Frame quality measurements (coherence, separation, tightness, frame bounds)
// and the theoretical bounds they are compared against.

#include <cstdint>
#include <optional>
#include <vector>

#include "linepack/frame.hpp"

namespace linepack {

/// max_{i != j} |<x_i, x_j>|. Throws std::invalid_argument if N < 2.
double coherence(const Frame& x);

/// sqrt(2 - 2 * coherence(x)), the separation figure reported alongside the
/// coherence. Throws std::invalid_argument if N < 2.
double chordal_separation(const Frame& x);

/// min_{i != j} ||p_i - p_j|| over the embedded points, which equals
/// sqrt(2 - 2 * coherence(x)^2).
double embedded_min_distance(const Frame& x);

/// ||X X^T - (N/d) I||_F.
double tightness_residual(const Frame& x);

struct FrameBounds {
  double lower = 0.0;  ///< smallest eigenvalue of X X^T
  double upper = 0.0;  ///< largest eigenvalue of X X^T
};

FrameBounds frame_bounds(const Frame& x);

struct WelchBound {
  double value = 0.0;
  bool degenerate = false;  ///< N < d: no positive lower bound
};

/// sqrt((N - d) / (d (N - 1))) for N >= d.
WelchBound welch_bound(int d, int n);

/// sqrt((3N - d^2 - 2d) / ((d + 2)(N - d))), defined only for N > d(d+1)/2.
std::optional<double> levenstein_bound(int d, int n);

/// gamma_d = Gamma(d/2) / (Gamma((d-1)/2) Gamma(1/2)), the leading constant of
/// the small-cap measure on S^(d-1).
double cap_constant(int d);

/// Separation constant C_2 in the closed form
///   (d-1)(s-d+1) Gamma((d-2)/2) Gamma(1/2) / (2 s Gamma(d/2)) * ((d-1)/s)^(1/s).
/// Requires d >= 3 and s > d - 1; throws std::domain_error otherwise.
double separation_constant(int d, double s);

/// C_2 assembled from its definition ((1/C_D)(1 - D/s))^(1/D) (D/s)^(1/s)
/// with D = d - 1 and C_D = 2 gamma_d / (d - 1). Differs from
/// separation_constant(); exposed for comparison only.
double separation_constant_from_cap(int d, double s);

/// Upper bound on the coherence of an s-energy minimizer:
/// 1 - (C_2^2 / 2) N^(-2/(d-1)) with C_2 = separation_constant(d, s).
/// Throws std::domain_error unless d >= 3 and s > d - 1.
double separation_bound(int d, int n, double s);

/// Spread of the off-diagonal |Gram| entries is at most `tol`.
bool is_equiangular(const Frame& x, double tol);

/// Equiangular and tightness_residual <= tol * sqrt(N).
bool is_etf(const Frame& x, double tol);

struct InnerCluster {
  double value = 0.0;  ///< mean |<x_i,x_j>| over the cluster
  int multiplicity = 0;  ///< number of unordered pairs
};

/// Off-diagonal |<x_i,x_j>| (i < j) grouped by single linkage: sorted values
/// start a new cluster when the gap to the previous value exceeds
/// `cluster_tol`. Sorted by value.
std::vector<InnerCluster> distinct_abs_inners(const Frame& x, double cluster_tol = 1e-2);

/// Necessary condition for projective equivalence: the sorted off-diagonal
/// |Gram| multisets agree entrywise within `tol`. Throws DimensionError on a
/// shape mismatch.
bool projectively_equivalent(const Frame& x, const Frame& y, double tol);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean coherence of i.i.d. uniform random frames. Trial t uses the frame
/// random_uniform_frame(d, N, restart_seed(seed, t)); trials run in parallel
/// and are reduced in trial order.
MonteCarloEstimate expected_random_coherence(int d, int n, int trials, std::uint64_t seed);

struct MetricsReport {
  int d = 0;
  int n = 0;
  double coherence = 0.0;
  double chordal_separation = 0.0;
  double tightness_residual = 0.0;
  double frame_lower = 0.0;
  double frame_upper = 0.0;
  double welch = 0.0;
  std::optional<double> levenstein;
  std::optional<double> sep_bound_rhs;
  bool equiangular = false;
  std::vector<InnerCluster> distinct_abs_inners;
};

struct MetricsOptions {
  /// Energy exponent the frame was optimized for; enables sep_bound_rhs when
  /// d >= 3 and s > d - 1.
  std::optional<double> s;
  double equiangular_tol = 1e-6;
  double cluster_tol = 1e-2;
};

MetricsReport measure(const Frame& x, const MetricsOptions& opts = {});

}  // namespace linepack
