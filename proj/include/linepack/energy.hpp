#pragma once

// Discrete energies E_K(X) = sum_{i != j} K(x_i, x_j) over ordered pairs and
// their analytic gradients.
//
// Gradient closed forms (u = <x_i,x_j>, q = 1 - u^2, column i of dE/dX equals
// 2 * sum_{j != i} c_ij * x_j for the line kernels):
//
//   projective s > 0   K = q^(-s/2)     c = s u q^(-s/2 - 1)
//   projective s = 0   K = -log q       c = 2u / q
//   projective s < 0   K = -q^(-s/2)    c = -s u q^(-s/2 - 1)
//   frame potential    K = u^2          c = 2u
//
// The factor 2 comes from each unordered pair appearing twice in the sum.
// The Riesz family uses r^2 = ||x_i - x_j||^2 and column i equals
// 2 * sum_j c_ij (x_i - x_j) with c = -s r^(-s-2) (s > 0), -1/r^2 (s = 0),
// s r^(-s-2) (s < 0).
//
// Summation order: every row i accumulates its partial sum over j = 0..N-1 in
// index order, and row sums are added in row order. The OpenMP kernel
// distributes rows across threads but keeps that order, so its results are
// bit-identical for any thread count. linepack::serial evaluates the same
// sums pair by pair with Eigen expressions and agrees to rounding.

#include "linepack/frame.hpp"
#include "linepack/kernels.hpp"

namespace linepack {

/// Energy and ambient gradient from one pass over the pairs.
struct Evaluation {
  double energy = 0.0;
  Eigen::MatrixXd gradient;  ///< d x N; empty when not requested
  /// First (row-major) pair with coincident lines under a singular kernel, or
  /// -1. When set, `energy` is +inf and `gradient` is meaningless.
  int degenerate_i = -1;
  int degenerate_j = -1;

  bool degenerate() const { return degenerate_i >= 0; }
};

/// Fused energy/gradient on a d x N matrix with unit columns. Never throws on
/// degeneracy; reports it in the result instead.
Evaluation evaluate(const KernelSpec& k, const Eigen::MatrixXd& x, bool with_gradient);

/// E_K(X) over ordered pairs; +inf if any pair is singular.
double energy(const KernelSpec& k, const Frame& x);

/// Ambient gradient dE/dX (d x N). Throws DegeneratePairError on coincident
/// lines under a kernel singular there (s >= 0), and also for -2 < s < 0,
/// where the kernel is finite but not differentiable at coincidence.
Eigen::MatrixXd energy_gradient(const KernelSpec& k, const Frame& x);

/// Column i is (I - x_i x_i^T) times ambient column i.
Eigen::MatrixXd tangent_gradient(const KernelSpec& k, const Frame& x);

/// Applies the per-column tangent projector in place.
void project_to_tangent(const Eigen::MatrixXd& x, Eigen::MatrixXd& g);

/// Central-difference approximation of dE/dX treating every entry of X as a
/// free variable (no renormalization), with step `h`.
Eigen::MatrixXd finite_difference_gradient(const KernelSpec& k, const Eigen::MatrixXd& x, double h);

/// ||analytic - finite difference||_F / ||analytic||_F at `x`.
double gradient_relative_error(const KernelSpec& k, const Frame& x, double h = 1e-6);

namespace serial {

// Single-threaded reference implementations used by tests and benchmarks.
Evaluation evaluate(const KernelSpec& k, const Eigen::MatrixXd& x, bool with_gradient);
double energy(const KernelSpec& k, const Frame& x);
Eigen::MatrixXd energy_gradient(const KernelSpec& k, const Frame& x);

}  // namespace serial

/// Outcome summary of one minimization.
struct EnergyReport {
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_time_ms = 0.0;
};

}  // namespace linepack
