#pragma once

// Kernel and geometry primitives on the sphere and on the projective space
// RP^(d-1), including the isometric embedding x -> x x^T into symmetric
// matrices.

#include <limits>
#include <string>

#include "linepack/frame.hpp"

namespace linepack {

enum class KernelFamily {
  ProjectiveRiesz,  ///< G_s on lines: s>0, log (s=0), and negative-s forms
  Riesz,            ///< classical R_s on Euclidean distance ||x-y||
  FramePotential,   ///< |<x,y>|^2
};

/// Kernel family plus its real exponent. `s` is ignored by FramePotential.
struct KernelSpec {
  KernelFamily family = KernelFamily::ProjectiveRiesz;
  double s = 2.0;

  static KernelSpec projective_riesz(double s) { return {KernelFamily::ProjectiveRiesz, s}; }
  static KernelSpec riesz(double s) { return {KernelFamily::Riesz, s}; }
  static KernelSpec frame_potential() { return {KernelFamily::FramePotential, -2.0}; }

  /// True if the kernel blows up on coincident lines (points for Riesz).
  bool singular_at_coincidence() const {
    return family != KernelFamily::FramePotential && s >= 0.0;
  }

  std::string label() const;
  bool operator==(const KernelSpec&) const = default;
};

/// |1 - t| below this counts as a coincident line pair.
inline constexpr double kCoincidenceTol = 1e-14;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// |<x,y>| clamped into [0,1].
double abs_inner(const UnitVector& x, const UnitVector& y);

/// Chordal distance between the lines through x and y: sqrt(2 - 2 <x,y>^2).
double chordal_distance(const UnitVector& x, const UnitVector& y);

/// K(x, y) for the given family. Returns +inf for coincident lines when the
/// kernel is singular there; that is a value, not an error. Nearly coincident
/// lines are resolved from x -+ y rather than the inner product, so the value
/// tracks the lines themselves even though x and y are unit only to rounding.
/// energy() instead evaluates 1 - <x,y>^2 of the stored coordinates, which
/// keeps its ambient gradient exact; the two agree to about 1e-16 / sin^2.
double kernel_value(const KernelSpec& k, const UnitVector& x, const UnitVector& y);

namespace detail {

// q = 1 - <x,y>^2 for unit x, y of length d, given u = <x,y>. For |u| > 1/2
// it is formed as ||x-y||^2 ||x+y||^2 / 4, which keeps full relative accuracy
// for nearly coincident lines where (1-|u|)(1+|u|) does not.
double sine_squared(const double* x, const double* y, int d, double u);

// Kernel evaluation from precomputed scalars. `u` is the signed inner product
// <x,y>, `q` = 1 - u^2 as returned by sine_squared, `dist2` the squared
// Euclidean distance ||x-y||^2 (Riesz only).
double projective_kernel(double s, double u, double q);
double riesz_kernel(double s, double dist2);

// Returns K and writes c such that dK/dx = c * y (projective family, frame
// potential) where u = <x,y> and K is taken as g(1 - u^2) for arbitrary x, y.
// Throws nothing; callers handle degeneracy.
double projective_kernel_and_slope(const KernelSpec& k, double u, double* slope);

// Returns K and writes c such that dK/dx = c * (x - y) (Riesz family).
double riesz_kernel_and_slope(double s, double dist2, double* slope);

}  // namespace detail

/// The image of the line through x in R^m, m = d(d+1)/2: the upper triangle of
/// x x^T in row-major order, off-diagonal entries scaled by sqrt(2).
class ProjPoint {
 public:
  int ambient_dim() const { return d_; }
  const Eigen::VectorXd& coords() const { return coords_; }

  /// Rebuilds the symmetric d x d matrix x x^T.
  Eigen::MatrixXd matrix() const;

 private:
  friend ProjPoint embed(const UnitVector& x);
  ProjPoint(int d, Eigen::VectorXd c) : d_(d), coords_(std::move(c)) {}

  int d_;
  Eigen::VectorXd coords_;
};

ProjPoint embed(const UnitVector& x);

/// N x N matrix of |<x_i, x_j>|, unit diagonal.
Eigen::MatrixXd gram_abs(const Frame& x);

}  // namespace linepack
