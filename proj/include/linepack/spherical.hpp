#pragma once

// Hyperspherical parametrization of frames, used for unconstrained
// minimization in angle space:
//
//   x(1) = cos t1
//   x(2) = sin t1 cos t2
//   ...
//   x(d-1) = sin t1 ... sin t(d-2) cos t(d-1)
//   x(d)   = sin t1 ... sin t(d-2) sin t(d-1)
//
// Angles are stored unconstrained; the map is periodic so no wrapping is
// needed. The Jacobian degenerates where some sin t_k = 0.

#include "linepack/energy.hpp"

namespace linepack {

/// N x (d-1) angle matrix, one row per frame vector.
class SphericalCoords {
 public:
  explicit SphericalCoords(Eigen::MatrixXd angles);

  int dim() const { return static_cast<int>(angles_.cols()) + 1; }
  int size() const { return static_cast<int>(angles_.rows()); }
  const Eigen::MatrixXd& angles() const { return angles_; }

 private:
  Eigen::MatrixXd angles_;
};

/// The d x N matrix of unit columns for the given angles.
Eigen::MatrixXd spherical_to_matrix(const Eigen::MatrixXd& angles);

Frame spherical_to_cartesian(const SphericalCoords& a);

/// Inverse map with t_k in [0, pi] for k < d-1 and t(d-1) in (-pi, pi].
SphericalCoords cartesian_to_spherical(const Frame& x);

/// d x (d-1) Jacobian of one point's parametrization.
Eigen::MatrixXd spherical_jacobian(const Eigen::Ref<const Eigen::VectorXd>& theta);

/// Gradient of E_K with respect to the angles (N x (d-1)): row i is
/// J_i^T times ambient gradient column i.
Eigen::MatrixXd spherical_chain_gradient(const KernelSpec& k, const SphericalCoords& a);

/// Same, given an already computed ambient gradient.
Eigen::MatrixXd chain_to_angles(const Eigen::MatrixXd& angles, const Eigen::MatrixXd& ambient);

}  // namespace linepack
