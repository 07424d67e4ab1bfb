#include "linepack/spherical.hpp"

#include <algorithm>
#include <cmath>

namespace linepack {

SphericalCoords::SphericalCoords(Eigen::MatrixXd angles) : angles_(std::move(angles)) {
  if (angles_.cols() < 1 || angles_.rows() < 1) {
    throw std::invalid_argument("SphericalCoords: need N >= 1 points in d >= 2");
  }
}

namespace {

void point_to_cartesian(const Eigen::Ref<const Eigen::VectorXd>& theta, double* out) {
  const Eigen::Index m = theta.size();
  double prefix = 1.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    out[k] = prefix * std::cos(theta[k]);
    prefix *= std::sin(theta[k]);
  }
  out[m] = prefix;
}

}  // namespace

Eigen::MatrixXd spherical_to_matrix(const Eigen::MatrixXd& angles) {
  const Eigen::Index n = angles.rows();
  const Eigen::Index d = angles.cols() + 1;
  Eigen::MatrixXd x(d, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    point_to_cartesian(angles.row(i).transpose(), x.data() + i * d);
  }
  return x;
}

Frame spherical_to_cartesian(const SphericalCoords& a) {
  return Frame(spherical_to_matrix(a.angles()));
}

SphericalCoords cartesian_to_spherical(const Frame& x) {
  const int d = x.dim();
  if (d < 2) throw DimensionError("spherical coordinates need d >= 2");
  Eigen::MatrixXd angles(x.size(), d - 1);
  for (int i = 0; i < x.size(); ++i) {
    const auto v = x.column(i);
    for (int k = 0; k + 2 < d; ++k) {
      angles(i, k) = std::atan2(v.tail(d - k - 1).norm(), v[k]);
    }
    angles(i, d - 2) = std::atan2(v[d - 1], v[d - 2]);
  }
  return SphericalCoords(std::move(angles));
}

Eigen::MatrixXd spherical_jacobian(const Eigen::Ref<const Eigen::VectorXd>& theta) {
  const Eigen::Index m = theta.size();
  const Eigen::Index d = m + 1;
  Eigen::VectorXd s = theta.array().sin();
  Eigen::VectorXd c = theta.array().cos();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(d, m);
  for (Eigen::Index k = 0; k < d; ++k) {
    // x_k = (prod_{l<k} s_l) * (k < m ? c_k : 1)
    const double tail = k < m ? c[k] : 1.0;
    for (Eigen::Index l = 0; l < std::min(k, m); ++l) {
      double p = c[l] * tail;
      for (Eigen::Index r = 0; r < k; ++r) {
        if (r != l) p *= s[r];
      }
      j(k, l) = p;
    }
    if (k < m) {
      double p = -s[k];
      for (Eigen::Index r = 0; r < k; ++r) p *= s[r];
      j(k, k) = p;
    }
  }
  return j;
}

Eigen::MatrixXd chain_to_angles(const Eigen::MatrixXd& angles, const Eigen::MatrixXd& ambient) {
  Eigen::MatrixXd out(angles.rows(), angles.cols());
  for (Eigen::Index i = 0; i < angles.rows(); ++i) {
    const Eigen::MatrixXd j = spherical_jacobian(angles.row(i).transpose());
    out.row(i) = (j.transpose() * ambient.col(i)).transpose();
  }
  return out;
}

Eigen::MatrixXd spherical_chain_gradient(const KernelSpec& k, const SphericalCoords& a) {
  const Eigen::MatrixXd x = spherical_to_matrix(a.angles());
  Evaluation ev = evaluate(k, x, true);
  if (ev.degenerate()) throw DegeneratePairError(ev.degenerate_i, ev.degenerate_j);
  return chain_to_angles(a.angles(), ev.gradient);
}

}  // namespace linepack
