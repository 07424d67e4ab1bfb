#include "linepack/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace linepack {

Frame half_circle_config(int n) {
  if (n < 1) throw std::invalid_argument("half_circle_config: need N >= 1");
  Eigen::MatrixXd m(2, n);
  for (int k = 0; k < n; ++k) {
    const double a = std::numbers::pi * k / n;
    m(0, k) = std::cos(a);
    m(1, k) = std::sin(a);
  }
  return Frame(std::move(m));
}

Frame simplex_etf(int d) {
  if (d < 2) throw std::invalid_argument("simplex_etf: need d >= 2");
  const int n = d + 1;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(n, 1));
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd basis = q.rightCols(d);  // orthogonal to the ones vector
  Eigen::MatrixXd centered = Eigen::MatrixXd::Identity(n, n);
  centered.array() -= 1.0 / n;
  return Frame(basis.transpose() * centered);
}

Frame icosahedron_etf6() {
  const double phi = std::numbers::phi;
  Eigen::MatrixXd m(3, 6);
  m << 0.0, 0.0, 1.0, 1.0, phi, phi,
       1.0, 1.0, phi, -phi, 0.0, 0.0,
       phi, -phi, 0.0, 0.0, 1.0, -1.0;
  return Frame(std::move(m));
}

Frame orthonormal_basis(int d) {
  if (d < 1) throw std::invalid_argument("orthonormal_basis: need d >= 1");
  return Frame(Eigen::MatrixXd::Identity(d, d));
}

}  // namespace linepack
