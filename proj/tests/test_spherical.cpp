#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "linepack/spherical.hpp"
#include "test_support.hpp"

using namespace linepack;
namespace lt = linepack::testing;

TEST(Spherical, CircleExamples) {
  Eigen::MatrixXd a(2, 1);
  a << 0.0, std::numbers::pi / 2;
  const Eigen::MatrixXd x = spherical_to_matrix(a);
  EXPECT_NEAR(x(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(x(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(x(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(x(1, 1), 1.0, 1e-15);
}

TEST(Spherical, TwoSphereFormula) {
  const double t1 = 0.7;
  const double t2 = -2.1;
  Eigen::MatrixXd a(1, 2);
  a << t1, t2;
  const Eigen::VectorXd x = spherical_to_matrix(a).col(0);
  EXPECT_NEAR(x[0], std::cos(t1), 1e-15);
  EXPECT_NEAR(x[1], std::sin(t1) * std::cos(t2), 1e-15);
  EXPECT_NEAR(x[2], std::sin(t1) * std::sin(t2), 1e-15);
}

TEST(Spherical, OutputIsUnitForUnconstrainedAngles) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int d : {2, 3, 5, 8}) {
    Eigen::MatrixXd a(10, d - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = u(rng);
    const Frame x = spherical_to_cartesian(SphericalCoords(a));
    for (int i = 0; i < x.size(); ++i) EXPECT_NEAR(x.column(i).norm(), 1.0, 1e-12);
  }
}

TEST(Spherical, RoundTrip) {
  std::mt19937_64 rng(2);
  for (int d : {2, 3, 4, 7}) {
    const Frame x = lt::random_frame(d, 25, rng);
    const SphericalCoords a = cartesian_to_spherical(x);
    EXPECT_EQ(a.dim(), d);
    EXPECT_EQ(a.size(), 25);
    const Frame y = spherical_to_cartesian(a);
    EXPECT_LT((x.matrix() - y.matrix()).cwiseAbs().maxCoeff(), 1e-10);
    // Principal ranges of the inverse.
    for (int i = 0; i < a.size(); ++i) {
      for (int k = 0; k + 1 < d - 1; ++k) {
        EXPECT_GE(a.angles()(i, k), 0.0);
        EXPECT_LE(a.angles()(i, k), std::numbers::pi);
      }
      EXPECT_GT(a.angles()(i, d - 2), -std::numbers::pi - 1e-15);
      EXPECT_LE(a.angles()(i, d - 2), std::numbers::pi);
    }
  }
}

TEST(Spherical, RoundTripThroughPoles) {
  Eigen::MatrixXd m(3, 3);
  m << 1, -1, 0, 0, 0, 0, 0, 0, 1;
  const Frame x(m);
  const Frame y = spherical_to_cartesian(cartesian_to_spherical(x));
  EXPECT_LT((x.matrix() - y.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Spherical, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int d : {2, 3, 6}) {
    Eigen::MatrixXd a(1, d - 1);
    for (int k = 0; k < d - 1; ++k) a(0, k) = u(rng);
    const Eigen::MatrixXd j = spherical_jacobian(a.row(0).transpose());
    ASSERT_EQ(j.rows(), d);
    ASSERT_EQ(j.cols(), d - 1);
    for (int k = 0; k < d - 1; ++k) {
      const double h = 1e-6;
      Eigen::MatrixXd up = a;
      Eigen::MatrixXd down = a;
      up(0, k) += h;
      down(0, k) -= h;
      const Eigen::VectorXd fd =
          (spherical_to_matrix(up).col(0) - spherical_to_matrix(down).col(0)) / (2 * h);
      EXPECT_LT((j.col(k) - fd).norm(), 1e-8);
    }
  }
}

TEST(Spherical, ChainGradientMatchesAngleDifferences) {
  std::mt19937_64 rng(4);
  for (double s : {1.0, 0.0, -1.0, 3.5}) {
    const KernelSpec k = KernelSpec::projective_riesz(s);
    for (int t = 0; t < 10; ++t) {
      const SphericalCoords a = cartesian_to_spherical(lt::random_frame(3, 4, rng));
      const Eigen::MatrixXd g = spherical_chain_gradient(k, a);
      const Eigen::MatrixXd fd = lt::central_difference(
          [&](const Eigen::MatrixXd& ang) {
            return lt::oracle_projective_energy(s, spherical_to_matrix(ang));
          },
          a.angles(), 1e-6);
      EXPECT_LT((g - fd).norm() / g.norm(), 1e-5) << "s=" << s;
    }
  }
}

TEST(Spherical, ChainToAnglesAgreesWithJacobianTranspose) {
  std::mt19937_64 rng(5);
  const Frame x = lt::random_frame(4, 6, rng);
  const SphericalCoords a = cartesian_to_spherical(x);
  const Eigen::MatrixXd amb = energy_gradient(KernelSpec::frame_potential(), x);
  const Eigen::MatrixXd g = chain_to_angles(a.angles(), amb);
  for (int i = 0; i < 6; ++i) {
    const Eigen::VectorXd expect = spherical_jacobian(a.angles().row(i).transpose()).transpose() *
                                   amb.col(i);
    EXPECT_LT((g.row(i).transpose() - expect).norm(), 1e-12);
  }
}
