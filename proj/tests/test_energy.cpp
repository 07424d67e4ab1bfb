#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "linepack/energy.hpp"
#include "linepack/metrics.hpp"
#include "linepack/reference.hpp"
#include "test_support.hpp"

using namespace linepack;
namespace lt = linepack::testing;

namespace {

// Energy recomputed on the unnormalized matrix: the finite-difference oracle
// perturbs entries freely, so the kernel is evaluated on raw inner products.
double raw_energy(const KernelSpec& k, const Eigen::MatrixXd& x) {
  double e = 0.0;
  for (int i = 0; i < x.cols(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      if (i == j) continue;
      const double u = x.col(i).dot(x.col(j));
      const double q = 1 - u * u;
      if (k.family == KernelFamily::FramePotential) e += u * u;
      else if (k.s > 0) e += std::pow(q, -k.s / 2);
      else if (k.s == 0) e += -std::log(q);
      else e += -std::pow(q, -k.s / 2);
    }
  }
  return e;
}

}  // namespace

TEST(Energy, HalfCircleThreeAtSTwo) {
  EXPECT_NEAR(energy(KernelSpec::projective_riesz(2), half_circle_config(3)), 8.0, 1e-13);
}

TEST(Energy, OrthonormalBasisFramePotentialIsZero) {
  EXPECT_EQ(energy(KernelSpec::frame_potential(), orthonormal_basis(3)), 0.0);
  EXPECT_EQ(energy_gradient(KernelSpec::frame_potential(), orthonormal_basis(3)),
            Eigen::MatrixXd::Zero(3, 3));
}

TEST(Energy, RepeatedVectorIsInfinite) {
  Eigen::MatrixXd m(3, 3);
  m << 1, 0, 1, 0, 1, 0, 0, 0, 0;
  const Frame x(m);
  EXPECT_EQ(energy(KernelSpec::projective_riesz(1), x), kInf);
  EXPECT_EQ(energy(KernelSpec::projective_riesz(0), x), kInf);
  EXPECT_EQ(serial::energy(KernelSpec::projective_riesz(1), x), kInf);
  // Antipodal copies are the same line.
  m.col(2) = -m.col(0);
  EXPECT_EQ(energy(KernelSpec::projective_riesz(2), Frame(m)), kInf);
  // Finite for s < 0 and the frame potential.
  EXPECT_NEAR(energy(KernelSpec::projective_riesz(-2), Frame(m)), -4.0, 1e-15);
  EXPECT_NEAR(energy(KernelSpec::frame_potential(), Frame(m)), 2.0, 1e-15);
}

TEST(Energy, GradientThrowsOnDegeneratePair) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 0, -1, 0, 1, 0;
  const Frame x(m);
  for (double s : {-1.0, 0.0, 2.0}) {
    try {
      energy_gradient(KernelSpec::projective_riesz(s), x);
      FAIL() << "expected DegeneratePairError for s=" << s;
    } catch (const DegeneratePairError& e) {
      EXPECT_EQ(e.first, 0);
      EXPECT_EQ(e.second, 2);
    }
    EXPECT_THROW(serial::energy_gradient(KernelSpec::projective_riesz(s), x), DegeneratePairError);
  }
  EXPECT_NO_THROW(energy_gradient(KernelSpec::projective_riesz(-2), x));
  EXPECT_NO_THROW(energy_gradient(KernelSpec::frame_potential(), x));
}

TEST(Energy, MatchesDirectDefinition) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    const Frame x = lt::random_frame(2 + t % 5, 3 + t % 9, rng);
    for (double s : {-3.0, -1.0, 0.0, 0.5, 2.0, 7.0}) {
      EXPECT_LT(lt::rel_err(energy(KernelSpec::projective_riesz(s), x),
                            lt::oracle_projective_energy(s, x.matrix())),
                1e-11)
          << "s=" << s;
    }
  }
}

TEST(Energy, GradientsMatchCentralDifferences) {
  std::mt19937_64 rng(8);
  const KernelSpec kernels[] = {
      KernelSpec::projective_riesz(-2), KernelSpec::projective_riesz(-1),
      KernelSpec::projective_riesz(0),  KernelSpec::projective_riesz(1),
      KernelSpec::projective_riesz(2),  KernelSpec::projective_riesz(3.5),
      KernelSpec::frame_potential(),    KernelSpec::riesz(1),
      KernelSpec::riesz(0),             KernelSpec::riesz(-1)};
  for (const auto& k : kernels) {
    for (int t = 0; t < 20; ++t) {
      // Nearly coincident lines put the difference quotient on a steep wall;
      // keep instances away from it.
      Frame x = lt::random_frame(3 + t % 3, 3 + t % 5, rng);
      while (coherence(x) > 0.95) x = lt::random_frame(3 + t % 3, 3 + t % 5, rng);
      const Eigen::MatrixXd g = energy_gradient(k, x);
      Eigen::MatrixXd fd;
      if (k.family == KernelFamily::Riesz) {
        fd = finite_difference_gradient(k, x.matrix(), 1e-6);
      } else {
        fd = lt::central_difference([&](const Eigen::MatrixXd& m) { return raw_energy(k, m); },
                                    x.matrix(), 1e-6);
      }
      EXPECT_LT((g - fd).norm() / g.norm(), 1e-5) << k.label() << " trial " << t;
    }
  }
}

TEST(Energy, GradientRelativeErrorHelper) {
  std::mt19937_64 rng(9);
  const Frame x = lt::random_frame(3, 5, rng);
  EXPECT_LT(gradient_relative_error(KernelSpec::projective_riesz(2), x), 1e-5);
}

TEST(Energy, TangentGradientIsOrthogonalToColumns) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    const Frame x = lt::random_frame(4, 7, rng);
    const Eigen::MatrixXd g = tangent_gradient(KernelSpec::projective_riesz(1.5), x);
    for (int i = 0; i < x.size(); ++i) EXPECT_NEAR(x.column(i).dot(g.col(i)), 0.0, 1e-10);
  }
}

TEST(Energy, SimplexIsCriticalPoint) {
  for (double s : {-1.0, 0.0, 2.0, 6.0}) {
    const Eigen::MatrixXd g = tangent_gradient(KernelSpec::projective_riesz(s), simplex_etf(3));
    EXPECT_LT(g.colwise().norm().maxCoeff(), 1e-6) << s;
  }
  const Eigen::MatrixXd g = tangent_gradient(KernelSpec::projective_riesz(2), icosahedron_etf6());
  EXPECT_LT(g.colwise().norm().maxCoeff(), 1e-6);
}

TEST(Energy, FramePotentialIdentity) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    const int d = 2 + t % 6;
    const int n = 2 + t % 13;
    const Frame x = lt::random_frame(d, n, rng);
    const Eigen::MatrixXd gram = x.matrix().transpose() * x.matrix();
    const double lhs = gram.array().square().sum();
    const Eigen::MatrixXd s =
        x.frame_operator() - (static_cast<double>(n) / d) * Eigen::MatrixXd::Identity(d, d);
    const double rhs = s.squaredNorm() + static_cast<double>(n) * n / d;
    EXPECT_NEAR(lhs, rhs, 1e-9);
    // energy() excludes the N diagonal terms.
    EXPECT_NEAR(energy(KernelSpec::frame_potential(), x) + n, lhs, 1e-9);
  }
}

TEST(Energy, InvariantUnderProjectiveEquivalence) {
  std::mt19937_64 rng(12);
  const KernelSpec kernels[] = {KernelSpec::projective_riesz(-1.5), KernelSpec::projective_riesz(0),
                                KernelSpec::projective_riesz(3), KernelSpec::frame_potential()};
  for (int t = 0; t < 30; ++t) {
    const int d = 2 + t % 4;
    const int n = 3 + t % 6;
    const Frame x = lt::random_frame(d, n, rng);
    const Eigen::MatrixXd q = lt::random_orthogonal(d, rng);

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution coin(0.5);
    Eigen::MatrixXd y(d, n);
    for (int i = 0; i < n; ++i) {
      y.col(i) = q * x.column(perm[static_cast<std::size_t>(i)]);
      if (coin(rng)) y.col(i) = -y.col(i);
    }
    for (const auto& k : kernels) {
      const double base = energy(k, x);
      EXPECT_LE(std::abs(energy(k, Frame(y)) - base), 1e-10 * std::max(1.0, std::abs(base)))
          << k.label();
    }
  }
}

TEST(Energy, EqualsScaledRieszEnergyOfEmbeddedPoints) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const Frame x = lt::random_frame(3, 6, rng);
    for (double s : {1.0, 2.0, 3.0}) {
      double riesz = 0.0;
      for (int i = 0; i < x.size(); ++i)
        for (int j = 0; j < x.size(); ++j)
          if (i != j)
            riesz += std::pow(lt::embedded_difference(x.column(i), x.column(j)).norm(), -s);
      EXPECT_LT(lt::rel_err(energy(KernelSpec::projective_riesz(s), x),
                            std::pow(2.0, s / 2) * riesz),
                1e-10);
    }
  }
}

TEST(Energy, EvaluateFusesEnergyAndGradient) {
  std::mt19937_64 rng(14);
  const Frame x = lt::random_frame(4, 9, rng);
  const KernelSpec k = KernelSpec::projective_riesz(2);
  const Evaluation ev = evaluate(k, x.matrix(), true);
  EXPECT_FALSE(ev.degenerate());
  EXPECT_EQ(ev.energy, energy(k, x));
  EXPECT_EQ(ev.gradient, energy_gradient(k, x));
  EXPECT_EQ(evaluate(k, x.matrix(), false).gradient.size(), 0);
}
