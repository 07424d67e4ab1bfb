#include "linepack/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace linepack {

std::string KernelSpec::label() const {
  std::ostringstream os;
  switch (family) {
    case KernelFamily::FramePotential:
      return "fp";
    case KernelFamily::ProjectiveRiesz:
      os << "projective-riesz(s=" << s << ")";
      break;
    case KernelFamily::Riesz:
      os << "riesz(s=" << s << ")";
      break;
  }
  return os.str();
}

namespace {

void check_dims(const UnitVector& x, const UnitVector& y) {
  if (x.dim() != y.dim()) {
    throw DimensionError("dimension mismatch: " + std::to_string(x.dim()) + " vs " +
                         std::to_string(y.dim()));
  }
}


// q^(-s/2) with the common integer exponents special-cased.
inline double inv_pow_half(double q, double s) {
  if (s == 2.0) return 1.0 / q;
  if (s == 1.0) return 1.0 / std::sqrt(q);
  if (s == 4.0) return 1.0 / (q * q);
  return std::pow(q, -0.5 * s);
}

}  // namespace

namespace detail {

double sine_squared(const double* x, const double* y, int d, double u) {
  const double t = std::min(std::abs(u), 1.0);
  if (t <= 0.5) return (1.0 - t) * (1.0 + t);
  double minus = 0.0;
  double plus = 0.0;
  for (int a = 0; a < d; ++a) {
    const double dm = x[a] - y[a];
    const double dp = x[a] + y[a];
    minus += dm * dm;
    plus += dp * dp;
  }
  return 0.25 * minus * plus;
}

double projective_kernel(double s, double u, double q) {
  const double t = std::min(std::abs(u), 1.0);
  if (s >= 0.0 && 1.0 - t < kCoincidenceTol) return kInf;
  if (s > 0.0) return inv_pow_half(q, s);
  if (s == 0.0) return -std::log(q);
  return -std::pow(q, -0.5 * s);
}

double riesz_kernel(double s, double dist2) {
  if (s >= 0.0 && dist2 < kCoincidenceTol * kCoincidenceTol) return kInf;
  if (s > 0.0) return inv_pow_half(dist2, s);
  if (s == 0.0) return -0.5 * std::log(dist2);
  return -std::pow(dist2, -0.5 * s);
}

double projective_kernel_and_slope(const KernelSpec& k, double u, double* slope) {
  if (k.family == KernelFamily::FramePotential) {
    *slope = 2.0 * u;
    return u * u;
  }
  const double s = k.s;
  const double t = std::min(std::abs(u), 1.0);
  if (s >= 0.0 && 1.0 - t < kCoincidenceTol) {
    *slope = kInf;
    return kInf;
  }
  // Exactly 1 - u^2 as a function of the stored coordinates, so the slope below
  // is the derivative of what is evaluated, on or off the sphere.
  const double q = (1.0 - t) * (1.0 + t);
  // d/dx of g(1 - <x,y>^2) is -2 g'(q) u y.
  if (s > 0.0) {
    const double value = inv_pow_half(q, s);
    *slope = s * u * value / q;
    return value;
  }
  if (s == 0.0) {
    *slope = 2.0 * u / q;
    return -std::log(q);
  }
  *slope = -s * u * std::pow(q, -0.5 * s - 1.0);
  return -std::pow(q, -0.5 * s);
}

double riesz_kernel_and_slope(double s, double dist2, double* slope) {
  if (s >= 0.0 && dist2 < kCoincidenceTol * kCoincidenceTol) {
    *slope = kInf;
    return kInf;
  }
  if (s > 0.0) {
    const double value = inv_pow_half(dist2, s);
    *slope = -s * value / dist2;
    return value;
  }
  if (s == 0.0) {
    *slope = -1.0 / dist2;
    return -0.5 * std::log(dist2);
  }
  *slope = s * std::pow(dist2, -0.5 * s - 1.0);
  return -std::pow(dist2, -0.5 * s);
}

}  // namespace detail

double abs_inner(const UnitVector& x, const UnitVector& y) {
  check_dims(x, y);
  return std::min(std::abs(x.coords().dot(y.coords())), 1.0);
}

double chordal_distance(const UnitVector& x, const UnitVector& y) {
  check_dims(x, y);
  const double u = std::clamp(x.coords().dot(y.coords()), -1.0, 1.0);
  return std::sqrt(2.0 * detail::sine_squared(x.coords().data(), y.coords().data(), x.dim(), u));
}

double kernel_value(const KernelSpec& k, const UnitVector& x, const UnitVector& y) {
  check_dims(x, y);
  switch (k.family) {
    case KernelFamily::FramePotential: {
      const double t = abs_inner(x, y);
      return t * t;
    }
    case KernelFamily::ProjectiveRiesz:
    {
      const double u = x.coords().dot(y.coords());
      return detail::projective_kernel(
          k.s, u, detail::sine_squared(x.coords().data(), y.coords().data(), x.dim(), u));
    }
    case KernelFamily::Riesz:
      return detail::riesz_kernel(k.s, (x.coords() - y.coords()).squaredNorm());
  }
  return kInf;
}

ProjPoint embed(const UnitVector& x) {
  const int d = x.dim();
  Eigen::VectorXd c(d * (d + 1) / 2);
  const double r2 = std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < d; ++i) {
    c[k++] = x[i] * x[i];
    for (int j = i + 1; j < d; ++j) c[k++] = r2 * x[i] * x[j];
  }
  return ProjPoint(d, std::move(c));
}

Eigen::MatrixXd ProjPoint::matrix() const {
  Eigen::MatrixXd m(d_, d_);
  const double r2 = std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < d_; ++i) {
    m(i, i) = coords_[k++];
    for (int j = i + 1; j < d_; ++j) {
      m(i, j) = m(j, i) = coords_[k++] / r2;
    }
  }
  return m;
}

Eigen::MatrixXd gram_abs(const Frame& x) {
  Eigen::MatrixXd g = (x.matrix().transpose() * x.matrix()).cwiseAbs();
  g = g.cwiseMin(1.0);
  g.diagonal().setOnes();
  return g;
}

}  // namespace linepack
