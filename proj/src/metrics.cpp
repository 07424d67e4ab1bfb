#include "linepack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "linepack/kernels.hpp"
#include "linepack/optimizer.hpp"

namespace linepack {

namespace {

void require_pairs(const Frame& x, const char* what) {
  if (x.size() < 2) throw std::invalid_argument(std::string(what) + ": need N >= 2");
}

// Upper-triangle |<x_i,x_j>| in row-major pair order.
std::vector<double> off_diagonal_abs(const Frame& x) {
  const Eigen::MatrixXd g = gram_abs(x);
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(x.size()) * (x.size() - 1) / 2);
  for (int i = 0; i < x.size(); ++i) {
    for (int j = i + 1; j < x.size(); ++j) v.push_back(g(i, j));
  }
  return v;
}

void check_separation_domain(int d, double s) {
  if (d < 3) throw std::domain_error("separation bound needs d >= 3");
  if (!(s > d - 1)) throw std::domain_error("separation bound needs s > d - 1");
}

}  // namespace

double coherence(const Frame& x) {
  require_pairs(x, "coherence");
  const int d = x.dim();
  const double* p = x.matrix().data();
  double best = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    for (int j = i + 1; j < x.size(); ++j) {
      double u = 0.0;
      for (int a = 0; a < d; ++a) u += p[i * d + a] * p[j * d + a];
      best = std::max(best, std::abs(u));
    }
  }
  return std::min(best, 1.0);
}

double chordal_separation(const Frame& x) {
  return std::sqrt(2.0 - 2.0 * coherence(x));
}

double embedded_min_distance(const Frame& x) {
  const double c = coherence(x);
  return std::sqrt(2.0 * (1.0 - c) * (1.0 + c));
}

double tightness_residual(const Frame& x) {
  Eigen::MatrixXd s = x.frame_operator();
  s.diagonal().array() -= static_cast<double>(x.size()) / x.dim();
  return s.norm();
}

FrameBounds frame_bounds(const Frame& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.frame_operator(),
                                                     Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return {ev[0], ev[ev.size() - 1]};
}

WelchBound welch_bound(int d, int n) {
  if (n < d) return {0.0, true};
  if (n < 2) return {0.0, true};
  return {std::sqrt(static_cast<double>(n - d) / (static_cast<double>(d) * (n - 1))), false};
}

std::optional<double> levenstein_bound(int d, int n) {
  if (2 * n <= d * (d + 1)) return std::nullopt;
  const double num = 3.0 * n - static_cast<double>(d) * d - 2.0 * d;
  const double den = (d + 2.0) * (n - d);
  return std::sqrt(num / den);
}

double cap_constant(int d) {
  return std::tgamma(0.5 * d) / (std::tgamma(0.5 * (d - 1)) * std::sqrt(std::numbers::pi));
}

double separation_constant(int d, double s) {
  check_separation_domain(d, s);
  const double dm1 = d - 1.0;
  const double front = dm1 * (s - dm1) * std::tgamma(0.5 * (d - 2)) *
                       std::sqrt(std::numbers::pi) / (2.0 * s * std::tgamma(0.5 * d));
  return front * std::pow(dm1 / s, 1.0 / s);
}

double separation_constant_from_cap(int d, double s) {
  check_separation_domain(d, s);
  const double dim = d - 1.0;
  const double c_d = 2.0 * cap_constant(d) / dim;
  return std::pow((1.0 / c_d) * (1.0 - dim / s), 1.0 / dim) * std::pow(dim / s, 1.0 / s);
}

double separation_bound(int d, int n, double s) {
  const double c2 = separation_constant(d, s);
  return 1.0 - 0.5 * c2 * c2 * std::pow(static_cast<double>(n), -2.0 / (d - 1));
}

bool is_equiangular(const Frame& x, double tol) {
  require_pairs(x, "is_equiangular");
  const std::vector<double> v = off_diagonal_abs(x);
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo <= tol;
}

bool is_etf(const Frame& x, double tol) {
  return is_equiangular(x, tol) &&
         tightness_residual(x) <= tol * std::sqrt(static_cast<double>(x.size()));
}

std::vector<InnerCluster> distinct_abs_inners(const Frame& x, double cluster_tol) {
  require_pairs(x, "distinct_abs_inners");
  std::vector<double> v = off_diagonal_abs(x);
  std::sort(v.begin(), v.end());
  std::vector<InnerCluster> out;
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0 && v[i] - v[i - 1] > cluster_tol) {
      out.push_back({sum / count, count});
      sum = 0.0;
      count = 0;
    }
    sum += v[i];
    ++count;
  }
  out.push_back({sum / count, count});
  return out;
}

bool projectively_equivalent(const Frame& x, const Frame& y, double tol) {
  if (x.dim() != y.dim() || x.size() != y.size()) {
    throw DimensionError("projectively_equivalent: shape mismatch");
  }
  std::vector<double> a = off_diagonal_abs(x);
  std::vector<double> b = off_diagonal_abs(y);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

MonteCarloEstimate expected_random_coherence(int d, int n, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("expected_random_coherence: trials >= 1");
  if (n < 2) throw std::invalid_argument("expected_random_coherence: need N >= 2");
  std::vector<double> values(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
  for (int t = 0; t < trials; ++t) {
    values[static_cast<std::size_t>(t)] = coherence(random_uniform_frame(d, n, restart_seed(seed, t)));
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / trials;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = trials > 1 ? std::sqrt(ss / (trials - 1)) : 0.0;
  return {mean, sd / std::sqrt(static_cast<double>(trials))};
}

MetricsReport measure(const Frame& x, const MetricsOptions& opts) {
  MetricsReport r;
  r.d = x.dim();
  r.n = x.size();
  r.coherence = coherence(x);
  r.chordal_separation = std::sqrt(2.0 - 2.0 * r.coherence);
  r.tightness_residual = tightness_residual(x);
  const FrameBounds fb = frame_bounds(x);
  r.frame_lower = fb.lower;
  r.frame_upper = fb.upper;
  r.welch = welch_bound(r.d, r.n).value;
  r.levenstein = levenstein_bound(r.d, r.n);
  if (opts.s && r.d >= 3 && *opts.s > r.d - 1) {
    r.sep_bound_rhs = separation_bound(r.d, r.n, *opts.s);
  }
  r.equiangular = is_equiangular(x, opts.equiangular_tol);
  r.distinct_abs_inners = distinct_abs_inners(x, opts.cluster_tol);
  return r;
}

}  // namespace linepack
