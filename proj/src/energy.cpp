#include "linepack/energy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <omp.h>

namespace linepack {

namespace {

// Rows below this count run single-threaded; thread startup dominates there.
constexpr int kParallelMinRows = 48;

struct RowResult {
  double energy = 0.0;
  int degenerate_j = -1;
};

bool gradient_singular(const KernelSpec& k) {
  return k.family != KernelFamily::FramePotential && k.s > -2.0;
}

// One row of the pair sum: energy contribution sum_{j != i} K(x_i, x_j) and,
// if `grad` is non-null, column i of the ambient gradient.
RowResult row_pass(const KernelSpec& k, const Eigen::MatrixXd& x, int i, double* grad) {
  const int d = static_cast<int>(x.rows());
  const int n = static_cast<int>(x.cols());
  const double* xi = x.data() + static_cast<std::ptrdiff_t>(i) * d;
  const bool riesz = k.family == KernelFamily::Riesz;
  const bool energy_singular = k.singular_at_coincidence();
  const bool slope_singular = grad != nullptr && gradient_singular(k);

  RowResult out;
  if (grad != nullptr) std::fill(grad, grad + d, 0.0);

  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const double* xj = x.data() + static_cast<std::ptrdiff_t>(j) * d;
    double value = 0.0;
    double slope = 0.0;
    bool close = false;
    if (riesz) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double diff = xi[a] - xj[a];
        r2 += diff * diff;
      }
      close = r2 < kCoincidenceTol * kCoincidenceTol;
      value = detail::riesz_kernel_and_slope(k.s, r2, &slope);
    } else {
      double u = 0.0;
      for (int a = 0; a < d; ++a) u += xi[a] * xj[a];
      close = 1.0 - std::abs(u) < kCoincidenceTol;
      value = detail::projective_kernel_and_slope(k, u, &slope);
    }
    if (close && (energy_singular || slope_singular)) {
      if (out.degenerate_j < 0) out.degenerate_j = j;
      out.energy = energy_singular ? kInf : out.energy + value;
      continue;
    }
    out.energy += value;
    if (grad != nullptr) {
      if (riesz) {
        for (int a = 0; a < d; ++a) grad[a] += slope * (xi[a] - xj[a]);
      } else {
        for (int a = 0; a < d; ++a) grad[a] += slope * xj[a];
      }
    }
  }
  if (grad != nullptr) {
    for (int a = 0; a < d; ++a) grad[a] *= 2.0;
  }
  return out;
}

Evaluation reduce_rows(const std::vector<RowResult>& rows, Eigen::MatrixXd gradient) {
  Evaluation ev;
  ev.gradient = std::move(gradient);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ev.energy += rows[i].energy;
    if (ev.degenerate_i < 0 && rows[i].degenerate_j >= 0) {
      ev.degenerate_i = static_cast<int>(i);
      ev.degenerate_j = rows[i].degenerate_j;
    }
  }
  return ev;
}

Eigen::MatrixXd gradient_or_throw(Evaluation ev) {
  if (ev.degenerate()) throw DegeneratePairError(ev.degenerate_i, ev.degenerate_j);
  return std::move(ev.gradient);
}

}  // namespace

Evaluation evaluate(const KernelSpec& k, const Eigen::MatrixXd& x, bool with_gradient) {
  const int n = static_cast<int>(x.cols());
  std::vector<RowResult> rows(static_cast<std::size_t>(n));
  Eigen::MatrixXd grad;
  if (with_gradient) grad.resize(x.rows(), x.cols());

#pragma omp parallel for schedule(static) if (n >= kParallelMinRows)
  for (int i = 0; i < n; ++i) {
    double* gcol = with_gradient ? grad.data() + static_cast<std::ptrdiff_t>(i) * x.rows() : nullptr;
    rows[static_cast<std::size_t>(i)] = row_pass(k, x, i, gcol);
  }
  return reduce_rows(rows, std::move(grad));
}

double energy(const KernelSpec& k, const Frame& x) {
  return evaluate(k, x.matrix(), false).energy;
}

Eigen::MatrixXd energy_gradient(const KernelSpec& k, const Frame& x) {
  return gradient_or_throw(evaluate(k, x.matrix(), true));
}

void project_to_tangent(const Eigen::MatrixXd& x, Eigen::MatrixXd& g) {
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    g.col(i) -= x.col(i).dot(g.col(i)) * x.col(i);
  }
}

Eigen::MatrixXd tangent_gradient(const KernelSpec& k, const Frame& x) {
  Eigen::MatrixXd g = energy_gradient(k, x);
  project_to_tangent(x.matrix(), g);
  return g;
}

Eigen::MatrixXd finite_difference_gradient(const KernelSpec& k, const Eigen::MatrixXd& x,
                                           double h) {
  Eigen::MatrixXd g(x.rows(), x.cols());
  Eigen::MatrixXd probe = x;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    for (Eigen::Index a = 0; a < x.rows(); ++a) {
      probe(a, i) = x(a, i) + h;
      const double up = evaluate(k, probe, false).energy;
      probe(a, i) = x(a, i) - h;
      const double down = evaluate(k, probe, false).energy;
      probe(a, i) = x(a, i);
      g(a, i) = (up - down) / (2.0 * h);
    }
  }
  return g;
}

double gradient_relative_error(const KernelSpec& k, const Frame& x, double h) {
  const Eigen::MatrixXd g = energy_gradient(k, x);
  const Eigen::MatrixXd fd = finite_difference_gradient(k, x.matrix(), h);
  const double scale = g.norm();
  return scale > 0.0 ? (g - fd).norm() / scale : (g - fd).norm();
}

namespace serial {

// Direct transcription of the pair sums, one ordered pair at a time.
Evaluation evaluate(const KernelSpec& k, const Eigen::MatrixXd& x, bool with_gradient) {
  const Eigen::Index n = x.cols();
  Evaluation ev;
  if (with_gradient) ev.gradient = Eigen::MatrixXd::Zero(x.rows(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      double slope = 0.0;
      double value = 0.0;
      bool close = false;
      if (k.family == KernelFamily::Riesz) {
        const double r2 = (x.col(i) - x.col(j)).squaredNorm();
        close = r2 < kCoincidenceTol * kCoincidenceTol;
        value = detail::riesz_kernel_and_slope(k.s, r2, &slope);
        if (with_gradient) ev.gradient.col(i) += 2.0 * slope * (x.col(i) - x.col(j));
      } else {
        const double u = x.col(i).dot(x.col(j));
        close = 1.0 - std::abs(u) < kCoincidenceTol;
        value = detail::projective_kernel_and_slope(k, u, &slope);
        if (with_gradient) ev.gradient.col(i) += 2.0 * slope * x.col(j);
      }
      const bool singular =
          k.singular_at_coincidence() || (with_gradient && gradient_singular(k));
      if (close && singular && ev.degenerate_i < 0) {
        ev.degenerate_i = static_cast<int>(i);
        ev.degenerate_j = static_cast<int>(j);
      }
      ev.energy += value;
    }
  }
  if (ev.degenerate() && k.singular_at_coincidence()) ev.energy = kInf;
  return ev;
}

double energy(const KernelSpec& k, const Frame& x) {
  return serial::evaluate(k, x.matrix(), false).energy;
}

Eigen::MatrixXd energy_gradient(const KernelSpec& k, const Frame& x) {
  return gradient_or_throw(serial::evaluate(k, x.matrix(), true));
}

}  // namespace serial

}  // namespace linepack
