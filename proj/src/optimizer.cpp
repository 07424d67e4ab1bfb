#include "linepack/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <optional>
#include <random>
#include <sstream>

#include "linepack/spherical.hpp"

namespace linepack {

namespace {

constexpr int kMaxBacktracks = 60;
constexpr double kMinStep = 1e-300;
constexpr double kMaxStep = 1e12;

struct Point {
  Eigen::MatrixXd vars;  // frame columns or angle rows, depending on mode
  double energy = kInf;
  Eigen::MatrixXd grad;  // gradient in the same space as `vars`
  bool ok = false;
};

// Tangent mode: vars = d x N unit columns, grad = tangent gradient.
struct TangentProblem {
  const KernelSpec& k;

  Point eval(Eigen::MatrixXd x) const {
    Point p;
    Evaluation ev = evaluate(k, x, true);
    p.ok = !ev.degenerate() && std::isfinite(ev.energy) && ev.gradient.allFinite();
    p.energy = ev.energy;
    if (p.ok) {
      project_to_tangent(x, ev.gradient);
      p.grad = std::move(ev.gradient);
    }
    p.vars = std::move(x);
    return p;
  }

  Eigen::MatrixXd step(const Point& from, double alpha) const {
    Eigen::MatrixXd x = from.vars - alpha * from.grad;
    x.colwise().normalize();
    return x;
  }

  Eigen::MatrixXd to_frame(const Eigen::MatrixXd& vars) const { return vars; }
};

// Spherical mode: vars = N x (d-1) angles, grad = chain-rule gradient.
struct SphericalProblem {
  const KernelSpec& k;

  Point eval(Eigen::MatrixXd angles) const {
    Point p;
    const Eigen::MatrixXd x = spherical_to_matrix(angles);
    Evaluation ev = evaluate(k, x, true);
    p.ok = !ev.degenerate() && std::isfinite(ev.energy) && ev.gradient.allFinite();
    p.energy = ev.energy;
    if (p.ok) p.grad = chain_to_angles(angles, ev.gradient);
    p.vars = std::move(angles);
    return p;
  }

  Eigen::MatrixXd step(const Point& from, double alpha) const {
    return from.vars - alpha * from.grad;
  }

  Eigen::MatrixXd to_frame(const Eigen::MatrixXd& vars) const {
    return spherical_to_matrix(vars);
  }
};

template <class Problem>
RunResult descend(const Problem& problem, Eigen::MatrixXd start, const KernelSpec& k,
                  const OptimizerSettings& settings) {
  const auto t0 = std::chrono::steady_clock::now();
  Point cur = problem.eval(std::move(start));
  if (!cur.ok) {
    throw OptimizationError("initial configuration has non-finite energy under " + k.label());
  }

  std::vector<double> trace{cur.energy};
  StopReason stop = StopReason::MaxIterations;
  double alpha = settings.step_init;
  int iters = 0;
  double g2 = cur.grad.squaredNorm();

  while (true) {
    if (std::sqrt(g2) <= settings.grad_tol) {
      stop = StopReason::Converged;
      break;
    }
    if (iters >= settings.max_iters) break;

    std::optional<Point> next;
    double trial = alpha;
    for (int bt = 0; bt <= kMaxBacktracks; ++bt) {
      Point cand = problem.eval(problem.step(cur, trial));
      // The strict test rejects steps whose decrease is below the energy's
      // floating-point resolution.
      if (cand.ok && cand.energy <= cur.energy - settings.armijo_c * trial * g2 &&
          cand.energy < cur.energy) {
        next = std::move(cand);
        break;
      }
      trial *= settings.backtrack_factor;
    }
    if (!next) {
      stop = StopReason::LineSearchFailed;
      break;
    }

    // Barzilai-Borwein trial step for the next iteration.
    const Eigen::MatrixXd s = next->vars - cur.vars;
    const Eigen::MatrixXd y = next->grad - cur.grad;
    const double sy = s.cwiseProduct(y).sum();
    alpha = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * trial;
    alpha = std::clamp(alpha, kMinStep, kMaxStep);

    if (next->energy > trace.back()) {
      throw std::logic_error("descent accepted an energy increase");
    }
    cur = std::move(*next);
    g2 = cur.grad.squaredNorm();
    trace.push_back(cur.energy);
    ++iters;
  }

  Eigen::MatrixXd x = problem.to_frame(cur.vars);
  RunResult r{Frame(std::move(x)), {}, 0, k, stop, std::move(trace)};
  r.report.energy = cur.energy;
  r.report.grad_norm = std::sqrt(g2);
  r.report.iterations = iters;
  r.report.converged = stop == StopReason::Converged;
  r.report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

void OptimizerSettings::validate() const {
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (!(step_init > 0.0)) throw std::invalid_argument("step_init must be > 0");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw std::invalid_argument("backtrack_factor must lie in (0,1)");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
    throw std::invalid_argument("armijo_c must lie in (0,1)");
  }
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged:
      return "converged";
    case StopReason::MaxIterations:
      return "max_iterations";
    case StopReason::LineSearchFailed:
      return "line_search_failed";
  }
  return "unknown";
}

RunResult minimize(const KernelSpec& k, const Frame& x0, const OptimizerSettings& settings) {
  settings.validate();
  if (x0.size() < 2) throw std::invalid_argument("minimize: need N >= 2");
  if (settings.parametrization == Parametrization::Spherical) {
    if (x0.dim() < 2) throw std::invalid_argument("minimize: spherical mode needs d >= 2");
    return descend(SphericalProblem{k}, cartesian_to_spherical(x0).angles(), k, settings);
  }
  return descend(TangentProblem{k}, x0.matrix(), k, settings);
}

std::uint64_t restart_seed(std::uint64_t master, int index) {
  return splitmix64(master + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1));
}

Frame random_uniform_frame(int d, int n, std::uint64_t seed) {
  if (d < 1 || n < 1) throw std::invalid_argument("random_uniform_frame: need d, N >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(d, n);
  for (int i = 0; i < n; ++i) {
    do {
      for (int a = 0; a < d; ++a) m(a, i) = gauss(rng);
    } while (m.col(i).squaredNorm() == 0.0);
  }
  return Frame(std::move(m));
}

RunResult multistart(const KernelSpec& k, int d, int n, const OptimizerSettings& settings) {
  settings.validate();
  if (d < 2 || n < 2) throw std::invalid_argument("multistart: need d >= 2 and N >= 2");

  std::vector<std::optional<RunResult>> runs(static_cast<std::size_t>(settings.restarts));
  std::vector<std::string> errors(runs.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < settings.restarts; ++r) {
    try {
      const Frame x0 = random_uniform_frame(d, n, restart_seed(settings.seed, r));
      RunResult res = minimize(k, x0, settings);
      res.restart_index = r;
      runs[static_cast<std::size_t>(r)] = std::move(res);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(r)] = e.what();
    }
  }

  std::optional<RunResult> best;
  for (auto& run : runs) {
    if (run && (!best || run->report.energy < best->report.energy)) best = std::move(run);
  }
  if (!best) {
    throw OptimizationError("all " + std::to_string(settings.restarts) +
                            " restarts failed; first error: " + errors.front());
  }
  return std::move(*best);
}

PipelineResult pipeline_tight_separated(int d, int n, double s_sep,
                                        const OptimizerSettings& settings) {
  std::vector<std::string> warnings;
  if (s_sep <= d - 1) {
    std::ostringstream os;
    os << "s_sep = " << s_sep << " <= d - 1 = " << d - 1
       << "; minimizers are not guaranteed to be well separated";
    warnings.push_back(os.str());
  }
  RunResult separated = multistart(KernelSpec::projective_riesz(s_sep), d, n, settings);
  RunResult tight = minimize(KernelSpec::frame_potential(), separated.config, settings);
  tight.restart_index = separated.restart_index;
  return {std::move(separated), std::move(tight), std::move(warnings)};
}

}  // namespace linepack
