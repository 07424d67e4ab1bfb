#include "linepack/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "linepack/ingest.hpp"
#include "linepack/metrics.hpp"
#include "linepack/reference.hpp"
#include "linepack/report.hpp"
#include "linepack/spherical.hpp"
#include "linepack/sweep.hpp"

namespace linepack::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kGradcheckThreshold = 1e-4;

// Flags shared by the commands that run the optimizer.
struct SolverFlags {
  int restarts = 20;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int max_iters = 10000;
  std::string param = "tangent";
  bool timing = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--restarts", restarts, "random restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "master RNG seed");
    cmd->add_option("--tol", tol, "gradient-norm tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", max_iters, "iteration cap per run")->check(CLI::PositiveNumber);
    cmd->add_option("--param", param, "parametrization")
        ->check(CLI::IsMember({"tangent", "spherical"}));
    cmd->add_flag("--timing", timing, "report wall-clock times (otherwise written as 0)");
  }

  OptimizerSettings settings() const {
    OptimizerSettings s;
    s.restarts = restarts;
    s.seed = seed;
    s.grad_tol = tol;
    s.max_iters = max_iters;
    s.parametrization = param == "spherical" ? Parametrization::Spherical : Parametrization::Tangent;
    return s;
  }
};

struct OptimizeFlags {
  int d = 0;
  int n = 0;
  std::optional<double> s;
  bool frame_potential = false;
  std::string out_path;
  std::string format = "json";
  SolverFlags solver;
};

struct SweepFlags {
  int d = 0;
  std::string n_range;
  std::string s_list;
  std::string out_path;
  std::string format = "csv";
  bool skip_existing = false;
  SolverFlags solver;
};

struct PipelineFlags {
  int d = 0;
  int n = 0;
  double s_sep = 0.0;
  std::string out_path;
  std::string format = "json";
  SolverFlags solver;
};

struct GradcheckFlags {
  int d = 3;
  int n = 5;
  double s = 2.0;
  bool frame_potential = false;
  int trials = 5;
  std::uint64_t seed = 1;
  double h = 1e-6;
  std::string format = "json";
};

struct ReferenceFlags {
  std::string kind;
  std::optional<int> d;
  std::optional<int> n;
  std::string out_path;
  std::string format = "text";
};

struct MetricsFlags {
  std::string in_path;
  int d = 0;
  int n = 0;
  std::optional<double> s;
  double equi_tol = 1e-6;
  double cluster_tol = 1e-2;
  std::string format = "json";
};

struct CompareFlags {
  std::string in_a;
  std::string in_b;
  int d = 0;
  int n = 0;
  double tol = 1e-6;
  std::string format = "json";
};

KernelSpec kernel_from(const std::optional<double>& s, bool frame_potential) {
  if (frame_potential == s.has_value()) {
    throw UsageError("give exactly one of --s or --frame-potential");
  }
  return frame_potential ? KernelSpec::frame_potential() : KernelSpec::projective_riesz(*s);
}

void require_shape(int d, int n) {
  if (d < 2) throw UsageError("--d must be >= 2");
  if (n < 2) throw UsageError("--n must be >= 2");
}

// Writes `text` to `path`, or to `out` when the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

json run_and_metrics(const RunResult& run, bool timing) {
  MetricsOptions mo;
  if (run.kernel.family == KernelFamily::ProjectiveRiesz) mo.s = run.kernel.s;
  return json{{"run", to_json(run, timing)}, {"metrics", to_json(measure(run.config, mo))}};
}

int cmd_optimize(const OptimizeFlags& f, std::ostream& out) {
  require_shape(f.d, f.n);
  const KernelSpec k = kernel_from(f.s, f.frame_potential);
  const OptimizerSettings settings = f.solver.settings();
  const RunResult run = multistart(k, f.d, f.n, settings);

  std::ostringstream comment;
  comment << "linepack optimize kernel=" << k.label() << " seed=" << settings.seed
          << " restarts=" << settings.restarts << "\nenergy=" << format_double(run.report.energy);
  if (!f.out_path.empty()) save_packing(f.out_path, run.config, comment.str());

  if (f.format == "csv") {
    out << sweep_csv_header() << "\n"
        << to_csv_row(make_sweep_record(run, settings.restarts, settings.seed, f.solver.timing))
        << "\n";
    return kExitOk;
  }
  json j = run_and_metrics(run, f.solver.timing);
  j["command"] = "optimize";
  if (f.out_path.empty()) {
    j["vectors"] = vectors_to_json(run.config);
  } else {
    j["config_path"] = f.out_path;
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

std::vector<SweepRecord> read_existing_sweep(const std::string& path, const std::string& format) {
  std::vector<SweepRecord> records;
  if (!std::filesystem::exists(path)) return records;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    if (format == "json") {
      const json j = json::parse(in);
      for (const auto& item : j) records.push_back(sweep_record_from_json(item));
      return records;
    }
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (header) {
        if (line != sweep_csv_header()) throw UsageError(path + ": unexpected CSV header");
        header = false;
        continue;
      }
      records.push_back(sweep_record_from_csv(line));
    }
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
  return records;
}

int cmd_sweep(const SweepFlags& f, std::ostream& out) {
  SweepSpec spec;
  spec.d = f.d;
  try {
    std::tie(spec.n_min, spec.n_max) = parse_n_range(f.n_range);
    spec.kernels = parse_s_list(f.s_list);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  require_shape(spec.d, spec.n_min);
  spec.settings = f.solver.settings();
  spec.with_timing = f.solver.timing;

  const std::vector<SweepRecord> existing =
      f.skip_existing ? read_existing_sweep(f.out_path, f.format) : std::vector<SweepRecord>{};

  std::vector<SweepRecord> records;
  if (f.format == "csv") {
    // Rows are flushed as cells finish so an interrupted sweep can resume.
    std::ofstream file(f.out_path);
    if (!file) throw UsageError("cannot write " + f.out_path);
    file << sweep_csv_header() << "\n" << std::flush;
    records = run_sweep(spec, existing, [&](const SweepRecord& r) {
      file << to_csv_row(r) << "\n" << std::flush;
    });
  } else {
    records = run_sweep(spec, existing);
    json arr = json::array();
    for (const auto& r : records) arr.push_back(to_json(r));
    emit(f.out_path, arr.dump(2) + "\n", out);
  }
  return kExitOk;
}

int cmd_pipeline(const PipelineFlags& f, std::ostream& out, std::ostream& err) {
  require_shape(f.d, f.n);
  const OptimizerSettings settings = f.solver.settings();
  const PipelineResult res = pipeline_tight_separated(f.d, f.n, f.s_sep, settings);
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";

  if (!f.out_path.empty()) {
    std::ostringstream comment;
    comment << "linepack pipeline s_sep=" << format_double(f.s_sep) << " seed=" << settings.seed
            << " restarts=" << settings.restarts;
    save_packing(f.out_path, res.tight.config, comment.str());
  }

  if (f.format == "csv") {
    out << sweep_csv_header() << "\n"
        << to_csv_row(make_sweep_record(res.separated, settings.restarts, settings.seed,
                                        f.solver.timing))
        << "\n"
        << to_csv_row(make_sweep_record(res.tight, settings.restarts, settings.seed,
                                        f.solver.timing))
        << "\n";
    return kExitOk;
  }
  json j{{"command", "pipeline"},
         {"s_sep", f.s_sep},
         {"warnings", res.warnings},
         {"stage2", run_and_metrics(res.separated, f.solver.timing)},
         {"stage3", run_and_metrics(res.tight, f.solver.timing)}};
  if (f.out_path.empty()) {
    j["vectors"] = vectors_to_json(res.tight.config);
  } else {
    j["config_path"] = f.out_path;
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

// Relative error of the angle-space chain gradient against central
// differences in the angles.
double spherical_relative_error(const KernelSpec& k, const Eigen::MatrixXd& angles, double h) {
  const Eigen::MatrixXd g = spherical_chain_gradient(k, SphericalCoords(angles));
  Eigen::MatrixXd fd(angles.rows(), angles.cols());
  Eigen::MatrixXd probe = angles;
  for (Eigen::Index i = 0; i < angles.rows(); ++i) {
    for (Eigen::Index a = 0; a < angles.cols(); ++a) {
      probe(i, a) = angles(i, a) + h;
      const double up = evaluate(k, spherical_to_matrix(probe), false).energy;
      probe(i, a) = angles(i, a) - h;
      const double down = evaluate(k, spherical_to_matrix(probe), false).energy;
      probe(i, a) = angles(i, a);
      fd(i, a) = (up - down) / (2.0 * h);
    }
  }
  const double scale = g.norm();
  return scale > 0.0 ? (g - fd).norm() / scale : (g - fd).norm();
}

int cmd_gradcheck(const GradcheckFlags& f, std::ostream& out) {
  require_shape(f.d, f.n);
  if (f.trials < 1) throw UsageError("--trials must be >= 1");
  const KernelSpec k =
      f.frame_potential ? KernelSpec::frame_potential() : KernelSpec::projective_riesz(f.s);
  double ambient = 0.0;
  double spherical = 0.0;
  for (int t = 0; t < f.trials; ++t) {
    const Frame x = random_uniform_frame(f.d, f.n, restart_seed(f.seed, t));
    ambient = std::max(ambient, gradient_relative_error(k, x, f.h));
    spherical = std::max(spherical,
                         spherical_relative_error(k, cartesian_to_spherical(x).angles(), f.h));
  }
  const double worst = std::max(ambient, spherical);
  const bool pass = worst <= kGradcheckThreshold;
  if (f.format == "text") {
    out << "kernel " << k.label() << " trials " << f.trials << " max_rel_error "
        << format_double(worst) << (pass ? " PASS" : " FAIL") << "\n";
  } else {
    out << json{{"command", "gradcheck"},
                {"kernel", k.label()},
                {"d", f.d},
                {"N", f.n},
                {"trials", f.trials},
                {"step", f.h},
                {"ambient_max_rel_error", ambient},
                {"spherical_max_rel_error", spherical},
                {"max_rel_error", worst},
                {"threshold", kGradcheckThreshold},
                {"pass", pass}}
               .dump(2)
        << "\n";
  }
  return pass ? kExitOk : kExitCheckFailed;
}

Frame reference_frame(const ReferenceFlags& f) {
  if (f.kind == "half-circle") {
    if (!f.n) throw UsageError("--kind half-circle needs --n");
    if (f.d && *f.d != 2) throw UsageError("half-circle configurations live in d = 2");
    if (*f.n < 1) throw UsageError("--n must be >= 1");
    return half_circle_config(*f.n);
  }
  if (f.kind == "simplex") {
    if (!f.d) throw UsageError("--kind simplex needs --d");
    if (*f.d < 2) throw UsageError("--d must be >= 2");
    if (f.n && *f.n != *f.d + 1) throw UsageError("simplex has N = d + 1");
    return simplex_etf(*f.d);
  }
  if (f.kind == "onb") {
    if (!f.d) throw UsageError("--kind onb needs --d");
    if (*f.d < 1) throw UsageError("--d must be >= 1");
    if (f.n && *f.n != *f.d) throw UsageError("orthonormal basis has N = d");
    return orthonormal_basis(*f.d);
  }
  if ((f.d && *f.d != 3) || (f.n && *f.n != 6)) {
    throw UsageError("icosa6 is the d = 3, N = 6 configuration");
  }
  return icosahedron_etf6();
}

int cmd_reference(const ReferenceFlags& f, std::ostream& out) {
  const Frame x = reference_frame(f);
  if (f.format == "json") {
    emit(f.out_path,
         json{{"kind", f.kind}, {"d", x.dim()}, {"N", x.size()}, {"vectors", vectors_to_json(x)}}
                 .dump(2) +
             "\n",
         out);
    return kExitOk;
  }
  std::ostringstream os;
  write_packing(os, x, "linepack reference kind=" + f.kind);
  emit(f.out_path, os.str(), out);
  return kExitOk;
}

int cmd_metrics(const MetricsFlags& f, std::ostream& out, std::ostream& err) {
  if (f.d < 1 || f.n < 2) throw UsageError("metrics needs --d >= 1 and --n >= 2");
  std::vector<std::string> warnings;
  const Frame x = load_packing(f.in_path, f.d, f.n, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  MetricsOptions mo;
  mo.s = f.s;
  mo.equiangular_tol = f.equi_tol;
  mo.cluster_tol = f.cluster_tol;
  out << to_json(measure(x, mo)).dump(2) << "\n";
  return kExitOk;
}

int cmd_compare(const CompareFlags& f, std::ostream& out, std::ostream& err) {
  if (f.d < 1 || f.n < 2) throw UsageError("compare needs --d >= 1 and --n >= 2");
  std::vector<std::string> warnings;
  const Frame a = load_packing(f.in_a, f.d, f.n, &warnings);
  const Frame b = load_packing(f.in_b, f.d, f.n, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  out << to_json(compare_to_reference(a, b, f.tol)).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"linepack: projective Riesz energy frames, coherence and tightness"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (default: OMP_NUM_THREADS)")
      ->check(CLI::NonNegativeNumber);

  OptimizeFlags opt;
  auto* optimize = app.add_subcommand("optimize", "multistart minimization of one (d, N, s) cell");
  optimize->add_option("--d", opt.d, "ambient dimension")->required();
  optimize->add_option("--n", opt.n, "number of vectors")->required();
  auto* opt_s = optimize->add_option("--s", opt.s, "projective Riesz exponent");
  optimize->add_flag("--frame-potential", opt.frame_potential, "minimize the frame potential")
      ->excludes(opt_s);
  optimize->add_option("--out", opt.out_path, "write the configuration here");
  optimize->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
  opt.solver.attach(optimize);

  SweepFlags sw;
  auto* sweep = app.add_subcommand("sweep", "grid of multistart runs, one CSV row per cell");
  sweep->add_option("--d", sw.d, "ambient dimension")->required();
  sweep->add_option("--n-range", sw.n_range, "inclusive N range A:B")->required();
  sweep->add_option("--s-list", sw.s_list, "comma-separated exponents; 'fp' = frame potential")
      ->required();
  sweep->add_option("--out", sw.out_path, "output file")->required();
  sweep->add_option("--format", sw.format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_flag("--skip-existing", sw.skip_existing, "reuse cells already in --out");
  sw.solver.attach(sweep);

  PipelineFlags pl;
  auto* pipeline = app.add_subcommand("pipeline", "separated stage, then frame-potential polish");
  pipeline->add_option("--d", pl.d, "ambient dimension")->required();
  pipeline->add_option("--n", pl.n, "number of vectors")->required();
  pipeline->add_option("--s-sep", pl.s_sep, "exponent of the separating stage")->required();
  pipeline->add_option("--out", pl.out_path, "write the final configuration here");
  pipeline->add_option("--format", pl.format)->check(CLI::IsMember({"json", "csv"}));
  pl.solver.attach(pipeline);

  GradcheckFlags gc;
  auto* gradcheck = app.add_subcommand("gradcheck", "analytic vs central-difference gradients");
  gradcheck->add_option("--d", gc.d, "ambient dimension");
  gradcheck->add_option("--n", gc.n, "number of vectors");
  auto* gc_s = gradcheck->add_option("--s", gc.s, "projective Riesz exponent");
  gradcheck->add_flag("--frame-potential", gc.frame_potential)->excludes(gc_s);
  gradcheck->add_option("--trials", gc.trials, "random configurations");
  gradcheck->add_option("--seed", gc.seed, "RNG seed");
  gradcheck->add_option("--step", gc.h, "finite-difference step")->check(CLI::PositiveNumber);
  gradcheck->add_option("--format", gc.format)->check(CLI::IsMember({"json", "text"}));

  ReferenceFlags rf;
  auto* reference = app.add_subcommand("reference", "write a closed-form configuration");
  reference->add_option("--kind", rf.kind)
      ->required()
      ->check(CLI::IsMember({"half-circle", "simplex", "onb", "icosa6"}));
  reference->add_option("--d", rf.d, "ambient dimension");
  reference->add_option("--n", rf.n, "number of vectors");
  reference->add_option("--out", rf.out_path, "output file (default stdout)");
  reference->add_option("--format", rf.format)->check(CLI::IsMember({"text", "json"}));

  MetricsFlags mf;
  auto* metrics = app.add_subcommand("metrics", "MetricsReport for a configuration file");
  metrics->add_option("--in", mf.in_path)->required();
  metrics->add_option("--d", mf.d)->required();
  metrics->add_option("--n", mf.n)->required();
  metrics->add_option("--s", mf.s, "exponent for the separation bound");
  metrics->add_option("--equiangular-tol", mf.equi_tol);
  metrics->add_option("--cluster-tol", mf.cluster_tol);
  metrics->add_option("--format", mf.format)->check(CLI::IsMember({"json"}));

  CompareFlags cf;
  auto* compare = app.add_subcommand("compare", "compare two configuration files");
  compare->add_option("--in-a", cf.in_a)->required();
  compare->add_option("--in-b", cf.in_b)->required();
  compare->add_option("--d", cf.d)->required();
  compare->add_option("--n", cf.n)->required();
  compare->add_option("--tol", cf.tol, "equivalence tolerance");
  compare->add_option("--format", cf.format)->check(CLI::IsMember({"json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*optimize) return cmd_optimize(opt, out);
    if (*sweep) return cmd_sweep(sw, out);
    if (*pipeline) return cmd_pipeline(pl, out, err);
    if (*gradcheck) return cmd_gradcheck(gc, out);
    if (*reference) return cmd_reference(rf, out);
    if (*metrics) return cmd_metrics(mf, out, err);
    if (*compare) return cmd_compare(cf, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("linepack");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace linepack::cli
