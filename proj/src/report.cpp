#include "linepack/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace linepack {

using nlohmann::json;

namespace {

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string optional_csv(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    // from_chars rejects "inf"; accept the spelling we emit.
    if (s == "inf") return INFINITY;
    throw std::invalid_argument("bad number in sweep row: '" + s + "'");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string exponent_label(const KernelSpec& k) {
  if (k.family == KernelFamily::FramePotential) return "fp";
  return format_double(k.s);
}

const std::vector<std::string>& sweep_csv_columns() {
  static const std::vector<std::string> cols = {
      "d",         "N",         "s",           "best_energy",   "coherence",
      "tightness_residual",     "welch",       "levenstein",    "sep_bound",
      "restarts_used",          "seed",        "converged",     "wall_time_ms"};
  return cols;
}

std::string sweep_csv_header() {
  std::string h;
  for (const auto& c : sweep_csv_columns()) {
    if (!h.empty()) h += ',';
    h += c;
  }
  return h;
}

std::string to_csv_row(const SweepRecord& r) {
  std::ostringstream os;
  os << r.d << ',' << r.n << ',' << r.s << ',' << format_double(r.best_energy) << ','
     << format_double(r.coherence) << ',' << format_double(r.tightness_residual) << ','
     << format_double(r.welch) << ',' << optional_csv(r.levenstein) << ','
     << optional_csv(r.sep_bound) << ',' << r.restarts_used << ',' << r.seed << ','
     << (r.converged ? "true" : "false") << ',' << format_double(r.wall_time_ms);
  return os.str();
}

SweepRecord sweep_record_from_csv(const std::string& line) {
  const std::vector<std::string> f = split_csv(line);
  if (f.size() != sweep_csv_columns().size()) {
    throw std::invalid_argument("sweep row has " + std::to_string(f.size()) + " fields, expected " +
                                std::to_string(sweep_csv_columns().size()));
  }
  SweepRecord r;
  r.d = std::stoi(f[0]);
  r.n = std::stoi(f[1]);
  r.s = f[2];
  r.best_energy = parse_double(f[3]);
  r.coherence = parse_double(f[4]);
  r.tightness_residual = parse_double(f[5]);
  r.welch = parse_double(f[6]);
  r.levenstein = parse_optional(f[7]);
  r.sep_bound = parse_optional(f[8]);
  r.restarts_used = std::stoi(f[9]);
  r.seed = std::stoull(f[10]);
  if (f[11] != "true" && f[11] != "false") {
    throw std::invalid_argument("bad converged flag: '" + f[11] + "'");
  }
  r.converged = f[11] == "true";
  r.wall_time_ms = parse_double(f[12]);
  return r;
}

SweepRecord make_sweep_record(const RunResult& run, int restarts, std::uint64_t seed,
                              bool with_timing) {
  SweepRecord r;
  r.d = run.config.dim();
  r.n = run.config.size();
  r.s = exponent_label(run.kernel);
  r.best_energy = run.report.energy;
  r.coherence = coherence(run.config);
  r.tightness_residual = tightness_residual(run.config);
  r.welch = welch_bound(r.d, r.n).value;
  r.levenstein = levenstein_bound(r.d, r.n);
  if (run.kernel.family == KernelFamily::ProjectiveRiesz && r.d >= 3 && run.kernel.s > r.d - 1) {
    r.sep_bound = separation_bound(r.d, r.n, run.kernel.s);
  }
  r.restarts_used = restarts;
  r.seed = seed;
  r.converged = run.report.converged;
  r.wall_time_ms = with_timing ? run.report.wall_time_ms : 0.0;
  return r;
}

json to_json(const SweepRecord& r) {
  return json{{"d", r.d},
              {"N", r.n},
              {"s", r.s},
              {"best_energy", r.best_energy},
              {"coherence", r.coherence},
              {"tightness_residual", r.tightness_residual},
              {"welch", r.welch},
              {"levenstein", optional_json(r.levenstein)},
              {"sep_bound", optional_json(r.sep_bound)},
              {"restarts_used", r.restarts_used},
              {"seed", r.seed},
              {"converged", r.converged},
              {"wall_time_ms", r.wall_time_ms}};
}

SweepRecord sweep_record_from_json(const json& j) {
  SweepRecord r;
  r.d = j.at("d").get<int>();
  r.n = j.at("N").get<int>();
  r.s = j.at("s").get<std::string>();
  r.best_energy = j.at("best_energy").get<double>();
  r.coherence = j.at("coherence").get<double>();
  r.tightness_residual = j.at("tightness_residual").get<double>();
  r.welch = j.at("welch").get<double>();
  if (!j.at("levenstein").is_null()) r.levenstein = j.at("levenstein").get<double>();
  if (!j.at("sep_bound").is_null()) r.sep_bound = j.at("sep_bound").get<double>();
  r.restarts_used = j.at("restarts_used").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.converged = j.at("converged").get<bool>();
  r.wall_time_ms = j.at("wall_time_ms").get<double>();
  return r;
}

json to_json(const MetricsReport& m) {
  json clusters = json::array();
  for (const auto& c : m.distinct_abs_inners) {
    clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
  }
  return json{{"coherence", m.coherence},
              {"chordal_separation", m.chordal_separation},
              {"tightness_residual", m.tightness_residual},
              {"frame_lower", m.frame_lower},
              {"frame_upper", m.frame_upper},
              {"welch", m.welch},
              {"levenstein", optional_json(m.levenstein)},
              {"sep_bound_rhs", optional_json(m.sep_bound_rhs)},
              {"equiangular", m.equiangular},
              {"distinct_abs_inners", clusters}};
}

json to_json(const RunResult& r, bool with_timing) {
  // nlohmann::json would emit null for a non-finite energy; keep it a string.
  const json energy = std::isfinite(r.report.energy) ? json(r.report.energy)
                                                     : json(format_double(r.report.energy));
  return json{{"kernel", r.kernel.label()},
              {"s", exponent_label(r.kernel)},
              {"d", r.config.dim()},
              {"N", r.config.size()},
              {"energy", energy},
              {"grad_norm", r.report.grad_norm},
              {"iterations", r.report.iterations},
              {"converged", r.report.converged},
              {"stop_reason", to_string(r.stop)},
              {"restart_index", r.restart_index},
              {"wall_time_ms", with_timing ? r.report.wall_time_ms : 0.0}};
}

json to_json(const ComparisonRecord& c) {
  return json{{"coherence_a", c.coherence_a},     {"coherence_b", c.coherence_b},
              {"coherence_diff", c.coherence_diff}, {"residual_a", c.residual_a},
              {"residual_b", c.residual_b},         {"residual_diff", c.residual_diff},
              {"equivalent", c.equivalent}};
}

json vectors_to_json(const Frame& x) {
  json out = json::array();
  for (int i = 0; i < x.size(); ++i) {
    json v = json::array();
    for (int a = 0; a < x.dim(); ++a) v.push_back(x.matrix()(a, i));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace linepack
