#include "linepack/sweep.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace linepack {

namespace {

int parse_int(const std::string& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  return v;
}

}  // namespace

std::pair<int, int> parse_n_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("range must be A:B, got '" + text + "'");
  const int a = parse_int(text.substr(0, colon));
  const int b = parse_int(text.substr(colon + 1));
  if (a < 2 || b < a) throw std::invalid_argument("range needs 2 <= A <= B, got '" + text + "'");
  return {a, b};
}

std::vector<KernelSpec> parse_s_list(const std::string& text) {
  std::vector<KernelSpec> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "fp") {
      out.push_back(KernelSpec::frame_potential());
      continue;
    }
    double s = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), s);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw std::invalid_argument("bad exponent in s-list: '" + item + "'");
    }
    out.push_back(KernelSpec::projective_riesz(s));
  }
  if (out.empty()) throw std::invalid_argument("empty s-list");
  return out;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, const std::vector<SweepRecord>& existing,
                                   const std::function<void(const SweepRecord&)>& on_record) {
  std::vector<SweepRecord> out;
  for (int n = spec.n_min; n <= spec.n_max; ++n) {
    for (const KernelSpec& k : spec.kernels) {
      const std::string label = exponent_label(k);
      const SweepRecord* found = nullptr;
      for (const auto& r : existing) {
        if (r.d == spec.d && r.n == n && r.s == label) {
          found = &r;
          break;
        }
      }
      if (found != nullptr) {
        out.push_back(*found);
      } else {
        const RunResult run = multistart(k, spec.d, n, spec.settings);
        out.push_back(make_sweep_record(run, spec.settings.restarts, spec.settings.seed,
                                        spec.with_timing));
      }
      if (on_record) on_record(out.back());
    }
  }
  return out;
}

}  // namespace linepack
