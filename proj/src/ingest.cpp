#include "linepack/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "linepack/metrics.hpp"

namespace linepack {

Frame parse_packing(std::istream& in, int d, int n, const std::string& source,
                    std::vector<std::string>* warnings) {
  if (d < 1 || n < 1) throw std::invalid_argument("parse_packing: need d, N >= 1");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(d) * n);

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::size_t pos = first;
    while (pos < line.size()) {
      pos = line.find_first_not_of(" \t\r,", pos);
      if (pos == std::string::npos) break;
      std::size_t end = line.find_first_of(" \t\r,", pos);
      if (end == std::string::npos) end = line.size();
      const char* b = line.data() + pos;
      const char* e = line.data() + end;
      if (*b == '+') ++b;
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || ptr != e || !std::isfinite(v)) {
        std::ostringstream os;
        os << source << ":" << lineno << ":" << pos + 1 << ": not a number: '"
           << line.substr(pos, end - pos) << "'";
        throw PackingFormatError(os.str());
      }
      values.push_back(v);
      pos = end;
    }
  }

  const std::size_t expected = static_cast<std::size_t>(d) * n;
  if (values.size() != expected) {
    std::ostringstream os;
    os << source << ": expected " << expected << " values (N=" << n << ", d=" << d
       << "), found " << values.size();
    throw PackingFormatError(os.str());
  }

  Eigen::MatrixXd m = Eigen::Map<Eigen::MatrixXd>(values.data(), d, n);
  for (int i = 0; i < n; ++i) {
    const double dev = std::abs(m.col(i).norm() - 1.0);
    if (dev > kMaxNormDeviation || !std::isfinite(dev)) {
      std::ostringstream os;
      os << source << ": vector " << i << " has norm " << m.col(i).norm()
         << ", too far from 1 to renormalize";
      throw PackingFormatError(os.str());
    }
    if (dev > kSilentNormTol && warnings != nullptr) {
      std::ostringstream os;
      os << source << ": vector " << i << " renormalized (norm deviation " << dev << ")";
      warnings->push_back(os.str());
    }
  }
  return Frame(std::move(m));
}

Frame load_packing(const std::string& path, int d, int n, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw PackingFormatError("cannot open " + path);
  return parse_packing(in, d, n, path, warnings);
}

void write_packing(std::ostream& out, const Frame& x, const std::string& comment) {
  std::istringstream lines(comment);
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << "\n";
  out << "# d=" << x.dim() << " N=" << x.size() << "\n";
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  for (int i = 0; i < x.size(); ++i) {
    for (int a = 0; a < x.dim(); ++a) {
      if (a > 0) out << ' ';
      out << x.matrix()(a, i);
    }
    out << "\n";
  }
  out.flags(flags);
  out.precision(prec);
}

void save_packing(const std::string& path, const Frame& x, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw PackingFormatError("cannot write " + path);
  write_packing(out, x, comment);
  if (!out) throw PackingFormatError("write failed: " + path);
}

ComparisonRecord compare_to_reference(const Frame& a, const Frame& b, double tol) {
  if (a.dim() != b.dim() || a.size() != b.size()) {
    throw DimensionError("compare_to_reference: shape mismatch");
  }
  ComparisonRecord r;
  r.coherence_a = coherence(a);
  r.coherence_b = coherence(b);
  r.coherence_diff = r.coherence_a - r.coherence_b;
  r.residual_a = tightness_residual(a);
  r.residual_b = tightness_residual(b);
  r.residual_diff = r.residual_a - r.residual_b;
  r.equivalent = projectively_equivalent(a, b, tol);
  return r;
}

}  // namespace linepack
