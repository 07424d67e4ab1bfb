#pragma once

// Plain-text line-packing files: whitespace separated decimal numbers,
// vector-major (all d coordinates of vector 1, then vector 2, ...). Blank
// lines and lines whose first non-blank character is '#' are ignored.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "linepack/frame.hpp"

namespace linepack {

class PackingFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Columns whose norm is off by at most this are renormalized silently.
inline constexpr double kSilentNormTol = 1e-6;
/// Columns off by more than this are rejected.
inline constexpr double kMaxNormDeviation = 1e-3;

/// Reads an N-vector configuration in R^d. Columns are renormalized; a
/// deviation in (1e-6, 1e-3] appends a message to `warnings` (if given).
/// Throws PackingFormatError on a missing file, a non-numeric token (with
/// line and column), a wrong value count, or a larger norm deviation.
Frame load_packing(const std::string& path, int d, int n,
                   std::vector<std::string>* warnings = nullptr);

/// Parses the same format from a stream; `source` names it in errors.
Frame parse_packing(std::istream& in, int d, int n, const std::string& source,
                    std::vector<std::string>* warnings = nullptr);

/// Writes one vector per line at 17 significant digits, preceded by '#'
/// comment lines for `comment` (may be empty) and the shape.
void write_packing(std::ostream& out, const Frame& x, const std::string& comment = {});

void save_packing(const std::string& path, const Frame& x, const std::string& comment = {});

struct ComparisonRecord {
  double coherence_a = 0.0;
  double coherence_b = 0.0;
  double coherence_diff = 0.0;  ///< coherence_a - coherence_b
  double residual_a = 0.0;
  double residual_b = 0.0;
  double residual_diff = 0.0;   ///< residual_a - residual_b
  bool equivalent = false;      ///< projectively_equivalent(a, b, tol)
};

/// Compares a computed configuration against a reference one of the same
/// shape. Throws DimensionError on a mismatch.
ComparisonRecord compare_to_reference(const Frame& a, const Frame& b, double tol = 1e-6);

}  // namespace linepack
