#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace linepack {

/// Thrown when two arguments disagree in dimension or shape.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a gradient is requested at a configuration containing two
/// (numerically) coincident lines, where the kernel is singular.
class DegeneratePairError : public std::domain_error {
 public:
  DegeneratePairError(int i, int j)
      : std::domain_error("degenerate pair: vectors " + std::to_string(i) +
                          " and " + std::to_string(j) +
                          " span coincident lines"),
        first(i),
        second(j) {}
  int first;
  int second;
};

/// A point on S^(d-1). Construction normalizes the coordinates.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXd coords);

  /// Wraps coordinates that the caller guarantees are already unit norm.
  static UnitVector assume_unit(Eigen::VectorXd coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Eigen::VectorXd& coords() const { return coords_; }
  double operator[](int i) const { return coords_[i]; }

 private:
  struct Trusted {};
  UnitVector(Eigen::VectorXd coords, Trusted) : coords_(std::move(coords)) {}

  Eigen::VectorXd coords_;
};

/// An ordered list of N unit vectors in R^d, stored as the d x N matrix X
/// whose columns are the frame vectors.
///
/// Every column is unit norm to within 1e-12; the constructors normalize.
class Frame {
 public:
  /// Normalizes each column. Throws std::invalid_argument on a zero column or
  /// an empty matrix.
  explicit Frame(Eigen::MatrixXd columns);

  static Frame from_vectors(const std::vector<UnitVector>& vectors);

  int dim() const { return static_cast<int>(x_.rows()); }
  int size() const { return static_cast<int>(x_.cols()); }

  const Eigen::MatrixXd& matrix() const { return x_; }
  UnitVector vector(int i) const;
  auto column(int i) const { return x_.col(i); }

  /// Frame operator X X^T (d x d).
  Eigen::MatrixXd frame_operator() const { return x_ * x_.transpose(); }

  bool operator==(const Frame& other) const { return x_ == other.x_; }

 private:
  Eigen::MatrixXd x_;
};

}  // namespace linepack
