#include "linepack/frame.hpp"

namespace linepack {

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  const double n = coords_.norm();
  if (coords_.size() == 0 || !(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("UnitVector: cannot normalize a zero or non-finite vector");
  }
  coords_ /= n;
}

UnitVector UnitVector::assume_unit(Eigen::VectorXd coords) {
  return UnitVector(std::move(coords), Trusted{});
}

Frame::Frame(Eigen::MatrixXd columns) : x_(std::move(columns)) {
  if (x_.rows() == 0 || x_.cols() == 0) {
    throw std::invalid_argument("Frame: empty configuration");
  }
  for (Eigen::Index i = 0; i < x_.cols(); ++i) {
    const double n = x_.col(i).norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw std::invalid_argument("Frame: column " + std::to_string(i) +
                                  " is zero or non-finite");
    }
    if (n != 1.0) x_.col(i) /= n;
  }
}

Frame Frame::from_vectors(const std::vector<UnitVector>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("Frame: no vectors");
  const int d = vectors.front().dim();
  Eigen::MatrixXd m(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dim() != d) throw DimensionError("Frame: mixed vector dimensions");
    m.col(static_cast<Eigen::Index>(i)) = vectors[i].coords();
  }
  return Frame(std::move(m));
}

UnitVector Frame::vector(int i) const { return UnitVector::assume_unit(x_.col(i)); }

}  // namespace linepack
