#include "folmi/interval.hpp"

#include <cmath>
#include <sstream>

namespace folmi {

IntervalMatrix make_interval(const Matrix& lower, const Matrix& upper, bool canonicalize) {
  detail::require(lower.rows() == upper.rows() && lower.cols() == upper.cols(),
                  "make_interval: bound dimensions differ");
  detail::require(lower.rows() >= 1 && lower.cols() >= 1, "make_interval: empty matrix");
  if (canonicalize)
    return {lower.cwiseMin(upper), lower.cwiseMax(upper)};
  for (Index i = 0; i < lower.rows(); ++i)
    for (Index j = 0; j < lower.cols(); ++j)
      if (lower(i, j) > upper(i, j)) {
        std::ostringstream os;
        os << "make_interval: lower(" << i << "," << j << ") = " << lower(i, j)
           << " exceeds upper = " << upper(i, j)
           << " (pass canonicalize to reorder)";
        throw std::invalid_argument(os.str());
      }
  return {lower, upper};
}

UncertainPlant make_plant(IntervalMatrix a, IntervalMatrix b, IntervalMatrix c, double alpha) {
  detail::require(a.rows() == a.cols(), "make_plant: A must be square");
  detail::require(b.rows() == a.rows(), "make_plant: B row count must match A");
  detail::require(c.cols() == a.rows(), "make_plant: C column count must match A");
  detail::require(alpha >= 1.0 && alpha < 2.0, "make_plant: alpha must lie in [1, 2)");
  return {std::move(a), std::move(b), std::move(c), alpha};
}

MidpointRadius midpoint_radius(const IntervalMatrix& im) {
  return {0.5 * (im.lower + im.upper), 0.5 * (im.upper - im.lower)};
}

UncertaintyFactors structure_factors(const MidpointRadius& mr) {
  const Index r = mr.rad.rows(), p = mr.rad.cols();
  detail::require(mr.rad.minCoeff() >= 0, "structure_factors: radius must be nonnegative");
  Matrix left = Matrix::Zero(r, r * p);
  Matrix right = Matrix::Zero(r * p, p);
  Index k = 0;
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < p; ++j, ++k) {
      const double s = std::sqrt(mr.rad(i, j));
      left(i, k) = s;
      right(k, j) = s;
    }
  return {std::move(left), std::move(right)};
}

Matrix sample_member(const IntervalMatrix& im, std::span<const double> delta) {
  const Index r = im.rows(), p = im.cols();
  detail::require(static_cast<Index>(delta.size()) == r * p,
                  "sample_member: delta length must equal entry count");
  for (double d : delta)
    detail::require(std::abs(d) <= 1.0 + 1e-15, "sample_member: delta entry outside [-1, 1]");
  const MidpointRadius mr = midpoint_radius(im);
  const UncertaintyFactors uf = structure_factors(mr);
  Matrix f = Matrix::Zero(r * p, r * p);
  for (Index k = 0; k < r * p; ++k) f(k, k) = delta[k];
  return mr.mid + uf.left * f * uf.right;
}

std::vector<Matrix> vertices(const IntervalMatrix& im, std::size_t max_count) {
  const MidpointRadius mr = midpoint_radius(im);
  std::vector<std::pair<Index, Index>> active;
  for (Index i = 0; i < im.rows(); ++i)
    for (Index j = 0; j < im.cols(); ++j)
      if (mr.rad(i, j) > 0) active.emplace_back(i, j);
  if (active.size() >= 63 || (std::size_t{1} << active.size()) > max_count)
    throw std::invalid_argument("vertices: vertex count would exceed max_count");
  std::vector<Matrix> out;
  out.reserve(std::size_t{1} << active.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << active.size()); ++mask) {
    Matrix v = mr.mid;
    for (std::size_t b = 0; b < active.size(); ++b) {
      auto [i, j] = active[b];
      v(i, j) = (mask >> b) & 1 ? im.upper(i, j) : im.lower(i, j);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace folmi
