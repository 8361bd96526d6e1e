#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "folmi/matrix.hpp"

namespace folmi {

/// Elementwise matrix family [lower, upper]. Construct via make_interval so
/// the ordering invariant is enforced (or repaired when canonicalize is set).
struct IntervalMatrix {
  Matrix lower;
  Matrix upper;

  Index rows() const { return lower.rows(); }
  Index cols() const { return lower.cols(); }
};

/// Throws std::invalid_argument on misordered bounds unless canonicalize is
/// true, in which case each entry is reordered by min/max.
IntervalMatrix make_interval(const Matrix& lower, const Matrix& upper,
                             bool canonicalize = false);

struct MidpointRadius {
  Matrix mid;
  Matrix rad;
};

/// left * diag(delta) * right with |delta| <= 1 spans exactly the deviations
/// bounded elementwise by rad. Zero radii keep their zero columns/rows.
struct UncertaintyFactors {
  Matrix left;   // r x (r*p) for an r x p radius
  Matrix right;  // (r*p) x p
};

struct UncertainPlant {
  IntervalMatrix a;  // n x n
  IntervalMatrix b;  // n x l
  IntervalMatrix c;  // m x n
  double alpha = 1.0;

  Index n() const { return a.rows(); }
  Index l() const { return b.cols(); }
  Index m() const { return c.rows(); }
};

/// Validates dimensions and 1 <= alpha < 2.
UncertainPlant make_plant(IntervalMatrix a, IntervalMatrix b, IntervalMatrix c,
                          double alpha);

MidpointRadius midpoint_radius(const IntervalMatrix& im);

/// Unit-vector factor pattern, delta slots ordered row-major over the radius
/// entries: column (i,j) of left is sqrt(rad(i,j)) * e_i, row (i,j) of right
/// is sqrt(rad(i,j)) * e_j'.
UncertaintyFactors structure_factors(const MidpointRadius& mr);

/// mid + left * diag(delta) * right; delta row-major, entries in [-1, 1].
Matrix sample_member(const IntervalMatrix& im, std::span<const double> delta);

/// All 2^k sign combinations over the k nonzero-radius entries; zero-radius
/// entries stay at the midpoint. Throws if 2^k would exceed max_count.
std::vector<Matrix> vertices(const IntervalMatrix& im, std::size_t max_count);

}  // namespace folmi
