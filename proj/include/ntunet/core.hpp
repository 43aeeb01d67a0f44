#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ntunet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// ---------------------------------------------------------------------------
// Directions on the unit sphere and their angle parameterization.
//
// A direction in R^d is encoded by d-1 angles: the first d-2 lie in
// [-pi/2, pi/2], the last in [-pi, pi].  The map peels coordinates from the
// last one down:
//   beta[d-1] = sin t0
//   beta[d-2] = cos t0 sin t1
//   ...
//   beta[1]   = cos t0 ... cos t_{d-3} sin t_{d-2}
//   beta[0]   = cos t0 ... cos t_{d-3} cos t_{d-2}
// When |beta[d-1]| = 1 (a pole) the remaining angles are defined as 0.
// ---------------------------------------------------------------------------

template <typename Derived>
Vector direction_from_angles(const Eigen::MatrixBase<Derived>& theta) {
  const Index d = theta.size() + 1;
  Vector beta(d);
  double prod = 1.0;
  for (Index k = 0; k + 2 < d; ++k) {
    beta[d - 1 - k] = prod * std::sin(theta[k]);
    prod *= std::cos(theta[k]);
  }
  beta[1] = prod * std::sin(theta[d - 2]);
  beta[0] = prod * std::cos(theta[d - 2]);
  return beta;
}

template <typename Derived>
Vector angles_from_direction(const Eigen::MatrixBase<Derived>& beta) {
  const Index d = beta.size();
  Vector theta = Vector::Zero(d - 1);
  double prod = 1.0;
  for (Index k = 0; k + 2 < d; ++k) {
    if (prod < 1e-15) return theta;  // pole: free angles stay 0
    const double s = std::clamp(beta[d - 1 - k] / prod, -1.0, 1.0);
    theta[k] = std::asin(s);
    prod = std::sqrt(std::max(0.0, prod * prod - beta[d - 1 - k] * beta[d - 1 - k]));
  }
  if (prod >= 1e-15) theta[d - 2] = std::atan2(beta[1], beta[0]);
  return theta;
}

/// Unit-norm vector in R^d (norm checked to 1e-12 at construction).
struct Direction {
  Vector beta;

  Direction() = default;
  explicit Direction(Vector b) : beta(std::move(b)) {
    if (beta.size() < 2) throw std::invalid_argument("Direction: dimension must be >= 2");
    if (std::abs(beta.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("Direction: vector is not unit norm");
  }
  /// Rescales an arbitrary nonzero vector onto the sphere.
  static Direction normalized(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n))
      throw std::invalid_argument("Direction: cannot normalize zero or non-finite vector");
    return Direction(Vector(v / n));
  }
  Index dim() const { return beta.size(); }
};

/// Angle coordinates of a direction; first d-2 entries in [-pi/2, pi/2],
/// last entry in [-pi, pi].
struct AngleVector {
  Vector theta;

  AngleVector() = default;
  explicit AngleVector(Vector t) : theta(std::move(t)) {
    if (theta.size() < 1) throw std::invalid_argument("AngleVector: needs at least one angle");
    const double eps = 1e-12;
    for (Index k = 0; k < theta.size(); ++k) {
      const double bound = (k + 1 < theta.size()) ? M_PI / 2 : M_PI;
      if (theta[k] < -bound - eps || theta[k] > bound + eps)
        throw std::invalid_argument("AngleVector: angle out of bounds");
    }
  }
  Index dim() const { return theta.size() + 1; }
};

inline Direction angles_to_direction(const AngleVector& a) {
  Vector b = direction_from_angles(a.theta);
  b /= b.norm();  // guard against rounding drift before the norm check
  return Direction(std::move(b));
}

inline AngleVector direction_to_angles(const Direction& d) {
  return AngleVector(angles_from_direction(d.beta));
}

// ---------------------------------------------------------------------------
// Pairwise transforms w : (x_i, x_j) -> W_ij in R^d.
// ---------------------------------------------------------------------------

struct PairwiseTransform {
  enum class Kind { SymmetricAbsDiff, AsymmetricLastCoord, Custom };

  Kind kind = Kind::SymmetricAbsDiff;
  int dim = 0;          // output index dimension d
  std::string key;      // registry key when kind == Custom

  static PairwiseTransform symmetric_abs_diff(int d) {
    return {Kind::SymmetricAbsDiff, d, {}};
  }
  static PairwiseTransform asymmetric_last_coord(int d) {
    return {Kind::AsymmetricLastCoord, d, {}};
  }
  /// Looks up a registered named transform; throws if unknown.
  static PairwiseTransform custom(const std::string& key);

  bool symmetric() const;
};

/// Registers a named pure pairwise function so configs stay serializable.
void register_pairwise(const std::string& key, int dim, bool symmetric,
                       std::function<Vector(const Vector&, const Vector&)> fn);

Vector pairwise_index(const PairwiseTransform& w, const Vector& x_i, const Vector& x_j);

// ---------------------------------------------------------------------------
// Observed network.
// ---------------------------------------------------------------------------

struct NetworkData {
  Eigen::MatrixXi adjacency;  // n x n, symmetric, zero diagonal, entries in {0,1}
  Matrix covariates;          // n x d_x, no missing entries

  Index n() const { return adjacency.rows(); }
  double density() const;
  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

}  // namespace ntunet
