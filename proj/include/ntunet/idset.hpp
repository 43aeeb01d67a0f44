#pragma once

#include "ntunet/criterion.hpp"
#include "ntunet/dgp.hpp"
#include "ntunet/search.hpp"

namespace ntunet {

// ---------------------------------------------------------------------------
// Identified set from the population criterion (exact popularity, indicator
// weights) on a full-domain angle grid, for d = 3.
// ---------------------------------------------------------------------------

/// Evaluator wired to the exact popularity function; indicator weights.
CriterionEvaluator make_population_evaluator(const DgpConfig& cfg, const Population& pop,
                                             const TetradPlan& plan);

/// Population criterion at one direction (convenience; builds the evaluator).
double population_criterion(const Direction& beta, const DgpConfig& cfg, const Population& pop,
                            const TetradPlan& plan);

struct IdSetGrid {
  SupportKind condition;
  double resolution_deg = 1.0;
  Vector theta1, theta2;     // grid axes (radians)
  Matrix value;              // criterion values, theta1 x theta2
  Eigen::MatrixXi member;    // 1 when value <= min + tol
  double min_value = 0.0;
  double max_value = 0.0;
  double tol = 0.0;

  long member_count() const { return member.cast<long>().sum(); }
  /// Spherical surface area of the membership region.
  double area() const;
  /// Largest great-circle angle (degrees) between member directions.
  double angular_diameter_deg() const;
  /// Angle-space bounding rectangle of the membership region.
  AngleBox bounding_rect() const;
  bool contains(const Direction& beta) const;  // membership of the nearest grid point
};

/// Evaluates the population criterion over the full angle domain at the given
/// resolution (degrees per step).  n and m override the population size and
/// pair count of cfg.  Requires d == 3.
IdSetGrid compute_idset(const DgpConfig& cfg, int n, int m, double resolution_deg,
                        unsigned threads = 0);

}  // namespace ntunet
