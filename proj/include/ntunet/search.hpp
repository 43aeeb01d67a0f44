#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ntunet/core.hpp"

namespace ntunet {

// ---------------------------------------------------------------------------
// Minimization over the unit sphere by a nested-rectangle adaptive grid in
// angle space: evaluate a per-dimension grid on the current box, retain the
// near-minimal cells plus a neighbor margin, shrink the box to their bounding
// rectangle, refine, repeat.
// ---------------------------------------------------------------------------

struct AngleBox {
  Vector lower, upper;  // length d-1, within the global angle domain

  double max_width() const { return (upper - lower).maxCoeff(); }
};

/// Full angle domain for directions in R^d.
AngleBox global_angle_domain(int d);

struct SearchConfig {
  int grid_points = 9;       // grid points per dimension (G >= 3)
  double slack = 0.05;       // relative retention slack on [min, max]
  double slack_floor = 1e-9; // absolute retention floor
  int margin = 1;            // cells kept around retained cells
  int max_rounds = 8;        // R >= 1
  double tol = 1e-3;         // terminal box width (radians)

  void validate() const;
};

struct EstimateResult {
  std::vector<Vector> theta_set;        // retained final-resolution angle grid points
  Vector beta_lower, beta_upper, beta_mid;
  double min_value = 0.0;
  long evaluations = 0;
  int rounds = 0;
  std::map<std::string, std::string> manifest;
};

/// Minimizes `objective` over S^{d-1}.  Throws std::runtime_error when the
/// objective returns a non-finite value.  Grid evaluations within a round run
/// in parallel; the result is deterministic.
EstimateResult minimize(const std::function<double(const Vector&)>& objective, int d,
                        const SearchConfig& cfg, unsigned threads = 1);

/// Coordinate-wise min/max/midpoint of the directions of the retained points.
struct BetaBox {
  Vector lower, upper, mid;
};
BetaBox extract_box(const EstimateResult& result);

}  // namespace ntunet
