#pragma once

#include <vector>

#include "ntunet/core.hpp"

namespace ntunet {

// ---------------------------------------------------------------------------
// First-stage popularity regression: quadratic spline with one knot at the
// per-coordinate sample median, additive across coordinates.
// Basis: {1} u {x_h, x_h^2, [x_h - m_h]_+^2 : h = 1..d_x}, size 1 + 3 d_x.
// ---------------------------------------------------------------------------

struct SplineBasis {
  Vector knots;  // per-coordinate lower medians

  int dim() const { return static_cast<int>(knots.size()); }
  int size() const { return 1 + 3 * dim(); }

  void evaluate_into(const Vector& x, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) const;
  Vector evaluate(const Vector& x) const;
};

/// Knots are exact sample medians (lower-median convention for even n).
/// Requires n >= 2 * (1 + 3 d_x).
SplineBasis build_basis(const Matrix& covariates);

struct RhoEstimate {
  int node = -1;
  Vector coef;
  SplineBasis basis;
  double rss = 0.0;        // residual sum of squares
  int rank = 0;            // numerical rank of the design
  bool rank_deficient = false;
};

/// Minimum-norm least squares of y on the basis design built from X rows.
/// Rank is reported through `rank` when non-null.
Vector solve_least_squares(const Matrix& design, const Vector& y, int* rank = nullptr);

/// Regresses D_ik on basis(X_k) over k != i.  Rank deficiency (routine under
/// discrete supports) yields the minimum-norm solution and sets the flag.
RhoEstimate fit_rho(int node, const NetworkData& net, const SplineBasis& basis);

std::vector<RhoEstimate> fit_all_rho(const NetworkData& net, const SplineBasis& basis,
                                     unsigned threads = 0);

double predict_rho_raw(const RhoEstimate& est, const Vector& x);

/// basis(x) . coef clamped to [0,1]; rho is a probability.
double predict_rho(const RhoEstimate& est, const Vector& x);

/// rho_at(i, k) = predict_rho(est_i, X_k) for all nodes i and k.
Matrix rho_hat_matrix(const std::vector<RhoEstimate>& fits, const Matrix& covariates,
                      unsigned threads = 0);

}  // namespace ntunet
