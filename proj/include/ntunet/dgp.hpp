#pragma once

#include <cstdint>

#include "ntunet/core.hpp"

namespace ntunet {

// Marginal support of the covariate coordinates.  Grids are equal-probability
// point sets on [-0.5, 0.5]; the continuous case is Uniform[-0.5, 0.5].
enum class SupportKind {
  AllContinuous,     // every coordinate Uniform[-0.5, 0.5]
  Binary1,           // coordinate 1 on {0,1}, rest continuous
  Binary1Discrete2,  // coordinate 1 on {0,1}, coordinate 2 on the 11-point grid, rest continuous
  AllDiscrete101,    // every coordinate on the 101-point grid {-0.5,-0.49,...,0.5}
  AllDiscrete11,     // every coordinate on the 11-point grid {-0.5,-0.4,...,0.5}
};

/// A_i = c1 * X_{i,1} + c2 * xi_i with xi_i ~ Uniform[-0.5, 0.5].
struct Heterogeneity {
  double c1 = 0.25;
  double c2 = 0.25;
  static Heterogeneity from_corr_weight(double corr) { return {corr, 1.0 - corr}; }
};

/// Full specification of a synthetic world.  The linking index is
/// index_scale * beta0 (beta0 stays unit norm; the scale keeps the network
/// numerically non-degenerate).
struct DgpConfig {
  int n = 100;
  int d = 3;  // covariate and index dimension
  Direction beta0;
  double index_scale = 1.0;
  SupportKind support = SupportKind::AllContinuous;
  Heterogeneity het;
  PairwiseTransform w = PairwiseTransform::symmetric_abs_diff(3);
  std::uint64_t seed = 0;

  Vector scaled_index() const { return index_scale * beta0.beta; }
  void validate() const;
};

struct Population {
  Matrix covariates;  // n x d
  Vector a;           // heterogeneity A_i
  std::uint64_t seed = 0;
};

enum class ShockScheme {
  IndependentPerSide,  // eps_ij, eps_ji independent Uniform[0,1]
  SharedPerPair,       // eps_ij == eps_ji (collapses the two thresholds to one when A_i == A_j)
};

Population draw_population(const DgpConfig& cfg);

NetworkData form_network(const Population& pop, const DgpConfig& cfg,
                         ShockScheme scheme = ShockScheme::IndependentPerSide);

/// Link indicator for one ordered shock draw.
inline bool link_indicator(double delta_ij, double delta_ji, double a_i, double a_j,
                           double eps_ij, double eps_ji) {
  return (delta_ij + a_i > eps_ij) && (delta_ji + a_j > eps_ji);
}

/// Closed form of the conditional linking probability under Uniform[0,1]
/// shocks: clamp(delta_ij + a_i) * clamp(delta_ji + a_j).
double link_probability_exact(double delta_ij, double delta_ji, double a_i, double a_j);

/// E[clamp01(m + s * xi)] with xi ~ Uniform[-0.5, 0.5], in closed form.
double expected_clamp01_uniform(double m, double s);

/// Exact popularity of a node with (x_i, a_i) among nodes of type x:
/// the xi-expectation over the partner's heterogeneity is closed-form.
double rho_exact(const Vector& x_i, double a_i, const Vector& x, const DgpConfig& cfg);

/// rho_at(i, k) = rho_i(X_k) for every node pair, using rho_exact.
Matrix rho_exact_matrix(const Population& pop, const DgpConfig& cfg);

}  // namespace ntunet
