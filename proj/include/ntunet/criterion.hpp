#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ntunet/core.hpp"
#include "ntunet/sieve.hpp"

namespace ntunet {

// ---------------------------------------------------------------------------
// Logical-differencing objective: one-sided sign-preserving weights gamma,
// popularity-switch weights tau, halfspace indicator lambda, and the tetrad
// criterion averaged over sampled (i,j) pairs and all admissible (k,l).
// ---------------------------------------------------------------------------

enum class SmoothingKind { Indicator, PositivePart, ScaledNormalCdf };

/// gamma(t) = 0 for t <= 0 and >= 0 for t > 0.  ScaledNormalCdf is
/// 2 * Phi(max(t,0)) - 1 with Phi the standard normal CDF.
double gamma_fn(SmoothingKind kind, double t);

/// gamma(rho_i(x_k) - rho_j(x_k)) * gamma(rho_j(x_l) - rho_i(x_l));
/// strictly positive iff i is strictly more popular at x_k and strictly less
/// popular at x_l.
double tau_weight(SmoothingKind kind, double rho_i_at_xk, double rho_j_at_xk,
                  double rho_i_at_xl, double rho_j_at_xl);

/// 1{(w(x_i,x_k)-w(x_j,x_k))'beta <= 0} * 1{(w(x_i,x_l)-w(x_j,x_l))'beta >= 0};
/// weak inequalities, evaluated exactly on the computed dot products.
int lambda_sym(const Vector& x_k, const Vector& x_l, const Vector& x_i, const Vector& x_j,
               const PairwiseTransform& w, const Direction& beta);

/// Four-way conjunction for asymmetric w: both index comparisons at x_k hold
/// with <= and both at x_l with >=.
int lambda_asym(const Vector& x_k, const Vector& x_l, const Vector& x_i, const Vector& x_j,
                const PairwiseTransform& w, const Direction& beta);

/// M ordered (i,j) pairs, i != j; each evaluated against all ordered (k,l)
/// with k,l not in {i,j} and k != l.
struct TetradPlan {
  std::vector<std::pair<int, int>> pairs;
  std::uint64_t seed = 0;
};

/// Samples m ordered pairs uniformly without replacement.
TetradPlan make_tetrad_plan(int n, int m, std::uint64_t seed);

/// T[i].row(m) = w(x_i, x_m); rows on the diagonal are zero (never referenced).
std::vector<Matrix> pairwise_index_tensor(const Matrix& covariates, const PairwiseTransform& w);

// ---------------------------------------------------------------------------
// Criterion evaluator.
//
// For a fixed (i,j) pair the tau factor splits into a function of x_k times a
// function of x_l, and so does lambda, so the (k,l) double sum over n^2 terms
// collapses to a product of two n-term sums minus the k == l diagonal.
// Per-pair contributions are accumulated in plan order with compensated
// summation, so results are bit-identical for any thread count.
// ---------------------------------------------------------------------------

class CriterionEvaluator {
 public:
  /// rho_at(i, k) must hold the popularity of node i evaluated at X_k.
  /// symmetric_lambda selects the two- vs four-inequality indicator.
  CriterionEvaluator(std::vector<Matrix> w_tensor, Matrix rho_at, TetradPlan plan,
                     SmoothingKind kind, bool symmetric_lambda);

  /// Mean of tau * lambda over the plan; deterministic.
  double value(const Vector& beta_unit, unsigned threads = 1) const;
  double value(const Direction& beta, unsigned threads = 1) const {
    return value(beta.beta, threads);
  }

  Index n() const { return rho_at_.rows(); }
  int d() const { return static_cast<int>(w_tensor_.empty() ? 0 : w_tensor_.front().cols()); }
  const TetradPlan& plan() const { return plan_; }

 private:
  double pair_term(std::size_t p, const Vector& beta, Vector& g1, Vector& g2) const;

  std::vector<Matrix> w_tensor_;
  Matrix rho_at_;
  TetradPlan plan_;
  SmoothingKind kind_;
  bool symmetric_lambda_;
  std::vector<Vector> u_, v_;        // tau factors per pair, zeroed at {i,j}
  std::vector<Matrix> delta_;        // cached w_tensor[i] - w_tensor[j] per pair
  bool cache_delta_ = false;
};

/// One-call wrapper matching the estimation pipeline: popularity from the
/// fitted first stage, index tensor from the transform.
double sample_criterion(const Direction& beta, const std::vector<RhoEstimate>& rho_hats,
                        const NetworkData& net, const TetradPlan& plan,
                        const PairwiseTransform& w, SmoothingKind kind);

}  // namespace ntunet
