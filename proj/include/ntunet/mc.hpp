#pragma once

#include "ntunet/criterion.hpp"
#include "ntunet/dgp.hpp"
#include "ntunet/search.hpp"

namespace ntunet {

// ---------------------------------------------------------------------------
// Replication driver for the two-step estimator and the summary metrics.
// Replication b runs on seed base_seed XOR b, so replications are independent
// streams and can run in parallel.
// ---------------------------------------------------------------------------

struct McConfig {
  int replications = 100;
  DgpConfig dgp;
  int m_pairs = 1000;
  SmoothingKind smoothing = SmoothingKind::ScaledNormalCdf;
  SearchConfig search;
  std::uint64_t base_seed = 0;
};

struct ReplicationResult {
  int b = 0;
  Vector beta_lower, beta_upper, beta_mid;
  double min_value = 0.0;
  long evaluations = 0;
};

/// draw population -> form network -> fit popularity -> minimize the sample
/// criterion -> extract the box.  Deterministic given (cfg, b).
ReplicationResult run_replication(const McConfig& cfg, int b);

std::vector<ReplicationResult> run_monte_carlo(const McConfig& cfg, unsigned threads = 0);

struct McReport {
  int replications = 0;
  Vector bias;        // mean(beta_mid - beta0) per coordinate
  Vector upper_bias;  // mean(beta_upper - beta0)
  Vector lower_bias;  // mean(beta_lower - beta0)
  Vector mean_width;  // mean(beta_upper - beta_lower)
  double rmse = 0.0;  // sqrt(mean ||beta_mid - beta0||^2)
  double mnd = 0.0;   // mean ||beta_mid - beta0||
  double mmad = 0.0;  // max_h |bias_h|
};

McReport compute_metrics(const std::vector<ReplicationResult>& raw, const Direction& beta0);

}  // namespace ntunet
