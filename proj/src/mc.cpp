#include "ntunet/mc.hpp"

#include "ntunet/common.hpp"

namespace ntunet {

namespace {
constexpr std::uint64_t kPlanStream = 0x7E7A;
}

ReplicationResult run_replication(const McConfig& cfg, int b) {
  DgpConfig dgp = cfg.dgp;
  dgp.seed = cfg.base_seed ^ static_cast<std::uint64_t>(b);

  const Population pop = draw_population(dgp);
  const NetworkData net = form_network(pop, dgp);
  const SplineBasis basis = build_basis(net.covariates);
  const std::vector<RhoEstimate> fits = fit_all_rho(net, basis, 1);
  const Matrix rho_at = rho_hat_matrix(fits, net.covariates, 1);

  const long long max_pairs = static_cast<long long>(dgp.n) * (dgp.n - 1);
  const int m = static_cast<int>(std::min<long long>(cfg.m_pairs, max_pairs));
  const TetradPlan plan = make_tetrad_plan(dgp.n, m, substream_key(dgp.seed, kPlanStream));

  const CriterionEvaluator eval(pairwise_index_tensor(net.covariates, dgp.w), rho_at, plan,
                                cfg.smoothing, dgp.w.symmetric());
  const EstimateResult est = minimize([&](const Vector& beta) { return eval.value(beta); },
                                      dgp.d, cfg.search, 1);

  ReplicationResult out;
  out.b = b;
  out.beta_lower = est.beta_lower;
  out.beta_upper = est.beta_upper;
  out.beta_mid = est.beta_mid;
  out.min_value = est.min_value;
  out.evaluations = est.evaluations;
  return out;
}

std::vector<ReplicationResult> run_monte_carlo(const McConfig& cfg, unsigned threads) {
  if (cfg.replications < 1) throw std::invalid_argument("run_monte_carlo: need replications >= 1");
  std::vector<ReplicationResult> results(static_cast<std::size_t>(cfg.replications));
  parallel_for(results.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b)
      results[b] = run_replication(cfg, static_cast<int>(b));
  });
  return results;
}

McReport compute_metrics(const std::vector<ReplicationResult>& raw, const Direction& beta0) {
  if (raw.empty()) throw std::invalid_argument("compute_metrics: empty results");
  const Index d = beta0.dim();
  const double B = static_cast<double>(raw.size());

  McReport report;
  report.replications = static_cast<int>(raw.size());
  report.bias = Vector::Zero(d);
  report.upper_bias = Vector::Zero(d);
  report.lower_bias = Vector::Zero(d);
  report.mean_width = Vector::Zero(d);

  NeumaierSum sq_norm, norm;
  for (const auto& r : raw) {
    if (r.beta_mid.size() != d)
      throw std::invalid_argument("compute_metrics: dimension mismatch in raw results");
    report.bias += r.beta_mid - beta0.beta;
    report.upper_bias += r.beta_upper - beta0.beta;
    report.lower_bias += r.beta_lower - beta0.beta;
    report.mean_width += r.beta_upper - r.beta_lower;
    const double dev = (r.beta_mid - beta0.beta).norm();
    sq_norm.add(dev * dev);
    norm.add(dev);
  }
  report.bias /= B;
  report.upper_bias /= B;
  report.lower_bias /= B;
  report.mean_width /= B;
  report.rmse = std::sqrt(sq_norm.value() / B);
  report.mnd = norm.value() / B;
  report.mmad = report.bias.cwiseAbs().maxCoeff();
  return report;
}

}  // namespace ntunet
