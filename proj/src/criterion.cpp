#include "ntunet/criterion.hpp"

#include <unordered_set>

#include "ntunet/common.hpp"

namespace ntunet {

double gamma_fn(SmoothingKind kind, double t) {
  if (t <= 0.0) return 0.0;
  switch (kind) {
    case SmoothingKind::Indicator: return 1.0;
    case SmoothingKind::PositivePart: return t;
    case SmoothingKind::ScaledNormalCdf: return std::erf(t * M_SQRT1_2);  // 2*Phi(t) - 1
  }
  return 0.0;
}

double tau_weight(SmoothingKind kind, double rho_i_at_xk, double rho_j_at_xk,
                  double rho_i_at_xl, double rho_j_at_xl) {
  return gamma_fn(kind, rho_i_at_xk - rho_j_at_xk) * gamma_fn(kind, rho_j_at_xl - rho_i_at_xl);
}

int lambda_sym(const Vector& x_k, const Vector& x_l, const Vector& x_i, const Vector& x_j,
               const PairwiseTransform& w, const Direction& beta) {
  const double at_k = (pairwise_index(w, x_i, x_k) - pairwise_index(w, x_j, x_k)).dot(beta.beta);
  const double at_l = (pairwise_index(w, x_i, x_l) - pairwise_index(w, x_j, x_l)).dot(beta.beta);
  return (at_k <= 0.0 && at_l >= 0.0) ? 1 : 0;
}

int lambda_asym(const Vector& x_k, const Vector& x_l, const Vector& x_i, const Vector& x_j,
                const PairwiseTransform& w, const Direction& beta) {
  const Vector& b = beta.beta;
  const bool at_k = pairwise_index(w, x_i, x_k).dot(b) <= pairwise_index(w, x_j, x_k).dot(b) &&
                    pairwise_index(w, x_k, x_i).dot(b) <= pairwise_index(w, x_k, x_j).dot(b);
  if (!at_k) return 0;
  const bool at_l = pairwise_index(w, x_i, x_l).dot(b) >= pairwise_index(w, x_j, x_l).dot(b) &&
                    pairwise_index(w, x_l, x_i).dot(b) >= pairwise_index(w, x_l, x_j).dot(b);
  return at_l ? 1 : 0;
}

TetradPlan make_tetrad_plan(int n, int m, std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("make_tetrad_plan: need at least 4 nodes");
  const long long total = static_cast<long long>(n) * (n - 1);
  if (m < 1 || m > total)
    throw std::invalid_argument("make_tetrad_plan: pair count out of range");

  // Floyd's sampling without replacement over the n(n-1) ordered pairs.
  auto rng = make_rng(substream_key(seed, 0xF10D));
  std::unordered_set<long long> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  TetradPlan plan;
  plan.seed = seed;
  plan.pairs.reserve(static_cast<std::size_t>(m));
  for (long long t = total - m; t < total; ++t) {
    long long r = static_cast<long long>(u01(rng) * static_cast<double>(t + 1));
    if (r > t) r = t;
    const long long pick = chosen.insert(r).second ? r : t;
    if (pick != r) chosen.insert(pick);
    const int i = static_cast<int>(pick / (n - 1));
    const int rem = static_cast<int>(pick % (n - 1));
    const int j = rem + (rem >= i ? 1 : 0);
    plan.pairs.emplace_back(i, j);
  }
  return plan;
}

std::vector<Matrix> pairwise_index_tensor(const Matrix& covariates, const PairwiseTransform& w) {
  const Index n = covariates.rows();
  std::vector<Matrix> tensor(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Matrix block = Matrix::Zero(n, w.dim);
    const Vector x_i = covariates.row(i);
    for (Index m = 0; m < n; ++m) {
      if (m == i) continue;  // diagonal rows masked out downstream
      block.row(m) = pairwise_index(w, x_i, covariates.row(m));
    }
    tensor[static_cast<std::size_t>(i)] = std::move(block);
  }
  return tensor;
}

CriterionEvaluator::CriterionEvaluator(std::vector<Matrix> w_tensor, Matrix rho_at,
                                       TetradPlan plan, SmoothingKind kind, bool symmetric_lambda)
    : w_tensor_(std::move(w_tensor)),
      rho_at_(std::move(rho_at)),
      plan_(std::move(plan)),
      kind_(kind),
      symmetric_lambda_(symmetric_lambda) {
  const Index n = rho_at_.rows();
  if (plan_.pairs.empty()) throw std::invalid_argument("CriterionEvaluator: empty tetrad plan");
  if (rho_at_.cols() != n) throw std::invalid_argument("CriterionEvaluator: rho matrix not square");
  if (static_cast<Index>(w_tensor_.size()) != n)
    throw std::invalid_argument("CriterionEvaluator: tensor size does not match node count");
  for (const auto& [i, j] : plan_.pairs)
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw std::invalid_argument("CriterionEvaluator: plan pair out of range");

  const std::size_t m = plan_.pairs.size();
  u_.resize(m);
  v_.resize(m);
  for (std::size_t p = 0; p < m; ++p) {
    const auto [i, j] = plan_.pairs[p];
    Vector u(n), v(n);
    for (Index k = 0; k < n; ++k) {
      const double diff = rho_at_(i, k) - rho_at_(j, k);
      u[k] = gamma_fn(kind_, diff);
      v[k] = gamma_fn(kind_, -diff);
    }
    u[i] = u[j] = 0.0;  // comparison group excludes the pair itself
    v[i] = v[j] = 0.0;
    u_[p] = std::move(u);
    v_[p] = std::move(v);
  }

  // Cache per-pair index differences unless that would cost too much memory.
  const std::size_t delta_bytes = m * static_cast<std::size_t>(n) *
                                  static_cast<std::size_t>(d()) * sizeof(double);
  cache_delta_ = delta_bytes <= (std::size_t{192} << 20);
  if (cache_delta_) {
    delta_.resize(m);
    for (std::size_t p = 0; p < m; ++p) {
      const auto [i, j] = plan_.pairs[p];
      delta_[p] = w_tensor_[static_cast<std::size_t>(i)] - w_tensor_[static_cast<std::size_t>(j)];
    }
  }
}

double CriterionEvaluator::pair_term(std::size_t p, const Vector& beta, Vector& g1,
                                     Vector& g2) const {
  const auto [i, j] = plan_.pairs[p];
  const Index n = rho_at_.rows();
  if (cache_delta_)
    g1.noalias() = delta_[p] * beta;
  else
    g1.noalias() = w_tensor_[static_cast<std::size_t>(i)] * beta -
                   w_tensor_[static_cast<std::size_t>(j)] * beta;

  const Vector& u = u_[p];
  const Vector& v = v_[p];
  double s1 = 0.0, s2 = 0.0, s_diag = 0.0;

  if (symmetric_lambda_) {
    for (Index k = 0; k < n; ++k) {
      const double g = g1[k];
      const bool a = g <= 0.0;
      const bool b = g >= 0.0;
      if (a) s1 += u[k];
      if (b) s2 += v[k];
      if (a && b) s_diag += u[k] * v[k];
    }
  } else {
    // reversed-direction comparisons w(x_k, x_i) vs w(x_k, x_j)
    for (Index k = 0; k < n; ++k)
      g2[k] = (w_tensor_[static_cast<std::size_t>(k)].row(i) -
               w_tensor_[static_cast<std::size_t>(k)].row(j))
                  .dot(beta);
    for (Index k = 0; k < n; ++k) {
      const bool a = g1[k] <= 0.0 && g2[k] <= 0.0;
      const bool b = g1[k] >= 0.0 && g2[k] >= 0.0;
      if (a) s1 += u[k];
      if (b) s2 += v[k];
      if (a && b) s_diag += u[k] * v[k];
    }
  }
  return s1 * s2 - s_diag;
}

double CriterionEvaluator::value(const Vector& beta_unit, unsigned threads) const {
  const Index n = rho_at_.rows();
  if (beta_unit.size() != d())
    throw std::invalid_argument("CriterionEvaluator: beta dimension mismatch");
  const std::size_t m = plan_.pairs.size();
  std::vector<double> terms(m);
  parallel_for(m, threads, [&](std::size_t begin, std::size_t end) {
    Vector g1(n), g2(n);
    for (std::size_t p = begin; p < end; ++p) terms[p] = pair_term(p, beta_unit, g1, g2);
  });
  NeumaierSum acc;
  for (double t : terms) acc.add(t);
  const double denom = static_cast<double>(m) * static_cast<double>(n - 2) *
                       static_cast<double>(n - 3);
  return acc.value() / denom;
}

double sample_criterion(const Direction& beta, const std::vector<RhoEstimate>& rho_hats,
                        const NetworkData& net, const TetradPlan& plan,
                        const PairwiseTransform& w, SmoothingKind kind) {
  Matrix rho_at = rho_hat_matrix(rho_hats, net.covariates);
  CriterionEvaluator eval(pairwise_index_tensor(net.covariates, w), std::move(rho_at), plan, kind,
                          w.symmetric());
  return eval.value(beta);
}

}  // namespace ntunet
