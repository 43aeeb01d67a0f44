#include "ntunet/dgp.hpp"

#include <cstdio>

#include "ntunet/common.hpp"

namespace ntunet {

namespace {

constexpr std::uint64_t kPopulationStream = 0xD6A1;
constexpr std::uint64_t kNetworkStream = 0xD6A2;

double draw_coordinate(std::mt19937_64& rng, SupportKind support, int h) {
  const bool binary1 = (support == SupportKind::Binary1 || support == SupportKind::Binary1Discrete2);
  if (binary1 && h == 0) return uniform_int(rng, 2);  // {0,1} with equal probability
  const bool grid11 = (support == SupportKind::AllDiscrete11) ||
                      (support == SupportKind::Binary1Discrete2 && h == 1);
  if (grid11) return -0.5 + 0.1 * uniform_int(rng, 11);
  if (support == SupportKind::AllDiscrete101) return -0.5 + 0.01 * uniform_int(rng, 101);
  return u01(rng) - 0.5;
}

}  // namespace

void DgpConfig::validate() const {
  if (n < 4) throw std::invalid_argument("DgpConfig: need at least 4 nodes");
  if (d < 2) throw std::invalid_argument("DgpConfig: index dimension must be >= 2");
  if (beta0.dim() != d) throw std::invalid_argument("DgpConfig: beta0 dimension mismatch");
  if (!(index_scale > 0.0)) throw std::invalid_argument("DgpConfig: index_scale must be positive");
  if (w.dim != d) throw std::invalid_argument("DgpConfig: pairwise transform dimension mismatch");
}

Population draw_population(const DgpConfig& cfg) {
  cfg.validate();
  Population pop;
  pop.covariates.resize(cfg.n, cfg.d);
  pop.a.resize(cfg.n);
  pop.seed = cfg.seed;
  for (int i = 0; i < cfg.n; ++i) {
    auto rng = make_rng(substream_key(cfg.seed, kPopulationStream, static_cast<std::uint64_t>(i)));
    for (int h = 0; h < cfg.d; ++h) pop.covariates(i, h) = draw_coordinate(rng, cfg.support, h);
    const double xi = u01(rng) - 0.5;
    pop.a[i] = cfg.het.c1 * pop.covariates(i, 0) + cfg.het.c2 * xi;
  }
  return pop;
}

NetworkData form_network(const Population& pop, const DgpConfig& cfg, ShockScheme scheme) {
  cfg.validate();
  const Index n = pop.covariates.rows();
  NetworkData net;
  net.adjacency = Eigen::MatrixXi::Zero(n, n);
  net.covariates = pop.covariates;
  const Vector beta = cfg.scaled_index();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      auto rng = make_rng(substream_key(cfg.seed, kNetworkStream, static_cast<std::uint64_t>(i),
                                        static_cast<std::uint64_t>(j)));
      const double eps_ij = u01(rng);
      const double eps_ji = scheme == ShockScheme::SharedPerPair ? eps_ij : u01(rng);
      const double delta_ij = pairwise_index(cfg.w, pop.covariates.row(i), pop.covariates.row(j)).dot(beta);
      const double delta_ji = pairwise_index(cfg.w, pop.covariates.row(j), pop.covariates.row(i)).dot(beta);
      const int link = link_indicator(delta_ij, delta_ji, pop.a[i], pop.a[j], eps_ij, eps_ji) ? 1 : 0;
      net.adjacency(i, j) = link;
      net.adjacency(j, i) = link;
    }
  }
  const double dens = net.density();
  if (dens < 0.001 || dens > 0.999)
    std::fprintf(stderr, "ntunet: warning: degenerate network density %.4f (check index scale)\n",
                 dens);
  return net;
}

double link_probability_exact(double delta_ij, double delta_ji, double a_i, double a_j) {
  return clamp01(delta_ij + a_i) * clamp01(delta_ji + a_j);
}

double expected_clamp01_uniform(double m, double s) {
  if (s == 0.0) return clamp01(m);
  const double half = std::abs(s) * 0.5;
  const double lo = m - half;
  const double hi = m + half;
  // antiderivative of clamp01
  auto C = [](double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return u - 0.5;
    return 0.5 * u * u;
  };
  return (C(hi) - C(lo)) / (hi - lo);
}

double rho_exact(const Vector& x_i, double a_i, const Vector& x, const DgpConfig& cfg) {
  const Vector beta = cfg.scaled_index();
  const double delta_i = pairwise_index(cfg.w, x_i, x).dot(beta);
  const double delta_k = pairwise_index(cfg.w, x, x_i).dot(beta);
  const double own_side = clamp01(delta_i + a_i);
  const double partner_side = expected_clamp01_uniform(delta_k + cfg.het.c1 * x[0], cfg.het.c2);
  return own_side * partner_side;
}

Matrix rho_exact_matrix(const Population& pop, const DgpConfig& cfg) {
  const Index n = pop.covariates.rows();
  Matrix rho(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k)
      rho(i, k) = rho_exact(pop.covariates.row(i), pop.a[i], pop.covariates.row(k), cfg);
  return rho;
}

}  // namespace ntunet
