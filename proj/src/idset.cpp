#include "ntunet/idset.hpp"

#include <algorithm>
#include <cmath>

#include "ntunet/common.hpp"

namespace ntunet {

namespace {

constexpr std::uint64_t kPlanStream = 0x1D5E;

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

CriterionEvaluator make_population_evaluator(const DgpConfig& cfg, const Population& pop,
                                             const TetradPlan& plan) {
  return CriterionEvaluator(pairwise_index_tensor(pop.covariates, cfg.w),
                            rho_exact_matrix(pop, cfg), plan, SmoothingKind::Indicator,
                            cfg.w.symmetric());
}

double population_criterion(const Direction& beta, const DgpConfig& cfg, const Population& pop,
                            const TetradPlan& plan) {
  return make_population_evaluator(cfg, pop, plan).value(beta);
}

double IdSetGrid::area() const {
  const double step = resolution_deg * M_PI / 180.0;
  double total = 0.0;
  for (Index r = 0; r < member.rows(); ++r) {
    if (member.row(r).sum() == 0) continue;
    const double weight = std::cos(theta1[r]) * step * step;
    total += weight * member.row(r).sum();
  }
  return total;
}

double IdSetGrid::angular_diameter_deg() const {
  std::vector<Vector> dirs;
  for (Index r = 0; r < member.rows(); ++r)
    for (Index c = 0; c < member.cols(); ++c)
      if (member(r, c)) dirs.push_back(direction_from_angles(vec2(theta1[r], theta2[c])));
  if (dirs.size() > 20000) {  // stride down huge regions; diameter is then a lower bound
    std::vector<Vector> strided;
    const std::size_t step = dirs.size() / 20000 + 1;
    for (std::size_t a = 0; a < dirs.size(); a += step) strided.push_back(dirs[a]);
    dirs.swap(strided);
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < dirs.size(); ++a)
    for (std::size_t b = a + 1; b < dirs.size(); ++b) {
      const double dot = std::clamp(dirs[a].dot(dirs[b]), -1.0, 1.0);
      worst = std::max(worst, std::acos(dot));
    }
  return worst * 180.0 / M_PI;
}

AngleBox IdSetGrid::bounding_rect() const {
  AngleBox box;
  double lo1 = M_PI, hi1 = -M_PI, lo2 = M_PI, hi2 = -M_PI;
  for (Index r = 0; r < member.rows(); ++r)
    for (Index c = 0; c < member.cols(); ++c)
      if (member(r, c)) {
        lo1 = std::min(lo1, theta1[r]);
        hi1 = std::max(hi1, theta1[r]);
        lo2 = std::min(lo2, theta2[c]);
        hi2 = std::max(hi2, theta2[c]);
      }
  box.lower = vec2(lo1, lo2);
  box.upper = vec2(hi1, hi2);
  return box;
}

bool IdSetGrid::contains(const Direction& beta) const {
  const Vector theta = angles_from_direction(beta.beta);
  Index best_r = 0, best_c = 0;
  (theta1.array() - theta[0]).abs().minCoeff(&best_r);
  (theta2.array() - theta[1]).abs().minCoeff(&best_c);
  return member(best_r, best_c) != 0;
}

IdSetGrid compute_idset(const DgpConfig& cfg, int n, int m, double resolution_deg,
                        unsigned threads) {
  if (cfg.d != 3)
    throw std::invalid_argument("compute_idset: only the two-angle case d == 3 is supported");
  if (resolution_deg <= 0.0) throw std::invalid_argument("compute_idset: resolution must be > 0");

  DgpConfig local = cfg;
  local.n = n;
  const Population pop = draw_population(local);
  const TetradPlan plan = make_tetrad_plan(n, m, substream_key(local.seed, kPlanStream));
  const CriterionEvaluator eval = make_population_evaluator(local, pop, plan);

  IdSetGrid grid;
  grid.condition = cfg.support;
  grid.resolution_deg = resolution_deg;
  const int n1 = static_cast<int>(std::lround(180.0 / resolution_deg)) + 1;
  const int n2 = static_cast<int>(std::lround(360.0 / resolution_deg)) + 1;
  grid.theta1.resize(n1);
  grid.theta2.resize(n2);
  for (int r = 0; r < n1; ++r) grid.theta1[r] = -M_PI / 2 + M_PI * r / (n1 - 1);
  for (int c = 0; c < n2; ++c) grid.theta2[c] = -M_PI + 2 * M_PI * c / (n2 - 1);

  grid.value.resize(n1, n2);
  const std::size_t total = static_cast<std::size_t>(n1) * n2;
  parallel_for(total, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      const int r = static_cast<int>(f / n2);
      const int c = static_cast<int>(f % n2);
      const Vector beta = direction_from_angles(vec2(grid.theta1[r], grid.theta2[c]));
      grid.value(r, c) = eval.value(beta);
    }
  });

  grid.min_value = grid.value.minCoeff();
  grid.max_value = grid.value.maxCoeff();
  grid.tol = std::max(1e-9, 1e-3 * (grid.max_value - grid.min_value));
  grid.member = (grid.value.array() <= grid.min_value + grid.tol).cast<int>();
  return grid;
}

}  // namespace ntunet
