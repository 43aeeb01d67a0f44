#include "ntunet/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ntunet/common.hpp"

namespace ntunet {

AngleBox global_angle_domain(int d) {
  if (d < 2) throw std::invalid_argument("global_angle_domain: d must be >= 2");
  AngleBox box;
  box.lower = Vector::Constant(d - 1, -M_PI / 2);
  box.upper = Vector::Constant(d - 1, M_PI / 2);
  box.lower[d - 2] = -M_PI;
  box.upper[d - 2] = M_PI;
  return box;
}

void SearchConfig::validate() const {
  if (grid_points < 3) throw std::invalid_argument("SearchConfig: grid_points must be >= 3");
  if (max_rounds < 1) throw std::invalid_argument("SearchConfig: max_rounds must be >= 1");
  if (slack < 0.0 || slack_floor < 0.0 || margin < 0 || tol <= 0.0)
    throw std::invalid_argument("SearchConfig: negative slack/margin or non-positive tol");
}

namespace {

// Mixed-radix enumeration of the G^{d-1} grid of one round.
struct Grid {
  std::vector<Vector> axes;  // per-dimension coordinates
  int dims() const { return static_cast<int>(axes.size()); }
  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& a : axes) s *= static_cast<std::size_t>(a.size());
    return s;
  }
  void unflatten(std::size_t flat, std::vector<int>& idx) const {
    for (int h = dims() - 1; h >= 0; --h) {
      const std::size_t g = static_cast<std::size_t>(axes[h].size());
      idx[h] = static_cast<int>(flat % g);
      flat /= g;
    }
  }
  Vector point(const std::vector<int>& idx) const {
    Vector theta(dims());
    for (int h = 0; h < dims(); ++h) theta[h] = axes[h][idx[h]];
    return theta;
  }
};

Grid make_grid(const AngleBox& box, int g) {
  Grid grid;
  grid.axes.resize(box.lower.size());
  for (Index h = 0; h < box.lower.size(); ++h) {
    Vector axis(g);
    const double lo = box.lower[h], hi = box.upper[h];
    for (int k = 0; k < g; ++k) axis[k] = lo + (hi - lo) * k / (g - 1);
    grid.axes[h] = axis;
  }
  return grid;
}

}  // namespace

EstimateResult minimize(const std::function<double(const Vector&)>& objective, int d,
                        const SearchConfig& cfg, unsigned threads) {
  cfg.validate();
  AngleBox box = global_angle_domain(d);
  const int g = cfg.grid_points;

  EstimateResult result;
  Grid grid;
  std::vector<double> values;
  std::vector<char> retained;
  double vmin = 0.0, threshold = 0.0;

  for (int round = 1; round <= cfg.max_rounds; ++round) {
    grid = make_grid(box, g);
    const std::size_t total = grid.size();
    values.assign(total, 0.0);
    parallel_for(total, threads, [&](std::size_t begin, std::size_t end) {
      std::vector<int> idx(grid.dims());
      for (std::size_t f = begin; f < end; ++f) {
        grid.unflatten(f, idx);
        values[f] = objective(direction_from_angles(grid.point(idx)));
      }
    });
    result.evaluations += static_cast<long>(total);
    result.rounds = round;

    double vmax = -std::numeric_limits<double>::infinity();
    vmin = std::numeric_limits<double>::infinity();
    for (double v : values) {
      if (!std::isfinite(v))
        throw std::runtime_error("minimize: objective returned a non-finite value");
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    threshold = vmin + cfg.slack * (vmax - vmin) + cfg.slack_floor;

    retained.assign(total, 0);
    for (std::size_t f = 0; f < total; ++f) retained[f] = values[f] <= threshold ? 1 : 0;

    if (round == cfg.max_rounds) break;

    // Expand the retained set by the neighbor margin (Chebyshev balls in
    // index space), then shrink the box to the expanded bounding rectangle.
    std::vector<int> lo_idx(grid.dims(), g), hi_idx(grid.dims(), -1);
    std::vector<int> idx(grid.dims());
    for (std::size_t f = 0; f < total; ++f) {
      if (!retained[f]) continue;
      grid.unflatten(f, idx);
      for (int h = 0; h < grid.dims(); ++h) {
        lo_idx[h] = std::min(lo_idx[h], std::max(idx[h] - cfg.margin, 0));
        hi_idx[h] = std::max(hi_idx[h], std::min(idx[h] + cfg.margin, g - 1));
      }
    }
    AngleBox next;
    next.lower.resize(grid.dims());
    next.upper.resize(grid.dims());
    for (int h = 0; h < grid.dims(); ++h) {
      next.lower[h] = grid.axes[h][lo_idx[h]];
      next.upper[h] = grid.axes[h][hi_idx[h]];
    }
    box = next;
    if (box.max_width() < cfg.tol) break;
  }

  // Final retained set: grid points of the last evaluated round that reach
  // the minimum within slack.
  std::vector<int> idx(grid.dims());
  for (std::size_t f = 0; f < grid.size(); ++f) {
    if (!retained[f]) continue;
    grid.unflatten(f, idx);
    result.theta_set.push_back(grid.point(idx));
  }
  result.min_value = vmin;

  const BetaBox bb = extract_box(result);
  result.beta_lower = bb.lower;
  result.beta_upper = bb.upper;
  result.beta_mid = bb.mid;
  result.manifest["grid_points"] = std::to_string(cfg.grid_points);
  result.manifest["rounds"] = std::to_string(result.rounds);
  result.manifest["evaluations"] = std::to_string(result.evaluations);
  result.manifest["retained"] = std::to_string(result.theta_set.size());
  return result;
}

BetaBox extract_box(const EstimateResult& result) {
  if (result.theta_set.empty())
    throw std::logic_error("extract_box: empty retained set");
  const Index d = result.theta_set.front().size() + 1;
  BetaBox box;
  box.lower = Vector::Constant(d, std::numeric_limits<double>::infinity());
  box.upper = Vector::Constant(d, -std::numeric_limits<double>::infinity());
  for (const Vector& theta : result.theta_set) {
    const Vector beta = direction_from_angles(theta);
    box.lower = box.lower.cwiseMin(beta);
    box.upper = box.upper.cwiseMax(beta);
  }
  box.mid = 0.5 * (box.lower + box.upper);
  return box;
}

}  // namespace ntunet
