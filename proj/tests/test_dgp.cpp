#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ntunet/common.hpp"
#include "ntunet/dgp.hpp"

using namespace ntunet;

namespace {

DgpConfig base_config(int n, std::uint64_t seed) {
  DgpConfig cfg;
  cfg.n = n;
  cfg.d = 3;
  cfg.beta0 = Direction::normalized(Vector::Ones(3));
  cfg.index_scale = std::sqrt(3.0) / 6.0;  // index vector (1,1,1)/6
  cfg.support = SupportKind::AllContinuous;
  cfg.het = {0.25, 0.25};
  cfg.w = PairwiseTransform::symmetric_abs_diff(3);
  cfg.seed = seed;
  return cfg;
}

void register_test_transforms() {
  static bool done = false;
  if (done) return;
  register_pairwise("const_ones3", 3, true,
                    [](const Vector&, const Vector&) { return Vector(Vector::Ones(3)); });
  register_pairwise("const_zero3", 3, true,
                    [](const Vector&, const Vector&) { return Vector(Vector::Zero(3)); });
  register_pairwise("const_half3", 3, true, [](const Vector&, const Vector&) {
    Vector v(3);
    v << 0.5, 0.0, 0.0;
    return v;
  });
  done = true;
}

}  // namespace

TEST_CASE("draw_population: uniform moments and support ranges") {
  DgpConfig cfg = base_config(100000, 1);
  const Population pop = draw_population(cfg);
  for (int h = 0; h < 3; ++h) {
    CHECK(std::abs(pop.covariates.col(h).mean()) < 0.01);
    CHECK(pop.covariates.col(h).minCoeff() >= -0.5);
    CHECK(pop.covariates.col(h).maxCoeff() <= 0.5);
  }
}

TEST_CASE("draw_population: binary first coordinate has equal frequencies") {
  DgpConfig cfg = base_config(10000, 2);
  cfg.support = SupportKind::Binary1;
  const Population pop = draw_population(cfg);
  const double freq = pop.covariates.col(0).mean();  // values are exactly 0/1
  CHECK(std::abs(freq - 0.5) < 0.02);
  // other coordinates stay continuous
  CHECK(std::abs(pop.covariates.col(1).mean()) < 0.02);
  CHECK(pop.covariates.col(2).minCoeff() >= -0.5);
}

TEST_CASE("draw_population: discrete grids land on the grid points") {
  DgpConfig cfg = base_config(2000, 3);
  cfg.support = SupportKind::AllDiscrete11;
  Population pop = draw_population(cfg);
  for (int i = 0; i < cfg.n; ++i)
    for (int h = 0; h < 3; ++h) {
      const double steps = (pop.covariates(i, h) + 0.5) / 0.1;
      CHECK(std::abs(steps - std::round(steps)) < 1e-12);
    }
  cfg.support = SupportKind::AllDiscrete101;
  pop = draw_population(cfg);
  for (int i = 0; i < cfg.n; ++i)
    for (int h = 0; h < 3; ++h) {
      const double steps = (pop.covariates(i, h) + 0.5) / 0.01;
      CHECK(std::abs(steps - std::round(steps)) < 1e-9);
    }
  cfg.support = SupportKind::Binary1Discrete2;
  pop = draw_population(cfg);
  for (int i = 0; i < cfg.n; ++i) {
    const double x1 = pop.covariates(i, 0);
    CHECK((x1 == 0.0 || x1 == 1.0));
    const double steps = (pop.covariates(i, 1) + 0.5) / 0.1;
    CHECK(std::abs(steps - std::round(steps)) < 1e-12);
  }
}

TEST_CASE("draw_population: heterogeneity correlates with the first coordinate") {
  // with c1 = c2 and Var(X_1) = Var(xi), corr(A, X_1) = 1/sqrt(2)
  DgpConfig cfg = base_config(10000, 4);
  const Population pop = draw_population(cfg);
  const Vector x1 = pop.covariates.col(0);
  const Vector a = pop.a;
  const Eigen::ArrayXd dx = x1.array() - x1.mean();
  const Eigen::ArrayXd da = a.array() - a.mean();
  const double corr = (dx * da).sum() / std::sqrt(dx.square().sum() * da.square().sum());
  CHECK(corr > 0.5);
  CHECK(corr < 0.9);
  CHECK(corr == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("form_network: complete and empty graphs at extreme indexes") {
  register_test_transforms();
  DgpConfig cfg = base_config(30, 5);
  cfg.w = PairwiseTransform::custom("const_ones3");
  cfg.het = {0.0, 0.0};
  cfg.index_scale = 1.0;  // both-side index sqrt(3) >= 1
  Population pop = draw_population(cfg);
  NetworkData net = form_network(pop, cfg);
  CHECK(net.density() == doctest::Approx(1.0));

  cfg.w = PairwiseTransform::custom("const_zero3");  // index exactly 0 <= eps
  pop = draw_population(cfg);
  net = form_network(pop, cfg);
  CHECK(net.density() == doctest::Approx(0.0));
}

TEST_CASE("form_network: realized density tracks the closed-form oracle") {
  DgpConfig cfg = base_config(1000, 6);
  const Population pop = draw_population(cfg);
  const NetworkData net = form_network(pop, cfg);
  net.validate();

  auto rng = make_rng(99);
  double oracle = 0.0;
  const int draws = 100000;
  const Vector beta = cfg.scaled_index();
  for (int t = 0; t < draws; ++t) {
    const int i = uniform_int(rng, cfg.n);
    int j = uniform_int(rng, cfg.n - 1);
    if (j >= i) ++j;
    const double dij =
        pairwise_index(cfg.w, pop.covariates.row(i), pop.covariates.row(j)).dot(beta);
    const double dji =
        pairwise_index(cfg.w, pop.covariates.row(j), pop.covariates.row(i)).dot(beta);
    oracle += link_probability_exact(dij, dji, pop.a[i], pop.a[j]);
  }
  oracle /= draws;
  CHECK(std::abs(net.density() - oracle) < 0.02);
}

TEST_CASE("link_probability_exact: clamp arithmetic and Monte Carlo oracle") {
  CHECK(link_probability_exact(0.5, 0.5, 0.2, 0.1) == doctest::Approx(0.42));
  CHECK(link_probability_exact(-1, -1, 0, 0) == 0.0);
  CHECK(link_probability_exact(2, 2, 0, 0) == 1.0);

  auto rng = make_rng(1234);
  double hits = 0.0;
  const int draws = 1000000;
  for (int t = 0; t < draws; ++t)
    hits += link_indicator(0.5, 0.5, 0.2, 0.1, u01(rng), u01(rng)) ? 1.0 : 0.0;
  CHECK(std::abs(hits / draws - 0.42) < 0.002);
}

TEST_CASE("link_probability_exact: monotone in all four arguments on a grid") {
  auto value = [](int a, int b, int c, int d) {
    const double lo = -0.6, step = 0.1;  // spans the clamp corners
    return link_probability_exact(lo + a * step, lo + b * step, lo + c * step, lo + d * step);
  };
  for (int a = 0; a < 20; ++a)
    for (int b = 0; b < 20; ++b)
      for (int c = 0; c < 20; ++c)
        for (int d = 0; d < 20; ++d) {
          const double v = value(a, b, c, d);
          if (a + 1 < 20) CHECK(value(a + 1, b, c, d) >= v);
          if (d + 1 < 20) CHECK(value(a, b, c, d + 1) >= v);
        }
}

TEST_CASE("rho_exact: saturated case, symmetric half case, and the xi-expectation") {
  register_test_transforms();
  DgpConfig cfg = base_config(100, 7);

  // both sides saturated -> 1
  DgpConfig sat = cfg;
  sat.w = PairwiseTransform::custom("const_ones3");
  sat.index_scale = 2.0;
  sat.het = {0.0, 0.0};
  const Vector x0 = Vector::Zero(3);
  CHECK(rho_exact(x0, 0.0, x0, sat) == doctest::Approx(1.0));

  // symmetric w, delta = 0.5, a_i = 0.2, (c1,c2) = (0,1):
  // 0.7 * E[clamp(0.5 + xi)] = 0.7 * 0.5
  DgpConfig half = cfg;
  half.w = PairwiseTransform::custom("const_half3");
  half.beta0 = Direction(Vector::Unit(3, 0));
  half.index_scale = 1.0;
  half.het = {0.0, 1.0};
  CHECK(rho_exact(x0, 0.2, x0, half) == doctest::Approx(0.35));

  // closed-form xi-expectation against midpoint-rule quadrature
  auto rng = make_rng(5150);
  for (int t = 0; t < 50; ++t) {
    const double m = 3.0 * (u01(rng) - 0.5);
    const double s = 2.0 * u01(rng);
    double acc = 0.0;
    const int grid = 200001;
    for (int g = 0; g < grid; ++g) {
      const double xi = -0.5 + (g + 0.5) / grid;
      acc += clamp01(m + s * xi);
    }
    CHECK(std::abs(expected_clamp01_uniform(m, s) - acc / grid) < 1e-6);
  }
}

TEST_CASE("rho_exact: matches a seeded Monte Carlo oracle across random configurations") {
  auto rng = make_rng(777);
  for (int t = 0; t < 100; ++t) {
    DgpConfig cfg = base_config(100, 8);
    cfg.index_scale = 0.1 + 0.5 * u01(rng);
    cfg.het = {0.5 * u01(rng), 0.5 * u01(rng)};
    Vector x_i(3), x(3);
    for (int h = 0; h < 3; ++h) {
      x_i[h] = u01(rng) - 0.5;
      x[h] = u01(rng) - 0.5;
    }
    const double a_i = u01(rng) - 0.25;

    const Vector beta = cfg.scaled_index();
    const double delta_i = pairwise_index(cfg.w, x_i, x).dot(beta);
    const double delta_k = pairwise_index(cfg.w, x, x_i).dot(beta);
    double hits = 0.0;
    const int draws = 1000000;
    for (int r = 0; r < draws; ++r) {
      const double a_k = cfg.het.c1 * x[0] + cfg.het.c2 * (u01(rng) - 0.5);
      hits += link_indicator(delta_i, delta_k, a_i, a_k, u01(rng), u01(rng)) ? 1.0 : 0.0;
    }
    CHECK(std::abs(rho_exact(x_i, a_i, x, cfg) - hits / draws) < 0.002);
  }
}

TEST_CASE("rho_exact: non-decreasing in a_i and in the own-side index") {
  DgpConfig cfg = base_config(100, 9);
  cfg.index_scale = 0.2;
  const Vector x = Vector::Zero(3);
  double prev = -1.0;
  for (int g = 0; g <= 40; ++g) {
    const double a = -0.5 + g * 0.025;
    const double v = rho_exact(Vector::Constant(3, 0.2), a, x, cfg);
    CHECK(v >= prev);
    prev = v;
  }
  // moving x_i away from x raises every |x_i,h - x_h|, hence the index
  prev = -1.0;
  for (int g = 0; g <= 20; ++g) {
    const double t = 0.01 + g * 0.02;
    const double v = rho_exact(Vector::Constant(3, t), 0.1, x, cfg);
    CHECK(v >= prev);
    if (g > 0 && prev > 0.01 && v < 0.99) CHECK(v > prev);  // strict on the interior
    prev = v;
  }
}

TEST_CASE("form_network: per-pair frequencies match the exact probability") {
  DgpConfig cfg = base_config(50, 10);
  const Population pop = draw_population(cfg);
  const Vector beta = cfg.scaled_index();
  const int redraws = 10000;
  for (int p = 0; p < 50; ++p) {
    const int i = p;
    const int j = (p + 17) % 50;
    const double dij =
        pairwise_index(cfg.w, pop.covariates.row(i), pop.covariates.row(j)).dot(beta);
    const double dji =
        pairwise_index(cfg.w, pop.covariates.row(j), pop.covariates.row(i)).dot(beta);
    auto rng = make_rng(substream_key(4242, i, j));
    double freq = 0.0;
    for (int t = 0; t < redraws; ++t)
      freq += link_indicator(dij, dji, pop.a[i], pop.a[j], u01(rng), u01(rng)) ? 1.0 : 0.0;
    freq /= redraws;
    CHECK(std::abs(freq - link_probability_exact(dij, dji, pop.a[i], pop.a[j])) < 0.02);
  }
}

TEST_CASE("shared pair shocks collapse the two thresholds when a_i == a_j") {
  // pure logic of the link rule
  auto rng = make_rng(31337);
  for (int t = 0; t < 10000; ++t) {
    const double delta = 2.0 * (u01(rng) - 0.5);
    const double a = u01(rng) - 0.5;
    const double eps = u01(rng);
    CHECK(link_indicator(delta, delta, a, a, eps, eps) == (delta + a > eps));
  }

  // network level: with A == 0 and a constant index of 0.5, shared shocks give
  // single-threshold density 0.5 instead of the two-sided 0.25
  register_test_transforms();
  DgpConfig cfg = base_config(200, 11);
  cfg.w = PairwiseTransform::custom("const_half3");
  cfg.beta0 = Direction(Vector::Unit(3, 0));
  cfg.index_scale = 1.0;
  cfg.het = {0.0, 0.0};
  const Population pop = draw_population(cfg);
  const NetworkData shared = form_network(pop, cfg, ShockScheme::SharedPerPair);
  const NetworkData indep = form_network(pop, cfg, ShockScheme::IndependentPerSide);
  CHECK(std::abs(shared.density() - 0.5) < 0.02);
  CHECK(std::abs(indep.density() - 0.25) < 0.02);
}

TEST_CASE("draws are deterministic given the seed") {
  DgpConfig cfg = base_config(60, 12);
  const Population pop = draw_population(cfg);
  const NetworkData a = form_network(pop, cfg);
  const NetworkData b = form_network(pop, cfg);
  CHECK(a.adjacency == b.adjacency);
  const Population pop2 = draw_population(cfg);
  CHECK(pop.covariates == pop2.covariates);
  CHECK(pop.a == pop2.a);
}
