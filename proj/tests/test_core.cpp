#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ntunet/common.hpp"
#include "ntunet/core.hpp"

using namespace ntunet;

namespace {
Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}
}  // namespace

TEST_CASE("pairwise_index: symmetric absolute differences") {
  const auto w = PairwiseTransform::symmetric_abs_diff(3);
  const Vector out = pairwise_index(w, vec3(0.2, -0.1, 0.4), vec3(-0.3, -0.1, 0.1));
  CHECK(out.isApprox(vec3(0.5, 0.0, 0.3)));

  const Vector x = vec3(0.7, -0.2, 0.05);
  CHECK(pairwise_index(w, x, x).isZero(0.0));

  // exact permutation symmetry
  auto rng = make_rng(7);
  for (int t = 0; t < 200; ++t) {
    Vector a(3), b(3);
    for (int h = 0; h < 3; ++h) {
      a[h] = u01(rng) - 0.5;
      b[h] = u01(rng) - 0.5;
    }
    CHECK(pairwise_index(w, a, b) == pairwise_index(w, b, a));
  }
}

TEST_CASE("pairwise_index: asymmetric last coordinate") {
  const auto w = PairwiseTransform::asymmetric_last_coord(3);
  const Vector x_i = vec3(0.0, 0.0, 0.3);
  const Vector x_j = vec3(0.0, 0.0, 0.6);
  // |2*0.3 - 0.6| * 2/3 = 0;  swapped: |2*0.6 - 0.3| * 2/3 = 0.6
  CHECK(pairwise_index(w, x_i, x_j)[2] == doctest::Approx(0.0));
  CHECK(pairwise_index(w, x_j, x_i)[2] == doctest::Approx(0.6));
  CHECK_FALSE(w.symmetric());

  // asymmetric for generic draws with |2x_d - y_d| != |2y_d - x_d|
  auto rng = make_rng(11);
  int differing = 0;
  for (int t = 0; t < 100; ++t) {
    Vector a(3), b(3);
    for (int h = 0; h < 3; ++h) {
      a[h] = u01(rng) - 0.5;
      b[h] = u01(rng) - 0.5;
    }
    if (std::abs(2 * a[2] - b[2]) != std::abs(2 * b[2] - a[2]))
      differing += pairwise_index(w, a, b) != pairwise_index(w, b, a) ? 1 : 0;
  }
  CHECK(differing > 90);
}

TEST_CASE("pairwise_index: dimension mismatch and custom registry") {
  const auto w = PairwiseTransform::symmetric_abs_diff(3);
  Vector short_x(2);
  short_x << 0.0, 1.0;
  CHECK_THROWS_AS(pairwise_index(w, short_x, short_x), std::invalid_argument);
  CHECK_THROWS_AS(pairwise_index(w, short_x, vec3(0, 0, 0)), std::invalid_argument);

  register_pairwise("sum3", 3, true,
                    [](const Vector& a, const Vector& b) { return Vector(a + b); });
  const auto custom = PairwiseTransform::custom("sum3");
  CHECK(custom.symmetric());
  CHECK(pairwise_index(custom, vec3(1, 2, 3), vec3(1, 1, 1)).isApprox(vec3(2, 3, 4)));
  CHECK_THROWS_AS(PairwiseTransform::custom("nope"), std::invalid_argument);
}

TEST_CASE("angles_to_direction matches the planar/polar convention at d = 3") {
  Vector theta(2);
  theta << 0.0, 0.0;
  CHECK(angles_to_direction(AngleVector(theta)).beta.isApprox(vec3(1, 0, 0)));

  theta << M_PI / 2, 0.77;
  CHECK(angles_to_direction(AngleVector(theta)).beta.isApprox(vec3(0, 0, 1)));

  theta << std::asin(1.0 / std::sqrt(3.0)), M_PI / 4;
  const Vector expect = Vector::Ones(3) / std::sqrt(3.0);
  CHECK((angles_to_direction(AngleVector(theta)).beta - expect).norm() < 1e-12);
}

TEST_CASE("direction_to_angles: pole convention and inverses") {
  CHECK(direction_to_angles(Direction(vec3(1, 0, 0))).theta.isZero(0.0));

  const Vector pole = direction_to_angles(Direction(vec3(0, 0, 1))).theta;
  CHECK(pole[0] == doctest::Approx(M_PI / 2));
  CHECK(pole[1] == 0.0);

  const Direction diag = Direction::normalized(Vector::Ones(3));
  const Direction back = angles_to_direction(direction_to_angles(diag));
  CHECK((back.beta - diag.beta).norm() < 1e-10);
}

TEST_CASE("angle roundtrip property over uniform directions") {
  for (int d : {3, 4, 6}) {
    auto rng = make_rng(100 + d);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
      Vector g(d);
      for (int h = 0; h < d; ++h) g[h] = normal(rng);
      const Direction beta = Direction::normalized(g);
      const AngleVector theta = direction_to_angles(beta);
      for (Index k = 0; k < theta.theta.size(); ++k) {
        const double bound = (k + 1 < theta.theta.size()) ? M_PI / 2 : M_PI;
        CHECK(std::abs(theta.theta[k]) <= bound + 1e-12);
      }
      worst = std::max(worst, (angles_to_direction(theta).beta - beta.beta).norm());
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("strong types validate their invariants") {
  CHECK_THROWS_AS(Direction(vec3(1, 1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(Direction::normalized(vec3(0, 0, 0)), std::invalid_argument);
  Vector bad(2);
  bad << 2.0, 0.0;
  CHECK_THROWS_AS(AngleVector{bad}, std::invalid_argument);  // first angle beyond pi/2

  NetworkData net;
  net.adjacency = Eigen::MatrixXi::Zero(3, 3);
  net.adjacency(0, 1) = 1;  // missing the mirrored entry
  net.covariates = Matrix::Zero(3, 2);
  CHECK_THROWS_AS(net.validate(), std::invalid_argument);
  net.adjacency(1, 0) = 1;
  CHECK_NOTHROW(net.validate());
  CHECK(net.density() == doctest::Approx(1.0 / 3.0));
}
