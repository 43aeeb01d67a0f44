// Regenerates the bundled village-network fixture (data/village_fixture_*.csv):
// 119 household rows (5 with missing wealth, so ingestion keeps 114) and all
// ordered dyads with distance, tie and a mention status drawn from a
// two-sided threshold rule whose intercept is calibrated to a realistic
// density.  Fully deterministic.

#include <cstdio>
#include <string>
#include <vector>

#include "ntunet/common.hpp"
#include "ntunet/core.hpp"
#include "ntunet/io.hpp"

using namespace ntunet;

namespace {

constexpr int kHouseholds = 119;
constexpr std::uint64_t kSeed = 811;
constexpr double kTargetDensity = 0.073;

struct Household {
  std::string id;
  double wealth = 0.0;   // <= 0 encodes "missing"
  double x = 0.0, y = 0.0;
  double a = 0.0;        // unobserved propensity
};

}  // namespace

int main(int argc, char** argv) {
  std::string out_dir = argc > 1 ? argv[1] : "data";

  std::vector<Household> households(kHouseholds);
  for (int i = 0; i < kHouseholds; ++i) {
    auto rng = make_rng(substream_key(kSeed, 0x11, static_cast<std::uint64_t>(i)));
    Household& h = households[i];
    char buf[16];
    std::snprintf(buf, sizeof(buf), "h%03d", i + 1);
    h.id = buf;
    const double u = u01(rng) - 0.5;
    h.wealth = std::round(std::exp(6.0 + 2.2 * u));
    h.x = u01(rng);
    h.y = u01(rng);
    h.a = 0.12 * u + 0.12 * (u01(rng) - 0.5);
  }
  // five households without wealth data, mirroring incomplete survey rows
  for (int i : {7, 23, 58, 90, 113}) households[i].wealth = 0.0;

  const int n = kHouseholds;
  Matrix distance(n, n), tie = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto rng = make_rng(substream_key(kSeed, 0x22, static_cast<std::uint64_t>(i),
                                        static_cast<std::uint64_t>(j)));
      const double dx = households[i].x - households[j].x;
      const double dy = households[i].y - households[j].y;
      const double meters = std::max(20.0, std::round(1200.0 * std::sqrt(dx * dx + dy * dy)));
      distance(i, j) = distance(j, i) = meters;
      const double u = u01(rng);
      const double t = u < 0.02 ? 3 : (u < 0.07 ? 2 : (u < 0.35 ? 1 : 0));
      tie(i, j) = tie(j, i) = t;
    }

  // index of the latent rule; the scale-free direction has signs (-, -, +)
  const Vector beta = Direction::normalized(Vector{{-0.20, -0.60, 0.45}}).beta * 0.25;
  auto side_index = [&](int i, int j) {
    const double w1 = std::abs(std::log(std::max(households[i].wealth, 1.0)) -
                               std::log(std::max(households[j].wealth, 1.0)));
    const double w2 = std::log(distance(i, j)) - 6.0;
    const double w3 = tie(i, j);
    return beta[0] * w1 + beta[1] * w2 + beta[2] * w3 + households[i].a;
  };

  // calibrate the intercept so the expected density hits the target
  double lo = -1.0, hi = 1.0;
  for (int step = 0; step < 60; ++step) {
    const double c = 0.5 * (lo + hi);
    double acc = 0.0;
    long pairs = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        acc += clamp01(c + side_index(i, j)) * clamp01(c + side_index(j, i));
        ++pairs;
      }
    (acc / pairs < kTargetDensity ? lo : hi) = c;
  }
  const double intercept = 0.5 * (lo + hi);

  Eigen::MatrixXi mention = Eigen::MatrixXi::Zero(n, n);
  double density = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto rng = make_rng(substream_key(kSeed, 0x33, static_cast<std::uint64_t>(i),
                                        static_cast<std::uint64_t>(j)));
      const bool side_i = intercept + side_index(i, j) > u01(rng);
      const bool side_j = intercept + side_index(j, i) > u01(rng);
      if (side_i && side_j) {
        mention(i, j) = mention(j, i) = u01(rng) < 0.4 ? 2 : 1;
        density += 1.0;
      }
    }
  density /= n * (n - 1) / 2.0;
  std::printf("fixture: intercept %.4f, density %.4f\n", intercept, density);

  std::vector<CsvRow> node_rows;
  for (const auto& h : households)
    node_rows.push_back(CsvRow{h.id, h.wealth > 0.0 ? format_double(h.wealth) : "",
                               format_double(std::round(100.0 * h.x) / 100.0)});
  write_csv(out_dir + "/village_fixture_nodes.csv", {"hh", "wealth", "survey_order"}, node_rows);

  std::vector<CsvRow> dyad_rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      dyad_rows.push_back(CsvRow{households[i].id, households[j].id,
                                 std::to_string(mention(i, j)), format_double(distance(i, j)),
                                 format_double(tie(i, j))});
    }
  write_csv(out_dir + "/village_fixture_dyads.csv", {"hh1", "hh2", "mention", "distance", "tie"},
            dyad_rows);
  std::printf("fixture: wrote %zu node rows and %zu dyad rows\n", node_rows.size(),
              dyad_rows.size());
  return 0;
}
