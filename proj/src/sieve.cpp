#include "ntunet/sieve.hpp"

#include <algorithm>

#include "ntunet/common.hpp"

namespace ntunet {

void SplineBasis::evaluate_into(const Vector& x, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) const {
  if (x.size() != knots.size())
    throw std::invalid_argument("SplineBasis: input length does not match d_x");
  row[0] = 1.0;
  for (int h = 0; h < dim(); ++h) {
    const double v = x[h];
    const double excess = std::max(v - knots[h], 0.0);
    row[1 + 3 * h] = v;
    row[2 + 3 * h] = v * v;
    row[3 + 3 * h] = excess * excess;
  }
}

Vector SplineBasis::evaluate(const Vector& x) const {
  Eigen::RowVectorXd row(size());
  evaluate_into(x, row);
  return row.transpose();
}

SplineBasis build_basis(const Matrix& covariates) {
  const Index n = covariates.rows();
  const Index d = covariates.cols();
  if (n < 2 * (1 + 3 * d))
    throw std::invalid_argument("build_basis: too few rows for the basis size");
  SplineBasis basis;
  basis.knots.resize(d);
  std::vector<double> column(static_cast<std::size_t>(n));
  for (Index h = 0; h < d; ++h) {
    for (Index i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = covariates(i, h);
    // lower median: element at index (n-1)/2 of the sorted column
    const std::size_t k = static_cast<std::size_t>((n - 1) / 2);
    std::nth_element(column.begin(), column.begin() + k, column.end());
    basis.knots[h] = column[k];
  }
  return basis;
}

Vector solve_least_squares(const Matrix& design, const Vector& y, int* rank) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(design);
  if (rank) *rank = static_cast<int>(cod.rank());
  return cod.solve(y);
}

RhoEstimate fit_rho(int node, const NetworkData& net, const SplineBasis& basis) {
  const Index n = net.n();
  const int p = basis.size();
  if (n - 1 < p) throw std::invalid_argument("fit_rho: fewer than basis-size observations");

  Matrix design(n - 1, p);
  Vector y(n - 1);
  Index r = 0;
  for (Index k = 0; k < n; ++k) {
    if (k == node) continue;
    basis.evaluate_into(net.covariates.row(k), design.row(r));
    y[r] = net.adjacency(node, k);
    ++r;
  }

  RhoEstimate est;
  est.node = node;
  est.basis = basis;
  est.coef = solve_least_squares(design, y, &est.rank);
  est.rank_deficient = est.rank < p;
  est.rss = (design * est.coef - y).squaredNorm();
  return est;
}

std::vector<RhoEstimate> fit_all_rho(const NetworkData& net, const SplineBasis& basis,
                                     unsigned threads) {
  const Index n = net.n();
  std::vector<RhoEstimate> fits(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      fits[i] = fit_rho(static_cast<int>(i), net, basis);
  });
  return fits;
}

double predict_rho_raw(const RhoEstimate& est, const Vector& x) {
  return est.basis.evaluate(x).dot(est.coef);
}

double predict_rho(const RhoEstimate& est, const Vector& x) {
  return clamp01(predict_rho_raw(est, x));
}

Matrix rho_hat_matrix(const std::vector<RhoEstimate>& fits, const Matrix& covariates,
                      unsigned threads) {
  const Index n = covariates.rows();
  if (static_cast<Index>(fits.size()) != n)
    throw std::invalid_argument("rho_hat_matrix: one fit per node required");
  const int p = fits.empty() ? 0 : fits.front().basis.size();
  Matrix design(n, p);
  for (Index k = 0; k < n; ++k)
    fits.front().basis.evaluate_into(covariates.row(k), design.row(k));
  Matrix rho(n, n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Vector raw = design * fits[i].coef;
      for (Index k = 0; k < n; ++k) rho(static_cast<Index>(i), k) = clamp01(raw[k]);
    }
  });
  return rho;
}

}  // namespace ntunet
