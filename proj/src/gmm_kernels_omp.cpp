#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ecmlfd/errors.hpp"
#include "ecmlfd/gmm_kernels.hpp"

namespace ecmlfd::kernels {

namespace {

Eigen::Index block_count(Eigen::Index rows) { return (rows + kRowBlock - 1) / kRowBlock; }

}  // namespace

std::vector<ComponentCache> prepare_components(const GaussianMixture& model) {
  const int dim = model.dim();
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  std::vector<ComponentCache> cache(model.components.size());
  for (std::size_t k = 0; k < model.components.size(); ++k) {
    const GaussianComponent& c = model.components[k];
    Eigen::LLT<Matrix> llt(c.covariance);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("covariance of component " + std::to_string(k) +
                           " is not positive definite");
    }
    cache[k].mean = c.mean;
    cache[k].chol_lower = llt.matrixL();
    const double half_log_det = cache[k].chol_lower.diagonal().array().log().sum();
    if (!std::isfinite(half_log_det)) {
      throw NumericalError("covariance of component " + std::to_string(k) + " is degenerate");
    }
    cache[k].log_weight_norm = std::log(c.prior) - 0.5 * dim * log_2pi - half_log_det;
  }
  return cache;
}

void weighted_log_densities(const Matrix& data, std::span<const ComponentCache> cache, Matrix& out) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  const auto k = static_cast<Eigen::Index>(cache.size());
  out.resize(n, k);
  const Eigen::Index blocks = block_count(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index r0 = b * kRowBlock;
    const Eigen::Index rows = std::min(kRowBlock, n - r0);
    Matrix diff(d, rows);
    for (Eigen::Index c = 0; c < k; ++c) {
      diff = (data.middleRows(r0, rows).rowwise() - cache[c].mean.transpose()).transpose();
      cache[c].chol_lower.triangularView<Eigen::Lower>().solveInPlace(diff);
      out.block(r0, c, rows, 1) =
          (cache[c].log_weight_norm - 0.5 * diff.colwise().squaredNorm().array()).transpose();
    }
  }
}

double normalize_responsibilities(Matrix& log_resp) {
  const Eigen::Index n = log_resp.rows();
  const Eigen::Index k = log_resp.cols();
  Vector row_ll(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = log_resp.row(i).maxCoeff();
    if (!std::isfinite(m)) {
      row_ll(i) = m == std::numeric_limits<double>::infinity()
                      ? m
                      : -std::numeric_limits<double>::infinity();
      log_resp.row(i).setConstant(1.0 / static_cast<double>(k));
      continue;
    }
    const double lse = m + std::log((log_resp.row(i).array() - m).exp().sum());
    row_ll(i) = lse;
    log_resp.row(i) = (log_resp.row(i).array() - lse).exp();
  }
  return row_ll.sum();
}

MStepStats mstep_statistics(const Matrix& data, const Matrix& resp) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  const Eigen::Index k = resp.cols();
  const Eigen::Index blocks = block_count(n);

  std::vector<Vector> part_mass(blocks);
  std::vector<Matrix> part_sums(blocks);
#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index r0 = b * kRowBlock;
    const Eigen::Index rows = std::min(kRowBlock, n - r0);
    part_mass[b] = resp.middleRows(r0, rows).colwise().sum().transpose();
    part_sums[b] = resp.middleRows(r0, rows).transpose() * data.middleRows(r0, rows);
  }

  MStepStats stats;
  stats.mass = Vector::Zero(k);
  Matrix sums = Matrix::Zero(k, d);
  for (Eigen::Index b = 0; b < blocks; ++b) {
    stats.mass += part_mass[b];
    sums += part_sums[b];
  }
  stats.means = sums.array().colwise() / stats.mass.array();

  std::vector<std::vector<Matrix>> part_scatter(blocks);
#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index r0 = b * kRowBlock;
    const Eigen::Index rows = std::min(kRowBlock, n - r0);
    part_scatter[b].resize(k);
    Matrix centered(rows, d);
    for (Eigen::Index c = 0; c < k; ++c) {
      centered = data.middleRows(r0, rows).rowwise() - stats.means.row(c);
      centered.array().colwise() *= resp.col(c).segment(r0, rows).array().sqrt();
      part_scatter[b][c] = centered.transpose() * centered;
    }
  }

  stats.scatter.assign(k, Matrix::Zero(d, d));
  for (Eigen::Index b = 0; b < blocks; ++b) {
    for (Eigen::Index c = 0; c < k; ++c) stats.scatter[c] += part_scatter[b][c];
  }
  return stats;
}

std::vector<int> assign_nearest(const Matrix& data, const Matrix& centroids) {
  const Eigen::Index n = data.rows();
  std::vector<int> out(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    (centroids.rowwise() - data.row(i)).rowwise().squaredNorm().minCoeff(&best);
    out[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace ecmlfd::kernels
