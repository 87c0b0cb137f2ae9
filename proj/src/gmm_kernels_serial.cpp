#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ecmlfd/errors.hpp"
#include "ecmlfd/gmm_kernels.hpp"

namespace ecmlfd::kernels::serial {

void weighted_log_densities(const Matrix& data, const GaussianMixture& model, Matrix& out) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  const int k = model.size();
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  out.resize(n, k);
  for (int c = 0; c < k; ++c) {
    const GaussianComponent& comp = model.components[c];
    Eigen::LDLT<Matrix> ldlt(comp.covariance);
    const Vector pivots = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || (pivots.array() <= 0.0).any()) {
      throw NumericalError("covariance of component " + std::to_string(c) +
                           " is not positive definite");
    }
    const double log_det = pivots.array().log().sum();
    const Matrix precision = ldlt.solve(Matrix::Identity(d, d));
    const double norm = std::log(comp.prior) - 0.5 * (d * log_2pi + log_det);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector diff = data.row(i).transpose() - comp.mean;
      out(i, c) = norm - 0.5 * diff.dot(precision * diff);
    }
  }
}

double normalize_responsibilities(Matrix& log_resp) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < log_resp.rows(); ++i) {
    double m = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < log_resp.cols(); ++c) m = std::max(m, log_resp(i, c));
    double s = 0.0;
    for (Eigen::Index c = 0; c < log_resp.cols(); ++c) s += std::exp(log_resp(i, c) - m);
    const double lse = m + std::log(s);
    for (Eigen::Index c = 0; c < log_resp.cols(); ++c) log_resp(i, c) = std::exp(log_resp(i, c) - lse);
    total += lse;
  }
  return total;
}

MStepStats mstep_statistics(const Matrix& data, const Matrix& resp) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  const Eigen::Index k = resp.cols();
  MStepStats stats;
  stats.mass = Vector::Zero(k);
  stats.means = Matrix::Zero(k, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < k; ++c) {
      stats.mass(c) += resp(i, c);
      stats.means.row(c) += resp(i, c) * data.row(i);
    }
  }
  for (Eigen::Index c = 0; c < k; ++c) stats.means.row(c) /= stats.mass(c);
  stats.scatter.assign(k, Matrix::Zero(d, d));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < k; ++c) {
      const Vector diff = (data.row(i) - stats.means.row(c)).transpose();
      stats.scatter[c] += resp(i, c) * diff * diff.transpose();
    }
  }
  return stats;
}

std::vector<int> assign_nearest(const Matrix& data, const Matrix& centroids) {
  std::vector<int> out(data.rows());
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double dist = (data.row(i) - centroids.row(c)).squaredNorm();
      if (dist < best) {
        best = dist;
        out[i] = static_cast<int>(c);
      }
    }
  }
  return out;
}

}  // namespace ecmlfd::kernels::serial
