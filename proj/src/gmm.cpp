#include "ecmlfd/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ecmlfd/errors.hpp"
#include "ecmlfd/gmm_kernels.hpp"
#include "ecmlfd/rng.hpp"

namespace ecmlfd {

namespace {

constexpr int kKmeansMaxIter = 100;
// Effective sample mass below which a component is considered dead.
constexpr double kMinComponentMass = 1e-10;

void require_data(const Matrix& data, int dim) {
  if (data.rows() == 0) throw std::invalid_argument("empty data matrix");
  if (data.cols() != dim) {
    throw std::invalid_argument("data has " + std::to_string(data.cols()) +
                                " columns, model expects " + std::to_string(dim));
  }
}

Matrix cluster_means(const Matrix& data, const std::vector<int>& assign, int k,
                     std::vector<Eigen::Index>& counts) {
  Matrix means = Matrix::Zero(k, data.cols());
  counts.assign(k, 0);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    means.row(assign[i]) += data.row(i);
    ++counts[assign[i]];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) means.row(c) /= static_cast<double>(counts[c]);
  }
  return means;
}

Matrix kmeanspp_seeds(const Matrix& data, int k, Rng& rng) {
  const Eigen::Index n = data.rows();
  Matrix centroids(k, data.cols());
  std::vector<bool> taken(n, false);
  Eigen::Index first = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
  centroids.row(0) = data.row(first);
  taken[first] = true;
  Vector d2 = (data.rowwise() - data.row(first)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (d2(i) <= 0.0) continue;
        cumulative += d2(i);
        pick = i;
        if (cumulative > target) break;
      }
    } else {
      // Every remaining point coincides with a seed.
      for (Eigen::Index i = 0; i < n && pick < 0; ++i) {
        if (!taken[i]) pick = i;
      }
    }
    centroids.row(c) = data.row(pick);
    taken[pick] = true;
    d2 = d2.cwiseMin((data.rowwise() - data.row(pick)).rowwise().squaredNorm());
  }
  return centroids;
}

// Moves the point farthest from its centroid into each empty cluster.
// Returns true if anything moved.
bool reseed_empty(const Matrix& data, const Matrix& centroids, std::vector<int>& assign,
                  std::vector<Eigen::Index>& counts) {
  bool moved = false;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0) continue;
    Eigen::Index far = -1;
    double far_dist = -1.0;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (counts[assign[i]] < 2) continue;
      const double dist = (data.row(i) - centroids.row(assign[i])).squaredNorm();
      if (dist > far_dist) {
        far_dist = dist;
        far = i;
      }
    }
    if (far < 0) break;
    --counts[assign[far]];
    assign[far] = static_cast<int>(c);
    ++counts[c];
    moved = true;
  }
  return moved;
}

}  // namespace

void ConditionalSpec::validate(int dim) const {
  std::vector<bool> used(dim, false);
  auto check = [&](const std::vector<int>& dims, const char* name) {
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const int d = dims[i];
      if (d < 0 || d >= dim) throw std::invalid_argument(std::string(name) + " index out of range");
      if (i > 0 && d <= dims[i - 1]) {
        throw std::invalid_argument(std::string(name) + " must be strictly increasing");
      }
      if (used[d]) throw std::invalid_argument("input and output dimensions overlap");
      used[d] = true;
    }
  };
  check(input_dims, "input_dims");
  check(output_dims, "output_dims");
  if (input_dims.empty() || output_dims.empty()) {
    throw std::invalid_argument("conditional spec needs at least one input and one output");
  }
}

void GaussianMixture::validate() const {
  if (components.empty()) throw std::invalid_argument("mixture has no components");
  const int d = dim();
  if (d == 0) throw std::invalid_argument("mixture has zero dimensions");
  if (!dim_labels.empty() && static_cast<int>(dim_labels.size()) != d) {
    throw std::invalid_argument("dim_labels size does not match the model dimension");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < components.size(); ++k) {
    const GaussianComponent& c = components[k];
    const std::string which = "component " + std::to_string(k);
    if (c.mean.size() != d || c.covariance.rows() != d || c.covariance.cols() != d) {
      throw std::invalid_argument(which + " has inconsistent dimensions");
    }
    if (!(c.prior > 0.0 && c.prior <= 1.0)) throw std::invalid_argument(which + " prior outside (0, 1]");
    if ((c.covariance - c.covariance.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
      throw std::invalid_argument(which + " covariance is not symmetric");
    }
    total += c.prior;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("priors do not sum to 1");
  if (!(position_unit > 0.0) || !std::isfinite(position_unit)) {
    throw std::invalid_argument("position unit must be positive");
  }
  if (!spec.empty()) spec.validate(d);
}

GaussianMixture kmeans_init(const Matrix& data, int k, std::uint64_t seed, double regularization) {
  const Eigen::Index n = data.rows();
  if (k < 1) throw std::invalid_argument("k-means needs k >= 1");
  if (k > n) {
    throw std::invalid_argument("k-means: k = " + std::to_string(k) + " exceeds N = " +
                                std::to_string(n));
  }
  if (!data.allFinite()) throw DataError("k-means: data contains non-finite values");

  Rng rng(seed);
  Matrix centroids = kmeanspp_seeds(data, k, rng);
  std::vector<int> assign;
  std::vector<Eigen::Index> counts;
  for (int iter = 0; iter < kKmeansMaxIter; ++iter) {
    std::vector<int> next = kernels::assign_nearest(data, centroids);
    cluster_means(data, next, k, counts);
    const bool moved = reseed_empty(data, centroids, next, counts);
    const bool stable = !moved && next == assign;
    assign = std::move(next);
    centroids = cluster_means(data, assign, k, counts);
    if (stable) break;
  }

  GaussianMixture model;
  model.components.resize(k);
  const Eigen::Index d = data.cols();
  std::vector<Matrix> scatter(k, Matrix::Zero(d, d));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector diff = (data.row(i) - centroids.row(assign[i])).transpose();
    scatter[assign[i]].noalias() += diff * diff.transpose();
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      throw NumericalError("k-means: cluster " + std::to_string(c) + " is empty");
    }
    GaussianComponent& comp = model.components[c];
    comp.prior = static_cast<double>(counts[c]) / static_cast<double>(n);
    comp.mean = centroids.row(c).transpose();
    comp.covariance = scatter[c] / static_cast<double>(counts[c]);
    comp.covariance.diagonal().array() += regularization;
  }
  return model;
}

EmResult em_fit(const Matrix& data, const GaussianMixture& init, const EmOptions& options) {
  if (init.components.empty()) throw std::invalid_argument("EM: initial mixture is empty");
  require_data(data, init.dim());
  if (!(options.tol > 0.0)) throw std::invalid_argument("EM: tolerance must be positive");
  if (options.max_iter < 0) throw std::invalid_argument("EM: max_iter must be non-negative");
  if (!data.allFinite()) throw DataError("EM: data contains non-finite values");

  const double n = static_cast<double>(data.rows());
  EmResult result;
  result.model = init;
  GaussianMixture& model = result.model;

  Matrix resp;
  auto expectation = [&] {
    const auto cache = kernels::prepare_components(model);
    kernels::weighted_log_densities(data, cache, resp);
    const double ll = kernels::normalize_responsibilities(resp);
    if (!std::isfinite(ll)) throw NumericalError("EM: log-likelihood is not finite");
    return ll;
  };

  double ll = expectation();
  result.trace.push_back(ll);
  for (int it = 1; it <= options.max_iter; ++it) {
    const kernels::MStepStats stats = kernels::mstep_statistics(data, resp);
    for (int c = 0; c < model.size(); ++c) {
      const double mass = stats.mass(c);
      if (!(mass > kMinComponentMass)) {
        throw NumericalError("EM: component " + std::to_string(c) + " collapsed (mass " +
                             std::to_string(mass) + ")");
      }
      GaussianComponent& comp = model.components[c];
      comp.prior = mass / n;
      comp.mean = stats.means.row(c).transpose();
      Matrix cov = stats.scatter[c] / mass;
      comp.covariance = 0.5 * (cov + cov.transpose());
      comp.covariance.diagonal().array() += options.regularization;
    }
    const double ll_new = expectation();
    result.trace.push_back(ll_new);
    result.iterations = it;
    if (ll_new - ll < options.tol * std::max(1.0, std::abs(ll))) {
      result.converged = true;
      break;
    }
    ll = ll_new;
  }
  model.metadata.log_likelihood = result.trace.back();
  model.metadata.tol = options.tol;
  model.metadata.max_iter = options.max_iter;
  return result;
}

double log_likelihood(const GaussianMixture& model, const Matrix& data) {
  if (model.components.empty()) throw std::invalid_argument("log_likelihood: empty mixture");
  require_data(data, model.dim());
  const auto cache = kernels::prepare_components(model);
  Matrix resp;
  kernels::weighted_log_densities(data, cache, resp);
  return kernels::normalize_responsibilities(resp);
}

std::int64_t free_parameter_count(int k, int dim) {
  const std::int64_t kk = k, dd = dim;
  return (kk - 1) + kk * dd + kk * dd * (dd + 1) / 2;
}

double bic_score(double ll, int k, int dim, std::int64_t n) {
  return static_cast<double>(free_parameter_count(k, dim)) * std::log(static_cast<double>(n)) -
         2.0 * ll;
}

double bic(const GaussianMixture& model, const Matrix& data) {
  if (data.rows() == 0) throw std::invalid_argument("bic: empty data");
  return bic_score(log_likelihood(model, data), model.size(), model.dim(), data.rows());
}

std::optional<std::size_t> select_min_bic(const std::vector<SweepEntry>& table) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!table[i].ok()) continue;
    if (!best) {
      best = i;
      continue;
    }
    const SweepEntry& cur = table[*best];
    const double b = *table[i].bic, bb = *cur.bic;
    if (b < bb || (b == bb && table[i].k < cur.k)) best = i;
  }
  return best;
}

SweepResult train_sweep(const Matrix& data, int k_min, int k_max, std::uint64_t seed,
                        const EmOptions& options) {
  if (k_min < 1 || k_max < k_min) throw std::invalid_argument("sweep needs 1 <= k_min <= k_max");
  if (data.rows() < k_max) {
    throw std::invalid_argument("sweep needs at least k_max = " + std::to_string(k_max) +
                                " samples, got " + std::to_string(data.rows()));
  }
  const int count = k_max - k_min + 1;
  std::vector<SweepEntry> table(count);
  std::vector<std::optional<GaussianMixture>> fits(count);

#pragma omp parallel for schedule(dynamic, 1)
  for (int i = count - 1; i >= 0; --i) {
    const int k = k_min + i;
    SweepEntry& entry = table[i];
    entry.k = k;
    try {
      const GaussianMixture init = kmeans_init(data, k, derive_seed(seed, k), options.regularization);
      EmResult fit = em_fit(data, init, options);
      entry.log_likelihood = fit.trace.back();
      entry.bic = bic_score(fit.trace.back(), k, static_cast<int>(data.cols()), data.rows());
      entry.iterations = fit.iterations;
      fits[i] = std::move(fit.model);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
  }

  const auto best = select_min_bic(table);
  if (!best) throw NumericalError("no component count could be fitted: " + table.front().error);

  SweepResult result;
  result.best = std::move(*fits[*best]);
  result.best_k = table[*best].k;
  result.best.metadata.seed = seed;
  result.best.metadata.tol = options.tol;
  result.best.metadata.max_iter = options.max_iter;
  result.best.metadata.log_likelihood = *table[*best].log_likelihood;
  result.best.metadata.bic = *table[*best].bic;
  result.best.metadata.n_train = static_cast<std::uint64_t>(data.rows());
  result.best.metadata.bic_table = table;
  result.table = std::move(table);
  return result;
}

}  // namespace ecmlfd
