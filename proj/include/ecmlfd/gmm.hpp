#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ecmlfd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Added to every covariance diagonal after each M-step (and in k-means
/// initialization).
inline constexpr double kCovarianceRegularization = 1e-8;

struct GaussianComponent {
  double prior = 0.0;
  Vector mean;
  Matrix covariance;

  bool operator==(const GaussianComponent& o) const {
    return prior == o.prior && mean == o.mean && covariance == o.covariance;
  }
};

/// Which dimensions of the joint density are conditioned on and which are
/// predicted. Indices are into the model's dimension order.
struct ConditionalSpec {
  std::vector<int> input_dims;
  std::vector<int> output_dims;

  bool empty() const { return input_dims.empty() && output_dims.empty(); }
  /// Throws std::invalid_argument if indices overlap, repeat, fall outside
  /// [0, dim) or are not increasing.
  void validate(int dim) const;
  bool operator==(const ConditionalSpec&) const = default;
};

/// One row of the model-order sweep. Failed fits carry an error message and
/// no scores.
struct SweepEntry {
  int k = 0;
  std::optional<double> log_likelihood;
  std::optional<double> bic;
  int iterations = 0;
  std::string error;

  bool ok() const { return bic.has_value(); }
  bool operator==(const SweepEntry&) const = default;
};

struct TrainingMetadata {
  std::uint64_t seed = 0;
  double tol = 0.0;
  int max_iter = 0;
  double log_likelihood = 0.0;
  double bic = 0.0;
  std::uint64_t n_train = 0;
  std::string preset;
  std::vector<SweepEntry> bic_table;

  bool operator==(const TrainingMetadata&) const = default;
};

/// K weighted full-covariance Gaussians over a D-dimensional joint space.
struct GaussianMixture {
  std::vector<GaussianComponent> components;
  std::vector<std::string> dim_labels;
  /// Meters per unit of the position dimensions (labels ending _x/_y/_z).
  double position_unit = 1.0;
  ConditionalSpec spec;
  TrainingMetadata metadata;

  int size() const { return static_cast<int>(components.size()); }
  int dim() const { return components.empty() ? 0 : static_cast<int>(components.front().mean.size()); }

  /// Throws std::invalid_argument on inconsistent dimensions, priors that
  /// do not sum to 1 within 1e-9, or asymmetric covariances.
  void validate() const;
  bool operator==(const GaussianMixture&) const = default;
};

/// Hard-clustering initializer: k-means++ seeding, then Lloyd iterations
/// until assignments stop changing or 100 iterations. Components take the
/// cluster mean, population covariance + εI and cluster fraction.
/// An empty cluster is re-seeded at the point farthest from its assigned
/// centroid. Throws std::invalid_argument if k < 1 or k > N, and
/// NumericalError if a cluster cannot be populated.
GaussianMixture kmeans_init(const Matrix& data, int k, std::uint64_t seed,
                            double regularization = kCovarianceRegularization);

struct EmOptions {
  double tol = 1e-7;  // relative log-likelihood gain
  int max_iter = 300;
  double regularization = kCovarianceRegularization;
};

struct EmResult {
  GaussianMixture model;
  /// Log-likelihood of the initial parameters followed by one entry per
  /// M-step.
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

/// Expectation maximization from `init`. Stops when the gain drops below
/// tol·max(1, |LL|) or after max_iter M-steps. Throws DataError on
/// non-finite data and NumericalError when a component collapses.
EmResult em_fit(const Matrix& data, const GaussianMixture& init, const EmOptions& options = {});

/// Σₙ ln Σₖ πₖ N(xₙ; μₖ, Σₖ), evaluated in log space. Throws
/// NumericalError on a covariance that is not positive definite.
double log_likelihood(const GaussianMixture& model, const Matrix& data);

/// (K−1) + K·D + K·D(D+1)/2.
std::int64_t free_parameter_count(int k, int dim);
double bic_score(double log_likelihood, int k, int dim, std::int64_t n);
double bic(const GaussianMixture& model, const Matrix& data);

struct SweepResult {
  GaussianMixture best;
  int best_k = 0;
  std::vector<SweepEntry> table;
};

/// Lowest-BIC entry, ties to the smaller K. Returns nullopt if none
/// succeeded.
std::optional<std::size_t> select_min_bic(const std::vector<SweepEntry>& table);

/// Fits K = k_min..k_max (k-means init + EM, independent fits run in
/// parallel) and keeps the lowest-BIC model. Per-K failures are recorded in
/// the table; throws NumericalError if every K fails.
SweepResult train_sweep(const Matrix& data, int k_min, int k_max, std::uint64_t seed,
                        const EmOptions& options = {});

}  // namespace ecmlfd
