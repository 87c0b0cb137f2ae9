#pragma once

// Data-parallel inner loops of EM and k-means. The default kernels are
// OpenMP-parallel over fixed-size row blocks and combine partial sums in
// block order, so results do not depend on the thread count. The `serial`
// namespace holds straightforward single-threaded versions computed by a
// different route (explicit inverses, per-sample loops); tests compare the
// two.

#include <cstddef>
#include <span>
#include <vector>

#include "ecmlfd/gmm.hpp"

namespace ecmlfd::kernels {

inline constexpr Eigen::Index kRowBlock = 256;

/// Per-component quantities reused across samples: Cholesky factor of Σ
/// and ln πₖ − ½D ln 2π − ½ ln|Σ|.
struct ComponentCache {
  Vector mean;
  Matrix chol_lower;
  double log_weight_norm = 0.0;
};

/// Throws NumericalError naming the first component whose covariance is not
/// positive definite.
std::vector<ComponentCache> prepare_components(const GaussianMixture& model);

/// out(n, k) = ln πₖ + ln N(xₙ; μₖ, Σₖ).
void weighted_log_densities(const Matrix& data, std::span<const ComponentCache> cache, Matrix& out);

/// Turns each row of weighted log densities into responsibilities in place
/// and returns Σₙ ln Σₖ exp(row).
double normalize_responsibilities(Matrix& log_resp);

struct MStepStats {
  Vector mass;                   // Nₖ
  Matrix means;                  // K×D
  std::vector<Matrix> scatter;   // Σₙ rₙₖ (xₙ − μₖ)(xₙ − μₖ)ᵀ
};

MStepStats mstep_statistics(const Matrix& data, const Matrix& resp);

/// Index of the nearest centroid (rows of `centroids`) for every sample;
/// ties go to the lower index.
std::vector<int> assign_nearest(const Matrix& data, const Matrix& centroids);

namespace serial {

void weighted_log_densities(const Matrix& data, const GaussianMixture& model, Matrix& out);
double normalize_responsibilities(Matrix& log_resp);
MStepStats mstep_statistics(const Matrix& data, const Matrix& resp);
std::vector<int> assign_nearest(const Matrix& data, const Matrix& centroids);

}  // namespace serial

}  // namespace ecmlfd::kernels
