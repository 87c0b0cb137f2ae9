#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ecmlfd/gmm.hpp"

namespace ecmlfd {

inline constexpr int kModelFormatVersion = 1;

/// JSON model document:
///   format        "ecmlfd-gmm"
///   version       1
///   dim_labels    [D strings]
///   position_unit meters per unit of the position dimensions
///   spec          {input_dims: [int], output_dims: [int]}
///   K             component count
///   priors        [K]
///   means         [K][D]
///   covariances   [K][D·D], row-major
///   training      {seed, tol, max_iter, log_likelihood, bic, n_train, preset,
///                  bic_table: [{k, log_likelihood|null, bic|null, iterations, error}]}
/// Doubles are written in shortest round-trip form, so reading a written
/// model reproduces every parameter bit for bit.
std::string model_to_json(const GaussianMixture& model);

/// Throws DataError naming the first missing or malformed field.
GaussianMixture model_from_json(std::string_view text);

void write_model(const GaussianMixture& model, const std::filesystem::path& path);
GaussianMixture read_model(const std::filesystem::path& path);

}  // namespace ecmlfd
