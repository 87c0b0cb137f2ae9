#pragma once

// Randomized records and pools shared by the unit and acceptance tests.

#include <cmath>
#include <string>

#include "ecmlfd/dataset.hpp"
#include "ecmlfd/rng.hpp"
#include "ecmlfd/se3.hpp"
#include "oracles.hpp"

namespace fixture {

inline ecmlfd::Rotation3 random_rotation(ecmlfd::Rng& rng) {
  return ecmlfd::to_rotation(
      ecmlfd::UnitQuaternion::normalized(rng.normal(), rng.normal(), rng.normal(), rng.normal()));
}

// Values over many magnitudes so the decimal form is exercised.
inline double random_value(ecmlfd::Rng& rng) {
  const double mag = std::pow(10.0, rng.uniform(-12.0, 6.0));
  return (rng.uniform() < 0.5 ? -1.0 : 1.0) * mag * rng.uniform();
}

inline ecmlfd::Vec3 random_vec(ecmlfd::Rng& rng) {
  return {random_value(rng), random_value(rng), random_value(rng)};
}

template <std::size_t N>
void fill(std::array<double, N>& a, ecmlfd::Rng& rng) {
  for (double& v : a) v = random_value(rng);
}

inline ecmlfd::DataRecord random_record(ecmlfd::Rng& rng, double timestamp) {
  ecmlfd::DataRecord r;
  r.timestamp = timestamp;
  fill(r.mtm_joints, rng);
  r.mtm_pos = random_vec(rng);
  r.mtm_rot = random_rotation(rng);
  fill(r.ecm_joints, rng);
  fill(r.psm1_joints, rng);
  fill(r.psm3_joints, rng);
  r.psm1_pos = random_vec(rng);
  r.psm1_rot = random_rotation(rng);
  r.psm3_pos = random_vec(rng);
  r.psm3_rot = random_rotation(rng);
  r.ecm_pos = random_vec(rng);
  r.ecm_rot = random_rotation(rng);
  for (double& g : r.gaze) g = rng.uniform(-0.5, 1.5);
  for (double& p : r.pupil_diameters) p = rng.uniform(2.0, 6.0);
  r.camera_moving = rng.uniform() < 0.7;
  return r;
}

// Sorted timestamps near epoch 1.6e9 with microsecond-ish spacing and
// occasional repeats.
inline ecmlfd::DataPool random_pool(ecmlfd::Rng& rng, std::size_t n) {
  ecmlfd::DataPool pool;
  pool.has_camera_moving = rng.uniform() < 0.8;
  if (rng.uniform() < 0.5) pool.provenance = "random pool " + std::to_string(rng.next());
  double t = 1.6e9 + rng.uniform(0, 1e6);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform() > 0.05) t += rng.uniform(1e-6, 0.05);
    pool.records.push_back(random_record(rng, t));
    if (!pool.has_camera_moving) pool.records.back().camera_moving = true;
  }
  return pool;
}

// Fully populated model over a random layout.
inline ecmlfd::GaussianMixture random_model(ecmlfd::Rng& rng) {
  const int k = 1 + static_cast<int>(rng.below(5));
  const int d = 2 + static_cast<int>(rng.below(8));
  ecmlfd::GaussianMixture m = oracle::random_mixture(k, d, rng, 1e3 * rng.uniform());
  for (auto& c : m.components) c.covariance = 0.5 * (c.covariance + c.covariance.transpose()).eval();
  for (int i = 0; i < d; ++i) m.dim_labels.push_back("dim_" + std::to_string(i));
  for (int i = 0; i < d; ++i) (i < d / 2 ? m.spec.input_dims : m.spec.output_dims).push_back(i);
  m.position_unit = rng.uniform() < 0.5 ? 1e-3 : 1.0;
  m.metadata.seed = rng.next();
  m.metadata.tol = rng.uniform() * 1e-6;
  m.metadata.max_iter = 300;
  m.metadata.log_likelihood = rng.normal() * 1e4;
  m.metadata.bic = rng.normal() * 1e4;
  m.metadata.n_train = rng.below(100000);
  m.metadata.preset = "positions";
  m.metadata.bic_table.push_back({1, rng.normal(), rng.normal(), 12, ""});
  m.metadata.bic_table.push_back({2, std::nullopt, std::nullopt, 3, "EM: component 1 collapsed"});
  return m;
}

}  // namespace fixture
