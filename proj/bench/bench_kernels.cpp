// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "ecmlfd/ecm_kinematics.hpp"
#include "ecmlfd/gmm.hpp"
#include "ecmlfd/gmm_kernels.hpp"
#include "ecmlfd/gmr.hpp"
#include "ecmlfd/rng.hpp"
#include "ecmlfd/workspace.hpp"

using namespace ecmlfd;

namespace {

Matrix random_data(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double shift = static_cast<double>(i % 4) * 3.0;
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rng.normal() + shift;
  }
  return m;
}

struct Fixture {
  Matrix data;
  GaussianMixture model;
  Matrix resp;
};

Fixture make_fixture(Eigen::Index n, Eigen::Index d, int k) {
  Fixture f;
  f.data = random_data(n, d, 11);
  f.model = kmeans_init(f.data, k, 3);
  const auto cache = kernels::prepare_components(f.model);
  f.resp.resize(n, k);
  kernels::weighted_log_densities(f.data, cache, f.resp);
  kernels::normalize_responsibilities(f.resp);
  return f;
}

void BM_EStep_Parallel(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 9, 8);
  Matrix out(f.data.rows(), f.model.size());
  for (auto _ : state) {
    const auto cache = kernels::prepare_components(f.model);
    kernels::weighted_log_densities(f.data, cache, out);
    benchmark::DoNotOptimize(kernels::normalize_responsibilities(out));
  }
}

void BM_EStep_Serial(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 9, 8);
  Matrix out(f.data.rows(), f.model.size());
  for (auto _ : state) {
    kernels::serial::weighted_log_densities(f.data, f.model, out);
    benchmark::DoNotOptimize(kernels::serial::normalize_responsibilities(out));
  }
}

void BM_MStep_Parallel(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 9, 8);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::mstep_statistics(f.data, f.resp));
}

void BM_MStep_Serial(benchmark::State& state) {
  const Fixture f = make_fixture(state.range(0), 9, 8);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::mstep_statistics(f.data, f.resp));
}

void BM_Assign_Parallel(benchmark::State& state) {
  const Matrix data = random_data(state.range(0), 9, 5);
  const Matrix centroids = random_data(10, 9, 6);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::assign_nearest(data, centroids));
}

void BM_Assign_Serial(benchmark::State& state) {
  const Matrix data = random_data(state.range(0), 9, 5);
  const Matrix centroids = random_data(10, 9, 6);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::assign_nearest(data, centroids));
}

Fixture make_gmr_fixture(Eigen::Index n) {
  Fixture f = make_fixture(n, 9, 6);
  f.model.spec = {{0, 1, 2, 3, 4, 5}, {6, 7, 8}};
  return f;
}

void BM_Gmr_Batch(benchmark::State& state) {
  const Fixture f = make_gmr_fixture(state.range(0));
  const GmrConditioner c(f.model, f.model.spec);
  const Matrix inputs = f.data.leftCols(6);
  for (auto _ : state) benchmark::DoNotOptimize(c.predict_means(inputs));
}

void BM_Gmr_PerSample(benchmark::State& state) {
  const Fixture f = make_gmr_fixture(state.range(0));
  const GmrConditioner c(f.model, f.model.spec);
  const Matrix inputs = f.data.leftCols(6);
  for (auto _ : state) {
    Matrix out(inputs.rows(), 3);
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) out.row(i) = c.condition(inputs.row(i).transpose()).mean.transpose();
    benchmark::DoNotOptimize(out);
  }
}

std::vector<Transform> grid_poses(int per_axis) {
  const JointLimits lim;
  std::vector<Transform> poses;
  auto lin = [](const Interval& iv, int i, int n) { return iv.lower + iv.width() * i / (n - 1); };
  for (int a = 0; a < per_axis; ++a)
    for (int b = 0; b < per_axis; ++b)
      for (int c = 0; c < per_axis; ++c)
        for (int d = 0; d < per_axis; ++d)
          poses.push_back(forward_kinematics({lin(lim.q1, a, per_axis), lin(lim.q2, b, per_axis),
                                              lin(lim.q3, c, per_axis), lin(lim.q4, d, per_axis)}));
  return poses;
}

void BM_Workspace_Parallel(benchmark::State& state) {
  const auto poses = grid_poses(static_cast<int>(state.range(0)));
  const JointLimits lim;
  const WorkspaceBounds b = bounds_from_limits(lim);
  for (auto _ : state) benchmark::DoNotOptimize(validate_poses(poses, b, {}, lim));
}

void BM_Workspace_Serial(benchmark::State& state) {
  const auto poses = grid_poses(static_cast<int>(state.range(0)));
  const JointLimits lim;
  const WorkspaceBounds b = bounds_from_limits(lim);
  for (auto _ : state) {
    std::size_t ok = 0;
    for (const Transform& p : poses) ok += validate_pose(p, b, {}, lim).valid;
    benchmark::DoNotOptimize(ok);
  }
}

}  // namespace

BENCHMARK(BM_EStep_Parallel)->Arg(5000)->Arg(50000);
BENCHMARK(BM_EStep_Serial)->Arg(5000)->Arg(50000);
BENCHMARK(BM_MStep_Parallel)->Arg(5000)->Arg(50000);
BENCHMARK(BM_MStep_Serial)->Arg(5000)->Arg(50000);
BENCHMARK(BM_Assign_Parallel)->Arg(50000);
BENCHMARK(BM_Assign_Serial)->Arg(50000);
BENCHMARK(BM_Gmr_Batch)->Arg(10000);
BENCHMARK(BM_Gmr_PerSample)->Arg(10000);
BENCHMARK(BM_Workspace_Parallel)->Arg(20);
BENCHMARK(BM_Workspace_Serial)->Arg(20);

BENCHMARK_MAIN();
