#include "ecmlfd/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include "ecmlfd/errors.hpp"
#include "ecmlfd/rng.hpp"

namespace ecmlfd {

void check_sorted(const DataPool& pool) {
  for (std::size_t i = 0; i < pool.records.size(); ++i) {
    if (!std::isfinite(pool.records[i].timestamp)) {
      throw DataError("row " + std::to_string(i) + ": non-finite timestamp");
    }
    if (i > 0 && pool.records[i].timestamp < pool.records[i - 1].timestamp) {
      throw DataError("row " + std::to_string(i) + ": timestamp decreases");
    }
  }
}

std::size_t count_gaze_overshoot(const DataPool& pool) {
  std::size_t n = 0;
  for (const DataRecord& r : pool.records) {
    for (double g : r.gaze) {
      if (g < kGazeLow || g > kGazeHigh) {
        ++n;
        break;
      }
    }
  }
  return n;
}

MergeResult merge_streams(std::span<const DataRecord> kinematic, std::span<const GazeSample> gaze,
                          double max_skew) {
  if (!(max_skew >= 0.0)) throw std::invalid_argument("merge_streams: max_skew must be >= 0");
  for (std::size_t i = 1; i < kinematic.size(); ++i) {
    if (!(kinematic[i].timestamp >= kinematic[i - 1].timestamp)) {
      throw DataError("kinematic stream not time-sorted at row " + std::to_string(i));
    }
  }
  for (std::size_t i = 1; i < gaze.size(); ++i) {
    if (!(gaze[i].timestamp >= gaze[i - 1].timestamp)) {
      throw DataError("gaze stream not time-sorted at row " + std::to_string(i));
    }
  }

  MergeResult result;
  if (gaze.empty()) {
    result.dropped = kinematic.size();
    return result;
  }
  // j is the last gaze sample at or before the kinematic time (or 0); it
  // only moves forward because both streams are sorted.
  std::size_t j = 0;
  for (const DataRecord& k : kinematic) {
    while (j + 1 < gaze.size() && gaze[j + 1].timestamp <= k.timestamp) ++j;
    std::size_t best = j;
    if (j + 1 < gaze.size()) {
      const double before = std::abs(k.timestamp - gaze[j].timestamp);
      const double after = std::abs(gaze[j + 1].timestamp - k.timestamp);
      if (after < before) best = j + 1;
    }
    const double skew = gaze[best].timestamp - k.timestamp;
    if (std::abs(skew) > max_skew) {
      ++result.dropped;
      continue;
    }
    DataRecord merged = k;
    merged.gaze = gaze[best].gaze;
    merged.pupil_diameters = gaze[best].pupil_diameters;
    result.pool.records.push_back(merged);
    result.skews.push_back(skew);
  }
  return result;
}

DataPool filter_camera_moving(const DataPool& pool) {
  if (!pool.has_camera_moving) throw DataError("pool has no camera_moving column");
  DataPool out;
  out.provenance = pool.provenance;
  for (const DataRecord& r : pool.records) {
    if (r.camera_moving) out.records.push_back(r);
  }
  return out;
}

std::pair<DataPool, DataPool> split(const DataPool& pool, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split: train fraction must lie in (0, 1)");
  }
  DataPool train;
  DataPool validation;
  train.provenance = validation.provenance = pool.provenance;
  train.has_camera_moving = validation.has_camera_moving = pool.has_camera_moving;
  Rng rng(seed);
  for (const DataRecord& r : pool.records) {
    (rng.uniform() < train_fraction ? train : validation).records.push_back(r);
  }
  return {std::move(train), std::move(validation)};
}

}  // namespace ecmlfd
