#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ecmlfd/se3.hpp"

namespace ecmlfd {

/// One synchronized sample of arm kinematics and surgeon gaze. Positions in
/// meters, joint values in the arms' native units, gaze in normalized
/// screen coordinates, pupil diameters in mm.
struct DataRecord {
  double timestamp = 0.0;  // epoch seconds
  std::array<double, 8> mtm_joints{};
  Vec3 mtm_pos = Vec3::Zero();
  Rotation3 mtm_rot;
  std::array<double, 4> ecm_joints{};
  std::array<double, 7> psm1_joints{};
  std::array<double, 7> psm3_joints{};
  Vec3 psm1_pos = Vec3::Zero();
  Rotation3 psm1_rot;
  Vec3 psm3_pos = Vec3::Zero();
  Rotation3 psm3_rot;
  Vec3 ecm_pos = Vec3::Zero();
  Rotation3 ecm_rot;
  std::array<double, 6> gaze{};  // LPOGx, LPOGy, RPOGx, RPOGy, BPOGx, BPOGy
  std::array<double, 2> pupil_diameters{};
  bool camera_moving = true;

  bool operator==(const DataRecord&) const = default;
};

/// Gaze beyond this range is tolerated but counted as tracker overshoot.
inline constexpr double kGazeLow = -0.5;
inline constexpr double kGazeHigh = 1.5;

struct DataPool {
  std::vector<DataRecord> records;
  std::string provenance;
  /// Whether the camera_moving column is present.
  bool has_camera_moving = true;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  bool operator==(const DataPool&) const = default;
};

/// Column names in file order. The final "camera_moving" column is
/// optional.
const std::vector<std::string>& pool_columns();

/// CSV pool: optional "# " provenance lines, a header row with the fixed
/// column order, then one row per record. Numbers use 17 significant
/// digits so reading reproduces every value exactly.
void write_pool(const DataPool& pool, std::ostream& out);
void write_pool(const DataPool& pool, const std::filesystem::path& path);

/// Throws DataError naming the column on a missing or reordered header and
/// the row index and column on a malformed cell.
DataPool read_pool(std::istream& in);
DataPool read_pool(const std::filesystem::path& path);

/// Time-sorted check; throws DataError if timestamps decrease.
void check_sorted(const DataPool& pool);

/// Records whose gaze lies outside [kGazeLow, kGazeHigh].
std::size_t count_gaze_overshoot(const DataPool& pool);

struct GazeSample {
  double timestamp = 0.0;
  std::array<double, 6> gaze{};
  std::array<double, 2> pupil_diameters{};
};

struct MergeResult {
  DataPool pool;
  std::size_t dropped = 0;
  /// Gaze minus kinematic timestamp for every kept pair.
  std::vector<double> skews;
};

/// Pairs every kinematic row with its nearest gaze row (ties to the earlier
/// gaze sample) and drops pairs further apart than max_skew. Gaze fields of
/// the kinematic rows are overwritten. Throws DataError on unsorted input.
MergeResult merge_streams(std::span<const DataRecord> kinematic, std::span<const GazeSample> gaze,
                          double max_skew);

/// Records with the camera_moving flag set. Throws DataError if the pool
/// has no such column.
DataPool filter_camera_moving(const DataPool& pool);

/// Assigns each record to the training part with probability
/// train_fraction, by an independent seeded draw. Order is preserved.
std::pair<DataPool, DataPool> split(const DataPool& pool, double train_fraction, std::uint64_t seed);

}  // namespace ecmlfd
