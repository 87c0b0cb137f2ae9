#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecmlfd/config.hpp"
#include "ecmlfd/dataset.hpp"
#include "ecmlfd/gmm.hpp"
#include "ecmlfd/metrics.hpp"
#include "ecmlfd/workspace.hpp"

namespace ecmlfd {

/// Input tiers. Outputs are always the camera position, plus the camera
/// quaternion from the orientation tier on.
///   positions     psm1_x..z psm3_x..z                        -> ecm_x..z             (D = 9)
///   orientations  + psm1_qw..qz psm3_qw..qz                  -> ecm_x..z ecm_qw..qz  (D = 21)
///   gaze          + gaze_bx gaze_by                          -> same                 (D = 23)
enum class Preset { Positions, Orientations, Gaze };

std::string_view preset_name(Preset p);
/// Accepts the names above and the long forms "positions+orientations" and
/// "positions+orientations+gaze". Throws ConfigError.
Preset parse_preset(std::string_view name);

struct PresetLayout {
  std::vector<std::string> labels;  // inputs first, then outputs
  ConditionalSpec spec;
};
PresetLayout preset_layout(Preset p);
std::optional<Preset> preset_from_labels(const std::vector<std::string>& labels);

/// Pipeline models store positions in millimeters (GaussianMixture::
/// position_unit = 1e-3 m); rotations enter as quaternions and gaze in
/// normalized screen units.
inline constexpr double kModelPositionUnit = 1e-3;

/// Reads labeled features out of records. Known labels:
/// {psm1,psm3,ecm}_{x,y,z,qw,qx,qy,qz} and gaze_{lx,ly,rx,ry,bx,by}.
class FeatureExtractor {
 public:
  /// Positions are divided by `position_unit` (meters per model unit).
  /// Throws DataError on an unknown label.
  explicit FeatureExtractor(std::vector<std::string> labels, double position_unit = kModelPositionUnit);

  const std::vector<std::string>& labels() const { return labels_; }
  Vector extract(const DataRecord& r) const;

 private:
  struct Slot {
    int source;  // 0 psm1, 1 psm3, 2 ecm, 3 gaze
    int index;   // 0..2 position, 3..6 quaternion; gaze index
  };
  std::vector<std::string> labels_;
  std::vector<Slot> slots_;
  double position_unit_;
};

/// One row per record in `labels` order. Output-side quaternion groups are
/// sign-aligned with the previous row so each trajectory stays in one
/// hemisphere; input quaternions are canonical.
Matrix build_training_matrix(const DataPool& pool, const std::vector<std::string>& labels,
                             const ConditionalSpec& spec);

/// Filters to camera_moving rows when the flag is present, then splits with
/// a stream derived from `seed`. Training and evaluation share this.
std::pair<DataPool, DataPool> training_split(const DataPool& pool, double train_fraction,
                                             std::uint64_t seed);

struct TrainOptions {
  Preset preset = Preset::Positions;
  int k_min = 1;
  int k_max = 10;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  EmOptions em;
};

struct TrainResult {
  GaussianMixture model;
  int best_k = 0;
  std::vector<SweepEntry> table;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  std::optional<ErrorReport> validation;  // unset for an empty validation part
};

/// Throws ConfigError on a bad k range or fraction, DataError when the
/// training part has fewer rows than k_max, NumericalError if no K fits.
TrainResult train_model(const DataPool& pool, const TrainOptions& options);

/// Prediction error of `model` on every record of `pool`. If `preset` is
/// given the model's dim labels must match it. Throws DataError on a label
/// mismatch or an empty pool.
ErrorReport evaluate_model(const GaussianMixture& model, const DataPool& pool,
                           std::optional<Preset> preset = std::nullopt);

enum class StepStatus { Valid, Held, Skipped };
std::string_view step_status_name(StepStatus s);

struct ReplayStep {
  double timestamp = 0.0;
  Transform predicted;             // RCM frame
  Verdict verdict;
  StepStatus status = StepStatus::Skipped;
  std::optional<Transform> emitted;  // RCM frame, unset when skipped
};

struct ReplayResult {
  std::vector<ReplayStep> steps;
  std::size_t valid = 0;
  std::size_t rejected = 0;
  std::size_t held = 0;     // rejected with a previous valid pose to hold
  std::size_t skipped = 0;  // rejected before any valid pose
};

struct ReplayOptions {
  PipelineConfig config;
  Buffer buffer = Buffer::defaults();
};

/// Ordered pass: predict, move into the RCM frame, validate, then emit the
/// prediction or hold the last valid pose. Models without an orientation
/// output get the roll-zero orientation of the arm at the predicted
/// position. Throws ConfigError when the buffer admits no pose.
ReplayResult replay(const GaussianMixture& model, const DataPool& pool, const ReplayOptions& options);

enum class Series { Ecm, Psm1, Psm3 };
/// "ecm", "psm1", "psm3"; throws ConfigError.
Series parse_series(std::string_view name);

struct SmoothnessReport {
  std::size_t n = 0;
  double dt = 0.0;
  double dlj = 0.0;
  double ldlj = 0.0;
};

/// Median positive sample interval. Throws DataError with fewer than two
/// records or no positive interval.
double median_sample_interval(const DataPool& pool);

/// LDLJ of a position series at the pool's median sample interval.
SmoothnessReport pool_smoothness(const DataPool& pool, Series series);

}  // namespace ecmlfd
