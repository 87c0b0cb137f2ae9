#include "ecmlfd/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "ecmlfd/ecm_kinematics.hpp"
#include "ecmlfd/errors.hpp"
#include "ecmlfd/gmr.hpp"
#include "ecmlfd/rng.hpp"

namespace ecmlfd {

namespace {

constexpr std::uint64_t kSplitStream = 0x5eed5917;

void append_arm(std::vector<std::string>& labels, const std::string& arm, bool quaternion) {
  if (quaternion) {
    for (const char* s : {"_qw", "_qx", "_qy", "_qz"}) labels.push_back(arm + s);
  } else {
    for (const char* s : {"_x", "_y", "_z"}) labels.push_back(arm + s);
  }
}

const std::vector<std::string> kSourceNames{"psm1", "psm3", "ecm"};
const std::vector<std::string> kComponentSuffixes{"x", "y", "z", "qw", "qx", "qy", "qz"};
const std::vector<std::string> kGazeSuffixes{"lx", "ly", "rx", "ry", "bx", "by"};

}  // namespace

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::Positions:
      return "positions";
    case Preset::Orientations:
      return "orientations";
    case Preset::Gaze:
      return "gaze";
  }
  return "?";
}

Preset parse_preset(std::string_view name) {
  if (name == "positions") return Preset::Positions;
  if (name == "orientations" || name == "positions+orientations") return Preset::Orientations;
  if (name == "gaze" || name == "positions+orientations+gaze") return Preset::Gaze;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

PresetLayout preset_layout(Preset p) {
  PresetLayout layout;
  auto& l = layout.labels;
  append_arm(l, "psm1", false);
  append_arm(l, "psm3", false);
  if (p != Preset::Positions) {
    append_arm(l, "psm1", true);
    append_arm(l, "psm3", true);
  }
  if (p == Preset::Gaze) {
    l.push_back("gaze_bx");
    l.push_back("gaze_by");
  }
  const int n_in = static_cast<int>(l.size());
  append_arm(l, "ecm", false);
  if (p != Preset::Positions) append_arm(l, "ecm", true);
  for (int i = 0; i < static_cast<int>(l.size()); ++i) {
    (i < n_in ? layout.spec.input_dims : layout.spec.output_dims).push_back(i);
  }
  return layout;
}

std::optional<Preset> preset_from_labels(const std::vector<std::string>& labels) {
  for (Preset p : {Preset::Positions, Preset::Orientations, Preset::Gaze}) {
    if (preset_layout(p).labels == labels) return p;
  }
  return std::nullopt;
}

FeatureExtractor::FeatureExtractor(std::vector<std::string> labels, double position_unit)
    : labels_(std::move(labels)), position_unit_(position_unit) {
  if (!(position_unit > 0.0)) throw std::invalid_argument("position unit must be positive");
  for (const std::string& label : labels_) {
    const auto us = label.find('_');
    if (us == std::string::npos) throw DataError("unknown feature label '" + label + "'");
    const std::string source = label.substr(0, us);
    const std::string suffix = label.substr(us + 1);
    std::optional<Slot> slot;
    if (source == "gaze") {
      const auto it = std::find(kGazeSuffixes.begin(), kGazeSuffixes.end(), suffix);
      if (it != kGazeSuffixes.end()) slot = Slot{3, static_cast<int>(it - kGazeSuffixes.begin())};
    } else {
      const auto src = std::find(kSourceNames.begin(), kSourceNames.end(), source);
      const auto comp = std::find(kComponentSuffixes.begin(), kComponentSuffixes.end(), suffix);
      if (src != kSourceNames.end() && comp != kComponentSuffixes.end()) {
        slot = Slot{static_cast<int>(src - kSourceNames.begin()),
                    static_cast<int>(comp - kComponentSuffixes.begin())};
      }
    }
    if (!slot) throw DataError("unknown feature label '" + label + "'");
    slots_.push_back(*slot);
  }
}

Vector FeatureExtractor::extract(const DataRecord& r) const {
  const Vec3* positions[] = {&r.psm1_pos, &r.psm3_pos, &r.ecm_pos};
  const Rotation3* rotations[] = {&r.psm1_rot, &r.psm3_rot, &r.ecm_rot};
  std::array<std::optional<UnitQuaternion>, 3> quats;
  Vector out(static_cast<Eigen::Index>(slots_.size()));
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const Slot& s = slots_[i];
    double v = 0.0;
    if (s.source == 3) {
      v = r.gaze[static_cast<std::size_t>(s.index)];
    } else if (s.index < 3) {
      v = (*positions[s.source])(s.index) / position_unit_;
    } else {
      auto& q = quats[static_cast<std::size_t>(s.source)];
      if (!q) q = to_quaternion(*rotations[s.source]);
      v = q->components()[static_cast<std::size_t>(s.index - 3)];
    }
    out(static_cast<Eigen::Index>(i)) = v;
  }
  return out;
}

Matrix build_training_matrix(const DataPool& pool, const std::vector<std::string>& labels,
                             const ConditionalSpec& spec) {
  const FeatureExtractor fx(labels);
  Matrix m(static_cast<Eigen::Index>(pool.size()), static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < pool.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = fx.extract(pool.records[i]).transpose();
  }
  // Output quaternion groups: four consecutive output dims ending in _qw.._qz.
  for (std::size_t j = 0; j + 3 < spec.output_dims.size(); ++j) {
    const int d = spec.output_dims[j];
    const std::string& lab = labels[static_cast<std::size_t>(d)];
    if (lab.size() < 3 || lab.compare(lab.size() - 3, 3, "_qw") != 0) continue;
    for (Eigen::Index i = 1; i < m.rows(); ++i) {
      const double dot = m.block(i, d, 1, 4).cwiseProduct(m.block(i - 1, d, 1, 4)).sum();
      if (dot < 0.0) m.block(i, d, 1, 4) *= -1.0;
    }
  }
  return m;
}

std::pair<DataPool, DataPool> training_split(const DataPool& pool, double train_fraction,
                                             std::uint64_t seed) {
  const DataPool moving = pool.has_camera_moving ? filter_camera_moving(pool) : pool;
  return split(moving, train_fraction, derive_seed(seed, kSplitStream));
}

TrainResult train_model(const DataPool& pool, const TrainOptions& options) {
  if (options.k_min < 1 || options.k_max < options.k_min) {
    throw ConfigError("k range must satisfy 1 <= k_min <= k_max");
  }
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
    throw ConfigError("split fraction must lie in (0, 1)");
  }
  const PresetLayout layout = preset_layout(options.preset);
  auto [train, validation] = training_split(pool, options.train_fraction, options.seed);
  if (train.size() < static_cast<std::size_t>(options.k_max)) {
    throw DataError("training part has " + std::to_string(train.size()) + " rows, fewer than k_max = " +
                    std::to_string(options.k_max));
  }
  const Matrix data = build_training_matrix(train, layout.labels, layout.spec);
  SweepResult sweep = train_sweep(data, options.k_min, options.k_max, options.seed, options.em);

  TrainResult result;
  result.model = std::move(sweep.best);
  result.model.dim_labels = layout.labels;
  result.model.position_unit = kModelPositionUnit;
  result.model.spec = layout.spec;
  result.model.metadata.preset = std::string(preset_name(options.preset));
  result.best_k = sweep.best_k;
  result.table = std::move(sweep.table);
  result.n_train = train.size();
  result.n_validation = validation.size();
  if (!validation.empty()) result.validation = evaluate_model(result.model, validation, options.preset);
  return result;
}

ErrorReport evaluate_model(const GaussianMixture& model, const DataPool& pool, std::optional<Preset> preset) {
  if (preset && model.dim_labels != preset_layout(*preset).labels) {
    throw DataError("model dim labels do not match preset '" + std::string(preset_name(*preset)) + "'");
  }
  if (pool.empty()) throw DataError("evaluation pool is empty");
  const CameraPredictor predictor(model, model.spec);
  const FeatureExtractor fx(predictor.input_labels(), model.position_unit);

  std::vector<Vec3> pred_pos, true_pos;
  std::vector<UnitQuaternion> pred_q, true_q;
  pred_pos.reserve(pool.size());
  true_pos.reserve(pool.size());
  for (const DataRecord& r : pool.records) {
    const CameraPrediction p = predictor.predict(fx.extract(r));
    pred_pos.push_back(p.position);
    true_pos.push_back(r.ecm_pos);
    if (p.orientation) {
      pred_q.push_back(*p.orientation);
      true_q.push_back(to_quaternion(r.ecm_rot));
    }
  }
  ErrorReport report;
  report.n = pool.size();
  report.position = position_error_stats(pred_pos, true_pos);
  if (predictor.predicts_orientation()) report.orientation = angular_offset_stats(pred_q, true_q);
  return report;
}

std::string_view step_status_name(StepStatus s) {
  switch (s) {
    case StepStatus::Valid:
      return "valid";
    case StepStatus::Held:
      return "held";
    case StepStatus::Skipped:
      return "skipped";
  }
  return "?";
}

ReplayResult replay(const GaussianMixture& model, const DataPool& pool, const ReplayOptions& options) {
  const PipelineConfig& cfg = options.config;
  const WorkspaceBounds bounds = bounds_from_limits(cfg.limits, cfg.dh);
  check_buffer_feasible(bounds, cfg.limits, options.buffer);
  const CameraPredictor predictor(model, model.spec);
  const FeatureExtractor fx(predictor.input_labels(), model.position_unit);
  const Transform rcm_from_base = invert(cfg.rcm.base_to_rcm);

  ReplayResult result;
  result.steps.reserve(pool.size());
  std::optional<Transform> last_valid;
  for (const DataRecord& r : pool.records) {
    const CameraPrediction p = predictor.predict(fx.extract(r));
    const Vec3& position_base = p.position;
    ReplayStep step;
    step.timestamp = r.timestamp;
    bool reachable = true;
    if (p.orientation) {
      step.predicted = to_rcm_frame({to_rotation(*p.orientation), position_base}, cfg.rcm);
    } else {
      const Vec3 position_rcm = rcm_from_base.apply(position_base);
      try {
        const PositionJoints q = solve_position(position_rcm, cfg.dh, cfg.limits);
        const Transform fk = forward_kinematics({q.q1, q.q2, q.q3, 0.0}, cfg.dh);
        step.predicted = Transform(fk.rotation(), position_rcm);
      } catch (const UnreachableError&) {
        step.predicted = Transform(Rotation3(), position_rcm);
        reachable = false;
      }
    }
    if (reachable) {
      step.verdict = validate_pose(step.predicted, bounds, options.buffer, cfg.limits);
    } else {
      step.verdict = classify_position(step.predicted.translation(), bounds, options.buffer);
      step.verdict.valid = false;
    }

    if (step.verdict.valid) {
      ++result.valid;
      step.status = StepStatus::Valid;
      step.emitted = step.predicted;
      last_valid = step.predicted;
    } else {
      ++result.rejected;
      if (last_valid) {
        ++result.held;
        step.status = StepStatus::Held;
        step.emitted = last_valid;
      } else {
        ++result.skipped;
        step.status = StepStatus::Skipped;
      }
    }
    result.steps.push_back(std::move(step));
  }
  return result;
}

Series parse_series(std::string_view name) {
  if (name == "ecm") return Series::Ecm;
  if (name == "psm1") return Series::Psm1;
  if (name == "psm3") return Series::Psm3;
  throw ConfigError("unknown series '" + std::string(name) + "'");
}

double median_sample_interval(const DataPool& pool) {
  if (pool.size() < 2) throw DataError("need at least two records for a sample interval");
  std::vector<double> dts;
  dts.reserve(pool.size() - 1);
  for (std::size_t i = 1; i < pool.size(); ++i) {
    const double dt = pool.records[i].timestamp - pool.records[i - 1].timestamp;
    if (dt > 0.0) dts.push_back(dt);
  }
  if (dts.empty()) throw DataError("no positive sample interval in pool");
  std::sort(dts.begin(), dts.end());
  const std::size_t m = dts.size() / 2;
  return dts.size() % 2 ? dts[m] : 0.5 * (dts[m - 1] + dts[m]);
}

SmoothnessReport pool_smoothness(const DataPool& pool, Series series) {
  if (pool.size() < 4) throw DataError("smoothness needs at least 4 records");
  std::vector<Vec3> xs;
  xs.reserve(pool.size());
  for (const DataRecord& r : pool.records) {
    xs.push_back(series == Series::Ecm ? r.ecm_pos : series == Series::Psm1 ? r.psm1_pos : r.psm3_pos);
  }
  SmoothnessReport rep;
  rep.n = xs.size();
  rep.dt = median_sample_interval(pool);
  rep.dlj = dimensionless_jerk(xs, rep.dt);
  rep.ldlj = ldlj(xs, rep.dt);
  return rep;
}

}  // namespace ecmlfd
