#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ecmlfd/gmm.hpp"
#include "ecmlfd/se3.hpp"

namespace ecmlfd {

struct RegressionOutput {
  Vector mean;
  Matrix covariance;
  Vector responsibilities;
};

/// Precomputed conditioning of a mixture on a fixed set of input
/// dimensions. Immutable after construction; condition() and
/// predict_means() are safe to call concurrently.
class GmrConditioner {
 public:
  /// Throws NumericalError if an input-block covariance is not positive
  /// definite, std::invalid_argument on an invalid spec.
  GmrConditioner(const GaussianMixture& model, ConditionalSpec spec);

  const ConditionalSpec& spec() const { return spec_; }
  int input_size() const { return static_cast<int>(spec_.input_dims.size()); }
  int output_size() const { return static_cast<int>(spec_.output_dims.size()); }

  /// Responsibilities hₖ ∝ πₖ N(x; μₖ,in, Σₖ,in,in); mean Σₖ hₖ mₖ(x) with
  /// mₖ(x) = μₖ,out + Σₖ,out,in Σₖ,in,in⁻¹ (x − μₖ,in); covariance by the law
  /// of total variance.
  RegressionOutput condition(const Vector& x) const;

  /// Conditional means for every row of `inputs` (OpenMP over rows).
  Matrix predict_means(const Matrix& inputs) const;

 private:
  struct Part {
    double log_weight_norm = 0.0;
    Vector mean_in;
    Vector mean_out;
    Matrix chol_in;     // lower Cholesky factor of Σin,in
    Matrix gain;        // Σout,in Σin,in⁻¹
    Matrix cond_cov;    // Σout,out − gain Σin,out
  };

  Vector responsibilities(const Vector& x) const;

  ConditionalSpec spec_;
  std::vector<Part> parts_;
};

/// One-shot conditioning; see GmrConditioner::condition.
RegressionOutput gmr_condition(const GaussianMixture& model, const Vector& x,
                               const ConditionalSpec& spec);

/// Named input values; order need not match the model.
struct LabeledVector {
  std::vector<std::string> labels;
  Vector values;
};

struct CameraPrediction {
  Vec3 position;
  std::optional<UnitQuaternion> orientation;
  RegressionOutput regression;
};

/// Labels of the camera outputs a pose model must predict.
inline const std::vector<std::string> kCameraPositionLabels{"ecm_x", "ecm_y", "ecm_z"};
inline const std::vector<std::string> kCameraQuaternionLabels{"ecm_qw", "ecm_qx", "ecm_qy", "ecm_qz"};

/// Maps labeled inputs onto a model and splits the regression output into a
/// camera position in meters (scaled by the model's position unit) and, when
/// the model predicts one, a canonical unit quaternion.
class CameraPredictor {
 public:
  /// Throws DataError if the model lacks dim labels or its outputs lack the
  /// camera position labels.
  CameraPredictor(const GaussianMixture& model, const ConditionalSpec& spec);

  const std::vector<std::string>& input_labels() const { return input_labels_; }
  bool predicts_orientation() const { return quat_slots_.has_value(); }

  /// Throws DataError if an input label is missing, NumericalError if the
  /// raw quaternion norm is below 1e-3.
  CameraPrediction predict(const LabeledVector& inputs) const;
  /// Inputs already in input_labels() order.
  CameraPrediction predict(const Vector& ordered_inputs) const;

 private:
  GmrConditioner conditioner_;
  std::vector<std::string> input_labels_;
  double position_unit_ = 1.0;
  std::array<int, 3> pos_slots_{};
  std::optional<std::array<int, 4>> quat_slots_;
};

CameraPrediction predict_camera_pose(const GaussianMixture& model, const LabeledVector& inputs,
                                     const ConditionalSpec& spec);

inline constexpr double kMinQuaternionNorm = 1e-3;

}  // namespace ecmlfd
