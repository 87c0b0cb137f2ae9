#include "ecmlfd/gmr.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ecmlfd/errors.hpp"

namespace ecmlfd {

namespace {

Matrix select(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  }
  return out;
}

Vector select(const Vector& v, const std::vector<int>& idx) {
  Vector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

}  // namespace

GmrConditioner::GmrConditioner(const GaussianMixture& model, ConditionalSpec spec)
    : spec_(std::move(spec)) {
  if (model.components.empty()) throw std::invalid_argument("GMR: empty mixture");
  spec_.validate(model.dim());
  const auto& in = spec_.input_dims;
  const auto& out = spec_.output_dims;
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  parts_.reserve(model.components.size());
  for (std::size_t k = 0; k < model.components.size(); ++k) {
    const GaussianComponent& c = model.components[k];
    const Matrix s_ii = select(c.covariance, in, in);
    const Matrix s_oi = select(c.covariance, out, in);
    const Matrix s_oo = select(c.covariance, out, out);
    Eigen::LLT<Matrix> llt(s_ii);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("GMR: input covariance block of component " + std::to_string(k) +
                           " is singular");
    }
    Part p;
    p.chol_in = llt.matrixL();
    const double half_log_det = p.chol_in.diagonal().array().log().sum();
    if (!std::isfinite(half_log_det)) {
      throw NumericalError("GMR: input covariance block of component " + std::to_string(k) +
                           " is degenerate");
    }
    p.log_weight_norm = std::log(c.prior) - 0.5 * static_cast<double>(in.size()) * log_2pi - half_log_det;
    p.mean_in = select(c.mean, in);
    p.mean_out = select(c.mean, out);
    // gain = Σoi Σii⁻¹  ⇔  Σii gainᵀ = Σio
    p.gain = llt.solve(s_oi.transpose()).transpose();
    p.cond_cov = s_oo - p.gain * s_oi.transpose();
    p.cond_cov = 0.5 * (p.cond_cov + p.cond_cov.transpose());
    parts_.push_back(std::move(p));
  }
}

Vector GmrConditioner::responsibilities(const Vector& x) const {
  Vector logw(parts_.size());
  for (std::size_t k = 0; k < parts_.size(); ++k) {
    const Part& p = parts_[k];
    const Vector z = p.chol_in.triangularView<Eigen::Lower>().solve(x - p.mean_in);
    logw(k) = p.log_weight_norm - 0.5 * z.squaredNorm();
  }
  const double m = logw.maxCoeff();
  Vector h = (logw.array() - m).exp();
  return h / h.sum();
}

RegressionOutput GmrConditioner::condition(const Vector& x) const {
  if (x.size() != input_size()) {
    throw std::invalid_argument("GMR: expected " + std::to_string(input_size()) +
                                " inputs, got " + std::to_string(x.size()));
  }
  if (!x.allFinite()) throw DataError("GMR: input contains non-finite values");
  RegressionOutput out;
  out.responsibilities = responsibilities(x);
  const Eigen::Index o = output_size();
  out.mean = Vector::Zero(o);
  Matrix second = Matrix::Zero(o, o);
  for (std::size_t k = 0; k < parts_.size(); ++k) {
    const Part& p = parts_[k];
    const double h = out.responsibilities(k);
    const Vector mk = p.mean_out + p.gain * (x - p.mean_in);
    out.mean += h * mk;
    second += h * (p.cond_cov + mk * mk.transpose());
  }
  out.covariance = second - out.mean * out.mean.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

Matrix GmrConditioner::predict_means(const Matrix& inputs) const {
  if (inputs.cols() != input_size()) throw std::invalid_argument("GMR: input column count mismatch");
  Matrix out(inputs.rows(), output_size());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    const Vector x = inputs.row(i).transpose();
    const Vector h = responsibilities(x);
    Vector mean = Vector::Zero(output_size());
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      mean += h(k) * (parts_[k].mean_out + parts_[k].gain * (x - parts_[k].mean_in));
    }
    out.row(i) = mean.transpose();
  }
  return out;
}

RegressionOutput gmr_condition(const GaussianMixture& model, const Vector& x,
                               const ConditionalSpec& spec) {
  return GmrConditioner(model, spec).condition(x);
}

CameraPredictor::CameraPredictor(const GaussianMixture& model, const ConditionalSpec& spec)
    : conditioner_(model, spec), position_unit_(model.position_unit) {
  if (static_cast<int>(model.dim_labels.size()) != model.dim()) {
    throw DataError("model has no dimension labels");
  }
  for (int d : spec.input_dims) input_labels_.push_back(model.dim_labels[d]);

  auto output_slot = [&](const std::string& label) -> int {
    for (std::size_t i = 0; i < spec.output_dims.size(); ++i) {
      if (model.dim_labels[spec.output_dims[i]] == label) return static_cast<int>(i);
    }
    return -1;
  };
  for (std::size_t i = 0; i < 3; ++i) {
    pos_slots_[i] = output_slot(kCameraPositionLabels[i]);
    if (pos_slots_[i] < 0) throw DataError("model outputs lack " + kCameraPositionLabels[i]);
  }
  std::array<int, 4> q{};
  int found = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    q[i] = output_slot(kCameraQuaternionLabels[i]);
    if (q[i] >= 0) ++found;
  }
  if (found == 4) {
    quat_slots_ = q;
  } else if (found != 0) {
    throw DataError("model outputs carry a partial camera quaternion");
  }
}

CameraPrediction CameraPredictor::predict(const Vector& ordered_inputs) const {
  CameraPrediction out;
  out.regression = conditioner_.condition(ordered_inputs);
  const Vector& m = out.regression.mean;
  out.position = position_unit_ * Vec3(m(pos_slots_[0]), m(pos_slots_[1]), m(pos_slots_[2]));
  if (quat_slots_) {
    const auto& s = *quat_slots_;
    const double w = m(s[0]), x = m(s[1]), y = m(s[2]), z = m(s[3]);
    const double norm = std::sqrt(w * w + x * x + y * y + z * z);
    if (!(norm >= kMinQuaternionNorm)) {
      throw NumericalError("predicted quaternion is degenerate (norm " + std::to_string(norm) + ")");
    }
    out.orientation = UnitQuaternion::canonical(w, x, y, z);
  }
  return out;
}

CameraPrediction CameraPredictor::predict(const LabeledVector& inputs) const {
  if (inputs.labels.size() != static_cast<std::size_t>(inputs.values.size())) {
    throw std::invalid_argument("labeled vector has mismatched labels and values");
  }
  Vector ordered(input_labels_.size());
  for (std::size_t i = 0; i < input_labels_.size(); ++i) {
    const auto it = std::find(inputs.labels.begin(), inputs.labels.end(), input_labels_[i]);
    if (it == inputs.labels.end()) throw DataError("input '" + input_labels_[i] + "' not provided");
    ordered(i) = inputs.values(it - inputs.labels.begin());
  }
  return predict(ordered);
}

CameraPrediction predict_camera_pose(const GaussianMixture& model, const LabeledVector& inputs,
                                     const ConditionalSpec& spec) {
  return CameraPredictor(model, spec).predict(inputs);
}

}  // namespace ecmlfd
