#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ecmlfd/ecm_kinematics.hpp"
#include "ecmlfd/workspace.hpp"

namespace ecmlfd {

/// Arm setup for replay: where the remote center sits in the robot base
/// frame, plus optional DH and joint-limit overrides.
struct PipelineConfig {
  RcmConfig rcm;
  EcmDhTable dh;
  JointLimits limits;
};

/// JSON document:
///   {
///     "base_to_rcm": {"rotation": [9 numbers, row-major], "translation": [x, y, z]},
///     "dh": [{"kind": "R"|"P", "d": .., "theta": .., "a": .., "alpha": ..} ×4],   optional
///     "joint_limits": {"q1": [lo, hi], ...}                                      optional, any subset
///   }
/// Unknown keys are rejected. Throws ConfigError.
PipelineConfig parse_config(std::string_view text);
PipelineConfig read_config(const std::filesystem::path& path);

std::string config_to_json(const PipelineConfig& config);

}  // namespace ecmlfd
