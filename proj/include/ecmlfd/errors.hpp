#pragma once

#include <stdexcept>
#include <string>

namespace ecmlfd {

// Malformed or inconsistent input data: bad files, wrong columns, label
// mismatches. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation that cannot proceed: singular covariances, collapsed
// components, degenerate quaternions, static trajectories. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pose or position that no joint configuration reaches.
class UnreachableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid user configuration detected before any work starts. Exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ecmlfd
