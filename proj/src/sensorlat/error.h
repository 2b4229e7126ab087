// Copyright 2026 The sensorlat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SENSORLAT_ERROR_H_
#define SENSORLAT_ERROR_H_

#include <stdexcept>
#include <string>

namespace sensorlat {

enum class ErrorCode {
  kConfig,
  kDomain,
  kSingularity,
  kProjection,
  kIo,
};

// Process exit code of the command-line tool for a failure category:
// 2 config, 3 domain/singularity, 4 I/O.
constexpr int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
      return 2;
    case ErrorCode::kDomain:
    case ErrorCode::kSingularity:
    case ErrorCode::kProjection:
      return 3;
    case ErrorCode::kIo:
      return 4;
  }
  return 1;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorCode::kConfig, message) {}
};

// Input outside the mathematical domain of a model or control formula, e.g.
// |d * kappa| >= 1 or |gamma| >= pi/2.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorCode::kDomain, message) {}
};

// The path-frame state reached the curvature center (1 - e * kappa -> 0) or
// an integration produced non-finite values.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& message)
      : Error(ErrorCode::kSingularity, message) {}
};

// Closest-point search did not converge.
class ProjectionError : public Error {
 public:
  explicit ProjectionError(const std::string& message)
      : Error(ErrorCode::kProjection, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorCode::kIo, message) {}
};

}  // namespace sensorlat

#endif  // SENSORLAT_ERROR_H_
