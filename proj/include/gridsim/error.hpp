// Copyright 2026 The gridsim Authors
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

#ifndef GRIDSIM_ERROR_HPP_
#define GRIDSIM_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gridsim {

enum class ErrorKind {
  kInvalidDimension,
  kLayoutMismatch,
  kIndexOutOfRange,
  kInvalidArgument,
  kNumericRange,
  kConstructionQuality,
  kMeasurementUnderflow,
  kFitFailure,
  kConfig,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Codeword construction could not reach the stabilizer-expectation floor.
class ConstructionQualityError : public Error {
 public:
  ConstructionQualityError(const std::string& what, std::vector<double> achieved)
      : Error(ErrorKind::kConstructionQuality, what), achieved_(std::move(achieved)) {}
  const std::vector<double>& achieved() const noexcept { return achieved_; }

 private:
  std::vector<double> achieved_;
};

// Lifetime fit failed; carries the raw expectation series.
class FitFailureError : public Error {
 public:
  FitFailureError(const std::string& what, std::vector<double> series)
      : Error(ErrorKind::kFitFailure, what), series_(std::move(series)) {}
  const std::vector<double>& series() const noexcept { return series_; }

 private:
  std::vector<double> series_;
};

// Config validation error; `path` is the dotted key that failed.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(ErrorKind::kConfig, path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace gridsim

#endif  // GRIDSIM_ERROR_HPP_
