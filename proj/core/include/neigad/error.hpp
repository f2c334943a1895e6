// Copyright 2026 The NeiGAD Authors
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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace neigad {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (edge lists, CSV tables, MatrixMarket files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// An argument violates an operation's preconditions.
class ParamError : public Error {
 public:
  using Error::Error;
};

// Conformability violation between matrices, graphs, or label arrays.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A run configuration failed validation; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error("config field '" + field + "': " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// File could not be read or written.
class IoError : public Error {
 public:
  IoError(std::string path, const std::string& message)
      : Error(message + ": " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Iterative eigensolver ran out of iterations; carries the residuals it reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, std::vector<double> achieved_residuals)
      : Error(message), residuals_(std::move(achieved_residuals)) {}
  const std::vector<double>& achieved_residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

// Training produced a non-finite loss; carries the epoch where it happened.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, std::int64_t epoch)
      : Error(message), epoch_(epoch) {}
  std::int64_t epoch() const { return epoch_; }

 private:
  std::int64_t epoch_;
};

}  // namespace neigad
