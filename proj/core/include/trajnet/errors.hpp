/*
 * Copyright 2026 The trajnet authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace trajnet {

/// Base class for all trajnet errors. `kind()` is a stable one-word
/// identifier used by the CLI for machine-parseable error lines.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

/// Violated precondition or out-of-range argument.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error("invalid-argument", what) {}
};

/// Input tensor/sample shape does not match what a model was built for.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error("shape", what) {}
};

/// Malformed dataset, checkpoint, or raw-tracks file.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error("format", what) {}
};

/// Invalid configuration (bad key, value, or a layer list that does not
/// type-check).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

/// Filesystem-level failure (missing file, unwritable path).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

/// Training aborted (e.g. non-finite loss).
class TrainError : public Error {
 public:
  explicit TrainError(const std::string& what) : Error("train", what) {}
};

}  // namespace trajnet
