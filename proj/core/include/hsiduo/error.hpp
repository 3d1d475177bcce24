// Copyright 2026 The hsiduo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace hsiduo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or lengths that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value (names the offending field).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value encountered during computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Dataset content that cannot be used (empty class, no labeled pixels, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or does not match its header.
class IngestionError : public Error {
 public:
  using Error::Error;
};

/// Metric undefined for the given confusion matrix or trial list.
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace hsiduo
