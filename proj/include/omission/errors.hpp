// Copyright 2026 The omission-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OMISSION_ERRORS_HPP
#define OMISSION_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace omission {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument or malformed specification supplied by the caller.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Malformed input file (magic number, truncation, count mismatch, ...).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// A per-class draw asked for more samples than exist.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(what) {}
};

// Target selection ran out of candidates the model classifies correctly.
class SelectionExhaustedError : public Error {
 public:
  explicit SelectionExhaustedError(const std::string& what) : Error(what) {}
};

// Distance metric preconditions violated (zero vector under cosine, ...).
class MetricError : public Error {
 public:
  explicit MetricError(const std::string& what) : Error(what) {}
};

// Model training could not complete on the given data.
class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& what) : Error(what) {}
};

// An attack could not produce a result (e.g. every candidate failed).
class AttackError : public Error {
 public:
  explicit AttackError(const std::string& what) : Error(what) {}
};

// Experiment or CLI configuration is inconsistent.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// A theorem precondition does not hold for the requested trial setup.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

}  // namespace omission

#endif  // OMISSION_ERRORS_HPP
