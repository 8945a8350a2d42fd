/*
 * Copyright 2026 The FloodLens Authors.
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

#ifndef FLOODLENS_ERRORS_HPP
#define FLOODLENS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace floodlens {

/// Base class for all pipeline errors. The exit class drives the CLI exit
/// code: `user` maps to 1 (bad input, bad config, missing upstream stage),
/// `environment` maps to 2 (network, missing model weights, filesystem).
class Error : public std::runtime_error {
 public:
  enum class ExitClass { user = 1, environment = 2 };

  explicit Error(const std::string& msg, ExitClass ec = ExitClass::user)
      : std::runtime_error(msg), exit_class_(ec) {}

  ExitClass exit_class() const noexcept { return exit_class_; }

 private:
  ExitClass exit_class_;
};

#define FLOODLENS_DEFINE_ERROR(NAME, EXIT_CLASS)                      \
  class NAME : public Error {                                         \
   public:                                                            \
    explicit NAME(const std::string& msg)                             \
        : Error(msg, Error::ExitClass::EXIT_CLASS) {}                 \
  }

FLOODLENS_DEFINE_ERROR(CoordinateRangeError, user);   // lat/lon or grid id out of range
FLOODLENS_DEFINE_ERROR(IoError, user);                // missing/unreadable file
FLOODLENS_DEFINE_ERROR(SchemaError, user);            // malformed header or file structure
FLOODLENS_DEFINE_ERROR(ConfigError, user);            // bad run configuration
FLOODLENS_DEFINE_ERROR(LookupError, user);            // key absent from a table
FLOODLENS_DEFINE_ERROR(JoinError, user);              // cross-artifact key mismatch
FLOODLENS_DEFINE_ERROR(HorizonError, user);           // label window exceeds study window
FLOODLENS_DEFINE_ERROR(DegenerateDataError, user);    // all-zero / single-class inputs
FLOODLENS_DEFINE_ERROR(TrainingError, user);          // unusable training set
FLOODLENS_DEFINE_ERROR(FeatureContractError, user);   // feature manifest mismatch
FLOODLENS_DEFINE_ERROR(MetricError, user);            // metric undefined for the input
FLOODLENS_DEFINE_ERROR(ReportError, user);            // inconsistent evaluation runs
FLOODLENS_DEFINE_ERROR(StageDependencyError, user);   // upstream artifact missing
FLOODLENS_DEFINE_ERROR(TransientError, environment);  // network failure after retries
FLOODLENS_DEFINE_ERROR(ProtocolError, environment);   // malformed API response
FLOODLENS_DEFINE_ERROR(EnvironmentError, environment);

#undef FLOODLENS_DEFINE_ERROR

}  // namespace floodlens

#endif  // FLOODLENS_ERRORS_HPP
