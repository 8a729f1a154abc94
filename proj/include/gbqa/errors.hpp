/*
 * Copyright 2026 The GBQA Measures Authors.
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

namespace gbqa {

// Malformed input: bad ranges, id mismatches, schema violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The measure has no value for this input (single gesture trend, degenerate
// ground truth, zero-variance correlation).
class UndefinedMeasureError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A gesture cluster whose identity centroids coincide (d_UNQ = 0).
class SingularGeometryError : public std::domain_error {
 public:
  explicit SingularGeometryError(const std::string& gesture_id)
      : std::domain_error("singular geometry: uniqueness is zero for gesture '" +
                          gesture_id + "'"),
        gesture_id_(gesture_id) {}

  const std::string& gesture_id() const { return gesture_id_; }

 private:
  std::string gesture_id_;
};

}  // namespace gbqa
