// Copyright 2026 The textscale Authors
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

#ifndef TEXTSCALE_ERROR_HPP_
#define TEXTSCALE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace textscale {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input data (dangling ids, bad file rows, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A judge response carried zero probability mass on the answer scale.
class ScaleMassAbsentError : public Error {
 public:
  explicit ScaleMassAbsentError(const std::string& what) : Error(what) {}
};

// The provider reported top-k logprobs that contain none of the candidate
// tokens, so the distribution over candidates is unobservable.
class CandidatesUnobservableError : public Error {
 public:
  explicit CandidatesUnobservableError(const std::string& what) : Error(what) {}
};

// Network / transport failure after the configured number of attempts.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts)
      : Error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

// A replay judge was asked for a request that is not in the cache.
class CacheMissError : public Error {
 public:
  explicit CacheMissError(const std::string& what) : Error(what) {}
};

}  // namespace textscale

#endif  // TEXTSCALE_ERROR_HPP_
