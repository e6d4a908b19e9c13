// Copyright 2026 The Podjudge Authors.
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

#ifndef PODJUDGE_ERRORS_H_
#define PODJUDGE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace podjudge {

// Base of every error the library raises. The CLI maps subclasses to exit
// codes: ConfigError -> 2, DataError (and subclasses) -> 3,
// ProviderError / TransportError / unparseable LLM output -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed a value outside an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data is missing, malformed, or inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

class InsufficientHistoryError : public DataError {
 public:
  using DataError::DataError;
};

// A metric is mathematically undefined for the given inputs
// (e.g. ROC-AUC with a single label class).
class UndefinedMetricError : public DataError {
 public:
  using DataError::DataError;
};

// The provider answered, but the answer is unusable (empty text, HTTP 4xx,
// unscripted prompt for the scripted mock).
class ProviderError : public Error {
 public:
  using Error::Error;
};

// Network-level failure that survived every retry.
class TransportError : public Error {
 public:
  using Error::Error;
};

// LLM output did not match the expected grammar, even after the re-ask.
// Carries the last raw response for audit.
class UnparseableResponseError : public ProviderError {
 public:
  UnparseableResponseError(const std::string& what, std::string raw)
      : ProviderError(what), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

// Annotation-service errors; the HTTP layer maps them to 404 / 400 / 409.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

}  // namespace podjudge

#endif  // PODJUDGE_ERRORS_H_
