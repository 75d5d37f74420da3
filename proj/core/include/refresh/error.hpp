// Copyright 2026 The Refresh Authors.
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

#include <stdexcept>
#include <string>

namespace refresh {

// Base class for every error the library raises. Derived types let the CLI
// map failures onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration (unknown key, out-of-range value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (story files, caches, stores).
class DataError : public Error {
 public:
  using Error::Error;
};

// A story file could not be turned into a Document.
class IngestError : public DataError {
 public:
  IngestError(std::string source, const std::string& what);

  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
};

// Shape or dimension mismatch inside the neural primitives.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Checkpoint file is truncated, corrupted, or of an unsupported version.
class CheckpointError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace refresh
