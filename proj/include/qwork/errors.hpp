// Copyright 2026 The qwork Authors
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

namespace qwork {

// Every error raised by the library derives from Error. DomainError marks
// inputs that parse fine but violate a mathematical precondition; the CLI
// maps those to exit status 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class HermiticityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnitarityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class StateError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ParamError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A probability outside [-tol, 1 + tol] or a distribution that does not
// normalise.
class DistributionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The uniqueness argument that pins the single-copy POVM to the TPM one
// does not apply because distinct initial energies share a work value.
class DegenerateWorkValuesError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedDimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Malformed input documents (bad JSON, missing fields, wrong shapes).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qwork
