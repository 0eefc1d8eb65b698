// Copyright 2026 The bosonic-clt Authors
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

namespace bclt {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something the operation cannot accept (bad parameter,
/// mismatched cutoffs, a matrix that is not a state, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NotAState : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NotCentered : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnphysicalCovariance : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Raised by the capacity-bound driver when the channel fails the
/// no-signalling / marginal-symmetry linearity screen.
class NonlinearChannel : public Error {
 public:
  using Error::Error;
};

/// Something went wrong numerically (an eigensolver failed, the Kraus list
/// grew past its cap, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class KrausExplosion : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace bclt
