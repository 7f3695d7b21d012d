// Copyright 2026 The chq Authors
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

namespace chq {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A set function violates the zero/one normalization at the empty or full set.
class NormalizationViolation : public Error {
 public:
  using Error::Error;
};

/// A set function decreases along some inclusion; carries the witness pair.
class MonotonicityViolation : public Error {
 public:
  MonotonicityViolation(const std::string& what, unsigned subset, unsigned superset)
      : Error(what), subset_mask(subset), superset_mask(superset) {}
  unsigned subset_mask;
  unsigned superset_mask;
};

/// A subset-indexed table is missing an entry or lists one twice.
class MissingSubset : public Error {
 public:
  using Error::Error;
};

/// Two values that must live on the same state space do not.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownAction : public Error {
 public:
  using Error::Error;
};

class UnknownType : public Error {
 public:
  using Error::Error;
};

/// Text input is malformed; the message carries line context.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A payoff tensor is ragged (missing cells or wrong tuple width).
class ArityError : public Error {
 public:
  using Error::Error;
};

/// An instance is larger than the configured cap for the chosen algorithm.
class SizeCap : public Error {
 public:
  using Error::Error;
};

/// A linear program is structurally invalid (arity mismatch, no variables).
class Malformed : public Error {
 public:
  using Error::Error;
};

class NotInRestriction : public Error {
 public:
  using Error::Error;
};

class EmptyOpponentRestriction : public Error {
 public:
  using Error::Error;
};

class EmptySurvivorSet : public Error {
 public:
  using Error::Error;
};

class LevelOutOfRange : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed; indicates a bug, never bad user input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace chq
