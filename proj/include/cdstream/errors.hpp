// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#pragma once

#include <stdexcept>
#include <string>

namespace cdstream {

// Raised by canonicalize() for an empty literal sequence. An empty learned
// clause signals global incoherence and is handled by the caller.
struct EmptyClauseError : std::invalid_argument {
  explicit EmptyClauseError(const std::string& what) : std::invalid_argument(what) {}
};

// A clause or literal references an atom outside the engine's atom range.
struct OutOfRangeError : std::out_of_range {
  explicit OutOfRangeError(const std::string& what) : std::out_of_range(what) {}
};

// A stream delta mentions an atom name that no selector is bound to.
struct UnknownAtomError : std::invalid_argument {
  explicit UnknownAtomError(const std::string& what) : std::invalid_argument(what) {}
};

// Reward evaluation was asked to charge an LBD < 1.
struct InvalidLbdError : std::invalid_argument {
  explicit InvalidLbdError(const std::string& what) : std::invalid_argument(what) {}
};

// summarize() received a CSV with no data rows.
struct EmptyInputError : std::invalid_argument {
  explicit EmptyInputError(const std::string& what) : std::invalid_argument(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace cdstream
