// Copyright 2026 The nomoqpe Authors
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

namespace nomoqpe {

/// Exit codes shared by the library error kinds and the CLI.
enum class ErrorKind : int {
  Usage = 1,
  Parse = 2,
  Numerical = 3,
  Verification = 4,
};

/// Base class for every error raised by the library. The kind doubles as the
/// process exit code of the command-line tool.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

/// Invalid arguments or a violated precondition.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

/// Malformed system file; carries the 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(ErrorKind::Parse, format(what, line, column)),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + what;
  }

  int line_;
  int column_;
};

/// A numerical guard tripped: non-Hermitian input, eigenvalue outside the
/// phase window, size cap exceeded, lost normalization.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::Numerical, what) {}
};

/// An oracle and a closed form disagreed.
class VerificationError : public Error {
 public:
  explicit VerificationError(const std::string& what)
      : Error(ErrorKind::Verification, what) {}
};

/// Requested feature exists in the API but has no implementation.
class NotImplementedError : public UsageError {
 public:
  explicit NotImplementedError(const std::string& what)
      : UsageError("not implemented: " + what) {}
};

}  // namespace nomoqpe
