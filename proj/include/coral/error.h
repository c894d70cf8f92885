// coral/error.h

// Copyright 2026  The CORAL Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CORAL_ERROR_H_
#define CORAL_ERROR_H_

#include <stdexcept>
#include <string>

namespace coral {

/// Raised for malformed arguments: shape mismatches, out-of-range
/// parameters, non-finite entries in user-supplied data.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string &msg) : std::invalid_argument(msg) {}
};

enum class NumericalErrorKind { kNotPsd, kNonFinite, kNotInvertible };

class NumericalError : public std::runtime_error {
 public:
  NumericalError(NumericalErrorKind kind, const std::string &msg)
      : std::runtime_error(msg), kind_(kind) {}
  NumericalErrorKind kind() const { return kind_; }

 private:
  NumericalErrorKind kind_;
};

/// Parse or format failure while reading a dataset file.  line() is
/// 1-based for text formats and 0 when no line applies.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string &msg, long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                    : msg),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace coral

#endif  // CORAL_ERROR_H_
