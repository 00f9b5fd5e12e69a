/*
 * Copyright 2026 the mvcf authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MVCF_ERRORS_HPP
#define MVCF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvcf {

// Base type for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Views of one dataset disagree on the number of samples (columns).
class MismatchedSampleCount : public Error {
 public:
  using Error::Error;
};

// A matrix entry is NaN or infinite.
class NonFiniteEntry : public Error {
 public:
  NonFiniteEntry(int view, std::ptrdiff_t row, std::ptrdiff_t col)
      : Error("non-finite entry in view " + std::to_string(view) + " at (" +
              std::to_string(row) + ", " + std::to_string(col) + ")"),
        view(view),
        row(row),
        col(col) {}
  int view;
  std::ptrdiff_t row;
  std::ptrdiff_t col;
};

// Column normalization hit an all-zero column.
class ZeroColumn : public Error {
 public:
  explicit ZeroColumn(std::ptrdiff_t col)
      : Error("cannot normalize all-zero column " + std::to_string(col)),
        col(col) {}
  std::ptrdiff_t col;
};

// Neighbor count p must be smaller than the sample count.
class PTooLarge : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// A class id in [0, k) has no members.
class EmptyClass : public Error {
 public:
  using Error::Error;
};

// Multiplicative NMF updates require entrywise nonnegative input.
class NegativeInput : public Error {
 public:
  using Error::Error;
};

// The linear kernel X^T X carries an entry below -1e-12; the multiplicative
// solver only supports nonnegative kernels.
class NegativeKernel : public Error {
 public:
  using Error::Error;
};

class KTooLarge : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

// A file could not be read or has malformed content.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, long line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what),
        file(file),
        line(line) {}
  std::string file;
  long line;
};

class UnknownParameter : public Error {
 public:
  using Error::Error;
};

}  // namespace mvcf

#endif  // MVCF_ERRORS_HPP
