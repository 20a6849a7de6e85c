/*
 * Copyright 2026 The intentrec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace intentrec {

// Malformed or inconsistent input data (files, records, label sets).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor or layer dimensions that do not chain.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// On-disk formats: bad headers, version mismatch, checksum failure.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure during training (NaN/Inf loss or gradient).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace intentrec
