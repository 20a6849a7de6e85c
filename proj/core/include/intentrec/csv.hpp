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

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace intentrec::csv {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

/// RFC-4180 reader: quoted fields may contain delimiters, doubled quotes and
/// line breaks; CRLF and LF line endings are accepted. Blank lines are skipped.
class Reader {
 public:
  explicit Reader(std::istream& in, char delimiter = ',');
  bool next(Record& record);

 private:
  std::istream& in_;
  char delim_;
  std::size_t line_ = 1;
};

std::vector<Record> read_all(std::istream& in, char delimiter = ',');
std::vector<Record> parse(std::string_view text, char delimiter = ',');

/// Quotes a field when it contains the delimiter, a quote or a line break.
std::string escape(std::string_view field, char delimiter = ',');
void write_row(std::ostream& out, const std::vector<std::string>& fields,
               char delimiter = ',');

}  // namespace intentrec::csv
