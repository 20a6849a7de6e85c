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

#include "intentrec/csv.hpp"

#include <sstream>

#include "intentrec/error.hpp"

namespace intentrec::csv {

Reader::Reader(std::istream& in, char delimiter) : in_(in), delim_(delimiter) {}

bool Reader::next(Record& record) {
  record.fields.clear();
  for (;;) {
    if (in_.peek() == std::char_traits<char>::eof()) return false;
    // Skip blank lines between records.
    const int c = in_.peek();
    if (c == '\n') {
      in_.get();
      ++line_;
      continue;
    }
    if (c == '\r') {
      in_.get();
      continue;
    }
    break;
  }
  record.line = line_;
  std::string field;
  bool in_quotes = false, quoted = false;
  for (;;) {
    const int ci = in_.get();
    if (ci == std::char_traits<char>::eof()) {
      if (in_quotes) {
        throw DataError("line " + std::to_string(record.line) + ": unterminated quoted field");
      }
      record.fields.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(ci);
    if (in_quotes) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !quoted) {
      in_quotes = quoted = true;
    } else if (ch == delim_) {
      record.fields.push_back(std::move(field));
      field.clear();
      quoted = false;
    } else if (ch == '\r' && in_.peek() == '\n') {
      continue;
    } else if (ch == '\n') {
      ++line_;
      record.fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
}

std::vector<Record> read_all(std::istream& in, char delimiter) {
  Reader reader(in, delimiter);
  std::vector<Record> out;
  Record r;
  while (reader.next(r)) out.push_back(r);
  return out;
}

std::vector<Record> parse(std::string_view text, char delimiter) {
  std::istringstream is{std::string(text)};
  return read_all(is, delimiter);
}

std::string escape(std::string_view field, char delimiter) {
  if (field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << delimiter;
    out << escape(fields[i], delimiter);
  }
  out << '\n';
}

}  // namespace intentrec::csv
