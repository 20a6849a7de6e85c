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

#include "intentrec/contextual.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "intentrec/error.hpp"

namespace intentrec {

static_assert(std::endian::native == std::endian::little, "sidecar I/O assumes little-endian");

namespace {

constexpr char kMagic[4] = {'I', 'C', 'T', 'X'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& buf, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  buf.append(bytes, sizeof(T));
}

template <typename T>
T take(std::istream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (in.gcount() != sizeof(T)) throw FormatError(std::string("contextual sidecar truncated in ") + what);
  return v;
}

}  // namespace

void write_contextual(const std::filesystem::path& path, const ContextualStore& store) {
  std::string body;
  nlohmann::json index;
  index["format"] = "intentrec-contextual";
  index["version"] = kVersion;
  index["dim"] = store.dim;
  index["dtype"] = "float32";
  index["count"] = store.records.size();
  index["word_aligned"] = true;
  index["subword_pooling"] = "mean";
  index["records"] = nlohmann::json::array();
  for (const auto& [id, t] : store.records) {
    if (t.rank() != 2 || t.dim(1) != store.dim) {
      throw ShapeError("contextual record '" + id + "' has shape " + t.shape_string() +
                       ", store dimension is " + std::to_string(store.dim));
    }
    index["records"].push_back({{"id", id}, {"offset", body.size()}, {"length", t.dim(0)}});
    put<std::uint32_t>(body, static_cast<std::uint32_t>(id.size()));
    body += id;
    put<std::uint32_t>(body, static_cast<std::uint32_t>(t.dim(0)));
    put<std::uint32_t>(body, static_cast<std::uint32_t>(t.dim(1)));
    for (double v : t.values()) put<float>(body, static_cast<float>(v));
  }
  const std::string header = index.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write contextual sidecar " + path.string());
  std::string prefix(kMagic, 4);
  put<std::uint32_t>(prefix, kVersion);
  put<std::uint64_t>(prefix, header.size());
  out << prefix << header << body;
}

ContextualStore load_contextual(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open contextual sidecar " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(path.string() + " is not a contextual sidecar");
  }
  const auto version = take<std::uint32_t>(in, "header");
  if (version != kVersion) {
    throw FormatError("contextual sidecar version " + std::to_string(version) + " unsupported");
  }
  const auto n = take<std::uint64_t>(in, "header");
  std::string header(n, '\0');
  in.read(header.data(), static_cast<std::streamsize>(n));
  if (static_cast<std::uint64_t>(in.gcount()) != n) throw FormatError("contextual sidecar truncated in index");
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("contextual sidecar index: ") + e.what());
  }
  ContextualStore store;
  store.dim = index.at("dim").get<std::size_t>();
  const std::size_t count = index.at("count").get<std::size_t>();
  for (std::size_t r = 0; r < count; ++r) {
    const auto id_len = take<std::uint32_t>(in, "record id");
    std::string id(id_len, '\0');
    in.read(id.data(), id_len);
    if (in.gcount() != static_cast<std::streamsize>(id_len)) throw FormatError("contextual sidecar truncated in record id");
    const auto L = take<std::uint32_t>(in, "record shape");
    const auto d = take<std::uint32_t>(in, "record shape");
    if (d != store.dim) {
      throw ShapeError("contextual record '" + id + "' has dimension " + std::to_string(d) +
                       ", index declares " + std::to_string(store.dim));
    }
    std::vector<float> buf(static_cast<std::size_t>(L) * d);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float))) {
      throw FormatError("contextual sidecar truncated in record '" + id + "'");
    }
    store.records.emplace(id, Tensor({L, d}, std::vector<double>(buf.begin(), buf.end())));
  }
  return store;
}

Tensor pad_rows(const Tensor& t, std::size_t length) {
  const std::size_t d = t.dim(1);
  Tensor out({length, d});
  const std::size_t rows = std::min(length, t.dim(0));
  std::copy_n(t.data(), rows * d, out.data());
  return out;
}

std::vector<Tensor> contextual_inputs(const ContextualStore& store, std::span<const std::string> ids,
                                      std::size_t padded_length) {
  std::vector<std::string> missing;
  std::vector<Tensor> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = store.records.find(id);
    if (it == store.records.end()) {
      missing.push_back(id);
      continue;
    }
    out.push_back(pad_rows(it->second, padded_length));
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) list += (i ? ", " : "") + missing[i];
    throw DataError("contextual sidecar lacks " + std::to_string(missing.size()) +
                    " request id(s): " + list);
  }
  return out;
}

}  // namespace intentrec
