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

#include "intentrec/bundle.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "intentrec/error.hpp"

namespace intentrec {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "bundle I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'I', 'N', 'T', 'E', 'N', 'T', 'R', 'B'};

std::uint32_t crc(std::string_view bytes) {
  uLong c = crc32(0L, Z_NULL, 0);
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(bytes.size() - off, 1u << 30));
    c = crc32(c, reinterpret_cast<const Bytef*>(bytes.data() + off), n);
    off += n;
  }
  return static_cast<std::uint32_t>(c);
}

template <typename T>
void put(std::string& buf, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  buf.append(bytes, sizeof(T));
}

template <typename T>
T get(std::string_view bytes, std::size_t off) {
  T v{};
  std::memcpy(&v, bytes.data() + off, sizeof(T));
  return v;
}

struct Section {
  std::string name;
  const Tensor* tensor;
};

std::vector<Section> sections_of(const ModelBundle& b) {
  std::vector<Section> out;
  for (const nn::Parameter* p : b.model.network.parameters()) out.push_back({p->name, &p->value});
  if (b.embeddings) out.push_back({"embeddings", &b.embeddings->table});
  return out;
}

}  // namespace

void ModelBundle::validate() const {
  model.config.validate();
  if (labels.size() != model.config.classes) {
    throw ShapeError("bundle has " + std::to_string(labels.size()) + " labels for a " +
                     std::to_string(model.config.classes) + "-class model");
  }
  if (embeddings) {
    if (!vocab) throw ShapeError("bundle with embeddings but no vocabulary");
    if (embeddings->rows() != vocab->size() || embeddings->dim() != model.config.d_in) {
      throw ShapeError("embedding table " + embeddings->table.shape_string() +
                       " does not fit vocabulary size " + std::to_string(vocab->size()) +
                       " and model input dimension " + std::to_string(model.config.d_in));
    }
  }
}

std::string serialize_bundle(const ModelBundle& b) {
  b.validate();
  json manifest;
  manifest["format"] = "intentrec-bundle";
  manifest["format_version"] = std::string(kBundleFormatVersion);
  manifest["library_version"] = b.version;
  manifest["model"] = json::parse(b.model.config.to_json());
  manifest["run"] = json::parse(b.run.to_json());
  manifest["labels"] = b.labels;
  manifest["padded_length"] = b.seq_len();
  manifest["contextual"] = b.contextual();
  manifest["vocabulary"] = b.vocab ? json(b.vocab->serialize()) : json(nullptr);

  std::string body;
  json sections = json::array();
  for (const auto& s : sections_of(b)) {
    sections.push_back(
        {{"name", s.name}, {"shape", s.tensor->shape()}, {"offset", body.size()}});
    for (double v : s.tensor->values()) put<double>(body, v);
  }
  manifest["sections"] = sections;
  manifest["data_bytes"] = body.size();

  const std::string header = manifest.dump();
  std::string out(kMagic, sizeof kMagic);
  put<std::uint64_t>(out, header.size());
  out += header;
  out += body;
  put<std::uint32_t>(out, crc(out));
  return out;
}

ModelBundle deserialize_bundle(std::string_view bytes) {
  constexpr std::size_t kFixed = sizeof kMagic + sizeof(std::uint64_t);
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError("not a model bundle (bad magic)");
  }
  if (bytes.size() < kFixed + sizeof(std::uint32_t)) {
    throw FormatError("bundle truncated: checksum failure");
  }
  const std::string_view covered = bytes.substr(0, bytes.size() - sizeof(std::uint32_t));
  if (crc(covered) != get<std::uint32_t>(bytes, covered.size())) {
    throw FormatError("bundle checksum failure (file truncated or corrupted)");
  }
  const auto header_len = get<std::uint64_t>(bytes, sizeof kMagic);
  if (header_len > covered.size() - kFixed) throw FormatError("bundle manifest length out of range");

  json m;
  try {
    m = json::parse(covered.substr(kFixed, header_len));
  } catch (const json::exception& e) {
    throw FormatError(std::string("bundle manifest: ") + e.what());
  }
  const std::string version = m.value("format_version", std::string("?"));
  if (version != kBundleFormatVersion) {
    throw FormatError("unsupported bundle format version '" + version + "' (expected '" +
                      std::string(kBundleFormatVersion) + "')");
  }
  const std::string_view data = covered.substr(kFixed + header_len);

  ModelBundle b;
  try {
    b.version = m.value("library_version", std::string());
    b.model = build_model(ModelConfig::from_json(m.at("model").dump()));
    b.run = RunConfig::from_json(m.at("run").dump());
    b.labels = m.at("labels").get<std::vector<std::string>>();
    if (!m.at("vocabulary").is_null()) {
      b.vocab = std::make_shared<const Vocabulary>(
          Vocabulary::deserialize(m.at("vocabulary").get<std::string>()));
    }
    const bool contextual = m.at("contextual").get<bool>();

    const auto& secs = m.at("sections");
    std::vector<nn::Parameter*> params = b.model.network.parameters();
    const std::size_t expected = params.size() + (contextual ? 0 : 1);
    if (secs.size() != expected) {
      throw ShapeError("bundle holds " + std::to_string(secs.size()) + " sections; the model needs " +
                       std::to_string(expected));
    }
    auto read_into = [&](const json& s, Tensor& dst, const std::string& want) {
      const std::string name = s.at("name").get<std::string>();
      const Shape shape = s.at("shape").get<Shape>();
      if (name != want) throw ShapeError("bundle section '" + name + "' where '" + want + "' was expected");
      if (!dst.empty() && shape != dst.shape()) {
        throw ShapeError("bundle section '" + name + "' has shape " + shape_to_string(shape) +
                         ", the model needs " + dst.shape_string());
      }
      const std::size_t off = s.at("offset").get<std::size_t>();
      const std::size_t n = shape_size(shape);
      if (off > data.size() || n > (data.size() - off) / sizeof(double)) {
        throw FormatError("bundle section '" + name + "' runs past the end of the data");
      }
      Tensor t(shape);
      std::memcpy(t.data(), data.data() + off, n * sizeof(double));
      dst = std::move(t);
    };
    for (std::size_t i = 0; i < params.size(); ++i) {
      read_into(secs[i], params[i]->value, params[i]->name);
      params[i]->grad = Tensor(params[i]->value.shape());
    }
    if (!contextual) {
      EmbeddingMatrix e;
      e.vocab = b.vocab;
      read_into(secs[params.size()], e.table, "embeddings");
      b.embeddings = std::move(e);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bundle manifest: ") + e.what());
  }
  b.validate();
  return b;
}

void save_bundle(const ModelBundle& b, const std::filesystem::path& path) {
  const std::string bytes = serialize_bundle(b);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open bundle " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_bundle(ss.str());
}

Prediction rank_posterior(const Tensor& probs, const std::vector<std::string>& labels,
                          std::size_t top_k) {
  const std::size_t cl = probs.size();
  if (top_k < 1 || top_k > cl) {
    throw std::invalid_argument("top_k must be in [1, " + std::to_string(cl) + "]");
  }
  std::vector<std::size_t> order(cl);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  auto name = [&](std::size_t c) { return c < labels.size() ? labels[c] : std::to_string(c); };
  Prediction p;
  p.class_id = static_cast<int>(order[0]);
  p.intent = name(order[0]);
  p.posterior = probs[order[0]];
  for (std::size_t i = 0; i < top_k; ++i) p.top_k.emplace_back(name(order[i]), probs[order[i]]);
  return p;
}

Tensor text_input(const ModelBundle& b, std::string_view text) {
  if (b.contextual()) {
    throw std::logic_error(
        "this bundle expects contextual embeddings; plain text needs the contextual sidecar");
  }
  const auto tokens = tokenize(text);
  return embed_sequence(encode(tokens, *b.vocab, b.seq_len()), *b.embeddings);
}

LabeledInputs bundle_inputs(const ModelBundle& b, const Dataset& d,
                            std::span<const std::size_t> ids, const ContextualStore* store) {
  LabeledInputs out;
  for (std::size_t i : ids) out.labels.push_back(d.target(i));
  if (b.contextual()) {
    if (store == nullptr) {
      throw std::logic_error("this bundle expects contextual embeddings; pass the sidecar");
    }
    std::vector<std::string> keys;
    for (std::size_t i : ids) keys.push_back(d[i].id);
    out.dense = contextual_inputs(*store, keys, b.seq_len());
    return out;
  }
  for (std::size_t i : ids) {
    out.sequences.push_back(encode(tokenize(d[i].text), *b.vocab, b.seq_len()));
  }
  return out;
}

Prediction predict_input(const ModelBundle& b, const Tensor& input, std::size_t top_k) {
  return rank_posterior(predict_one(b.model, input), b.labels, top_k);
}

Prediction predict_text(const ModelBundle& b, std::string_view text, std::size_t top_k) {
  return predict_input(b, text_input(b, text), top_k);
}

}  // namespace intentrec
