/*
 * Copyright 2026 The trajnet authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "trajnet/models/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "trajnet/errors.hpp"

namespace trajnet::models {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'T', 'J', 'N', 'C'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kKindSharedCompare = 1;
constexpr std::uint32_t kKindStacked = 2;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint32_t read_u32(std::istream& in, const std::string& path) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw FormatError(path + ": truncated checkpoint");
  }
  return v;
}
std::uint64_t read_u64(std::istream& in, const std::string& path) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw FormatError(path + ": truncated checkpoint");
  }
  return v;
}

json layer_to_json(const nn::LayerSpec& s) {
  json j;
  j["kind"] = nn::layer_kind_name(s.kind);
  switch (s.kind) {
    case nn::LayerKind::Conv1d:
      j["filters"] = s.filters;
      j["width"] = s.width;
      j["bias"] = s.use_bias;
      break;
    case nn::LayerKind::MaxPool:
      j["window"] = s.window;
      break;
    case nn::LayerKind::FullyConnected:
      j["out"] = s.out_size;
      j["bias"] = s.use_bias;
      break;
    default:
      break;
  }
  return j;
}

nn::LayerSpec layer_from_json(const json& j) {
  const nn::LayerKind kind = nn::layer_kind_from_name(j.at("kind").get<std::string>());
  switch (kind) {
    case nn::LayerKind::Conv1d:
      return nn::LayerSpec::conv(j.at("filters").get<int>(),
                                 j.at("width").get<int>(),
                                 j.value("bias", false));
    case nn::LayerKind::MaxPool:
      return nn::LayerSpec::maxpool(j.at("window").get<int>());
    case nn::LayerKind::FullyConnected:
      return nn::LayerSpec::fc(j.at("out").get<int>(), j.value("bias", false));
    case nn::LayerKind::Relu:
      return nn::LayerSpec::relu();
    case nn::LayerKind::Flatten:
      return nn::LayerSpec::flatten();
  }
  throw FormatError("bad layer kind in checkpoint");
}

json layers_to_json(const std::vector<nn::LayerSpec>& layers) {
  json arr = json::array();
  for (const auto& s : layers) arr.push_back(layer_to_json(s));
  return arr;
}

std::vector<nn::LayerSpec> layers_from_json(const json& arr) {
  std::vector<nn::LayerSpec> out;
  for (const auto& j : arr) out.push_back(layer_from_json(j));
  return out;
}

json config_to_json(const SharedCompareConfig& cfg) {
  json j;
  j["np"] = cfg.np;
  j["t"] = cfg.t;
  j["num_classes"] = cfg.num_classes;
  j["shared"] = layers_to_json(cfg.shared_layers);
  j["compare"] = layers_to_json(cfg.compare_layers);
  j["self_pair"] = cfg.include_self_pair;
  return j;
}

json config_to_json(const StackedConfig& cfg) {
  json j;
  j["np"] = cfg.np;
  j["t"] = cfg.t;
  j["num_classes"] = cfg.num_classes;
  j["ball"] = cfg.includes_ball;
  j["trunk"] = layers_to_json(cfg.trunk_layers);
  j["fc_tail"] = cfg.fc_tail;
  return j;
}

SharedCompareConfig shared_config_from_json(const json& j) {
  SharedCompareConfig cfg;
  cfg.np = j.at("np").get<int>();
  cfg.t = j.at("t").get<int>();
  cfg.num_classes = j.at("num_classes").get<int>();
  cfg.shared_layers = layers_from_json(j.at("shared"));
  cfg.compare_layers = layers_from_json(j.at("compare"));
  cfg.include_self_pair = j.value("self_pair", false);
  return cfg;
}

StackedConfig stacked_config_from_json(const json& j) {
  StackedConfig cfg;
  cfg.np = j.at("np").get<int>();
  cfg.t = j.at("t").get<int>();
  cfg.num_classes = j.at("num_classes").get<int>();
  cfg.includes_ball = j.value("ball", true);
  cfg.trunk_layers = layers_from_json(j.at("trunk"));
  cfg.fc_tail = j.value("fc_tail", std::vector<int>{});
  return cfg;
}

void write_body(std::ostream& out, std::uint32_t kind, std::uint64_t seed,
                const std::string& cfg_json, const nn::ParamStore& store) {
  out.write(kMagic, 4);
  write_u32(out, kFormatVersion);
  write_u32(out, kind);
  write_u64(out, seed);
  write_u32(out, static_cast<std::uint32_t>(cfg_json.size()));
  out.write(cfg_json.data(), static_cast<std::streamsize>(cfg_json.size()));
  write_u32(out, static_cast<std::uint32_t>(store.entry_count()));
  for (nn::ParamHandle h = 0; h < store.entry_count(); ++h) {
    const std::string& name = store.name(h);
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    const auto w = store.weights(h);
    write_u64(out, w.size());
    out.write(reinterpret_cast<const char*>(w.data()),
              static_cast<std::streamsize>(w.size() * sizeof(double)));
  }
}

void save_impl(const std::string& path, std::uint32_t kind, std::uint64_t seed,
               const std::string& cfg_json, const nn::ParamStore& store) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_body(out, kind, seed, cfg_json, store);
  if (!out) throw IoError("write failed for '" + path + "'");
}

void read_weights(std::istream& in, const std::string& path,
                  nn::ParamStore& store) {
  const std::uint32_t n = read_u32(in, path);
  if (n != store.entry_count()) {
    throw FormatError(path + ": checkpoint has " + std::to_string(n) +
                      " weight arrays, model expects " +
                      std::to_string(store.entry_count()));
  }
  for (std::uint32_t e = 0; e < n; ++e) {
    const std::uint32_t name_len = read_u32(in, path);
    std::string name(name_len, '\0');
    if (!in.read(name.data(), name_len)) {
      throw FormatError(path + ": truncated checkpoint");
    }
    if (name != store.name(e)) {
      throw FormatError(path + ": weight array '" + name +
                        "' does not match model entry '" + store.name(e) + "'");
    }
    const std::uint64_t count = read_u64(in, path);
    auto w = store.weights(e);
    if (count != w.size()) {
      throw FormatError(path + ": weight array '" + name + "' has " +
                        std::to_string(count) + " values, model expects " +
                        std::to_string(w.size()));
    }
    if (!in.read(reinterpret_cast<char*>(w.data()),
                 static_cast<std::streamsize>(count * sizeof(double)))) {
      throw FormatError(path + ": truncated checkpoint");
    }
  }
}

}  // namespace

void save_checkpoint(const std::string& path, const SharedCompareNet& net,
                     std::uint64_t seed) {
  save_impl(path, kKindSharedCompare, seed, config_to_json(net.config()).dump(),
            net.params());
}

void save_checkpoint(const std::string& path, const StackedNet& net,
                     std::uint64_t seed) {
  save_impl(path, kKindStacked, seed, config_to_json(net.config()).dump(),
            net.params());
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(path + ": not a checkpoint file");
  }
  const std::uint32_t version = read_u32(in, path);
  if (version != kFormatVersion) {
    throw FormatError(path + ": unsupported checkpoint version " +
                      std::to_string(version));
  }
  const std::uint32_t kind = read_u32(in, path);
  const std::uint64_t seed = read_u64(in, path);
  const std::uint32_t cfg_len = read_u32(in, path);
  std::string cfg_str(cfg_len, '\0');
  if (!in.read(cfg_str.data(), cfg_len)) {
    throw FormatError(path + ": truncated checkpoint");
  }
  json cfg_json = json::parse(cfg_str, nullptr, false);
  if (cfg_json.is_discarded()) {
    throw FormatError(path + ": bad config block");
  }

  if (kind == kKindSharedCompare) {
    SharedCompareNet net(shared_config_from_json(cfg_json), seed);
    read_weights(in, path, net.params());
    return {AnyModel(std::in_place_type<SharedCompareNet>, std::move(net)), seed};
  }
  if (kind == kKindStacked) {
    StackedNet net(stacked_config_from_json(cfg_json), seed);
    read_weights(in, path, net.params());
    return {AnyModel(std::in_place_type<StackedNet>, std::move(net)), seed};
  }
  throw FormatError(path + ": unknown model kind " + std::to_string(kind));
}

}  // namespace trajnet::models
