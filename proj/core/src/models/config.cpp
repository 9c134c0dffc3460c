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

#include "trajnet/models/config.hpp"

#include "trajnet/errors.hpp"

namespace trajnet::models {

using nn::LayerSpec;

SharedCompareConfig SharedCompareConfig::defaults(int num_classes) {
  SharedCompareConfig cfg;
  cfg.num_classes = num_classes;
  cfg.shared_layers = {
      LayerSpec::conv(64, 3), LayerSpec::relu(),
      LayerSpec::conv(128, 3), LayerSpec::relu(),
      LayerSpec::maxpool(2),
  };
  cfg.compare_layers = {
      LayerSpec::conv(128, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
      LayerSpec::conv(128, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
      LayerSpec::conv(256, 3), LayerSpec::relu(), LayerSpec::maxpool(2),
      LayerSpec::conv(512, 2), LayerSpec::relu(), LayerSpec::maxpool(2),
  };
  return cfg;
}

StackedConfig StackedConfig::five_conv(int num_classes) {
  return conv_stack({64, 128, 256, 512, 512}, {5, 3, 3, 3, 3}, {}, num_classes);
}

StackedConfig StackedConfig::conv_stack(std::vector<int> filters,
                                        std::vector<int> widths,
                                        std::vector<int> fc_tail,
                                        int num_classes) {
  if (filters.size() != widths.size() || filters.empty()) {
    throw ConfigError("conv_stack: filter and width lists must match and be non-empty");
  }
  StackedConfig cfg;
  cfg.num_classes = num_classes;
  for (std::size_t i = 0; i < filters.size(); ++i) {
    cfg.trunk_layers.push_back(LayerSpec::conv(filters[i], widths[i]));
    cfg.trunk_layers.push_back(LayerSpec::relu());
    cfg.trunk_layers.push_back(LayerSpec::maxpool(2));
  }
  cfg.fc_tail = std::move(fc_tail);
  return cfg;
}

std::vector<LayerSpec> stacked_full_layers(const StackedConfig& cfg) {
  std::vector<LayerSpec> layers = cfg.trunk_layers;
  layers.push_back(LayerSpec::flatten());
  for (int h : cfg.fc_tail) {
    layers.push_back(LayerSpec::fc(h));
    layers.push_back(LayerSpec::relu());
  }
  layers.push_back(LayerSpec::fc(cfg.num_classes));
  return layers;
}

std::size_t count_params(const SharedCompareConfig& cfg) {
  const nn::Shape person_in{2, cfg.t, false};
  const nn::Shape shared_out = nn::infer_network_shape(person_in, cfg.shared_layers);
  const nn::Shape pair_in{2 * shared_out.channels, shared_out.length, false};
  const nn::Shape compare_out = nn::infer_network_shape(pair_in, cfg.compare_layers);
  const int feat = compare_out.channels * compare_out.length;
  const nn::Shape head_in{cfg.pair_count() * feat, 1, true};
  return nn::network_param_count(person_in, cfg.shared_layers) +
         nn::network_param_count(pair_in, cfg.compare_layers) +
         nn::network_param_count(head_in, {LayerSpec::fc(cfg.num_classes)});
}

std::size_t count_params(const StackedConfig& cfg) {
  const nn::Shape in{cfg.input_channels(), cfg.t, false};
  return nn::network_param_count(in, stacked_full_layers(cfg));
}

namespace {

std::vector<int> doubled_filters(int base, int n_conv) {
  // Doubles per layer; a fifth layer repeats the fourth.
  std::vector<int> f;
  int cur = base;
  for (int i = 0; i < n_conv; ++i) {
    f.push_back(cur);
    if (i < 3) cur *= 2;
  }
  return f;
}

std::vector<int> default_widths(int n_conv) {
  std::vector<int> w(n_conv, 3);
  w[0] = 5;
  return w;
}

}  // namespace

std::vector<VariantSpec> layer_count_variants(int num_classes) {
  std::vector<VariantSpec> out;
  for (int n = 2; n <= 5; ++n) {
    out.push_back({std::to_string(n) + "conv",
                   StackedConfig::conv_stack(doubled_filters(64, n),
                                             default_widths(n), {}, num_classes)});
  }
  out.push_back({"5conv+2fc",
                 StackedConfig::conv_stack(doubled_filters(64, 5),
                                           default_widths(5), {1024, 1024},
                                           num_classes)});
  return out;
}

std::vector<VariantSpec> filter_size_variants(int num_classes) {
  const std::vector<std::vector<int>> rows = {
      {3, 3, 3, 2, 2}, {5, 3, 3, 3, 3}, {7, 5, 5, 3, 3}, {9, 7, 7, 5, 5}};
  std::vector<VariantSpec> out;
  for (const auto& widths : rows) {
    std::string name;
    for (std::size_t i = 0; i < widths.size(); ++i) {
      if (i) name += " ";
      name += std::to_string(widths[i]);
    }
    out.push_back({name, StackedConfig::conv_stack({64, 128, 256, 512, 512},
                                                   widths, {}, num_classes)});
  }
  return out;
}

std::vector<VariantSpec> base_filter_variants(int num_classes) {
  std::vector<VariantSpec> out;
  for (int base : {16, 32, 64, 128}) {
    out.push_back({"base" + std::to_string(base),
                   StackedConfig::conv_stack(doubled_filters(base, 5),
                                             default_widths(5), {}, num_classes)});
  }
  return out;
}

std::vector<VariantSpec> sweep_preset(const std::string& name, int num_classes) {
  if (name == "layers") return layer_count_variants(num_classes);
  if (name == "filter_sizes") return filter_size_variants(num_classes);
  if (name == "base_filters") return base_filter_variants(num_classes);
  throw ConfigError("unknown sweep preset '" + name +
                    "' (expected layers, filter_sizes or base_filters)");
}

}  // namespace trajnet::models
