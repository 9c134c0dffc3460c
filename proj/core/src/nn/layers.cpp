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

#include "trajnet/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "trajnet/errors.hpp"

namespace trajnet::nn {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline void fold_u64(std::uint64_t& h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffu;
    h *= kFnvPrime;
  }
}

}  // namespace

const char* layer_kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::Conv1d: return "conv1d";
    case LayerKind::Relu: return "relu";
    case LayerKind::MaxPool: return "maxpool";
    case LayerKind::Flatten: return "flatten";
    case LayerKind::FullyConnected: return "fully_connected";
  }
  return "?";
}

LayerKind layer_kind_from_name(const std::string& name) {
  if (name == "conv1d") return LayerKind::Conv1d;
  if (name == "relu") return LayerKind::Relu;
  if (name == "maxpool") return LayerKind::MaxPool;
  if (name == "flatten") return LayerKind::Flatten;
  if (name == "fully_connected") return LayerKind::FullyConnected;
  throw ConfigError("unknown layer kind '" + name + "'");
}

LayerSpec LayerSpec::conv(int filters, int width, bool use_bias) {
  LayerSpec s;
  s.kind = LayerKind::Conv1d;
  s.filters = filters;
  s.width = width;
  s.use_bias = use_bias;
  return s;
}

LayerSpec LayerSpec::relu() {
  LayerSpec s;
  s.kind = LayerKind::Relu;
  return s;
}

LayerSpec LayerSpec::maxpool(int window) {
  LayerSpec s;
  s.kind = LayerKind::MaxPool;
  s.window = window;
  return s;
}

LayerSpec LayerSpec::flatten() {
  LayerSpec s;
  s.kind = LayerKind::Flatten;
  return s;
}

LayerSpec LayerSpec::fc(int out_size, bool use_bias) {
  LayerSpec s;
  s.kind = LayerKind::FullyConnected;
  s.out_size = out_size;
  s.use_bias = use_bias;
  return s;
}

Shape infer_output_shape(const Shape& in, const LayerSpec& spec) {
  switch (spec.kind) {
    case LayerKind::Conv1d:
      if (in.flat) throw ConfigError("conv1d after flatten");
      if (spec.filters < 1 || spec.width < 1) {
        throw ConfigError("conv1d: filters and width must be >= 1");
      }
      if (in.length < 1) throw ConfigError("conv1d: input length must be >= 1");
      return {spec.filters, in.length, false};
    case LayerKind::Relu:
      return in;
    case LayerKind::MaxPool:
      if (in.flat) throw ConfigError("maxpool after flatten");
      if (spec.window < 1) throw ConfigError("maxpool: window must be >= 1");
      if (in.length < 1) throw ConfigError("maxpool: input length must be >= 1");
      return {in.channels, (in.length + spec.window - 1) / spec.window, false};
    case LayerKind::Flatten:
      if (in.flat) throw ConfigError("flatten twice");
      return {in.channels * in.length, 1, true};
    case LayerKind::FullyConnected:
      if (!in.flat) throw ConfigError("fully_connected requires flatten first");
      if (spec.out_size < 1) throw ConfigError("fully_connected: out_size must be >= 1");
      return {spec.out_size, 1, true};
  }
  throw ConfigError("unreachable layer kind");
}

std::size_t layer_param_count(const Shape& in, const LayerSpec& spec) {
  switch (spec.kind) {
    case LayerKind::Conv1d:
      return static_cast<std::size_t>(in.channels) * spec.width * spec.filters +
             (spec.use_bias ? static_cast<std::size_t>(spec.filters) : 0);
    case LayerKind::FullyConnected:
      return static_cast<std::size_t>(in.channels) * spec.out_size +
             (spec.use_bias ? static_cast<std::size_t>(spec.out_size) : 0);
    default:
      return 0;
  }
}

Shape infer_network_shape(Shape in, const std::vector<LayerSpec>& specs) {
  for (const auto& s : specs) in = infer_output_shape(in, s);
  return in;
}

std::size_t network_param_count(Shape in, const std::vector<LayerSpec>& specs) {
  std::size_t n = 0;
  for (const auto& s : specs) {
    n += layer_param_count(in, s);
    in = infer_output_shape(in, s);
  }
  return n;
}

SignalTensor conv1d_forward(const SignalTensor& x, const FilterBank& f,
                            std::span<const double> bias) {
  if (x.channels() != f.in_channels()) {
    throw InvalidArgument("conv1d: input has " + std::to_string(x.channels()) +
                          " channels, filters expect " +
                          std::to_string(f.in_channels()));
  }
  return conv1d_forward(x, f.width(), f.out_channels(), f.weights(), bias);
}

SignalTensor conv1d_forward(const SignalTensor& x, int width, int filters,
                            std::span<const double> weights,
                            std::span<const double> bias) {
  if (x.length() < 1) throw InvalidArgument("conv1d: input length must be >= 1");
  if (width < 1 || filters < 1) {
    throw InvalidArgument("conv1d: width and filters must be >= 1");
  }
  if (weights.size() !=
      static_cast<std::size_t>(x.channels()) * width * filters) {
    throw InvalidArgument("conv1d: weight count mismatch");
  }
  if (!bias.empty() && bias.size() != static_cast<std::size_t>(filters)) {
    throw InvalidArgument("conv1d: bias size mismatch");
  }
  const int T = x.length();
  const int N = x.channels();
  const int W = width;
  const int M = filters;
  std::vector<double> out(static_cast<std::size_t>(M) * T, 0.0);
  const double* fw = weights.data();
  for (int k = 0; k < M; ++k) {
    double* o = out.data() + static_cast<std::size_t>(k) * T;
    if (!bias.empty()) std::fill(o, o + T, bias[k]);
    for (int i = 0; i < N; ++i) {
      const double* xi = x.row(i).data();
      const double* fk = fw + (static_cast<std::size_t>(k) * N + i) * W;
      const int jmax = std::min(W, T);
      for (int j = 0; j < jmax; ++j) {
        const double w = fk[j];
        const double* xs = xi + j;
        const int n = T - j;  // frames beyond T read as zero and are skipped
        for (int t = 0; t < n; ++t) o[t] += w * xs[t];
      }
    }
  }
  return SignalTensor::from_raw(M, T, std::move(out));
}

SignalTensor relu_forward(const SignalTensor& x) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (double& v : out) v = v > 0.0 ? v : 0.0;
  return SignalTensor::from_raw(x.channels(), x.length(), std::move(out));
}

PoolResult maxpool_forward(const SignalTensor& x, int window) {
  if (window < 1) throw InvalidArgument("maxpool: window must be >= 1");
  if (x.length() < 1) throw InvalidArgument("maxpool: input length must be >= 1");
  const int T = x.length();
  const int S = window;
  const int out_len = (T + S - 1) / S;
  PoolResult r;
  std::vector<double> out(static_cast<std::size_t>(x.channels()) * out_len);
  r.argmax.resize(out.size());
  for (int c = 0; c < x.channels(); ++c) {
    const double* xi = x.row(c).data();
    for (int t = 0; t < out_len; ++t) {
      const int lo = t * S;
      const int hi = std::min(lo + S, T);
      int best = lo;
      for (int u = lo + 1; u < hi; ++u) {
        if (xi[u] > xi[best]) best = u;
      }
      int eq = 0;
      for (int u = lo; u < hi; ++u) eq += (xi[u] == xi[best]);
      if (eq > 1) ++r.ties;
      const std::size_t cell = static_cast<std::size_t>(c) * out_len + t;
      out[cell] = xi[best];
      r.argmax[cell] = best;
    }
  }
  r.output = SignalTensor::from_raw(x.channels(), out_len, std::move(out));
  return r;
}

SignalTensor flatten_forward(const SignalTensor& x) {
  std::vector<double> v(x.values().begin(), x.values().end());
  return SignalTensor::from_raw(x.channels() * x.length(), 1, std::move(v));
}

SignalTensor fc_forward(const SignalTensor& x, std::span<const double> weights,
                        int out_size, std::span<const double> bias) {
  const int n = x.channels() * x.length();
  if (weights.size() != static_cast<std::size_t>(n) * out_size) {
    throw InvalidArgument("fully_connected: weight matrix is " +
                          std::to_string(weights.size()) + " values, expected " +
                          std::to_string(n) + "x" + std::to_string(out_size));
  }
  if (!bias.empty() && bias.size() != static_cast<std::size_t>(out_size)) {
    throw InvalidArgument("fully_connected: bias size mismatch");
  }
  std::vector<double> out(out_size, 0.0);
  if (!bias.empty()) std::copy(bias.begin(), bias.end(), out.begin());
  const double* xv = x.values().data();
  for (int i = 0; i < n; ++i) {
    const double xi = xv[i];
    if (xi == 0.0) continue;
    const double* wr = weights.data() + static_cast<std::size_t>(i) * out_size;
    for (int o = 0; o < out_size; ++o) out[o] += xi * wr[o];
  }
  return SignalTensor::from_raw(out_size, 1, std::move(out));
}

Sequential::Sequential(const std::string& prefix, std::vector<LayerSpec> specs,
                       Shape in, ParamStore& store)
    : specs_(std::move(specs)), in_shape_(in), bound_store_(&store) {
  boundary_shapes_.push_back(in);
  Shape cur = in;
  for (std::size_t li = 0; li < specs_.size(); ++li) {
    const LayerSpec& s = specs_[li];
    Shape next = infer_output_shape(cur, s);  // throws ConfigError on mismatch
    ParamHandle wh = kNone, bh = kNone;
    const std::string base = prefix + "/" + std::to_string(li) + "." +
                             layer_kind_name(s.kind);
    if (s.kind == LayerKind::Conv1d) {
      wh = store.add(base + ".w",
                     static_cast<std::size_t>(cur.channels) * s.width * s.filters);
      if (s.use_bias) bh = store.add(base + ".b", s.filters);
    } else if (s.kind == LayerKind::FullyConnected) {
      wh = store.add(base + ".w",
                     static_cast<std::size_t>(cur.channels) * s.out_size);
      if (s.use_bias) bh = store.add(base + ".b", s.out_size);
    }
    weight_handles_.push_back(wh);
    bias_handles_.push_back(bh);
    boundary_shapes_.push_back(next);
    cur = next;
  }
  out_shape_ = cur;
}

void Sequential::init_weights(ParamStore& store, Rng& rng) const {
  Shape cur = in_shape_;
  for (std::size_t li = 0; li < specs_.size(); ++li) {
    const LayerSpec& s = specs_[li];
    if (weight_handles_[li] != kNone) {
      double fan_in = 0, fan_out = 0;
      if (s.kind == LayerKind::Conv1d) {
        fan_in = static_cast<double>(cur.channels) * s.width;
        fan_out = static_cast<double>(s.filters) * s.width;
      } else {
        fan_in = cur.channels;
        fan_out = s.out_size;
      }
      const double bound = std::sqrt(6.0 / (fan_in + fan_out));
      for (double& w : store.weights(weight_handles_[li])) {
        w = rng.uniform(-bound, bound);
      }
      if (bias_handles_[li] != kNone) {
        auto b = store.weights(bias_handles_[li]);
        std::fill(b.begin(), b.end(), 0.0);
      }
    }
    cur = boundary_shapes_[li + 1];
  }
}

SignalTensor Sequential::forward(const SignalTensor& x, const ParamStore& store,
                                 Tape* tape) const {
  if (x.channels() != in_shape_.channels || x.length() != in_shape_.length) {
    throw ShapeError("network expects " + std::to_string(in_shape_.channels) +
                     "x" + std::to_string(in_shape_.length) + " input, got " +
                     std::to_string(x.channels()) + "x" +
                     std::to_string(x.length()));
  }
  if (tape) {
    tape->layers.clear();
    tape->layers.resize(specs_.size());
    tape->pool_ties = 0;
    if (tape->record_signature) tape->signature = kFnvOffset;
  }
  SignalTensor cur = x;
  for (std::size_t li = 0; li < specs_.size(); ++li) {
    const LayerSpec& s = specs_[li];
    switch (s.kind) {
      case LayerKind::Conv1d: {
        const auto w = store.weights(weight_handles_[li]);
        std::span<const double> bias;
        if (bias_handles_[li] != kNone) bias = store.weights(bias_handles_[li]);
        SignalTensor out = conv1d_forward(cur, s.width, s.filters, w, bias);
        if (tape) tape->layers[li].input = std::move(cur);
        cur = std::move(out);
        break;
      }
      case LayerKind::Relu: {
        SignalTensor out = relu_forward(cur);
        if (tape) {
          if (tape->record_signature) {
            std::uint64_t word = 0;
            int nbit = 0;
            for (double v : cur.values()) {
              word = (word << 1) | (v > 0.0 ? 1u : 0u);
              if (++nbit == 64) {
                fold_u64(tape->signature, word);
                word = 0;
                nbit = 0;
              }
            }
            if (nbit) fold_u64(tape->signature, word);
          }
          tape->layers[li].input = std::move(cur);
        }
        cur = std::move(out);
        break;
      }
      case LayerKind::MaxPool: {
        PoolResult r = maxpool_forward(cur, s.window);
        if (tape) {
          tape->pool_ties += r.ties;
          if (tape->record_signature) {
            for (int a : r.argmax) {
              fold_u64(tape->signature, static_cast<std::uint64_t>(a));
            }
          }
          tape->layers[li].argmax = std::move(r.argmax);
        }
        cur = std::move(r.output);
        break;
      }
      case LayerKind::Flatten:
        cur = flatten_forward(cur);
        break;
      case LayerKind::FullyConnected: {
        const auto w = store.weights(weight_handles_[li]);
        std::span<const double> bias;
        if (bias_handles_[li] != kNone) bias = store.weights(bias_handles_[li]);
        SignalTensor out = fc_forward(cur, w, s.out_size, bias);
        if (tape) tape->layers[li].input = std::move(cur);
        cur = std::move(out);
        break;
      }
    }
  }
  return cur;
}

SignalTensor Sequential::backward(const SignalTensor& d_out, const Tape& tape,
                                  const ParamStore& store,
                                  GradBuffer& grads) const {
  if (tape.layers.size() != specs_.size()) {
    throw InvalidArgument("backward before forward: tape does not match network");
  }
  SignalTensor d = d_out;
  for (std::size_t ri = specs_.size(); ri-- > 0;) {
    const LayerSpec& s = specs_[ri];
    const Shape& in_shape = boundary_shapes_[ri];
    switch (s.kind) {
      case LayerKind::Conv1d: {
        const SignalTensor& x = tape.layers[ri].input;
        const int T = in_shape.length;
        const int N = in_shape.channels;
        const int W = s.width;
        const int M = s.filters;
        auto gw = grads.grads(weight_handles_[ri]);
        const auto fw = store.weights(weight_handles_[ri]);
        std::vector<double> dx(static_cast<std::size_t>(N) * T, 0.0);
        const int jmax = std::min(W, T);
        for (int k = 0; k < M; ++k) {
          const double* dk = d.row(k).data();
          for (int i = 0; i < N; ++i) {
            const double* xi = x.row(i).data();
            double* dxi = dx.data() + static_cast<std::size_t>(i) * T;
            const std::size_t fbase = (static_cast<std::size_t>(k) * N + i) * W;
            for (int j = 0; j < jmax; ++j) {
              const int n = T - j;  // the zero-padded tail takes no gradient
              // d(weight): correlate upstream gradient with the input
              double acc = 0.0;
              const double* xs = xi + j;
              for (int t = 0; t < n; ++t) acc += dk[t] * xs[t];
              gw[fbase + j] += acc;
              // d(input): smear upstream gradient through the filter tap
              const double w = fw[fbase + j];
              double* ds = dxi + j;
              for (int t = 0; t < n; ++t) ds[t] += w * dk[t];
            }
          }
          if (bias_handles_[ri] != kNone) {
            double acc = 0.0;
            for (int t = 0; t < T; ++t) acc += dk[t];
            grads.grads(bias_handles_[ri])[k] += acc;
          }
        }
        d = SignalTensor::from_raw(N, T, std::move(dx));
        break;
      }
      case LayerKind::Relu: {
        const SignalTensor& x = tape.layers[ri].input;
        std::vector<double> dx(d.values().begin(), d.values().end());
        const auto xv = x.values();
        for (std::size_t i = 0; i < dx.size(); ++i) {
          if (!(xv[i] > 0.0)) dx[i] = 0.0;
        }
        d = SignalTensor::from_raw(x.channels(), x.length(), std::move(dx));
        break;
      }
      case LayerKind::MaxPool: {
        const auto& argmax = tape.layers[ri].argmax;
        const int T = in_shape.length;
        const int out_len = boundary_shapes_[ri + 1].length;
        std::vector<double> dx(static_cast<std::size_t>(in_shape.channels) * T, 0.0);
        const double* dv = d.values().data();
        for (int c = 0; c < in_shape.channels; ++c) {
          for (int t = 0; t < out_len; ++t) {
            const std::size_t cell = static_cast<std::size_t>(c) * out_len + t;
            dx[static_cast<std::size_t>(c) * T + argmax[cell]] += dv[cell];
          }
        }
        d = SignalTensor::from_raw(in_shape.channels, T, std::move(dx));
        break;
      }
      case LayerKind::Flatten: {
        std::vector<double> dx(d.values().begin(), d.values().end());
        d = SignalTensor::from_raw(in_shape.channels, in_shape.length,
                                   std::move(dx));
        break;
      }
      case LayerKind::FullyConnected: {
        const SignalTensor& x = tape.layers[ri].input;
        const int n = in_shape.channels;
        const int m = s.out_size;
        const auto w = store.weights(weight_handles_[ri]);
        auto gw = grads.grads(weight_handles_[ri]);
        const double* dv = d.values().data();
        const double* xv = x.values().data();
        std::vector<double> dx(n, 0.0);
        for (int i = 0; i < n; ++i) {
          const double* wr = w.data() + static_cast<std::size_t>(i) * m;
          double* gr = gw.data() + static_cast<std::size_t>(i) * m;
          double acc = 0.0;
          const double xi = xv[i];
          for (int o = 0; o < m; ++o) {
            acc += wr[o] * dv[o];
            gr[o] += xi * dv[o];
          }
          dx[i] = acc;
        }
        if (bias_handles_[ri] != kNone) {
          auto gb = grads.grads(bias_handles_[ri]);
          for (int o = 0; o < m; ++o) gb[o] += dv[o];
        }
        d = SignalTensor::from_raw(n, 1, std::move(dx));
        break;
      }
    }
  }
  return d;
}

std::size_t Sequential::param_count() const {
  return network_param_count(in_shape_, specs_);
}

}  // namespace trajnet::nn
