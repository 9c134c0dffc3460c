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

#include "trajnet/tensor.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "trajnet/errors.hpp"

namespace trajnet {

namespace {

void check_all_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw InvalidArgument(std::string(what) + ": non-finite value");
    }
  }
}

}  // namespace

SignalTensor SignalTensor::zeros(int channels, int length) {
  if (channels < 1) throw InvalidArgument("SignalTensor: channels must be >= 1");
  if (length < 0) throw InvalidArgument("SignalTensor: negative length");
  return SignalTensor(channels, length,
                      std::vector<double>(static_cast<std::size_t>(channels) * length, 0.0));
}

SignalTensor SignalTensor::from_values(int channels, int length,
                                       std::vector<double> values) {
  check_all_finite(values, "SignalTensor");
  return from_raw(channels, length, std::move(values));
}

SignalTensor SignalTensor::from_raw(int channels, int length,
                                    std::vector<double> values) {
  if (channels < 1) throw InvalidArgument("SignalTensor: channels must be >= 1");
  if (length < 0) throw InvalidArgument("SignalTensor: negative length");
  if (values.size() != static_cast<std::size_t>(channels) * length) {
    throw InvalidArgument("SignalTensor: value count " +
                          std::to_string(values.size()) + " != channels*length");
  }
  return SignalTensor(channels, length, std::move(values));
}

FilterBank::FilterBank(int in_channels, int width, int out_channels)
    : in_channels_(in_channels), width_(width), out_channels_(out_channels) {
  if (in_channels < 1 || width < 1 || out_channels < 1) {
    throw InvalidArgument("FilterBank: all dimensions must be >= 1");
  }
  weights_.assign(static_cast<std::size_t>(in_channels) * width * out_channels, 0.0);
}

FilterBank FilterBank::from_values(int in_channels, int width, int out_channels,
                                   std::vector<double> values) {
  FilterBank f(in_channels, width, out_channels);
  if (values.size() != f.weights_.size()) {
    throw InvalidArgument("FilterBank: value count mismatch");
  }
  check_all_finite(values, "FilterBank");
  f.weights_ = std::move(values);
  return f;
}

SignalTensor stack_channels(std::span<const SignalTensor> parts) {
  if (parts.empty()) throw InvalidArgument("stack_channels: empty part list");
  const int length = parts[0].length();
  int channels = 0;
  for (const auto& p : parts) {
    if (p.empty()) throw InvalidArgument("stack_channels: empty part");
    if (p.length() != length) {
      throw InvalidArgument("stack_channels: mismatched lengths " +
                            std::to_string(p.length()) + " vs " +
                            std::to_string(length));
    }
    channels += p.channels();
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(channels) * length);
  for (const auto& p : parts) {
    out.insert(out.end(), p.values().begin(), p.values().end());
  }
  return SignalTensor::from_raw(channels, length, std::move(out));
}

SignalTensor slice_time(const SignalTensor& x, int start, int len) {
  if (x.empty()) throw InvalidArgument("slice_time: empty tensor");
  if (start < 0 || len < 0 || start + len > x.length()) {
    throw InvalidArgument("slice_time: range [" + std::to_string(start) + ", " +
                          std::to_string(start + len) + ") out of [0, " +
                          std::to_string(x.length()) + ")");
  }
  std::vector<double> out(static_cast<std::size_t>(x.channels()) * len);
  for (int c = 0; c < x.channels(); ++c) {
    auto r = x.row(c);
    std::memcpy(out.data() + static_cast<std::size_t>(c) * len, r.data() + start,
                sizeof(double) * len);
  }
  return SignalTensor::from_raw(x.channels(), len, std::move(out));
}

SignalTensor slice_channels(const SignalTensor& x, int start, int count) {
  if (x.empty()) throw InvalidArgument("slice_channels: empty tensor");
  if (start < 0 || count < 1 || start + count > x.channels()) {
    throw InvalidArgument("slice_channels: channel range out of bounds");
  }
  auto v = x.values();
  std::vector<double> out(v.begin() + static_cast<std::size_t>(start) * x.length(),
                          v.begin() + static_cast<std::size_t>(start + count) * x.length());
  return SignalTensor::from_raw(count, x.length(), std::move(out));
}

}  // namespace trajnet
