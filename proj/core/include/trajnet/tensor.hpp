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

#pragma once

#include <span>
#include <vector>

namespace trajnet {

/// Dense (channels x time) array of doubles, channel-major: all of channel
/// 0's timeline first, then channel 1's, and so on. Immutable after
/// construction; safe to share across threads.
///
/// This is the universal carrier for trajectories, activations and
/// gradients. Flat feature vectors are represented as (n, 1).
class SignalTensor {
 public:
  /// Empty sentinel (0 channels). Most operations reject it.
  SignalTensor() = default;

  /// All-zero tensor. channels must be >= 1; length may be 0.
  static SignalTensor zeros(int channels, int length);

  /// Builds from explicit values (channel-major). Validates the element
  /// count and that every value is finite.
  static SignalTensor from_values(int channels, int length,
                                  std::vector<double> values);

  /// Builds without the finiteness scan. For internal hot paths whose
  /// inputs are already validated; the element count is still checked.
  static SignalTensor from_raw(int channels, int length,
                               std::vector<double> values);

  int channels() const { return channels_; }
  int length() const { return length_; }
  bool empty() const { return channels_ == 0; }

  double at(int c, int t) const {
    return values_[static_cast<std::size_t>(c) * length_ + t];
  }
  /// One channel's full timeline.
  std::span<const double> row(int c) const {
    return {values_.data() + static_cast<std::size_t>(c) * length_,
            static_cast<std::size_t>(length_)};
  }
  std::span<const double> values() const { return values_; }

  bool operator==(const SignalTensor&) const = default;

 private:
  SignalTensor(int channels, int length, std::vector<double> values)
      : channels_(channels), length_(length), values_(std::move(values)) {}

  int channels_ = 0;
  int length_ = 0;
  std::vector<double> values_;
};

/// Weights of one 1D convolutional layer: in_channels x width x out_channels,
/// addressed as at(in_channel i, tap j, filter k). Stored filter-major so
/// each filter's taps are contiguous.
class FilterBank {
 public:
  FilterBank() = default;
  /// Zero-initialized bank.
  FilterBank(int in_channels, int width, int out_channels);
  /// Builds from explicit values in storage order (filter-major: k, then i,
  /// then j). Validates count and finiteness.
  static FilterBank from_values(int in_channels, int width, int out_channels,
                                std::vector<double> values);

  int in_channels() const { return in_channels_; }
  int width() const { return width_; }
  int out_channels() const { return out_channels_; }

  double at(int i, int j, int k) const {
    return weights_[index(i, j, k)];
  }
  double& at(int i, int j, int k) { return weights_[index(i, j, k)]; }

  std::span<const double> weights() const { return weights_; }
  std::span<double> weights() { return weights_; }

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * in_channels_ + i) * width_ + j;
  }

  int in_channels_ = 0;
  int width_ = 0;
  int out_channels_ = 0;
  std::vector<double> weights_;
};

/// Concatenates parts along the channel axis. All parts must share the same
/// length; each part is recoverable with slice_channels.
SignalTensor stack_channels(std::span<const SignalTensor> parts);

/// Columns [start, start+len) of x, all channels.
SignalTensor slice_time(const SignalTensor& x, int start, int len);

/// Channels [start, start+count) of x, full timeline.
SignalTensor slice_channels(const SignalTensor& x, int start, int count);

}  // namespace trajnet
