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

#include "trajnet/models/shared_compare.hpp"

#include <array>

#include "trajnet/errors.hpp"

namespace trajnet::models {

namespace {

constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fold_sig(std::uint64_t& h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffu;
    h *= kFnvPrime;
  }
}

SignalTensor add_tensors(const SignalTensor& a, const SignalTensor& b) {
  std::vector<double> v(a.values().begin(), a.values().end());
  const auto bv = b.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += bv[i];
  return SignalTensor::from_raw(a.channels(), a.length(), std::move(v));
}

}  // namespace

void SharedCompareNet::Trace::set_record_signature(bool on) {
  for (auto& t : shared_tapes) t.record_signature = on;
  for (auto& t : compare_tapes) t.record_signature = on;
  head_tape.record_signature = on;
}

std::uint64_t SharedCompareNet::Trace::combined_signature() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& t : shared_tapes) fold_sig(h, t.signature);
  for (const auto& t : compare_tapes) fold_sig(h, t.signature);
  fold_sig(h, head_tape.signature);
  return h;
}

int SharedCompareNet::Trace::total_pool_ties() const {
  int n = 0;
  for (const auto& t : shared_tapes) n += t.pool_ties;
  for (const auto& t : compare_tapes) n += t.pool_ties;
  return n + head_tape.pool_ties;
}

SharedCompareNet::SharedCompareNet(SharedCompareConfig cfg,
                                   std::uint64_t init_seed)
    : cfg_(std::move(cfg)) {
  if (cfg_.np < 1) throw ConfigError("shared-compare: np must be >= 1");
  if (cfg_.np < 2 && !cfg_.include_self_pair) {
    throw ConfigError("shared-compare: np >= 2 required without self pair");
  }
  if (cfg_.num_classes < 2) throw ConfigError("shared-compare: num_classes must be >= 2");

  const nn::Shape person_in{2, cfg_.t, false};
  shared_ = nn::Sequential("shared", cfg_.shared_layers, person_in, store_);
  const nn::Shape so = shared_.out_shape();
  if (so.flat) throw ConfigError("shared net must not flatten (pairs are channel-concatenated)");
  const nn::Shape pair_in{2 * so.channels, so.length, false};
  compare_ = nn::Sequential("compare", cfg_.compare_layers, pair_in, store_);
  const nn::Shape co = compare_.out_shape();
  pair_feature_size_ = co.channels * co.length;
  const nn::Shape head_in{cfg_.pair_count() * pair_feature_size_, 1, true};
  head_ = nn::Sequential("head", {nn::LayerSpec::fc(cfg_.num_classes)}, head_in,
                         store_);

  Rng rng(init_seed);
  shared_.init_weights(store_, rng);
  compare_.init_weights(store_, rng);
  head_.init_weights(store_, rng);
}

void SharedCompareNet::check_sample(const data::TrajectorySample& sample) const {
  if (static_cast<int>(sample.persons.size()) != cfg_.np) {
    throw ShapeError("sample has " + std::to_string(sample.persons.size()) +
                     " person slots, model expects np=" + std::to_string(cfg_.np));
  }
  for (const auto& p : sample.persons) {
    if (static_cast<int>(p.x.size()) != cfg_.t ||
        static_cast<int>(p.y.size()) != cfg_.t) {
      throw ShapeError("sample series length " + std::to_string(p.x.size()) +
                       " != model window t=" + std::to_string(cfg_.t));
    }
  }
}

std::vector<int> SharedCompareNet::partner_indices() const {
  std::vector<int> idx;
  for (int i = cfg_.include_self_pair ? 0 : 1; i < cfg_.np; ++i) idx.push_back(i);
  return idx;
}

std::vector<double> SharedCompareNet::forward(
    const data::TrajectorySample& sample, const PersonOrdering& ordering,
    Trace* trace) const {
  check_sample(sample);
  if (static_cast<int>(ordering.order.size()) != cfg_.np) {
    throw InvalidArgument("ordering does not cover all person slots");
  }

  Trace local;
  Trace& tr = trace ? *trace : local;
  tr.shared_tapes.resize(cfg_.np);
  const auto partners = partner_indices();
  tr.compare_tapes.resize(partners.size());

  // Embed every person with the shared weights, in proximity order.
  std::vector<SignalTensor> embeddings(cfg_.np);
  for (int i = 0; i < cfg_.np; ++i) {
    const SignalTensor person =
        sample.persons[ordering.order[i]].to_tensor();
    embeddings[i] = shared_.forward(person, store_, &tr.shared_tapes[i]);
  }

  // Compare each (key, partner) pair and concatenate the pair features.
  std::vector<SignalTensor> feats;
  feats.reserve(partners.size());
  for (std::size_t j = 0; j < partners.size(); ++j) {
    const std::array<SignalTensor, 2> pair = {embeddings[0],
                                              embeddings[partners[j]]};
    const SignalTensor pair_in = stack_channels(pair);
    const SignalTensor out =
        compare_.forward(pair_in, store_, &tr.compare_tapes[j]);
    feats.push_back(nn::flatten_forward(out));
  }
  const SignalTensor head_in = stack_channels(feats);
  const SignalTensor logits = head_.forward(head_in, store_, &tr.head_tape);
  tr.probs = nn::softmax(logits.values());
  return tr.probs;
}

double SharedCompareNet::forward_backward(const data::TrajectorySample& sample,
                                          const PersonOrdering& ordering,
                                          int label,
                                          const nn::LossWeights& weights,
                                          nn::GradBuffer& grads,
                                          Trace& trace) const {
  const std::vector<double> probs = forward(sample, ordering, &trace);
  const double loss = nn::weighted_cross_entropy(probs, label, weights);

  const std::vector<double> dlogits =
      nn::weighted_ce_logit_grad(probs, label, weights);
  SignalTensor d = head_.backward(
      SignalTensor::from_raw(cfg_.num_classes, 1, dlogits), trace.head_tape,
      store_, grads);

  // Split the head gradient back into pair features, push each through the
  // compare net, then bucket the pair-input gradients per person.
  const auto partners = partner_indices();
  const nn::Shape co = compare_.out_shape();
  std::vector<SignalTensor> d_embed(cfg_.np);
  for (std::size_t j = 0; j < partners.size(); ++j) {
    const SignalTensor d_feat = slice_channels(
        d, static_cast<int>(j) * pair_feature_size_, pair_feature_size_);
    const SignalTensor d_compare_out = SignalTensor::from_raw(
        co.channels, co.length,
        std::vector<double>(d_feat.values().begin(), d_feat.values().end()));
    const SignalTensor d_pair =
        compare_.backward(d_compare_out, trace.compare_tapes[j], store_, grads);
    const int half = d_pair.channels() / 2;
    const SignalTensor d_key = slice_channels(d_pair, 0, half);
    const SignalTensor d_other = slice_channels(d_pair, half, half);
    d_embed[0] = d_embed[0].empty() ? d_key : add_tensors(d_embed[0], d_key);
    const int p = partners[j];
    d_embed[p] = d_embed[p].empty() ? d_other : add_tensors(d_embed[p], d_other);
  }

  for (int i = 0; i < cfg_.np; ++i) {
    if (d_embed[i].empty()) {
      // np == 1 with self pair only: nothing flowed to this slot.
      continue;
    }
    shared_.backward(d_embed[i], trace.shared_tapes[i], store_, grads);
  }
  return loss;
}

std::vector<double> SharedCompareNet::predict_unknown_key(
    const data::TrajectorySample& sample) const {
  check_sample(sample);
  std::vector<double> mean(cfg_.num_classes, 0.0);
  int used = 0;
  for (int p = 0; p < cfg_.np; ++p) {
    if (sample.persons[p].fully_absent()) continue;
    const PersonOrdering ord = proximity_order(sample, p);
    const std::vector<double> probs = forward(sample, ord);
    for (int c = 0; c < cfg_.num_classes; ++c) mean[c] += probs[c];
    ++used;
  }
  if (used == 0) {
    throw InvalidArgument("predict_unknown_key: no present persons in sample");
  }
  for (double& v : mean) v /= used;
  return mean;
}

}  // namespace trajnet::models
