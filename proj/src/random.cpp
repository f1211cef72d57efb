// Copyright 2026 The pqaslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pqaslab/random.hpp"

#include <sodium.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pqas {

namespace {

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

void append_le64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

StreamKey::StreamKey() {
  constexpr std::string_view kDomain = "pqaslab/v1";
  message_.assign(kDomain.begin(), kDomain.end());
}

StreamKey& StreamKey::add(std::string_view label) {
  append_le64(message_, label.size());
  message_.insert(message_.end(), label.begin(), label.end());
  return *this;
}

StreamKey& StreamKey::add(std::uint64_t value) {
  append_le64(message_, 8);
  append_le64(message_, value);
  return *this;
}

StreamKey& StreamKey::add(std::span<const std::uint8_t> bytes) {
  append_le64(message_, bytes.size());
  message_.insert(message_.end(), bytes.begin(), bytes.end());
  return *this;
}

std::array<std::uint8_t, 32> StreamKey::digest() const {
  ensure_sodium();
  std::array<std::uint8_t, 32> out{};
  crypto_generichash(out.data(), out.size(), message_.data(), message_.size(), nullptr, 0);
  return out;
}

KeyedStream::KeyedStream(const StreamKey& key) : KeyedStream(key.digest()) {}

KeyedStream::KeyedStream(const std::array<std::uint8_t, 32>& key) : key_(key) {
  static_assert(crypto_stream_chacha20_KEYBYTES == 32);
  ensure_sodium();
}

void KeyedStream::refill() {
  static const std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> kNonce{};
  block_.fill(0);
  crypto_stream_chacha20_xor_ic(
      block_.data(), block_.data(), block_.size(), kNonce.data(), counter_, key_.data());
  ++counter_;
  pos_ = 0;
}

void KeyedStream::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (pos_ == block_.size()) refill();
    b = block_[pos_++];
  }
}

std::uint64_t KeyedStream::next_u64() {
  std::array<std::uint8_t, 8> b{};
  fill(b);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

double KeyedStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t KeyedStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

bool KeyedStream::bit() { return next_u64() >> 63; }

bool KeyedStream::bernoulli(double p) { return uniform() < p; }

double KeyedStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::complex<double> KeyedStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

KeyedStream derive_stream(
    std::uint64_t master_seed, std::string_view experiment, std::string_view params,
    std::uint64_t trial) {
  return KeyedStream(StreamKey().add(master_seed).add(experiment).add(params).add(trial));
}

SecretKey SecretKey::generate(KeyedStream& rng) {
  SecretKey k;
  rng.fill(k.k1);
  rng.fill(k.k2);
  rng.fill(k.k3);
  return k;
}

std::string SecretKey::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (const auto* part : {&k1, &k2, &k3}) {
    for (auto b : *part) {
      s += kDigits[b >> 4];
      s += kDigits[b & 15];
    }
  }
  return s;
}

}  // namespace pqas
