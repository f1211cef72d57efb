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

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pqas {

/// Builds the 32-byte key of a KeyedStream as BLAKE2b-256 over the domain tag
/// "pqaslab/v1" followed by each field as (8-byte little-endian length, bytes).
class StreamKey {
 public:
  StreamKey();

  StreamKey& add(std::string_view label);
  StreamKey& add(std::uint64_t value);
  StreamKey& add(std::span<const std::uint8_t> bytes);

  std::array<std::uint8_t, 32> digest() const;

 private:
  std::vector<std::uint8_t> message_;
};

/// Deterministic counter-mode byte stream: ChaCha20 keystream with a zero
/// nonce and a 64-bit block counter starting at 0.
///
/// Draw order is part of the reproducibility contract: 64-bit words are read
/// little-endian from consecutive keystream bytes, uniforms take the top 53
/// bits, and normals come from Box-Muller pairs (first the cosine branch).
class KeyedStream {
 public:
  static constexpr std::string_view kGenerator = "chacha20(blake2b-256)/libsodium";

  explicit KeyedStream(const StreamKey& key);
  explicit KeyedStream(const std::array<std::uint8_t, 32>& key);

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  /// Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);
  bool bit();
  bool bernoulli(double p);
  /// Standard normal.
  double normal();
  /// Complex normal with independent N(0, 1) real and imaginary parts.
  std::complex<double> complex_normal();

  std::uint64_t blocks_used() const { return counter_; }

 private:
  void refill();

  std::array<std::uint8_t, 32> key_;
  std::array<std::uint8_t, 64> block_{};
  std::size_t pos_ = 64;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Stream for trial `trial` of a record: hash(master, experiment, params, trial).
KeyedStream derive_stream(
    std::uint64_t master_seed, std::string_view experiment, std::string_view params,
    std::uint64_t trial);

/// Per-trial streams of one record, all derived from the same master seed.
struct TrialSeeds {
  std::uint64_t master = 0;
  std::string experiment;
  std::string params;

  KeyedStream at(std::uint64_t trial) const { return derive_stream(master, experiment, params, trial); }
  /// A sub-record with an extra parameter label.
  TrialSeeds child(std::string_view label) const {
    return {master, experiment, params + "/" + std::string(label)};
  }
};

/// Key triple k = (k1, k2, k3) of 16-byte seeds.
struct SecretKey {
  static constexpr std::size_t kSeedBytes = 16;
  static constexpr std::size_t kBits = 3 * 8 * kSeedBytes;

  std::array<std::uint8_t, kSeedBytes> k1{};
  std::array<std::uint8_t, kSeedBytes> k2{};
  std::array<std::uint8_t, kSeedBytes> k3{};

  static SecretKey generate(KeyedStream& rng);
  std::string hex() const;

  bool operator==(const SecretKey&) const = default;
};

}  // namespace pqas
