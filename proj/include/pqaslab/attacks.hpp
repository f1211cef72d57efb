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

#include <optional>
#include <vector>

#include "pqaslab/protocol.hpp"

/// Adversary games against deterministic (m = 0) and PQAS encryption.
namespace pqas::attacks {

using protocol::Ciphertext;
using qcore::DensityMatrix;
using qcore::PureState;
using qcore::QubitPartition;

struct AttackReport {
  double success_rate = 0.0;
  /// 2 (success_rate - 1/2).
  double advantage = 0.0;
  double std_error = 0.0;
  double abstained = 0.0;
  std::size_t trials = 0;
};

struct LRGameConfig {
  std::vector<PureState> left;
  std::vector<PureState> right;
  /// m = 0 is the deterministic scheme.
  QubitPartition partition{1, 0, 0};
  ensembles::ScramblerSpec spec;
  std::size_t trials = 500;

  std::size_t t() const { return left.size(); }
};

/// Left: t copies of |0>. Right: basis states |0>, ..., |t-1>. The message
/// register has ceil(log2 t) qubits (at least one).
LRGameConfig swap_test_lr_config(std::size_t t, std::size_t l, std::size_t m, std::size_t trials);

/// Each trial draws a key and a bit b, encrypts the chosen list under the
/// same key and runs one SWAP test on every pair of ciphertexts, each pair
/// sampled independently with acceptance (1 + tr(c_i c_j)) / 2. The
/// adversary answers b' = 0 iff every test accepts.
AttackReport lr_cpa_game(const LRGameConfig& cfg, const TrialSeeds& seeds);

/// tr(rho^2) from SWAP tests on the disjoint pairs (0,1), (2,3), ...
Estimate purity_probe(const std::vector<Ciphertext>& copies, KeyedStream& rng);

/// Bell-basis measurement between qubit i and qubit h + i of a 2h-qubit
/// state (CNOT then Hadamard on i), AND of each pair of bits, and
/// Z_b = 1 - 2 P_odd(b) over the first b AND bits. Returns Z_1..Z_h from the
/// same shots.
std::vector<Estimate> bell_parity_profile(const DensityMatrix& state, std::size_t shots, KeyedStream& rng);
Estimate bell_parity_purity(const DensityMatrix& state, std::size_t b, std::size_t shots, KeyedStream& rng);

/// The first total_qubits qubits of a stream of identical ciphertexts:
/// c^{(x)k} (x) (first r qubits of c).
DensityMatrix intercept_stream(const DensityMatrix& ciphertext, std::size_t total_qubits);

struct QubitCountResult {
  /// Z_{n s'} for s' = 1..S_max.
  std::vector<Estimate> purity;
  /// Smallest s' with Z >= 1 - delta; empty means abstain.
  std::optional<std::size_t> smallest;
  /// Largest such s' (the alternative rule).
  std::optional<std::size_t> largest;
};

/// intercepted holds 2 n S_max! qubits. Requires S_max <= 3 and n <= 2.
QubitCountResult qubit_count_attack(
    const DensityMatrix& intercepted, std::size_t n, std::size_t s_max, double delta, std::size_t shots,
    KeyedStream& rng);

/// SWAP test on every pair; 1 if all accept, else 2.
int multi_state_attack(const std::vector<Ciphertext>& ciphertexts, KeyedStream& rng);

struct DecoyReport {
  /// || rho^(t) - sigma_z^{(x)t} ||_1 for the plaintext |0>.
  double closeness = 0.0;
  /// Entropy in bits of the first half of one ciphertext, and the same for
  /// the maximally mixed decoy.
  double ciphertext_half_entropy = 0.0;
  double decoy_half_entropy = 0.0;
};

DecoyReport decoy_indistinguishability(
    const QubitPartition& partition, std::size_t t, const ensembles::ScramblerSpec& spec, KeyedStream& rng);

}  // namespace pqas::attacks
