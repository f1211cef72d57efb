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

#include <cstdint>
#include <string_view>
#include <vector>

#include "pqaslab/gates.hpp"
#include "pqaslab/qcore.hpp"
#include "pqaslab/random.hpp"

/// Random and keyed unitary ensembles.
namespace pqas::ensembles {

using qcore::CMatrix;
using qcore::DensityMatrix;
using qcore::PauliString;
using qcore::PureState;
using qcore::UnitaryMatrix;

/// Haar-random unitary: Ginibre matrix (entries drawn row-major), Householder
/// QR, and R's diagonal phases folded back into Q.
UnitaryMatrix sample_haar(std::size_t z, KeyedStream& rng);

/// Haar-random pure state from a normalized complex Gaussian vector.
PureState sample_haar_state(std::size_t z, KeyedStream& rng);

/// Stabilizer tableau of a Clifford C: row q is C X_q C^dagger and row z + q
/// is C Z_q C^dagger, each a Hermitian signed Pauli string.
class CliffordTableau {
 public:
  explicit CliffordTableau(std::size_t num_qubits);

  std::size_t num_qubits() const { return n_; }
  const PauliString& x_image(std::size_t q) const { return rows_[q]; }
  const PauliString& z_image(std::size_t q) const { return rows_[n_ + q]; }
  PauliString& x_image(std::size_t q) { return rows_[q]; }
  PauliString& z_image(std::size_t q) { return rows_[n_ + q]; }

  /// Images obey the Pauli commutation relations.
  bool is_valid() const;

  /// Dense unitary, with the global phase fixed so that the first nonzero
  /// amplitude of the first column is real and positive.
  UnitaryMatrix to_unitary() const;

 private:
  std::size_t n_;
  std::vector<PauliString> rows_;
};

/// Uniform Clifford tableau (Bravyi-Maslov canonical form) with uniform signs.
CliffordTableau sample_clifford_tableau(std::size_t z, KeyedStream& rng);
UnitaryMatrix sample_clifford(std::size_t z, KeyedStream& rng);

/// Key-seeded exact Haar sample standing in for an approximate 4-design.
UnitaryMatrix sample_design4_surrogate(std::size_t z, KeyedStream& rng);

/// Keyed brickwork circuit of Haar 4x4 gates. Layer l pairs (i, i+1) from
/// offset l mod 2 (offset 0 only when z < 3); z = 1 uses one 2x2 gate per
/// layer. Gates are drawn layer by layer, left to right.
UnitaryMatrix sample_pru_surrogate(std::size_t z, KeyedStream& rng, std::size_t depth);

enum class ScramblerMode { composed, haar_exact, pru_only };

std::string_view to_string(ScramblerMode mode);
/// Throws ValidationError on an unknown name.
ScramblerMode parse_scrambler_mode(std::string_view name);

struct ScramblerSpec {
  std::size_t pru_depth = 8;
  ScramblerMode mode = ScramblerMode::haar_exact;
};

/// Per-factor streams: k1 drives the PRU surrogate, k2 the 4-design, k3 the
/// Clifford factor.
KeyedStream pru_stream(const SecretKey& key);
KeyedStream design4_stream(const SecretKey& key);
KeyedStream clifford_stream(const SecretKey& key);
KeyedStream haar_exact_stream(const SecretKey& key);

/// U_k = V_pru(k1) V_4(k2) V_2(k3) in composed mode.
UnitaryMatrix build_scrambler(const SecretKey& key, std::size_t z, const ScramblerSpec& spec);

/// tr_m |psi><psi| for a Haar |psi> on n + m qubits.
DensityMatrix sample_ghse(std::size_t n, std::size_t m, KeyedStream& rng);

/// Ginibre-induced random mixed state of the given rank (full rank if 0).
DensityMatrix sample_density(std::size_t z, KeyedStream& rng, std::size_t rank = 0);

}  // namespace pqas::ensembles
