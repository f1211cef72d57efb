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
#include <span>
#include <string>
#include <string_view>

#include "pqaslab/qcore.hpp"

namespace pqas::qcore {

/// Signed Pauli string (-1)^sign * P_0 (x) ... (x) P_{n-1}, with P_q chosen by
/// the bit pair (x_q, z_q): (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y. Bit q of the
/// masks refers to qubit q.
struct PauliString {
  std::size_t num_qubits = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  bool sign = false;

  /// Parses strings such as "XIZ" or "-YY".
  static PauliString parse(std::string_view label);
  std::string label() const;

  bool commutes_with(const PauliString& other) const;
  CMatrix matrix() const;
  /// P |v>, in place.
  void apply(CVector& v) const;
};

/// Applies a 2^k x 2^k gate acting on `qubits` (k of them, in gate order) to
/// every column of m, which has 2^num_qubits rows.
void apply_gate_left(
    CMatrix& m, const CMatrix& gate, std::span<const std::size_t> qubits,
    std::size_t num_qubits);

/// rho -> G rho G^dagger for a gate on a subset of qubits.
void conjugate_by_gate(
    CMatrix& rho, const CMatrix& gate, std::span<const std::size_t> qubits,
    std::size_t num_qubits);

namespace gates {
CMatrix hadamard();
CMatrix cnot();  // control is the first qubit of the pair
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
}  // namespace gates

}  // namespace pqas::qcore
