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

#include "pqaslab/gates.hpp"

#include <bit>
#include <vector>

namespace pqas::qcore {

namespace {

// Basis-index bit that carries qubit q in an nq-qubit register.
std::uint64_t qubit_bit(std::size_t q, std::size_t nq) {
  return std::uint64_t{1} << (nq - 1 - q);
}

// Converts qubit-indexed masks to basis-index masks.
std::uint64_t to_index_mask(std::uint64_t mask, std::size_t nq) {
  std::uint64_t out = 0;
  for (std::size_t q = 0; q < nq; ++q) {
    if ((mask >> q) & 1U) out |= qubit_bit(q, nq);
  }
  return out;
}

}  // namespace

PauliString PauliString::parse(std::string_view label) {
  PauliString p;
  if (!label.empty() && (label.front() == '-' || label.front() == '+')) {
    p.sign = label.front() == '-';
    label.remove_prefix(1);
  }
  p.num_qubits = label.size();
  if (p.num_qubits > 63) throw SizeLimitError("Pauli string longer than 63 qubits");
  for (std::size_t q = 0; q < label.size(); ++q) {
    switch (label[q]) {
      case 'I': break;
      case 'X': p.x |= std::uint64_t{1} << q; break;
      case 'Z': p.z |= std::uint64_t{1} << q; break;
      case 'Y':
        p.x |= std::uint64_t{1} << q;
        p.z |= std::uint64_t{1} << q;
        break;
      default:
        throw ValidationError("pauli", std::string("unknown symbol '") + label[q] + "'");
    }
  }
  return p;
}

std::string PauliString::label() const {
  std::string s = sign ? "-" : "+";
  for (std::size_t q = 0; q < num_qubits; ++q) {
    const bool xb = (x >> q) & 1U;
    const bool zb = (z >> q) & 1U;
    s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return s;
}

bool PauliString::commutes_with(const PauliString& other) const {
  const int sym = std::popcount(x & other.z) + std::popcount(z & other.x);
  return sym % 2 == 0;
}

void PauliString::apply(CVector& v) const {
  const std::uint64_t xm = to_index_mask(x, num_qubits);
  const std::uint64_t zm = to_index_mask(z, num_qubits);
  // Y = i X Z on each qubit: P = (-1)^sign i^{#Y} X^x Z^z.
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Complex global = kIPow[std::popcount(x & z) % 4];
  if (sign) global = -global;
  CVector out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    const double s = (std::popcount(zm & uk) % 2) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(uk ^ xm)) = global * s * v(k);
  }
  v = std::move(out);
}

CMatrix PauliString::matrix() const {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  CMatrix m(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    CVector e = CVector::Zero(d);
    e(k) = 1.0;
    apply(e);
    m.col(k) = e;
  }
  return m;
}

void apply_gate_left(
    CMatrix& m, const CMatrix& gate, std::span<const std::size_t> qubits,
    std::size_t num_qubits) {
  const std::size_t k = qubits.size();
  const Eigen::Index gd = Eigen::Index{1} << k;
  if (gate.rows() != gd || gate.cols() != gd) throw DimensionError("gate size does not match qubit list");
  if (m.rows() != (Eigen::Index{1} << num_qubits)) throw DimensionError("matrix rows do not match qubit count");

  // Offsets of the 2^k sub-basis states within a full index.
  std::vector<std::uint64_t> sub(static_cast<std::size_t>(gd), 0);
  std::uint64_t gate_mask = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (qubits[j] >= num_qubits) throw DimensionError("gate qubit out of range");
    gate_mask |= qubit_bit(qubits[j], num_qubits);
  }
  for (std::size_t s = 0; s < sub.size(); ++s) {
    for (std::size_t j = 0; j < k; ++j) {
      if ((s >> (k - 1 - j)) & 1U) sub[s] |= qubit_bit(qubits[j], num_qubits);
    }
  }

  CVector in(gd);
  CVector out(gd);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (std::uint64_t base = 0; base < static_cast<std::uint64_t>(m.rows()); ++base) {
      if (base & gate_mask) continue;
      for (Eigen::Index s = 0; s < gd; ++s) in(s) = m(static_cast<Eigen::Index>(base | sub[s]), col);
      out.noalias() = gate * in;
      for (Eigen::Index s = 0; s < gd; ++s) m(static_cast<Eigen::Index>(base | sub[s]), col) = out(s);
    }
  }
}

void conjugate_by_gate(
    CMatrix& rho, const CMatrix& gate, std::span<const std::size_t> qubits,
    std::size_t num_qubits) {
  apply_gate_left(rho, gate, qubits, num_qubits);
  CMatrix t = rho.adjoint();
  apply_gate_left(t, gate, qubits, num_qubits);
  rho = t.adjoint();
}

namespace gates {

CMatrix hadamard() {
  CMatrix h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  return h;
}

CMatrix cnot() {
  CMatrix c = CMatrix::Zero(4, 4);
  c(0, 0) = 1.0;
  c(1, 1) = 1.0;
  c(2, 3) = 1.0;
  c(3, 2) = 1.0;
  return c;
}

CMatrix pauli_x() {
  CMatrix p(2, 2);
  p << 0, 1, 1, 0;
  return p;
}

CMatrix pauli_y() {
  CMatrix p(2, 2);
  p << Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0};
  return p;
}

CMatrix pauli_z() {
  CMatrix p(2, 2);
  p << 1, 0, 0, -1;
  return p;
}

}  // namespace gates
}  // namespace pqas::qcore
