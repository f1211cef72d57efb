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

#include "pqaslab/qcore.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <string>

namespace pqas::qcore {

namespace {

constexpr std::size_t kDefaultCap = 10;

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

[[maybe_unused]] bool looks_like_density(const CMatrix& m) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= 1e-8 &&
         std::abs(m.trace() - Complex{1.0, 0.0}) <= 1e-8;
}

}  // namespace

std::size_t qubit_cap() {
  if (const char* env = std::getenv("PQASLAB_CAP")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 30) return v;
  }
  return kDefaultCap;
}

void check_cap(std::size_t qubits, const char* what) {
  const std::size_t cap = qubit_cap();
  if (qubits > cap) throw CapError(what, qubits, cap);
}

std::size_t qubits_for_dim(Eigen::Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) {
    throw DimensionError(
        "dimension " + std::to_string(dim) + " is not a power of two");
  }
  std::size_t q = 0;
  while ((Eigen::Index{1} << q) < dim) ++q;
  return q;
}

// ---------------------------------------------------------------------------

PureState PureState::from_amplitudes(CVector amplitudes) {
  qubits_for_dim(amplitudes.size());
  if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-10) {
    throw ValidationError("amplitudes", "squared norm is not 1");
  }
  return PureState(std::move(amplitudes), unchecked);
}

PureState PureState::basis(std::size_t num_qubits, std::size_t index) {
  check_cap(num_qubits, "basis state");
  CVector v = CVector::Zero(Eigen::Index{1} << num_qubits);
  if (static_cast<Eigen::Index>(index) >= v.size()) {
    throw DimensionError("basis index out of range");
  }
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v), unchecked);
}

PureState::PureState(CVector amplitudes, Unchecked) : amp_(std::move(amplitudes)) {
  assert(std::abs(amp_.squaredNorm() - 1.0) <= 1e-8);
}

DensityMatrix DensityMatrix::from_matrix(CMatrix m) {
  if (m.rows() != m.cols()) throw DimensionError("density matrix is not square");
  qubits_for_dim(m.rows());
  if (max_abs(m - m.adjoint()) > kHermitianTol) {
    throw ValidationError("density", "matrix is not Hermitian");
  }
  if (std::abs(m.trace() - Complex{1.0, 0.0}) > kTraceTol) {
    throw ValidationError("density", "trace is not 1");
  }
  const RVector ev = hermitian_eigenvalues(m);
  if (ev(0) < -kPsdTol) {
    throw ValidationError("density", "matrix is not positive semidefinite");
  }
  return DensityMatrix(std::move(m), unchecked);
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const CVector& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint(), unchecked);
}

DensityMatrix::DensityMatrix(CMatrix m, Unchecked) : m_(std::move(m)) {
  assert(looks_like_density(m_));
}

UnitaryMatrix UnitaryMatrix::from_matrix(CMatrix m) {
  if (m.rows() != m.cols()) throw DimensionError("unitary is not square");
  qubits_for_dim(m.rows());
  const CMatrix gram = m.adjoint() * m;
  if (max_abs(gram - CMatrix::Identity(m.rows(), m.cols())) > kUnitaryTol) {
    throw ValidationError("unitary", "U^dagger U differs from I");
  }
  return UnitaryMatrix(std::move(m), unchecked);
}

UnitaryMatrix UnitaryMatrix::identity(Eigen::Index dim) {
  qubits_for_dim(dim);
  return UnitaryMatrix(CMatrix::Identity(dim, dim), unchecked);
}

UnitaryMatrix::UnitaryMatrix(CMatrix m, Unchecked) : m_(std::move(m)) {
  assert(m_.rows() == m_.cols());
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
  return UnitaryMatrix(m_.adjoint(), unchecked);
}

UnitaryMatrix UnitaryMatrix::operator*(const UnitaryMatrix& rhs) const {
  if (dim() != rhs.dim()) throw DimensionError("unitary product dimension mismatch");
  return UnitaryMatrix(m_ * rhs.m_, unchecked);
}

QubitPartition::QubitPartition(std::size_t n, std::size_t l, std::size_t m)
    : n_(n), l_(l), m_(m) {
  if (n == 0) throw ValidationError("n", "message register needs at least one qubit");
  check_cap(n + l + m, "partition z = n + l + m");
}

// ---------------------------------------------------------------------------

DensityMatrix maximally_mixed(std::size_t m) {
  check_cap(m, "maximally mixed register");
  const Eigen::Index d = Eigen::Index{1} << m;
  CMatrix out = CMatrix::Identity(d, d) / static_cast<double>(d);
  return DensityMatrix(std::move(out), unchecked);
}

DensityMatrix zero_state(std::size_t num_qubits) {
  check_cap(num_qubits, "zero state");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  CMatrix out = CMatrix::Zero(d, d);
  out(0, 0) = 1.0;
  return DensityMatrix(std::move(out), unchecked);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  check_cap(a.num_qubits() + b.num_qubits(), "tensor product");
  return DensityMatrix(kron(a.matrix(), b.matrix()), unchecked);
}

DensityMatrix tensor(std::span<const DensityMatrix> factors) {
  if (factors.empty()) return maximally_mixed(0);
  DensityMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

CMatrix partial_trace_qubits(const CMatrix& m, const std::vector<bool>& keep) {
  const std::size_t nq = qubits_for_dim(m.rows());
  if (keep.size() != nq) throw DimensionError("keep mask length differs from qubit count");
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < nq; ++q) (keep[q] ? kept : traced).push_back(q);

  auto offsets = [nq](const std::vector<std::size_t>& qs) {
    const std::size_t count = std::size_t{1} << qs.size();
    std::vector<Eigen::Index> out(count, 0);
    for (std::size_t v = 0; v < count; ++v) {
      Eigen::Index idx = 0;
      for (std::size_t j = 0; j < qs.size(); ++j) {
        if ((v >> (qs.size() - 1 - j)) & 1U) idx |= Eigen::Index{1} << (nq - 1 - qs[j]);
      }
      out[v] = idx;
    }
    return out;
  };
  const auto base = offsets(kept);
  const auto off = offsets(traced);
  const auto dk = static_cast<Eigen::Index>(base.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex acc{0.0, 0.0};
      for (Eigen::Index t : off) acc += m(base[a] | t, base[b] | t);
      out(a, b) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(
    const DensityMatrix& rho, std::span<const std::size_t> layout,
    std::span<const std::size_t> discard) {
  std::size_t total = 0;
  for (auto s : layout) total += s;
  if (total != rho.num_qubits()) {
    throw DimensionError(
        "layout covers " + std::to_string(total) + " qubits, state has " +
        std::to_string(rho.num_qubits()));
  }
  std::vector<bool> keep(total, true);
  std::size_t start = 0;
  for (std::size_t r = 0; r < layout.size(); ++r) {
    const bool drop = std::find(discard.begin(), discard.end(), r) != discard.end();
    for (std::size_t q = 0; q < layout[r]; ++q) keep[start + q] = !drop;
    start += layout[r];
  }
  for (auto r : discard) {
    if (r >= layout.size()) throw DimensionError("discarded register index out of range");
  }
  return DensityMatrix(partial_trace_qubits(rho.matrix(), keep), unchecked);
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryMatrix& u) {
  if (rho.dim() != u.dim()) throw DimensionError("apply_unitary dimension mismatch");
  CMatrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  return DensityMatrix(std::move(out), unchecked);
}

Projection project(const DensityMatrix& rho, const CMatrix& projector) {
  if (projector.rows() != rho.dim() || projector.cols() != rho.dim()) {
    throw DimensionError("projector dimension mismatch");
  }
  if (max_abs(projector * projector - projector) > kIdempotentTol ||
      max_abs(projector - projector.adjoint()) > kIdempotentTol) {
    throw ValidationError("projector", "operator is not an orthogonal projector");
  }
  CMatrix kept = projector * rho.matrix() * projector;
  const double p = std::clamp(kept.trace().real(), 0.0, 1.0);
  if (p <= kProjectionFloor) return {p, std::nullopt};
  kept /= p;
  return {p, DensityMatrix(std::move(kept), unchecked)};
}

// ---------------------------------------------------------------------------

RVector hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double trace_norm(const CMatrix& h) {
  return hermitian_eigenvalues(h).cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("trace_distance dimension mismatch");
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

double fidelity_with_pure(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) throw DimensionError("fidelity dimension mismatch");
  const CVector& a = psi.amplitudes();
  return a.dot(rho.matrix() * a).real();
}

double purity(const DensityMatrix& rho) {
  return rho.matrix().cwiseAbs2().sum();
}

double overlap(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("overlap dimension mismatch");
  // tr(rho sigma) for Hermitian operands.
  return (rho.matrix().conjugate().cwiseProduct(sigma.matrix())).sum().real();
}

double vn_entropy_bits(const RVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double p = eigenvalues(i);
    if (p > kEigenClip) s -= p * std::log2(p);
  }
  return s;
}

double vn_entropy_bits(const DensityMatrix& rho) {
  return vn_entropy_bits(hermitian_eigenvalues(rho.matrix()));
}

double shannon_entropy_bits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

Metrics metrics(const DensityMatrix& rho, const DensityMatrix& sigma) {
  Metrics out{};
  out.trace_distance = trace_distance(rho, sigma);
  out.overlap = overlap(rho, sigma);
  out.purity = purity(rho);
  out.vn_entropy_bits = vn_entropy_bits(rho);
  if (std::abs(purity(sigma) - 1.0) <= 1e-9) out.fidelity_with_pure = out.overlap;
  return out;
}

double swap_test_accept(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return 0.5 * (1.0 + overlap(rho, sigma));
}

}  // namespace pqas::qcore
