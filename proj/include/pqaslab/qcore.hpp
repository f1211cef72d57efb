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

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pqaslab/errors.hpp"

/// Dense multi-qubit linear algebra.
///
/// Basis convention: qubit 0 is the most significant bit of a basis index,
/// so kron(A, B) places A on the leading qubits. Registers of a PQAS
/// ciphertext are always laid out as (message, tag, mixed).
namespace pqas::qcore {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kIdempotentTol = 1e-9;
inline constexpr double kEigenClip = 1e-12;
inline constexpr double kProjectionFloor = 1e-12;

/// Qubit cap for any single register; PQASLAB_CAP overrides the default 10.
std::size_t qubit_cap();
void check_cap(std::size_t qubits, const char* what);

/// log2(dim); throws DimensionError unless dim is a power of two.
std::size_t qubits_for_dim(Eigen::Index dim);

struct Unchecked {};
inline constexpr Unchecked unchecked{};

class PureState {
 public:
  /// Validates |amplitudes|^2 == 1 within 1e-10 and a power-of-two length.
  static PureState from_amplitudes(CVector amplitudes);
  static PureState basis(std::size_t num_qubits, std::size_t index);

  PureState(CVector amplitudes, Unchecked);

  const CVector& amplitudes() const { return amp_; }
  Eigen::Index dim() const { return amp_.size(); }
  std::size_t num_qubits() const { return qubits_for_dim(amp_.size()); }

 private:
  CVector amp_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Full validation (Hermitian, trace, PSD); throws ValidationError.
  static DensityMatrix from_matrix(CMatrix m);
  static DensityMatrix from_pure(const PureState& psi);

  /// For results whose invariants hold by construction. Checked only in
  /// debug builds.
  DensityMatrix(CMatrix m, Unchecked);

  const CMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  std::size_t num_qubits() const { return qubits_for_dim(m_.rows()); }

 private:
  CMatrix m_;
};

class UnitaryMatrix {
 public:
  /// Validates max|U^dagger U - I| <= 1e-9.
  static UnitaryMatrix from_matrix(CMatrix m);
  static UnitaryMatrix identity(Eigen::Index dim);

  UnitaryMatrix(CMatrix m, Unchecked);

  const CMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  std::size_t num_qubits() const { return qubits_for_dim(m_.rows()); }
  UnitaryMatrix adjoint() const;
  UnitaryMatrix operator*(const UnitaryMatrix& rhs) const;

 private:
  CMatrix m_;
};

/// (n, l, m) layout of message, tag and mixed registers; z = n + l + m.
class QubitPartition {
 public:
  QubitPartition(std::size_t n, std::size_t l, std::size_t m);

  std::size_t n() const { return n_; }
  std::size_t l() const { return l_; }
  std::size_t m() const { return m_; }
  std::size_t z() const { return n_ + l_ + m_; }
  Eigen::Index dim() const { return Eigen::Index{1} << z(); }

  bool operator==(const QubitPartition&) const = default;

 private:
  std::size_t n_;
  std::size_t l_;
  std::size_t m_;
};

// ---------------------------------------------------------------------------
// States

/// sigma_m = I / 2^m. m == 0 gives the 1x1 scalar 1.
DensityMatrix maximally_mixed(std::size_t m);

/// |0...0><0...0| on the given number of qubits.
DensityMatrix zero_state(std::size_t num_qubits);

// ---------------------------------------------------------------------------
// Composite systems

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix tensor(std::span<const DensityMatrix> factors);
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Reduced state on the registers not listed in `discard`. `layout` gives
/// the qubit count of each register in order; kept registers keep their
/// relative order.
DensityMatrix partial_trace(
    const DensityMatrix& rho, std::span<const std::size_t> layout,
    std::span<const std::size_t> discard);

/// Raw partial trace over the qubits with keep[q] == false.
CMatrix partial_trace_qubits(const CMatrix& m, const std::vector<bool>& keep);

// ---------------------------------------------------------------------------
// Evolution and measurement

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryMatrix& u);

struct Projection {
  double probability;
  /// Normalized post-measurement state; empty when probability is at or
  /// below kProjectionFloor (a reject).
  std::optional<DensityMatrix> post;

  bool rejected() const { return !post.has_value(); }
};

Projection project(const DensityMatrix& rho, const CMatrix& projector);

// ---------------------------------------------------------------------------
// Metrics

/// Eigenvalues of a Hermitian matrix in ascending order.
RVector hermitian_eigenvalues(const CMatrix& h);

/// ||H||_1 for Hermitian H.
double trace_norm(const CMatrix& h);

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double fidelity_with_pure(const DensityMatrix& rho, const PureState& psi);
double purity(const DensityMatrix& rho);
double overlap(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Von Neumann entropy in bits; eigenvalues below 1e-12 count as zero.
double vn_entropy_bits(const DensityMatrix& rho);
double vn_entropy_bits(const RVector& eigenvalues);

/// Shannon entropy in bits of a probability vector.
double shannon_entropy_bits(std::span<const double> probabilities);

struct Metrics {
  double trace_distance;
  double overlap;
  double purity;
  double vn_entropy_bits;
  /// <psi|rho|psi>, present when sigma is pure.
  std::optional<double> fidelity_with_pure;
};

Metrics metrics(const DensityMatrix& rho, const DensityMatrix& sigma);

/// SWAP-test acceptance probability (1 + tr(rho sigma)) / 2.
double swap_test_accept(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace pqas::qcore
