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
#include <vector>

#include "pqaslab/qcore.hpp"

/// Symmetric-group machinery and exact Haar moments.
namespace pqas::moments {

using qcore::CMatrix;
using qcore::DensityMatrix;
using qcore::QubitPartition;

inline constexpr std::size_t kMaxCopies = 6;
inline constexpr std::size_t kMaxMomentDim = 4096;

/// Bijection on {0, ..., t-1}; compose(a, b) = a after b.
class Permutation {
 public:
  /// Validates that `images` is a bijection.
  explicit Permutation(std::vector<std::size_t> images);
  static Permutation identity(std::size_t t);
  static Permutation transposition(std::size_t t, std::size_t a, std::size_t b);
  /// All of S_t in lexicographic order of image lists.
  static std::vector<Permutation> all(std::size_t t);

  std::size_t size() const { return images_.size(); }
  std::size_t operator()(std::size_t i) const { return images_[i]; }
  const std::vector<std::size_t>& images() const { return images_; }

  Permutation compose(const Permutation& rhs) const;
  Permutation inverse() const;
  std::vector<std::size_t> cycle_lengths() const;
  bool is_identity() const;

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<std::size_t> images_;
};

/// Number of cycles, fixed points included.
std::size_t cycles(const Permutation& p);

/// Position of p in Permutation::all(p.size()).
std::size_t permutation_rank(const Permutation& p);

/// f with P_pi |i> = |f(i)> on (C^d)^{(x)t}, where P_pi moves the digit in
/// slot k to slot pi(k): |i_1..i_t> -> |i_{pi^-1(1)}..i_{pi^-1(t)}>. Slot 0 is
/// the most significant digit.
std::vector<std::uint64_t> permutation_index_map(const Permutation& p, std::uint64_t d);

CMatrix permutation_operator(const Permutation& p, std::uint64_t d);

/// Weingarten function Wg(pi, d) from the Gram matrix
/// G[s, r] = d^{#cycles(s^-1 r)}. Requires d >= t and t <= 6.
double weingarten(const Permutation& p, std::uint64_t d);
/// Wg for every element of Permutation::all(t).
const std::vector<double>& weingarten_table(std::size_t t, std::uint64_t d);

double sum_abs_weingarten(std::size_t t, std::uint64_t d);
/// (d - t)! / d!.
double inverse_falling_factorial(std::uint64_t d, std::size_t t);
/// sum over pi != e of d^{#cycles(pi)}.
double sum_cycles_nonidentity(std::size_t t, std::uint64_t d);

/// E[U^{(x)t} O U^dagger^{(x)t}] over Haar U on C^d.
CMatrix haar_moment(const CMatrix& o, std::size_t t, std::uint64_t d);

/// Haar average of (Phi_U^{(x)t} (x) id_R)(rho_g), written as
/// sum_eta P_eta (x) coeff[eta] with P_eta acting on the t ciphertexts.
struct MomentTerms {
  std::size_t t = 0;
  std::uint64_t d = 0;
  std::size_t q = 0;
  std::vector<Permutation> perms;
  std::vector<CMatrix> coeff;
  /// tr over messages of rho_g; the target is I / d^t (x) reference.
  CMatrix reference;
};

/// rho_g lives on t message registers followed by q purifying qubits.
MomentTerms encrypted_moment_terms(
    const QubitPartition& partition, const DensityMatrix& rho_g, std::size_t t, std::size_t q);

/// Dense sum_eta P_eta (x) coeff[eta]; throws SizeLimitError above 4096.
CMatrix dense_moment(const MomentTerms& terms);

/// Exact rho^(t) for the product input rho^{(x)t}.
CMatrix encrypted_moment_exact(const QubitPartition& partition, const DensityMatrix& rho, std::size_t t);

/// Block form of the t = 2 deviation
/// Delta = P_+ (x) z_plus + P_- (x) z_minus, P_+- the (anti)symmetric projectors.
struct TwoCopyDeviation {
  double trace_p_plus = 0.0;
  double trace_p_minus = 0.0;
  CMatrix z_plus;
  CMatrix z_minus;
  CMatrix reference;

  double trace_norm() const;
  /// Projectors onto the positive parts of z_plus and z_minus.
  CMatrix positive_plus() const;
  CMatrix positive_minus() const;
};

TwoCopyDeviation two_copy_deviation(const MomentTerms& terms);

/// || rho^(t) - sigma_z^{(x)t} (x) reference ||_1.
double closeness_from_terms(const MomentTerms& terms);

/// || rho^(t) - sigma_z^{(x)t} ||_1 for the product input rho^{(x)t}.
double closeness_exact(const QubitPartition& partition, const DensityMatrix& rho, std::size_t t);

/// Same for a joint input on t messages and q purifying qubits.
double closeness_exact_joint(
    const QubitPartition& partition, const DensityMatrix& rho_g, std::size_t t, std::size_t q);

}  // namespace pqas::moments
