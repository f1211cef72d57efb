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

#include "pqaslab/channel.hpp"
#include "pqaslab/ensembles.hpp"
#include "pqaslab/random.hpp"

/// VPRDMs, one-way state generators and EFI pairs.
namespace pqas::primitives {

using ensembles::ScramblerSpec;
using qcore::CMatrix;
using qcore::DensityMatrix;
using qcore::KrausChannel;

struct VprdmParams {
  std::size_t n = 1;
  std::size_t m = 0;
  SecretKey key;

  void validate() const;
};

/// U_k (|0><0|^{(x)(n-m)} (x) sigma_m) U_k^dagger.
DensityMatrix vprdm_generate(const VprdmParams& p, const ScramblerSpec& spec);

/// tr(|0><0|^{(x)(n-m)} tr_m(U_k^dagger rho U_k)).
double vprdm_verify(const DensityMatrix& rho, const SecretKey& key, std::size_t n, std::size_t m, const ScramblerSpec& spec);

/// || E_GHSE[rho^{(x)t}] - E_U[(U rho_0 U^dagger)^{(x)t}] ||_1 with
/// rho_0 = |0><0|^{(x)(n-m)} (x) sigma_m, both from closed-form permutation sums.
double ghse_closeness(std::size_t n, std::size_t m, std::size_t t);

/// One-way state generator on top of the VPRDM.
struct Owsg {
  std::size_t n = 1;
  std::size_t m = 0;
  ScramblerSpec spec;
  /// Ver accepts iff V >= threshold; threshold 1 means V >= 1 - 1e-9.
  double threshold = 0.5;

  SecretKey keygen(KeyedStream& rng) const;
  DensityMatrix stategen(const SecretKey& key) const;
  bool ver(const SecretKey& key, const DensityMatrix& state) const;
};

struct EfiParams {
  std::size_t n = 6;
  std::size_t m0 = 1;
  double gamma = 0.5;
  double c = 0.25;
  std::size_t lambda_eff = 4;
  ScramblerSpec spec;

  std::size_t m1() const;
  void validate() const;
};

/// nu_b = 2^-lambda_eff sum_k vprdm_generate(k, m_b) over keys drawn from
/// seeds (arm b uses seeds.child("arm<b>")).
struct EfiPair {
  DensityMatrix nu0;
  DensityMatrix nu1;
};

EfiPair efi_pair(const EfiParams& p, const TrialSeeds& seeds);

struct EfiReport {
  double s0 = 0.0;
  double s1 = 0.0;
  /// T = || nu1 - nu0 ||_1 / 2.
  double t_exact = 0.0;
  /// 1 - (S0 + 1) / S1.
  double t_lower_bound = 0.0;
  /// Both sides of |S1 - S0| <= T log2(2^n - 1) + H(T, 1 - T).
  double fannes_lhs = 0.0;
  double fannes_rhs = 0.0;

  bool fannes_holds(double slack = 1e-9) const { return fannes_lhs <= fannes_rhs + slack; }
};

EfiReport efi_report(const EfiPair& pair);

struct EfiNoiseReport {
  EfiReport noiseless;
  /// Gamma applied to both arms.
  EfiReport noisy;
  /// Gamma applied to nu0 only, T' = TD(Gamma(nu0), nu1).
  double t_one_arm = 0.0;
  /// Shannon entropy of the mixed-unitary weights; empty when the channel is
  /// not mixed unitary.
  std::optional<double> noise_entropy;
  /// Per-qubit entropy H(1 - 3p/4, p/4, p/4, p/4) for local depolarizing.
  std::optional<double> per_qubit_entropy;
  /// gamma - c - m0 / n.
  double per_qubit_budget = 0.0;
  /// n (1 - c) - m0 - 2.
  double theorem_budget = 0.0;
  /// gamma n - (lambda_eff + m0) - 1, the entropy room left after the key average.
  double effective_budget = 0.0;

  /// noise_entropy <= theorem_budget; false when the channel is not mixed unitary.
  bool within_budget() const { return noise_entropy && *noise_entropy <= theorem_budget; }
};

EfiNoiseReport efi_noise_check(const EfiParams& p, const EfiPair& pair, const KrausChannel& noise);

}  // namespace pqas::primitives
