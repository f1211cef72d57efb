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

#include "pqaslab/channel.hpp"
#include "pqaslab/ensembles.hpp"
#include "pqaslab/qcore.hpp"
#include "pqaslab/random.hpp"
#include "pqaslab/stats.hpp"

/// Encryption, decryption and tag authentication.
namespace pqas::protocol {

using ensembles::ScramblerMode;
using ensembles::ScramblerSpec;
using qcore::CMatrix;
using qcore::DensityMatrix;
using qcore::KrausChannel;
using qcore::PureState;
using qcore::QubitPartition;
using qcore::UnitaryMatrix;

inline constexpr double kRejectFloor = 1e-12;

struct Ciphertext {
  DensityMatrix state;
  QubitPartition partition;
};

/// rho (x) |0_l><0_l| (x) sigma_m.
DensityMatrix extend(const DensityMatrix& rho, const QubitPartition& partition);

/// U (rho (x) |0_l><0_l| (x) sigma_m) U^dagger.
Ciphertext encrypt_with(const DensityMatrix& rho, const UnitaryMatrix& u, const QubitPartition& partition);
Ciphertext encrypt(
    const DensityMatrix& rho, const SecretKey& key, const QubitPartition& partition,
    const ScramblerSpec& spec);

/// tr_m(U^dagger c U), on the message and tag registers.
DensityMatrix decrypt_with(const Ciphertext& c, const UnitaryMatrix& u);
DensityMatrix decrypt(const Ciphertext& c, const SecretKey& key, const ScramblerSpec& spec);

struct AuthOutcome {
  double accept_prob = 0.0;
  bool accepted = false;
  std::optional<DensityMatrix> post_message;
  /// Unnormalized fidelity <psi, 0_l| tr_m(Pi_0 U^dagger c U Pi_0) |psi, 0_l>,
  /// present when a reference state was given.
  std::optional<double> unnormalized_fidelity;

  /// <psi| rho_0 |psi>; zero on reject.
  double fidelity_with(const PureState& psi) const;
};

AuthOutcome authenticate_with(
    const Ciphertext& c, const UnitaryMatrix& u, const PureState* reference = nullptr);
AuthOutcome authenticate(
    const Ciphertext& c, const SecretKey& key, const ScramblerSpec& spec,
    const PureState* reference = nullptr);

/// F_c = (d^-1 sum |tr K|^2 + 1) / (d + 1).
double channel_fidelity(const KrausChannel& channel);
/// F_e = d^-2 sum |tr K|^2.
double entanglement_fidelity(const KrausChannel& channel);
/// Depolarizing parameter of the Haar twirl of the channel,
/// (sum |tr K|^2 - 1) / (d^2 - 1).
double twirl_parameter(const KrausChannel& channel);

struct AuthPrediction {
  double channel_fidelity = 0.0;
  /// Exact Haar (and 2-design) averages.
  double p0_exact = 0.0;
  double fprime_exact = 0.0;
  /// Leading-order forms (1 - 2^-l) F_c + 2^-l and (1 - 2^-(n+l)) F_c + 2^-(n+l).
  double p0_leading = 0.0;
  double fprime_leading = 0.0;
  /// Bound on |exact - leading| for both quantities: (1 - F_c) / (d - 1).
  double finite_size_gap = 0.0;
};

AuthPrediction predict_auth(const QubitPartition& partition, const KrausChannel& channel);

struct AuthStats {
  Estimate p0;
  Estimate fprime;
  /// Mean fidelity F = F'/P0 and infidelity 1 - F over accepted trials.
  Estimate fidelity;
  Estimate infidelity;
  std::size_t trials = 0;
  std::size_t accepted = 0;
  /// min over trials of P0 - F'.
  double min_gap = 0.0;
  /// Channel fidelity below 1e-6 (reported, not asserted).
  bool degenerate = false;
};

/// Monte Carlo over keys of authenticate(Gamma(encrypt(psi))), one fresh key
/// per trial from seeds.at(trial).
AuthStats auth_sweep(
    const PureState& psi, const QubitPartition& partition, const KrausChannel& channel,
    std::size_t trials, const ScramblerSpec& spec, const TrialSeeds& seeds);

/// Monte Carlo estimate of || E_U (Phi_U^{(x)t} (x) id_q)(rho_g) - sigma_z^{(x)t} (x) tr_msg rho_g ||_1
/// over Haar scramblers, for t in {1, 2}. The estimator averages
/// 2 tr(M X_U) - 2 tr(M target) along the optimal measurement M of the exact
/// deviation, which is unbiased and keeps the variance bounded. For t = 1
/// the deviation vanishes and M is the projector onto |0...0> (x) I_q.
struct ScanResult {
  Estimate estimate;
  double exact = 0.0;
};

ScanResult security_scan(
    const DensityMatrix& rho_g, const QubitPartition& partition, std::size_t t, std::size_t q,
    std::size_t trials, const TrialSeeds& seeds);

}  // namespace pqas::protocol
