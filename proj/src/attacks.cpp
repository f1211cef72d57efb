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

#include "pqaslab/attacks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "pqaslab/gates.hpp"
#include "pqaslab/moments.hpp"

namespace pqas::attacks {

using qcore::CMatrix;

namespace {

// One SWAP test per pair, sampled independently.
bool all_pairs_accept(const std::vector<const DensityMatrix*>& states, KeyedStream& rng) {
  bool all = true;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const double accept = qcore::swap_test_accept(*states[i], *states[j]);
      if (!rng.bernoulli(accept)) all = false;
    }
  }
  return all;
}

std::size_t factorial(std::size_t k) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

LRGameConfig swap_test_lr_config(std::size_t t, std::size_t l, std::size_t m, std::size_t trials) {
  if (t == 0) throw ValidationError("t", "must be at least 1");
  std::size_t n = 1;
  while ((std::size_t{1} << n) < t) ++n;
  LRGameConfig cfg;
  cfg.partition = QubitPartition(n, l, m);
  cfg.trials = trials;
  for (std::size_t i = 0; i < t; ++i) {
    cfg.left.push_back(PureState::basis(n, 0));
    cfg.right.push_back(PureState::basis(n, i));
  }
  return cfg;
}

AttackReport lr_cpa_game(const LRGameConfig& cfg, const TrialSeeds& seeds) {
  const std::size_t t = cfg.t();
  if (t == 0 || cfg.right.size() != t) throw ValidationError("plaintexts", "left and right lists need equal nonzero length");
  if (t > 8) throw SizeLimitError("lr_cpa_game supports at most 8 queries");
  if (cfg.trials == 0) throw ValidationError("trials", "must be at least 1");
  for (std::size_t i = 0; i < t; ++i) {
    if (cfg.left[i].num_qubits() != cfg.partition.n() || cfg.right[i].num_qubits() != cfg.partition.n()) {
      throw DimensionError("plaintext does not match the message register");
    }
  }
  std::size_t wins = 0;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    auto rng = seeds.at(trial);
    const SecretKey key = SecretKey::generate(rng);
    const bool b = rng.bit();
    const auto u = ensembles::build_scrambler(key, cfg.partition.z(), cfg.spec);
    const auto& list = b ? cfg.right : cfg.left;
    std::vector<DensityMatrix> cts;
    for (const auto& psi : list) {
      cts.push_back(protocol::encrypt_with(DensityMatrix::from_pure(psi), u, cfg.partition).state);
    }
    std::vector<const DensityMatrix*> ptrs;
    for (const auto& c : cts) ptrs.push_back(&c);
    const bool guess = !all_pairs_accept(ptrs, rng);
    if (guess == b) ++wins;
  }
  AttackReport r;
  r.trials = cfg.trials;
  r.success_rate = static_cast<double>(wins) / static_cast<double>(cfg.trials);
  r.advantage = 2.0 * (r.success_rate - 0.5);
  r.std_error = 2.0 * std::sqrt(r.success_rate * (1.0 - r.success_rate) / static_cast<double>(cfg.trials));
  return r;
}

Estimate purity_probe(const std::vector<Ciphertext>& copies, KeyedStream& rng) {
  if (copies.size() < 2 || copies.size() % 2 != 0) throw ValidationError("copies", "need an even number of at least 2");
  SampleStats s;
  for (std::size_t i = 0; i + 1 < copies.size(); i += 2) {
    const double accept = qcore::swap_test_accept(copies[i].state, copies[i + 1].state);
    s.add(rng.bernoulli(accept) ? 1.0 : -1.0);
  }
  return s.estimate();
}

std::vector<Estimate> bell_parity_profile(const DensityMatrix& state, std::size_t shots, KeyedStream& rng) {
  const std::size_t total = state.num_qubits();
  if (total == 0 || total % 2 != 0) throw ValidationError("state", "needs two halves of equal length");
  if (shots == 0) throw ValidationError("shots", "must be at least 1");
  const std::size_t h = total / 2;
  CMatrix rho = state.matrix();
  const CMatrix cx = qcore::gates::cnot();
  const CMatrix had = qcore::gates::hadamard();
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t pair[2] = {i, h + i};
    qcore::conjugate_by_gate(rho, cx, pair, total);
    const std::size_t one[1] = {i};
    qcore::conjugate_by_gate(rho, had, one, total);
  }
  std::vector<double> cdf(static_cast<std::size_t>(rho.rows()));
  double acc = 0.0;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) {
    acc += std::max(0.0, rho(k, k).real());
    cdf[static_cast<std::size_t>(k)] = acc;
  }

  std::vector<SampleStats> z(h);
  for (std::size_t shot = 0; shot < shots; ++shot) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    const auto k = static_cast<std::uint64_t>(it - cdf.begin());
    int parity = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const bool a = (k >> (total - 1 - i)) & 1U;
      const bool c = (k >> (total - 1 - (h + i))) & 1U;
      parity ^= (a && c) ? 1 : 0;
      z[i].add(parity ? -1.0 : 1.0);
    }
  }
  std::vector<Estimate> out;
  for (const auto& s : z) out.push_back(s.estimate());
  return out;
}

Estimate bell_parity_purity(const DensityMatrix& state, std::size_t b, std::size_t shots, KeyedStream& rng) {
  if (b == 0 || 2 * b > state.num_qubits()) throw ValidationError("b", "prefix length out of range");
  return bell_parity_profile(state, shots, rng)[b - 1];
}

DensityMatrix intercept_stream(const DensityMatrix& ciphertext, std::size_t total_qubits) {
  const std::size_t z = ciphertext.num_qubits();
  qcore::check_cap(total_qubits, "intercepted stream");
  const std::size_t whole = total_qubits / z;
  const std::size_t rest = total_qubits % z;
  std::vector<DensityMatrix> parts(whole, ciphertext);
  if (rest > 0) {
    std::vector<bool> keep(z, false);
    for (std::size_t q = 0; q < rest; ++q) keep[q] = true;
    parts.emplace_back(qcore::partial_trace_qubits(ciphertext.matrix(), keep), qcore::unchecked);
  }
  return qcore::tensor(parts);
}

QubitCountResult qubit_count_attack(
    const DensityMatrix& intercepted, std::size_t n, std::size_t s_max, double delta, std::size_t shots,
    KeyedStream& rng) {
  if (n == 0 || n > 2) throw ValidationError("n", "qubit-count attack supports 1 <= n <= 2");
  if (s_max == 0 || s_max > 3) throw ValidationError("s_max", "qubit-count attack supports 1 <= S_max <= 3");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta", "must lie in (0, 1)");
  const std::size_t need = 2 * n * factorial(s_max);
  if (intercepted.num_qubits() != need) {
    throw ValidationError("intercepted", "expected " + std::to_string(need) + " qubits");
  }
  const auto profile = bell_parity_profile(intercepted, shots, rng);
  QubitCountResult r;
  for (std::size_t s = 1; s <= s_max; ++s) {
    const Estimate z = profile[n * s - 1];
    r.purity.push_back(z);
    if (z.value >= 1.0 - delta) {
      if (!r.smallest) r.smallest = s;
      r.largest = s;
    }
  }
  return r;
}

int multi_state_attack(const std::vector<Ciphertext>& ciphertexts, KeyedStream& rng) {
  if (ciphertexts.size() < 2) throw ValidationError("ciphertexts", "need at least two");
  std::vector<const DensityMatrix*> ptrs;
  for (const auto& c : ciphertexts) ptrs.push_back(&c.state);
  return all_pairs_accept(ptrs, rng) ? 1 : 2;
}

DecoyReport decoy_indistinguishability(
    const QubitPartition& partition, std::size_t t, const ensembles::ScramblerSpec& spec, KeyedStream& rng) {
  DecoyReport r;
  const DensityMatrix zero = qcore::zero_state(partition.n());
  r.closeness = moments::closeness_exact(partition, zero, t);
  const SecretKey key = SecretKey::generate(rng);
  const auto c = protocol::encrypt(zero, key, partition, spec);
  const std::size_t half = partition.z() / 2;
  std::vector<bool> keep(partition.z(), false);
  for (std::size_t q = 0; q < half; ++q) keep[q] = true;
  const DensityMatrix reduced(qcore::partial_trace_qubits(c.state.matrix(), keep), qcore::unchecked);
  r.ciphertext_half_entropy = qcore::vn_entropy_bits(reduced);
  r.decoy_half_entropy = static_cast<double>(half);
  return r;
}

}  // namespace pqas::attacks
