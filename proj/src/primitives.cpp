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

#include "pqaslab/primitives.hpp"

#include <algorithm>
#include <cmath>

#include "pqaslab/errors.hpp"
#include "pqaslab/moments.hpp"

namespace pqas::primitives {

namespace {

DensityMatrix base_state(std::size_t n, std::size_t m) {
  return qcore::tensor(qcore::zero_state(n - m), qcore::maximally_mixed(m));
}

double binary_entropy(double p) {
  const double probs[2] = {p, 1.0 - p};
  return qcore::shannon_entropy_bits(probs);
}

}  // namespace

void VprdmParams::validate() const {
  if (n == 0) throw ValidationError("n", "must be positive");
  if (m >= n) throw ValidationError("m", "must satisfy m < n");
  qcore::check_cap(n, "vprdm");
}

DensityMatrix vprdm_generate(const VprdmParams& p, const ScramblerSpec& spec) {
  p.validate();
  const auto u = ensembles::build_scrambler(p.key, p.n, spec);
  return qcore::apply_unitary(base_state(p.n, p.m), u);
}

double vprdm_verify(
    const DensityMatrix& rho, const SecretKey& key, std::size_t n, std::size_t m,
    const ScramblerSpec& spec) {
  VprdmParams{n, m, key}.validate();
  if (rho.num_qubits() != n) throw DimensionError("vprdm_verify: state has wrong qubit count");
  const auto u = ensembles::build_scrambler(key, n, spec);
  const CMatrix back = u.matrix().adjoint() * rho.matrix() * u.matrix();
  // |0..0> on the first n - m qubits are the first 2^m basis indices.
  const Eigen::Index block = Eigen::Index{1} << m;
  return std::clamp(back.diagonal().head(block).real().sum(), 0.0, 1.0);
}

double ghse_closeness(std::size_t n, std::size_t m, std::size_t t) {
  if (n == 0) throw ValidationError("n", "must be positive");
  if (m > n) throw ValidationError("m", "must satisfy m <= n");
  if (t == 0 || t > moments::kMaxCopies) throw ValidationError("t", "must be in [1, 6]");
  const std::uint64_t d = std::uint64_t{1} << n;
  if (d < t) throw ValidationError("t", "needs 2^n >= t");

  const auto perms = moments::Permutation::all(t);
  const auto& wg = moments::weingarten_table(t, d);
  const double db = std::ldexp(1.0, static_cast<int>(m));
  const double big = std::ldexp(1.0, static_cast<int>(n + m));
  double rising = 1.0;
  for (std::size_t i = 0; i < t; ++i) rising *= big + static_cast<double>(i);

  std::vector<double> diff(perms.size());
  for (std::size_t a = 0; a < perms.size(); ++a) {
    const double ghse = std::pow(db, static_cast<double>(moments::cycles(perms[a]))) / rising;
    double twirled = 0.0;
    const auto inv = perms[a].inverse();
    for (std::size_t b = 0; b < perms.size(); ++b) {
      // tr(rho_0^{(x)t} P_pi) = prod over cycles of tr(rho_0^len) = 2^{-m (t - #cycles)}.
      const double tr = std::ldexp(1.0, -static_cast<int>(m * (t - moments::cycles(perms[b]))));
      twirled += wg[moments::permutation_rank(inv.compose(perms[b]))] * tr;
    }
    diff[a] = ghse - twirled;
  }

  const double dd = static_cast<double>(d);
  if (t == 1) return std::abs(diff[0]) * dd;
  if (t == 2) {
    // perms = {e, swap}; I = P+ + P-, SWAP = P+ - P-.
    return std::abs(diff[0] + diff[1]) * dd * (dd + 1) / 2 + std::abs(diff[0] - diff[1]) * dd * (dd - 1) / 2;
  }
  if (n * t > 12) throw SizeLimitError("ghse_closeness: 2^{nt} exceeds 4096");
  const Eigen::Index dim = Eigen::Index{1} << (n * t);
  CMatrix delta = CMatrix::Zero(dim, dim);
  for (std::size_t a = 0; a < perms.size(); ++a) delta += diff[a] * moments::permutation_operator(perms[a], d);
  return qcore::trace_norm(delta);
}

SecretKey Owsg::keygen(KeyedStream& rng) const { return SecretKey::generate(rng); }

DensityMatrix Owsg::stategen(const SecretKey& key) const { return vprdm_generate({n, m, key}, spec); }

bool Owsg::ver(const SecretKey& key, const DensityMatrix& state) const {
  const double v = vprdm_verify(state, key, n, m, spec);
  return threshold >= 1.0 ? v >= 1.0 - 1e-9 : v >= threshold;
}

std::size_t EfiParams::m1() const {
  return static_cast<std::size_t>(std::floor(gamma * static_cast<double>(n)));
}

void EfiParams::validate() const {
  if (n == 0 || n > 6) throw ValidationError("n", "must be in [1, 6]");
  qcore::check_cap(n, "efi");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma", "must be in (0, 1)");
  if (!(c > 0.0 && c < gamma)) throw ValidationError("c", "must be in (0, gamma)");
  if (lambda_eff > 12) throw ValidationError("lambda_eff", "must be at most 12");
  if (m1() >= n) throw ValidationError("gamma", "floor(gamma n) must be below n");
  if (m0 > m1()) throw ValidationError("m0", "must not exceed floor(gamma n)");
}

EfiPair efi_pair(const EfiParams& p, const TrialSeeds& seeds) {
  p.validate();
  const std::size_t keys = std::size_t{1} << p.lambda_eff;
  auto average = [&](std::size_t m, std::string_view arm) {
    const auto rho0 = base_state(p.n, m);
    const auto arm_seeds = seeds.child(arm);
    CMatrix acc = CMatrix::Zero(rho0.dim(), rho0.dim());
    for (std::size_t k = 0; k < keys; ++k) {
      auto rng = arm_seeds.at(k);
      const auto u = ensembles::build_scrambler(SecretKey::generate(rng), p.n, p.spec);
      acc += u.matrix() * rho0.matrix() * u.matrix().adjoint();
    }
    acc /= static_cast<double>(keys);
    return DensityMatrix(CMatrix((acc + acc.adjoint()) / 2.0), qcore::Unchecked{});
  };
  return {average(p.m0, "arm0"), average(p.m1(), "arm1")};
}

EfiReport efi_report(const EfiPair& pair) {
  if (pair.nu0.dim() != pair.nu1.dim()) throw DimensionError("efi_report: arms differ in size");
  EfiReport r;
  r.s0 = qcore::vn_entropy_bits(pair.nu0);
  r.s1 = qcore::vn_entropy_bits(pair.nu1);
  r.t_exact = qcore::trace_distance(pair.nu0, pair.nu1);
  r.t_lower_bound = r.s1 > 0.0 ? 1.0 - (r.s0 + 1.0) / r.s1 : -1.0;
  const double dim = static_cast<double>(pair.nu0.dim());
  const double t = std::clamp(r.t_exact, 0.0, 1.0);
  r.fannes_lhs = std::abs(r.s1 - r.s0);
  r.fannes_rhs = t * std::log2(dim - 1.0) + binary_entropy(t);
  return r;
}

EfiNoiseReport efi_noise_check(const EfiParams& p, const EfiPair& pair, const KrausChannel& noise) {
  p.validate();
  if (noise.dim() != pair.nu0.dim()) throw DimensionError("efi_noise_check: channel size mismatch");
  EfiNoiseReport r;
  r.noiseless = efi_report(pair);
  const EfiPair noisy{noise.apply(pair.nu0), noise.apply(pair.nu1)};
  r.noisy = efi_report(noisy);
  r.t_one_arm = qcore::trace_distance(noisy.nu0, pair.nu1);
  r.noise_entropy = noise.mixture_entropy_bits();
  if (const auto w = noise.local_mixture_weights()) r.per_qubit_entropy = qcore::shannon_entropy_bits(*w);
  const double n = static_cast<double>(p.n);
  const double m0 = static_cast<double>(p.m0);
  r.per_qubit_budget = p.gamma - p.c - m0 / n;
  r.theorem_budget = n * (1.0 - p.c) - m0 - 2.0;
  r.effective_budget = p.gamma * n - (static_cast<double>(p.lambda_eff) + m0) - 1.0;
  return r;
}

}  // namespace pqas::primitives
