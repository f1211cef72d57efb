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

#include "pqaslab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pqaslab/moments.hpp"

namespace pqas::protocol {

using qcore::Complex;
using qcore::CVector;

namespace {

void check_message(const DensityMatrix& rho, const QubitPartition& partition) {
  if (rho.num_qubits() != partition.n()) {
    throw DimensionError(
        "message has " + std::to_string(rho.num_qubits()) + " qubits, partition expects " +
        std::to_string(partition.n()));
  }
}

void check_scrambler(const UnitaryMatrix& u, const QubitPartition& partition) {
  if (u.dim() != partition.dim()) throw DimensionError("scrambler dimension does not match partition");
}

// Sum of |a_ij|^2-style Frobenius inner product tr(a^dagger b).
Complex frob(const CMatrix& a, const CMatrix& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

}  // namespace

DensityMatrix extend(const DensityMatrix& rho, const QubitPartition& partition) {
  check_message(rho, partition);
  const DensityMatrix parts[3] = {rho, qcore::zero_state(partition.l()), qcore::maximally_mixed(partition.m())};
  return qcore::tensor(parts);
}

Ciphertext encrypt_with(const DensityMatrix& rho, const UnitaryMatrix& u, const QubitPartition& partition) {
  check_scrambler(u, partition);
  return {qcore::apply_unitary(extend(rho, partition), u), partition};
}

Ciphertext encrypt(
    const DensityMatrix& rho, const SecretKey& key, const QubitPartition& partition,
    const ScramblerSpec& spec) {
  check_message(rho, partition);
  return encrypt_with(rho, ensembles::build_scrambler(key, partition.z(), spec), partition);
}

DensityMatrix decrypt_with(const Ciphertext& c, const UnitaryMatrix& u) {
  check_scrambler(u, c.partition);
  const CMatrix y = u.matrix().adjoint() * c.state.matrix() * u.matrix();
  std::vector<bool> keep(c.partition.z(), false);
  for (std::size_t q = 0; q < c.partition.n() + c.partition.l(); ++q) keep[q] = true;
  CMatrix r = qcore::partial_trace_qubits(y, keep);
  return DensityMatrix(0.5 * (r + r.adjoint()), qcore::unchecked);
}

DensityMatrix decrypt(const Ciphertext& c, const SecretKey& key, const ScramblerSpec& spec) {
  return decrypt_with(c, ensembles::build_scrambler(key, c.partition.z(), spec));
}

double AuthOutcome::fidelity_with(const PureState& psi) const {
  if (!post_message) return 0.0;
  const auto& a = psi.amplitudes();
  if (a.size() != post_message->dim()) throw DimensionError("reference state dimension mismatch");
  return (a.adjoint() * post_message->matrix() * a)(0, 0).real();
}

AuthOutcome authenticate_with(const Ciphertext& c, const UnitaryMatrix& u, const PureState* reference) {
  check_scrambler(u, c.partition);
  const auto& p = c.partition;
  const CMatrix y = u.matrix().adjoint() * c.state.matrix() * u.matrix();
  const Eigen::Index dn = Eigen::Index{1} << p.n();
  const Eigen::Index stride = Eigen::Index{1} << (p.l() + p.m());
  const Eigen::Index dbm = Eigen::Index{1} << p.m();

  // tr_{l+m}(Pi_0 Y Pi_0): tag index fixed to 0.
  CMatrix rho0 = CMatrix::Zero(dn, dn);
  for (Eigen::Index x = 0; x < dn; ++x) {
    for (Eigen::Index xp = 0; xp < dn; ++xp) {
      Complex s = 0.0;
      for (Eigen::Index b = 0; b < dbm; ++b) s += y(x * stride + b, xp * stride + b);
      rho0(x, xp) = s;
    }
  }
  rho0 = 0.5 * (rho0 + rho0.adjoint());

  AuthOutcome out;
  out.accept_prob = std::clamp(rho0.trace().real(), 0.0, 1.0);
  out.accepted = out.accept_prob > kRejectFloor;
  if (reference) {
    const auto& a = reference->amplitudes();
    if (a.size() != dn) throw DimensionError("reference state dimension mismatch");
    out.unnormalized_fidelity = std::max(0.0, (a.adjoint() * rho0 * a)(0, 0).real());
  }
  if (out.accepted) out.post_message = DensityMatrix(rho0 / out.accept_prob, qcore::unchecked);
  return out;
}

AuthOutcome authenticate(
    const Ciphertext& c, const SecretKey& key, const ScramblerSpec& spec, const PureState* reference) {
  return authenticate_with(c, ensembles::build_scrambler(key, c.partition.z(), spec), reference);
}

double entanglement_fidelity(const KrausChannel& channel) {
  const double d = static_cast<double>(channel.dim());
  return channel.kraus_trace_weight() / (d * d);
}

double channel_fidelity(const KrausChannel& channel) {
  const double d = static_cast<double>(channel.dim());
  return (channel.kraus_trace_weight() / d + 1.0) / (d + 1.0);
}

double twirl_parameter(const KrausChannel& channel) {
  const double d = static_cast<double>(channel.dim());
  return (channel.kraus_trace_weight() - 1.0) / (d * d - 1.0);
}

AuthPrediction predict_auth(const QubitPartition& partition, const KrausChannel& channel) {
  if (channel.dim() != partition.dim()) throw DimensionError("channel dimension does not match partition");
  const double d = static_cast<double>(partition.dim());
  const double tag = std::ldexp(1.0, -static_cast<int>(partition.l()));
  const double msg_tag = std::ldexp(1.0, -static_cast<int>(partition.n() + partition.l()));
  AuthPrediction p;
  p.channel_fidelity = channel_fidelity(channel);
  const double q = twirl_parameter(channel);
  p.p0_exact = (1.0 - tag) * q + tag;
  p.fprime_exact = q + (1.0 - q) * msg_tag;
  p.p0_leading = (1.0 - tag) * p.channel_fidelity + tag;
  p.fprime_leading = (1.0 - msg_tag) * p.channel_fidelity + msg_tag;
  p.finite_size_gap = (1.0 - p.channel_fidelity) / (d - 1.0);
  return p;
}

AuthStats auth_sweep(
    const PureState& psi, const QubitPartition& partition, const KrausChannel& channel,
    std::size_t trials, const ScramblerSpec& spec, const TrialSeeds& seeds) {
  if (trials < 100) throw ValidationError("trials", "auth_sweep needs at least 100 trials");
  if (spec.mode == ScramblerMode::pru_only) throw ValidationError("mode", "auth_sweep supports haar_exact and composed");
  if (channel.dim() != partition.dim()) throw DimensionError("channel dimension does not match partition");
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  const DensityMatrix ext = extend(rho, partition);

  SampleStats p0, fp, fid, infid;
  double min_gap = std::numeric_limits<double>::infinity();
  std::size_t accepted = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    auto rng = seeds.at(trial);
    const SecretKey key = SecretKey::generate(rng);
    const UnitaryMatrix u = ensembles::build_scrambler(key, partition.z(), spec);
    const CMatrix enc = u.matrix() * ext.matrix() * u.matrix().adjoint();
    const Ciphertext tampered{DensityMatrix(channel.apply(enc), qcore::unchecked), partition};
    const AuthOutcome out = authenticate_with(tampered, u, &psi);
    const double f = *out.unnormalized_fidelity;
    p0.add(out.accept_prob);
    fp.add(f);
    min_gap = std::min(min_gap, out.accept_prob - f);
    if (out.accepted) {
      ++accepted;
      fid.add(f / out.accept_prob);
      infid.add(1.0 - f / out.accept_prob);
    }
  }
  AuthStats s;
  s.p0 = p0.estimate();
  s.fprime = fp.estimate();
  s.fidelity = fid.estimate();
  s.infidelity = infid.estimate();
  s.trials = trials;
  s.accepted = accepted;
  s.min_gap = min_gap;
  s.degenerate = channel_fidelity(channel) < 1e-6;
  return s;
}

ScanResult security_scan(
    const DensityMatrix& rho_g, const QubitPartition& partition, std::size_t t, std::size_t q,
    std::size_t trials, const TrialSeeds& seeds) {
  if (t != 1 && t != 2) throw ValidationError("t", "security_scan supports t = 1 and t = 2");
  if (trials < 2) throw ValidationError("trials", "security_scan needs at least 2 trials");
  qcore::check_cap(t * partition.n() + q, "security_scan joint input");
  qcore::check_cap(t * partition.z() + q, "security_scan joint output");
  const Eigen::Index dm = Eigen::Index{1} << partition.n();
  const Eigen::Index dq = Eigen::Index{1} << q;
  const Eigen::Index dx = t == 1 ? dm : dm * dm;
  if (rho_g.dim() != dx * dq) throw DimensionError("joint input must hold t messages and q purifying qubits");

  const auto terms = moments::encrypted_moment_terms(partition, rho_g, t, q);
  ScanResult result;
  result.exact = moments::closeness_from_terms(terms);

  const double d = static_cast<double>(partition.dim());
  const Eigen::Index db = Eigen::Index{1} << partition.m();
  const Eigen::Index stride = Eigen::Index{1} << (partition.l() + partition.m());

  // Measurement M and its value on the target state.
  CMatrix a_sym, a_anti;
  double target_value = 0.0;
  if (t == 2) {
    const auto dev = moments::two_copy_deviation(terms);
    const CMatrix ap = dev.positive_plus();
    const CMatrix am = dev.positive_minus();
    a_sym = ap + am;
    a_anti = ap - am;
    target_value = (dev.trace_p_plus * (ap * dev.reference).trace().real() +
                    dev.trace_p_minus * (am * dev.reference).trace().real()) /
                   (d * d);
  } else {
    target_value = terms.reference.trace().real() / d;
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho_g.matrix() + rho_g.matrix().adjoint()));
  std::vector<std::pair<double, CVector>> spectrum;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    if (es.eigenvalues()(k) > 1e-14) spectrum.emplace_back(es.eigenvalues()(k), es.eigenvectors().col(k));
  }

  SampleStats stats;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    auto rng = seeds.at(trial);
    const SecretKey key = SecretKey::generate(rng);
    const UnitaryMatrix u = ensembles::build_scrambler(key, partition.z(), {1, ScramblerMode::haar_exact});
    // W_b: columns of U at (x, tag 0, mixed b).
    std::vector<CMatrix> w(static_cast<std::size_t>(db), CMatrix(partition.dim(), dm));
    for (Eigen::Index b = 0; b < db; ++b)
      for (Eigen::Index x = 0; x < dm; ++x) w[static_cast<std::size_t>(b)].col(x) = u.matrix().col(x * stride + b);

    double value = 0.0;
    for (const auto& [lambda, chi] : spectrum) {
      if (t == 1) {
        for (const auto& wb : w) {
          for (Eigen::Index r = 0; r < dq; ++r) {
            Complex amp0 = 0.0;
            for (Eigen::Index x = 0; x < dm; ++x) amp0 += wb(0, x) * chi(x * dq + r);
            value += lambda / static_cast<double>(db) * std::norm(amp0);
          }
        }
        continue;
      }
      std::vector<CMatrix> chi_r(static_cast<std::size_t>(dq), CMatrix(dm, dm));
      for (Eigen::Index x1 = 0; x1 < dm; ++x1)
        for (Eigen::Index x2 = 0; x2 < dm; ++x2)
          for (Eigen::Index r = 0; r < dq; ++r) chi_r[static_cast<std::size_t>(r)](x1, x2) = chi((x1 * dm + x2) * dq + r);
      const double weight = lambda / static_cast<double>(db * db);
      std::vector<CMatrix> ur(static_cast<std::size_t>(dq));
      for (const auto& w1 : w) {
        for (const auto& w2 : w) {
          for (Eigen::Index r = 0; r < dq; ++r) ur[static_cast<std::size_t>(r)] = w1 * chi_r[static_cast<std::size_t>(r)] * w2.transpose();
          Complex v = 0.0;
          for (Eigen::Index r = 0; r < dq; ++r) {
            for (Eigen::Index rp = 0; rp < dq; ++rp) {
              const auto& a = ur[static_cast<std::size_t>(r)];
              const auto& b = ur[static_cast<std::size_t>(rp)];
              v += a_sym(r, rp) * frob(a, b) + a_anti(r, rp) * frob(a, b.transpose());
            }
          }
          value += weight * 0.5 * v.real();
        }
      }
    }
    stats.add(2.0 * (value - target_value));
  }
  result.estimate = stats.estimate();
  return result;
}

}  // namespace pqas::protocol
