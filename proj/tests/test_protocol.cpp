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

#include <catch2/catch_amalgamated.hpp>

#include "pqaslab/channel.hpp"
#include "pqaslab/errors.hpp"
#include "pqaslab/gates.hpp"
#include "pqaslab/moments.hpp"
#include "pqaslab/protocol.hpp"
#include "pqaslab/stats.hpp"

using namespace pqas;
using namespace pqas::protocol;
using qcore::CMatrix;
using qcore::DensityMatrix;
using qcore::KrausChannel;
using qcore::PureState;
using qcore::QubitPartition;
using Catch::Approx;

namespace {

double kraus_weight(const KrausChannel& ch) {
  double w = 0.0;
  for (const auto& k : ch.kraus_ops()) w += std::norm(k.trace());
  return w;
}

Ciphertext apply(const KrausChannel& ch, const Ciphertext& c) { return {ch.apply(c.state), c.partition}; }

}  // namespace

TEST_CASE("extend pads with tag and mixed registers", "[protocol]") {
  KeyedStream rng(StreamKey().add("extend"));
  const auto rho = ensembles::sample_density(2, rng);
  const QubitPartition p{2, 1, 2};
  CMatrix tag = CMatrix::Zero(2, 2);
  tag(0, 0) = 1.0;
  const CMatrix expect = qcore::kron(qcore::kron(rho.matrix(), tag), CMatrix::Identity(4, 4) / 4.0);
  CHECK(extend(rho, p).matrix().isApprox(expect));
}

TEST_CASE("round trip and acceptance without noise", "[protocol]") {
  for (auto mode : {ensembles::ScramblerMode::haar_exact, ensembles::ScramblerMode::composed}) {
    ensembles::ScramblerSpec spec;
    spec.mode = mode;
    auto rng = derive_stream(3, "roundtrip", "", 0);
    const QubitPartition p{2, 2, 1};
    const auto key = SecretKey::generate(rng);
    const auto psi = ensembles::sample_haar_state(2, rng);
    const auto rho = DensityMatrix::from_pure(psi);
    const auto ct = encrypt(rho, key, p, spec);
    CHECK(ct.state.num_qubits() == 5);
    const auto dec = decrypt(ct, key, spec);
    CMatrix tag = CMatrix::Zero(4, 4);
    tag(0, 0) = 1.0;
    CHECK(dec.matrix().isApprox(qcore::kron(rho.matrix(), tag), 1e-10));
    const auto out = authenticate(ct, key, spec, &psi);
    CHECK(out.accepted);
    CHECK(out.accept_prob == Approx(1.0).margin(1e-12));
    CHECK(out.fidelity_with(psi) == Approx(1.0).margin(1e-12));

    auto other_rng = derive_stream(4, "roundtrip", "", 0);
    const auto wrong = SecretKey::generate(other_rng);
    CHECK(authenticate(ct, wrong, spec).accept_prob < 0.99);
  }
}

TEST_CASE("tag flip is rejected", "[protocol]") {
  auto rng = derive_stream(5, "flip", "", 0);
  const auto key = SecretKey::generate(rng);
  const QubitPartition p{1, 1, 1};
  ensembles::ScramblerSpec spec;
  const auto u = ensembles::build_scrambler(key, p.z(), spec);
  const CMatrix flip = qcore::PauliString::parse("IXI").matrix();
  const auto attack = KrausChannel::unitary(qcore::UnitaryMatrix::from_matrix(u.matrix() * flip * u.matrix().adjoint()));
  const auto ct = encrypt(qcore::zero_state(1), key, p, spec);
  const auto out = authenticate(apply(attack, ct), key, spec);
  CHECK(out.accept_prob < kRejectFloor);
  CHECK(!out.accepted);
  CHECK(!out.post_message.has_value());
}

TEST_CASE("channel and entanglement fidelity", "[protocol]") {
  const double p = 0.3;
  const auto dep = KrausChannel::depolarizing(3, p);
  const double d = 8.0;
  CHECK(entanglement_fidelity(dep) == Approx(kraus_weight(dep) / (d * d)));
  CHECK(channel_fidelity(dep) == Approx((kraus_weight(dep) / d + 1.0) / (d + 1.0)));
  // Depolarizing maps |0><0| to (1-p)|0><0| + p I/d for every U.
  CHECK(channel_fidelity(dep) == Approx(1.0 - p + p / d));

  // Haar average of <0|U^dagger Gamma(U|0><0|U^dagger) U|0> for a random unitary channel.
  KeyedStream rng(StreamKey().add("fc"));
  const auto w = ensembles::sample_haar(2, rng);
  const auto ch = KrausChannel::unitary(w);
  SampleStats s;
  for (int i = 0; i < 4000; ++i) {
    const auto u = ensembles::sample_haar(2, rng);
    const qcore::CVector v = u.matrix().col(0);
    s.add(std::norm(v.dot(w.matrix() * v)));
  }
  CHECK(std::abs(s.mean() - channel_fidelity(ch)) < 3 * s.std_error());
}

TEST_CASE("predicted averages for depolarizing noise", "[protocol]") {
  const QubitPartition p{2, 2, 1};
  const double prob = 0.3;
  const auto pred = predict_auth(p, KrausChannel::depolarizing(p.z(), prob));
  // P0 = (1-p) + p tr(Pi_0)/d and F' = (1-p) + p 2^m / d.
  CHECK(pred.p0_exact == Approx(1 - prob + prob / 4));
  CHECK(pred.fprime_exact == Approx(1 - prob + prob / 16));
  CHECK(std::abs(pred.p0_exact - pred.p0_leading) <= pred.finite_size_gap);
  CHECK(std::abs(pred.fprime_exact - pred.fprime_leading) <= pred.finite_size_gap);
}

TEST_CASE("auth sweep under a random tamper", "[protocol]") {
  const QubitPartition p{1, 2, 1};
  KeyedStream rng(StreamKey().add("tamper"));
  const auto ch = KrausChannel::unitary(ensembles::sample_haar(p.z(), rng));
  const auto pred = predict_auth(p, ch);
  ensembles::ScramblerSpec spec;
  const auto s = auth_sweep(PureState::basis(1, 0), p, ch, 600, spec, TrialSeeds{1, "tamper", ""});
  CHECK(std::abs(s.p0.value - pred.p0_exact) <= 3 * s.p0.std_error);
  CHECK(std::abs(s.fprime.value - pred.fprime_exact) <= 3 * s.fprime.std_error);
  CHECK(s.min_gap >= -1e-12);
  CHECK_THROWS_AS(auth_sweep(PureState::basis(1, 0), p, ch, 50, spec, TrialSeeds{}), ValidationError);
}

TEST_CASE("clifford and haar agree on the degree-2 functional F'", "[protocol]") {
  const QubitPartition p{1, 1, 1};
  KeyedStream rng(StreamKey().add("twirl"));
  const auto w = KrausChannel::unitary(ensembles::sample_haar(p.z(), rng));
  const auto psi = PureState::basis(1, 0);
  const auto rho = DensityMatrix::from_pure(psi);
  SampleStats clifford, haar;
  for (int i = 0; i < 3000; ++i) {
    for (bool use_haar : {false, true}) {
      const auto u = use_haar ? ensembles::sample_haar(p.z(), rng) : ensembles::sample_clifford(p.z(), rng);
      const auto out = authenticate_with(apply(w, encrypt_with(rho, u, p)), u, &psi);
      (use_haar ? haar : clifford).add(*out.unnormalized_fidelity);
    }
  }
  const double sigma = std::hypot(clifford.std_error(), haar.std_error());
  CHECK(std::abs(clifford.mean() - haar.mean()) <= 3 * sigma);
  CHECK(std::abs(haar.mean() - predict_auth(p, w).fprime_exact) <= 3 * haar.std_error());
}

TEST_CASE("security scan", "[protocol]") {
  const QubitPartition p{1, 1, 2};
  const auto zero2 = qcore::zero_state(2);
  const auto t2 = security_scan(zero2, p, 2, 0, 200, TrialSeeds{2, "scan", ""});
  CHECK(t2.exact == Approx(moments::closeness_exact(p, qcore::zero_state(1), 2)));
  CHECK(std::abs(t2.estimate.value - t2.exact) <= 3 * t2.estimate.std_error + 1e-9);
  const auto t1 = security_scan(qcore::zero_state(1), p, 1, 0, 400, TrialSeeds{2, "scan", "t1"});
  CHECK(t1.exact == Approx(0.0).margin(1e-12));
  CHECK(std::abs(t1.estimate.value) <= 3 * t1.estimate.std_error + 1e-9);
  CHECK_THROWS_AS(security_scan(qcore::zero_state(3), p, 3, 0, 10, TrialSeeds{}), ValidationError);
  CHECK_THROWS_AS(security_scan(qcore::zero_state(3), {1, 1, 3}, 2, 1, 10, TrialSeeds{}), CapError);
}
