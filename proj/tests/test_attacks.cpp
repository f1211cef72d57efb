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

#include "pqaslab/attacks.hpp"
#include "pqaslab/errors.hpp"
#include "pqaslab/moments.hpp"

using namespace pqas;
using namespace pqas::attacks;
using qcore::CMatrix;
using qcore::DensityMatrix;
using qcore::PureState;
using qcore::QubitPartition;
using Catch::Approx;

namespace {

// tr(SWAP rho) where SWAP exchanges the first half of the qubits with the second.
double swap_expectation(const CMatrix& rho) {
  const std::size_t n = qcore::qubits_for_dim(rho.rows());
  const std::size_t h = n / 2;
  const Eigen::Index half = Eigen::Index{1} << h;
  std::complex<double> acc = 0;
  for (Eigen::Index a = 0; a < half; ++a)
    for (Eigen::Index b = 0; b < half; ++b) acc += rho(b * half + a, a * half + b);
  return acc.real();
}

// Reduced state on the first b qubits of each half.
CMatrix prefixes(const CMatrix& rho, std::size_t b) {
  const std::size_t n = qcore::qubits_for_dim(rho.rows());
  std::vector<bool> keep(n, false);
  for (std::size_t i = 0; i < b; ++i) keep[i] = keep[n / 2 + i] = true;
  return qcore::partial_trace_qubits(rho, keep);
}

std::vector<Ciphertext> copies(const Ciphertext& c, std::size_t k) { return std::vector<Ciphertext>(k, c); }

}  // namespace

TEST_CASE("lr game config", "[attacks]") {
  const auto cfg = swap_test_lr_config(4, 1, 2, 10);
  CHECK(cfg.t() == 4);
  CHECK(cfg.partition.n() == 2);
  CHECK(cfg.partition.l() == 1);
  CHECK(cfg.partition.m() == 2);
  CHECK(swap_test_lr_config(1, 0, 0, 10).partition.n() == 1);
  CHECK_THROWS(lr_cpa_game(swap_test_lr_config(9, 0, 0, 10), TrialSeeds{}));
}

TEST_CASE("swap adversary breaks deterministic encryption", "[attacks]") {
  const auto rep = lr_cpa_game(swap_test_lr_config(4, 0, 0, 800), TrialSeeds{1, "cpa", "det"});
  // Six independent tests on orthogonal pairs: success 1/2 + 1/2 (1 - 2^-6).
  const double expect = 0.5 + 0.5 * (1.0 - 1.0 / 64);
  CHECK(std::abs(rep.success_rate - expect) <= 3 * rep.std_error + 1e-9);
  CHECK(rep.advantage == Approx(2 * (rep.success_rate - 0.5)));

  auto same = swap_test_lr_config(1, 0, 0, 800);
  const auto trivial = lr_cpa_game(same, TrialSeeds{1, "cpa", "t1"});
  CHECK(std::abs(trivial.advantage) <= 3 * 2 * trivial.std_error);
}

TEST_CASE("purity probe", "[attacks]") {
  auto rng = derive_stream(2, "purity", "", 0);
  const auto key = SecretKey::generate(rng);
  ensembles::ScramblerSpec spec;
  const auto pure = protocol::encrypt(qcore::zero_state(2), key, {2, 0, 0}, spec);
  const auto p1 = purity_probe(copies(pure, 4000), rng);
  CHECK(p1.value == Approx(1.0));
  const auto mixed = protocol::encrypt(qcore::zero_state(2), key, {2, 0, 2}, spec);
  const auto p2 = purity_probe(copies(mixed, 8000), rng);
  CHECK(std::abs(p2.value - 0.25) <= 3 * p2.std_error);
  const Ciphertext mm{qcore::maximally_mixed(3), {1, 0, 2}};
  const auto p3 = purity_probe(copies(mm, 8000), rng);
  CHECK(std::abs(p3.value - 0.125) <= 3 * p3.std_error);
  CHECK_THROWS(purity_probe(copies(mm, 3), rng));
}

TEST_CASE("bell parity estimator", "[attacks]") {
  KeyedStream rng(StreamKey().add("bell"));
  const auto psi = DensityMatrix::from_pure(ensembles::sample_haar_state(3, rng));
  const auto two = qcore::tensor(psi, psi);
  for (const auto& z : bell_parity_profile(two, 2000, rng)) CHECK(z.value >= 0.0);
  CHECK(bell_parity_purity(two, 3, 2000, rng).value == Approx(1.0));

  const auto mixed = qcore::maximally_mixed(4);
  const auto z1 = bell_parity_purity(mixed, 1, 10000, rng);
  CHECK(std::abs(z1.value - 0.5) <= 3 * z1.std_error);

  for (int rep = 0; rep < 5; ++rep) {
    const auto sigma = ensembles::sample_density(1, rng);
    const auto prod = qcore::tensor(sigma, sigma);
    const auto z = bell_parity_purity(prod, 1, 10000, rng);
    CHECK(std::abs(z.value - qcore::purity(sigma)) <= 3 * z.std_error + 1e-9);
    const auto generic = ensembles::sample_density(2, rng);
    const auto g = bell_parity_purity(generic, 1, 10000, rng);
    CHECK(std::abs(g.value - swap_expectation(generic.matrix())) <= 3 * g.std_error + 1e-9);
  }

  // Prefix profile on four qubits per half.
  const auto state = ensembles::sample_density(6, rng, 2);
  const auto profile = bell_parity_profile(state, 10000, rng);
  REQUIRE(profile.size() == 3);
  for (std::size_t b = 1; b <= 3; ++b) {
    const double oracle = swap_expectation(prefixes(state.matrix(), b));
    CHECK(std::abs(profile[b - 1].value - oracle) <= 3 * profile[b - 1].std_error + 1e-9);
  }
  CHECK_THROWS_AS(bell_parity_purity(state, 4, 10, rng), ValidationError);
}

TEST_CASE("intercepted streams", "[attacks]") {
  KeyedStream rng(StreamKey().add("stream"));
  const auto c = ensembles::sample_density(3, rng);
  CHECK(intercept_stream(c, 6).matrix().isApprox(qcore::tensor(c, c).matrix()));
  const auto partial = intercept_stream(c, 4);
  const auto first = qcore::partial_trace_qubits(c.matrix(), {true, false, false});
  CHECK(partial.matrix().isApprox(qcore::kron(c.matrix(), first)));
}

TEST_CASE("qubit-number attack", "[attacks]") {
  ensembles::ScramblerSpec spec;
  for (std::size_t s : {1, 2}) {
    auto rng = derive_stream(3, "count", std::to_string(s), 0);
    const auto key = SecretKey::generate(rng);
    const auto ct = protocol::encrypt(qcore::zero_state(2 * s), key, {2 * s, 0, 0}, spec);
    const auto res = qubit_count_attack(intercept_stream(ct.state, 8), 2, 2, 0.1, 10000, rng);
    REQUIRE(res.smallest.has_value());
    CHECK(*res.smallest == s);
    CHECK(res.purity.size() == 2);
    // Whole copies form pure prefixes for every multiple of s.
    CHECK(res.largest == 2u);
  }
  auto rng = derive_stream(3, "count", "pqas", 0);
  const auto key = SecretKey::generate(rng);
  const auto ct = protocol::encrypt(qcore::zero_state(4), key, {4, 0, 2}, spec);
  const auto res = qubit_count_attack(intercept_stream(ct.state, 8), 2, 2, 0.1, 10000, rng);
  CHECK(!res.smallest.has_value());
  CHECK_THROWS(qubit_count_attack(qcore::maximally_mixed(6), 2, 2, 0.1, 10, rng));
}

TEST_CASE("multi-state attack", "[attacks]") {
  ensembles::ScramblerSpec spec;
  auto rng = derive_stream(4, "multi", "", 0);
  const auto key = SecretKey::generate(rng);
  const QubitPartition det{2, 0, 0};
  std::vector<Ciphertext> same, distinct;
  for (std::size_t j = 0; j < 4; ++j) {
    same.push_back(protocol::encrypt(qcore::zero_state(2), key, det, spec));
    distinct.push_back(protocol::encrypt(DensityMatrix::from_pure(PureState::basis(2, j)), key, det, spec));
  }
  int ones = 0, twos = 0;
  for (int i = 0; i < 400; ++i) {
    ones += multi_state_attack(same, rng) == 1;
    twos += multi_state_attack(distinct, rng) == 2;
  }
  CHECK(ones == 400);
  // At least one of six tests fails with probability 1 - 2^-6.
  const double p = 1.0 - 1.0 / 64;
  CHECK(std::abs(twos / 400.0 - p) <= 3 * std::sqrt(p * (1 - p) / 400) + 1e-9);
  CHECK_THROWS(multi_state_attack({same[0]}, rng));
}

TEST_CASE("decoys", "[attacks]") {
  ensembles::ScramblerSpec spec;
  KeyedStream rng(StreamKey().add("decoy"));
  CHECK(decoy_indistinguishability({1, 1, 3}, 1, spec, rng).closeness == Approx(0.0).margin(1e-12));
  const auto rep = decoy_indistinguishability({1, 1, 3}, 2, spec, rng);
  CHECK(rep.closeness == Approx(moments::closeness_exact({1, 1, 3}, qcore::zero_state(1), 2)));
  CHECK(rep.decoy_half_entropy == Approx(2.0).margin(1e-9));
  CHECK(rep.ciphertext_half_entropy <= 2.0 + 1e-9);
  CHECK(rep.ciphertext_half_entropy > 0.0);
}
