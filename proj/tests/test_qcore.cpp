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

#include <cstdlib>

#include "pqaslab/channel.hpp"
#include "pqaslab/errors.hpp"
#include "pqaslab/gates.hpp"

using namespace pqas;
using namespace pqas::qcore;
using Catch::Approx;

namespace {

CMatrix ket_bra(std::initializer_list<std::complex<double>> amps) {
  CVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps) v(i++) = a;
  return v * v.adjoint();
}

// Reference partial trace over the second factor of a (da * db) matrix.
CMatrix trace_second(const CMatrix& m, Eigen::Index da, Eigen::Index db) {
  CMatrix out = CMatrix::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

}  // namespace

TEST_CASE("maximally mixed and zero states", "[qcore]") {
  const auto mixed = maximally_mixed(1);
  CHECK(mixed.matrix().isApprox(CMatrix::Identity(2, 2) / 2.0));
  CHECK(zero_state(0).dim() == 1);
  CHECK(zero_state(3).matrix()(0, 0).real() == 1.0);
  CHECK(purity(maximally_mixed(3)) == Approx(0.125));
  CHECK(vn_entropy_bits(maximally_mixed(3)) == Approx(3.0));
}

TEST_CASE("density matrix invariants", "[qcore]") {
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.0;
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad), ValidationError);
  CMatrix negative = CMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(negative), ValidationError);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(CMatrix::Identity(2, 2)), ValidationError);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(CMatrix::Identity(3, 3) / 3.0), DimensionError);
  CHECK_NOTHROW(DensityMatrix::from_matrix(CMatrix::Identity(4, 4) / 4.0));
}

TEST_CASE("tensor puts qubit 0 first", "[qcore]") {
  const auto one = DensityMatrix::from_pure(PureState::basis(1, 1));
  const auto zero = zero_state(1);
  const auto t = tensor(one, zero);
  CHECK(t.matrix()(2, 2).real() == 1.0);
  CHECK(kron(one.matrix(), zero.matrix()).isApprox(t.matrix()));
}

TEST_CASE("partial trace matches reference sum", "[qcore]") {
  const double r = 1.0 / std::sqrt(2.0);
  const auto bell = DensityMatrix::from_matrix(ket_bra({r, 0, 0, r}));
  const std::array<std::size_t, 2> layout{1, 1};
  const std::array<std::size_t, 1> discard{1};
  CHECK(partial_trace(bell, layout, discard).matrix().isApprox(CMatrix::Identity(2, 2) / 2.0));

  // Three registers, drop the middle one, against the explicit formula after
  // a swap of the last two registers.
  CMatrix m = CMatrix::Random(16, 16);
  m = m * m.adjoint();
  m /= m.trace();
  const auto rho = DensityMatrix::from_matrix(m);
  const std::array<std::size_t, 3> layout3{1, 2, 1};
  const std::array<std::size_t, 1> middle{1};
  const auto got = partial_trace(rho, layout3, middle).matrix();
  // Reorder (a, b, c) -> (a, c, b) and trace the last factor of size 4.
  CMatrix perm = CMatrix::Zero(16, 16);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index b = 0; b < 4; ++b)
      for (Eigen::Index c = 0; c < 2; ++c) perm(a * 8 + c * 4 + b, a * 8 + b * 2 + c) = 1.0;
  CHECK(got.isApprox(trace_second(perm * m * perm.transpose(), 4, 4), 1e-12));

  std::vector<bool> keep{true, false, false, true};
  CHECK(partial_trace_qubits(m, keep).isApprox(got, 1e-12));
}

TEST_CASE("metrics", "[qcore]") {
  const auto zero = zero_state(1);
  const auto one = DensityMatrix::from_pure(PureState::basis(1, 1));
  CHECK(trace_distance(zero, one) == Approx(1.0));
  CHECK(trace_distance(zero, maximally_mixed(1)) == Approx(0.5));
  CHECK(fidelity_with_pure(maximally_mixed(1), PureState::basis(1, 0)) == Approx(0.5));
  CHECK(overlap(zero, one) == Approx(0.0).margin(1e-15));
  CHECK(swap_test_accept(zero, zero) == Approx(1.0));
  CHECK(swap_test_accept(zero, one) == Approx(0.5));
  CHECK(swap_test_accept(maximally_mixed(2), maximally_mixed(2)) == Approx(0.5 + 0.5 / 4));
  const std::array<double, 4> p{0.5, 0.25, 0.125, 0.125};
  CHECK(shannon_entropy_bits(p) == Approx(1.75));
  const auto m = metrics(maximally_mixed(1), zero);
  CHECK(m.fidelity_with_pure.has_value());
  CHECK(*m.fidelity_with_pure == Approx(0.5));
  CHECK(m.purity == Approx(0.5));
  CHECK(trace_norm(CMatrix::Identity(3, 3) * -2.0) == Approx(6.0));
}

TEST_CASE("projection", "[qcore]") {
  CMatrix proj = CMatrix::Zero(2, 2);
  proj(0, 0) = 1.0;
  const auto res = project(maximally_mixed(1), proj);
  CHECK(res.probability == Approx(0.5));
  REQUIRE(!res.rejected());
  CHECK(res.post->matrix().isApprox(zero_state(1).matrix()));
  const auto none = project(DensityMatrix::from_pure(PureState::basis(1, 1)), proj);
  CHECK(none.rejected());
  CHECK_THROWS_AS(project(maximally_mixed(1), CMatrix::Identity(2, 2) * 2.0), ValidationError);
}

TEST_CASE("qubit cap follows the environment", "[qcore]") {
  ::unsetenv("PQASLAB_CAP");
  CHECK(qubit_cap() == 10);
  CHECK_THROWS_AS(check_cap(11, "test"), CapError);
  ::setenv("PQASLAB_CAP", "12", 1);
  CHECK(qubit_cap() == 12);
  CHECK_NOTHROW(check_cap(11, "test"));
  ::unsetenv("PQASLAB_CAP");
}

TEST_CASE("partition", "[qcore]") {
  const QubitPartition p{2, 1, 3};
  CHECK(p.z() == 6);
  CHECK(p.dim() == 64);
  CHECK_THROWS_AS(QubitPartition(0, 1, 1), ValidationError);
}

TEST_CASE("pauli strings", "[gates]") {
  const auto p = PauliString::parse("-XYZ");
  CHECK(p.label() == "-XYZ");
  CHECK(p.num_qubits == 3);
  const CMatrix expect =
      -kron(kron(gates::pauli_x(), gates::pauli_y()), gates::pauli_z());
  CHECK(p.matrix().isApprox(expect));
  // Y = i X Z
  const std::complex<double> i{0, 1};
  CHECK(gates::pauli_y().isApprox(i * gates::pauli_x() * gates::pauli_z()));
  CHECK(!PauliString::parse("XI").commutes_with(PauliString::parse("ZI")));
  CHECK(PauliString::parse("XX").commutes_with(PauliString::parse("ZZ")));
  CVector v = CVector::Random(8);
  CVector w = v;
  p.apply(w);
  CHECK(w.isApprox(expect * v));
}

TEST_CASE("gate application on subsets", "[gates]") {
  // CNOT with control qubit 2 and target qubit 0 on three qubits.
  CMatrix m = CMatrix::Identity(8, 8);
  const std::array<std::size_t, 2> qubits{2, 0};
  apply_gate_left(m, gates::cnot(), qubits, 3);
  for (Eigen::Index b = 0; b < 8; ++b) {
    const Eigen::Index expect = (b & 1) ? (b ^ 4) : b;
    CHECK(std::abs(m(expect, b) - 1.0) < 1e-15);
  }
  CMatrix rho = zero_state(2).matrix();
  const std::array<std::size_t, 1> q0{0};
  conjugate_by_gate(rho, gates::hadamard(), q0, 2);
  CHECK(rho.isApprox(kron(ket_bra({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}), zero_state(1).matrix())));
}

TEST_CASE("channels", "[channel]") {
  const auto full = KrausChannel::depolarizing(2, 1.0);
  CHECK(full.apply(zero_state(2)).matrix().isApprox(CMatrix::Identity(4, 4) / 4.0));

  std::vector<CMatrix> not_tp{CMatrix::Identity(2, 2) * 0.5};
  CHECK_THROWS_AS(KrausChannel::from_ops(not_tp), ValidationError);

  // Kraus trace weight against the materialized operators.
  for (double p : {0.0, 0.3, 1.0}) {
    for (const auto& ch : {KrausChannel::depolarizing(2, p), KrausChannel::local_depolarizing(2, p)}) {
      double w = 0.0;
      for (const auto& k : ch.kraus_ops()) w += std::norm(k.trace());
      CHECK(ch.kraus_trace_weight() == Approx(w).epsilon(1e-12));
    }
  }

  // Local depolarizing against a hand-built single-qubit channel applied twice.
  const double p = 0.25;
  std::vector<CMatrix> single{
      std::sqrt(1 - 3 * p / 4) * CMatrix::Identity(2, 2), std::sqrt(p / 4) * gates::pauli_x(),
      std::sqrt(p / 4) * gates::pauli_y(), std::sqrt(p / 4) * gates::pauli_z()};
  std::vector<CMatrix> both;
  for (const auto& a : single)
    for (const auto& b : single) both.push_back(kron(a, b));
  CMatrix m = CMatrix::Random(4, 4);
  m = m * m.adjoint();
  m /= m.trace();
  const auto rho = DensityMatrix::from_matrix(m);
  CHECK(KrausChannel::local_depolarizing(2, p).apply(rho).matrix().isApprox(
      KrausChannel::from_ops(both).apply(rho).matrix(), 1e-12));

  const auto h1 = KrausChannel::local_depolarizing(3, p).mixture_entropy_bits();
  REQUIRE(h1.has_value());
  const std::array<double, 4> w{1 - 3 * p / 4, p / 4, p / 4, p / 4};
  CHECK(*h1 == Approx(3 * shannon_entropy_bits(w)));
  CHECK(!KrausChannel::from_ops({CMatrix::Identity(2, 2) * std::sqrt(0.5), CMatrix::Identity(2, 2) * std::sqrt(0.5)})
             .apply(zero_state(1))
             .matrix()
             .isApprox(maximally_mixed(1).matrix()));
}
