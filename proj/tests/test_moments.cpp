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

#include "pqaslab/ensembles.hpp"
#include "pqaslab/errors.hpp"
#include "pqaslab/moments.hpp"
#include "pqaslab/protocol.hpp"

using namespace pqas;
using namespace pqas::moments;
using qcore::CMatrix;
using qcore::DensityMatrix;
using qcore::QubitPartition;
using Catch::Approx;

namespace {

double factorial_ratio(std::uint64_t d, std::size_t t) {
  double r = 1.0;
  for (std::size_t k = 0; k < t; ++k) r /= static_cast<double>(d - k);
  return r;
}

// Matrix of the qubit relabelling new qubit j <- old qubit order[j].
CMatrix qubit_permutation(const std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix p = CMatrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    Eigen::Index out = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto bit = (b >> (n - 1 - order[j])) & 1;
      out |= bit << (n - 1 - j);
    }
    p(out, b) = 1.0;
  }
  return p;
}

// Twirl of the first t d-dimensional registers of x, identity on the rest:
// sum_{s,r} Wg(s^-1 r) P_s (x) tr_{1..t}[(P_r^dagger (x) I) x].
CMatrix partial_twirl(const CMatrix& x, std::size_t t, std::uint64_t d) {
  const auto perms = Permutation::all(t);
  const Eigen::Index dt = static_cast<Eigen::Index>(std::pow(d, t));
  const Eigen::Index dr = x.rows() / dt;
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (const auto& s : perms) {
    for (const auto& r : perms) {
      const CMatrix pr = qcore::kron(permutation_operator(r, d).adjoint(), CMatrix::Identity(dr, dr));
      const CMatrix y = pr * x;
      CMatrix reduced = CMatrix::Zero(dr, dr);
      for (Eigen::Index i = 0; i < dt; ++i) reduced += y.block(i * dr, i * dr, dr, dr);
      out += weingarten(s.inverse().compose(r), d) * qcore::kron(permutation_operator(s, d), reduced);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("permutations", "[moments]") {
  CHECK(Permutation::all(3).size() == 6);
  CHECK(Permutation::all(4).size() == 24);
  const Permutation cyc({1, 2, 0});
  CHECK(cycles(cyc) == 1);
  CHECK(cycles(Permutation::identity(4)) == 4);
  CHECK(cyc.compose(cyc.inverse()).is_identity());
  CHECK(cyc.compose(cyc) == cyc.inverse());
  const auto all = Permutation::all(4);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(permutation_rank(all[i]) == i);
  CHECK_THROWS(Permutation({0, 0}));

  CMatrix swap = CMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  CHECK(permutation_operator(Permutation::transposition(2, 0, 1), 2) == swap);
  // P_a P_b = P_{a b}
  const Permutation a({1, 0, 2}), b({0, 2, 1});
  CHECK(permutation_operator(a, 2) * permutation_operator(b, 2) == permutation_operator(a.compose(b), 2));
}

TEST_CASE("weingarten values", "[moments]") {
  const auto e = Permutation::identity(2);
  const auto s = Permutation::transposition(2, 0, 1);
  for (std::uint64_t d : {2, 4, 8}) {
    const double dd = static_cast<double>(d);
    CHECK(weingarten(e, d) == Approx(1.0 / (dd * dd - 1)));
    CHECK(weingarten(s, d) == Approx(-1.0 / (dd * (dd * dd - 1))));
  }
  CHECK(weingarten(e, 4) == Approx(1.0 / 15));
  CHECK(weingarten(s, 4) == Approx(-1.0 / 60));
  CHECK_THROWS(weingarten(Permutation::identity(3), 2));
}

TEST_CASE("weingarten inverts the gram matrix", "[moments]") {
  for (std::size_t t = 2; t <= 4; ++t) {
    const std::uint64_t d = 4;
    const auto perms = Permutation::all(t);
    for (const auto& p : perms) {
      for (const auto& r : perms) {
        double acc = 0.0;
        for (const auto& s : perms)
          acc += weingarten(p.inverse().compose(s), d) *
                 std::pow(static_cast<double>(d), static_cast<double>(cycles(s.inverse().compose(r))));
        CHECK(acc == Approx(p == r ? 1.0 : 0.0).margin(1e-10));
      }
    }
  }
}

TEST_CASE("weingarten sums", "[moments]") {
  for (std::size_t t = 1; t <= 4; ++t)
    for (std::uint64_t d : {4, 8, 16}) {
      CHECK(std::abs(sum_abs_weingarten(t, d) - factorial_ratio(d, t)) < 1e-12);
      CHECK(inverse_falling_factorial(d, t) == Approx(factorial_ratio(d, t)).epsilon(1e-14));
      double rising = 1.0;
      for (std::size_t k = 0; k < t; ++k) rising *= static_cast<double>(d + k);
      CHECK(sum_cycles_nonidentity(t, d) == Approx(rising - std::pow(static_cast<double>(d), t)));
      // The bound (d-t)!/d! <= d^-t (1 + t^2 / d) where t^2 <= d.
      if (t * t <= d)
        CHECK(factorial_ratio(d, t) <= std::pow(static_cast<double>(d), -static_cast<double>(t)) *
                                           (1.0 + static_cast<double>(t * t) / static_cast<double>(d)));
    }
}

TEST_CASE("haar moments of simple operators", "[moments]") {
  const std::uint64_t d = 4;
  KeyedStream rng(StreamKey().add("moments"));
  const CMatrix o = ensembles::sample_density(2, rng).matrix();
  CHECK(haar_moment(o, 1, d).isApprox(CMatrix::Identity(4, 4) / 4.0, 1e-12));

  CMatrix zz = CMatrix::Zero(16, 16);
  zz(0, 0) = 1.0;
  const CMatrix swap = permutation_operator(Permutation::transposition(2, 0, 1), d);
  const CMatrix expect = (CMatrix::Identity(16, 16) + swap) / (4.0 * 5.0);
  CHECK(haar_moment(zz, 2, d).isApprox(expect, 1e-12));
}

TEST_CASE("encrypted moment equals the twirl of the padded state", "[moments]") {
  const QubitPartition partition{1, 1, 1};
  KeyedStream rng(StreamKey().add("padded"));
  const auto rho = ensembles::sample_density(1, rng);
  const auto ext = protocol::extend(rho, partition).matrix();
  const CMatrix twirled = haar_moment(qcore::kron(ext, ext), 2, 8);
  CHECK(encrypted_moment_exact(partition, rho, 2).isApprox(twirled, 1e-12));
}

TEST_CASE("closeness against dense twirls", "[moments]") {
  const auto zero = qcore::zero_state(1);
  for (std::size_t m = 0; m <= 3; ++m) {
    const QubitPartition partition{1, 1, m};
    const auto d = static_cast<std::uint64_t>(partition.dim());
    const auto ext = protocol::extend(zero, partition).matrix();
    const CMatrix moment = haar_moment(qcore::kron(ext, ext), 2, d);
    const double dd = static_cast<double>(d);
    const double oracle = qcore::trace_norm(moment - CMatrix::Identity(moment.rows(), moment.cols()) / (dd * dd));
    CHECK(closeness_exact(partition, zero, 2) == Approx(oracle).margin(1e-12));
    CHECK(closeness_exact(partition, zero, 1) == Approx(0.0).margin(1e-12));
  }
  // Halving with each extra mixed qubit.
  CHECK(closeness_exact({1, 1, 1}, zero, 2) == Approx(0.375));
  CHECK(closeness_exact({1, 1, 2}, zero, 2) == Approx(0.1875));
  CHECK(closeness_exact({1, 1, 3}, zero, 2) == Approx(0.09375));
}

TEST_CASE("three copies use the dense path", "[moments]") {
  const QubitPartition partition{1, 0, 1};
  KeyedStream rng(StreamKey().add("t3"));
  const auto rho = ensembles::sample_density(1, rng);
  const auto ext = protocol::extend(rho, partition).matrix();
  const CMatrix x = qcore::kron(qcore::kron(ext, ext), ext);
  const CMatrix moment = haar_moment(x, 3, 4);
  const double oracle = qcore::trace_norm(moment - CMatrix::Identity(64, 64) / 64.0);
  CHECK(closeness_exact(partition, rho, 3) == Approx(oracle).margin(1e-12));
}

TEST_CASE("joint closeness with a purifying qubit", "[moments]") {
  const QubitPartition partition{1, 1, 1};
  const std::size_t q = 1;
  KeyedStream rng(StreamKey().add("joint"));
  const auto rho_g = DensityMatrix::from_pure(ensembles::sample_haar_state(2 + q, rng));
  // Layout (msg1, msg2, R, tag1, mix1, tag2, mix2) -> (msg1, tag1, mix1, msg2, tag2, mix2, R).
  CMatrix tag_mix = CMatrix::Zero(4, 4);
  tag_mix(0, 0) = tag_mix(1, 1) = 0.5;
  const CMatrix raw = qcore::kron(qcore::kron(rho_g.matrix(), tag_mix), tag_mix);
  const CMatrix perm = qubit_permutation({0, 3, 4, 1, 5, 6, 2});
  const CMatrix x = perm * raw * perm.adjoint();
  const CMatrix twirled = partial_twirl(x, 2, 8);
  const auto ref = qcore::partial_trace_qubits(rho_g.matrix(), {false, false, true});
  const CMatrix target = qcore::kron(CMatrix::Identity(64, 64) / 64.0, ref);
  const double oracle = qcore::trace_norm(twirled - target);
  CHECK(closeness_exact_joint(partition, rho_g, 2, q) == Approx(oracle).margin(1e-10));

  const auto terms = encrypted_moment_terms(partition, rho_g, 2, q);
  CHECK(dense_moment(terms).isApprox(twirled, 1e-10));
  CHECK(two_copy_deviation(terms).trace_norm() == Approx(oracle).margin(1e-10));
}

TEST_CASE("size limits", "[moments]") {
  CHECK_THROWS_AS(closeness_exact({3, 2, 2}, qcore::zero_state(3), 3), Error);
  CHECK_THROWS(Permutation::all(7));
}
