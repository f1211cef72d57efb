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

#include "pqaslab/acceptance.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "pqaslab/attacks.hpp"
#include "pqaslab/harness.hpp"
#include "pqaslab/moments.hpp"
#include "pqaslab/primitives.hpp"
#include "pqaslab/protocol.hpp"

namespace pqas::acceptance {

namespace {

using ensembles::ScramblerMode;
using ensembles::ScramblerSpec;
using qcore::CMatrix;
using qcore::DensityMatrix;
using qcore::KrausChannel;
using qcore::PureState;
using qcore::QubitPartition;

// Tolerances.
constexpr double kExactTol = 1e-9;
constexpr double kWeingartenTol = 1e-12;
constexpr double kSigmas = 3.0;
constexpr double kRatioLo = 0.35;
constexpr double kRatioHi = 0.65;
constexpr double kEntangledFactor = 2.0;
constexpr double kRecoveryLo = 2.5;
constexpr double kRecoveryHi = 6.5;
constexpr double kCpaSuccess = 0.9;
constexpr double kCpaAdvantage = 0.1;
constexpr double kQubitCountRate = 0.95;

std::string format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  const int size = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  std::string out(static_cast<std::size_t>(size), '\0');
  std::vsnprintf(out.data(), out.size() + 1, fmt, args);
  va_end(args);
  return out;
}

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!cond) {
      ok = false;
      detail += " [x]";
    }
  }
};

bool within(double estimate, double target, double sigma, double slack) {
  return std::abs(estimate - target) <= kSigmas * sigma + slack;
}

TrialSeeds seeds_for(std::uint64_t seed, int id, const std::string& params) {
  return {seed, "acceptance/" + std::to_string(id), params};
}

Check completeness(std::uint64_t seed) {
  Check c;
  constexpr std::size_t kPairs = 100;
  constexpr std::array<std::size_t, 3> ns{1, 2, 3};
  constexpr std::array<std::size_t, 2> ls{1, 2};
  constexpr std::array<std::size_t, 3> ms{0, 1, 2};
  constexpr std::array<ScramblerMode, 2> modes{ScramblerMode::composed, ScramblerMode::haar_exact};
  double worst_td = 0.0, worst_p0 = 0.0;
  const auto seeds = seeds_for(seed, 1, "");
  for (std::size_t i = 0; i < kPairs; ++i) {
    std::size_t k = i;
    const std::size_t n = ns[k % 3];
    k /= 3;
    const std::size_t l = ls[k % 2];
    k /= 2;
    const std::size_t m = ms[k % 3];
    k /= 3;
    ScramblerSpec spec;
    spec.mode = modes[k % 2];
    const QubitPartition partition{n, l, m};
    auto rng = seeds.at(i);
    const auto key = SecretKey::generate(rng);
    const auto rho = ensembles::sample_density(n, rng);
    const auto ct = protocol::encrypt(rho, key, partition, spec);
    const std::array<std::size_t, 2> layout{n, l};
    const std::array<std::size_t, 1> tag{1};
    const auto back = qcore::partial_trace(protocol::decrypt(ct, key, spec), layout, tag);
    worst_td = std::max(worst_td, qcore::trace_distance(back, rho));
    worst_p0 = std::max(worst_p0, std::abs(protocol::authenticate(ct, key, spec).accept_prob - 1.0));
  }
  c.expect(worst_td <= kExactTol, format("max round-trip TD %.3g", worst_td));
  c.expect(worst_p0 <= kExactTol, format("max |P0 - 1| %.3g", worst_p0));
  return c;
}

DensityMatrix ghz(std::size_t qubits) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  qcore::CVector amp = qcore::CVector::Zero(dim);
  amp(0) = amp(dim - 1) = 1.0 / std::sqrt(2.0);
  return DensityMatrix::from_pure(PureState::from_amplitudes(amp));
}

Check closeness_scaling(std::uint64_t seed) {
  Check c;
  constexpr std::size_t kT = 2;
  constexpr std::size_t kSamples = 2000;
  const auto product = qcore::zero_state(kT);
  std::array<double, 4> exact{};
  for (std::size_t m = 1; m <= 3; ++m) {
    const QubitPartition partition{1, 1, m};
    exact[m] = moments::closeness_exact(partition, qcore::zero_state(1), kT);
    const auto scan = protocol::security_scan(product, partition, kT, 0, kSamples, seeds_for(seed, 2, format("m=%zu", m)));
    c.expect(
        within(scan.estimate.value, scan.exact, scan.estimate.std_error, kExactTol),
        format("m=%zu scan %.6g+-%.2g vs %.6g", m, scan.estimate.value, scan.estimate.std_error, scan.exact));
  }
  for (std::size_t m = 1; m <= 2; ++m) {
    const double r = exact[m + 1] / exact[m];
    c.expect(r >= kRatioLo && r <= kRatioHi, format("ratio %zu->%zu %.4f", m, m + 1, r));
  }
  // GHZ across both message copies and one purifying qubit.
  const auto joint = ghz(2 * 1 + 1);
  std::array<double, 3> ent{};
  for (std::size_t m = 1; m <= 2; ++m) {
    const QubitPartition partition{1, 1, m};
    ent[m] = moments::closeness_exact_joint(partition, joint, kT, 1);
    const auto scan = protocol::security_scan(joint, partition, kT, 1, kSamples, seeds_for(seed, 2, format("ghz/m=%zu", m)));
    c.expect(
        within(scan.estimate.value, scan.exact, scan.estimate.std_error, kExactTol),
        format("ghz m=%zu scan %.6g+-%.2g vs %.6g", m, scan.estimate.value, scan.estimate.std_error, scan.exact));
  }
  const double r_ent = ent[2] / ent[1];
  const double r_prod = exact[2] / exact[1];
  const double factor = r_ent / r_prod;
  c.expect(
      factor >= 1.0 / kEntangledFactor && factor <= kEntangledFactor,
      format("ghz ratio 1->2 %.4f vs product %.4f", r_ent, r_prod));
  return c;
}

Check weingarten(std::uint64_t seed) {
  Check c;
  double worst = 0.0;
  for (std::size_t t = 1; t <= 4; ++t)
    for (std::uint64_t d : {4, 8, 16})
      worst = std::max(worst, std::abs(moments::sum_abs_weingarten(t, d) - moments::inverse_falling_factorial(d, t)));
  c.expect(worst <= kWeingartenTol, format("max |sum|Wg| - (d-t)!/d!| %.3g", worst));

  constexpr std::size_t kObservables = 5;
  constexpr std::size_t kSamples = 4000;
  constexpr std::size_t kQubits = 2;
  const auto seeds = seeds_for(seed, 3, "haar-moment");
  for (std::size_t o = 0; o < kObservables; ++o) {
    auto rng = seeds.child(format("obs%zu", o)).at(0);
    const CMatrix obs = ensembles::sample_density(2 * kQubits, rng).matrix();
    const CMatrix exact = moments::haar_moment(obs, 2, 4);
    CMatrix sum = CMatrix::Zero(obs.rows(), obs.cols());
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(obs.rows(), obs.cols());
    for (std::size_t i = 0; i < kSamples; ++i) {
      auto srng = seeds.child(format("obs%zu", o)).at(i + 1);
      const auto u = ensembles::sample_haar(kQubits, srng);
      const CMatrix uu = qcore::kron(u.matrix(), u.matrix());
      const CMatrix x = uu * obs * uu.adjoint();
      sum += x;
      sq += x.cwiseAbs2();
    }
    const double n = static_cast<double>(kSamples);
    const CMatrix mean = sum / n;
    const Eigen::MatrixXd var = (sq / n - mean.cwiseAbs2()) * (n / (n - 1.0));
    const double sigma = std::sqrt(var.sum() / n);
    const double dist = (mean - exact).norm();
    c.expect(dist <= kSigmas * sigma, format("obs%zu |MC - exact|_F %.3g (sigma %.3g)", o, dist, sigma));
  }
  return c;
}

Check auth_averages(std::uint64_t seed) {
  Check c;
  const QubitPartition partition{2, 2, 1};
  constexpr std::size_t kKeys = 1000;
  ScramblerSpec spec;
  spec.mode = ScramblerMode::haar_exact;
  const auto psi = PureState::basis(partition.n(), 0);
  struct Case {
    std::string name;
    KrausChannel channel;
  };
  auto tamper_rng = seeds_for(seed, 4, "tamper").at(0);
  std::vector<Case> cases;
  cases.push_back({"identity", KrausChannel::identity(partition.dim())});
  for (double p : {0.1, 0.3, 0.5}) cases.push_back({format("dep%.1f", p), KrausChannel::depolarizing(partition.z(), p)});
  cases.push_back({"tamper", KrausChannel::unitary(ensembles::sample_haar(partition.z(), tamper_rng))});
  for (const auto& cs : cases) {
    const auto pred = protocol::predict_auth(partition, cs.channel);
    const auto s = protocol::auth_sweep(psi, partition, cs.channel, kKeys, spec, seeds_for(seed, 4, cs.name));
    const bool p0_ok = within(s.p0.value, pred.p0_exact, s.p0.std_error, kExactTol) &&
                       within(s.p0.value, pred.p0_leading, s.p0.std_error, pred.finite_size_gap);
    const bool fp_ok = within(s.fprime.value, pred.fprime_exact, s.fprime.std_error, kExactTol) &&
                       within(s.fprime.value, pred.fprime_leading, s.fprime.std_error, pred.finite_size_gap);
    c.expect(p0_ok, format("%s P0 %.5f+-%.2g exact %.5f formula %.5f", cs.name.c_str(), s.p0.value, s.p0.std_error,
                           pred.p0_exact, pred.p0_leading));
    c.expect(fp_ok, format("%s F' %.5f+-%.2g exact %.5f formula %.5f", cs.name.c_str(), s.fprime.value,
                           s.fprime.std_error, pred.fprime_exact, pred.fprime_leading));
    c.expect(s.min_gap >= -1e-12, format("%s min(P0-F') %.3g", cs.name.c_str(), s.min_gap));
  }
  return c;
}

Check fidelity_recovery(std::uint64_t seed) {
  Check c;
  constexpr std::size_t kKeys = 1000;
  ScramblerSpec spec;
  const auto psi = PureState::basis(2, 0);
  std::array<double, 2> infid{};
  for (std::size_t i = 0; i < 2; ++i) {
    const QubitPartition partition{2, i == 0 ? 2u : 4u, 1};
    const auto channel = KrausChannel::depolarizing(partition.z(), 0.3);
    const auto s = protocol::auth_sweep(psi, partition, channel, kKeys, spec, seeds_for(seed, 5, format("l=%zu", partition.l())));
    infid[i] = s.infidelity.value;
  }
  const double ratio = infid[0] / infid[1];
  c.expect(
      ratio >= kRecoveryLo && ratio <= kRecoveryHi,
      format("1-F l=2 %.5f l=4 %.5f ratio %.3f", infid[0], infid[1], ratio));
  return c;
}

Check cpa(std::uint64_t seed) {
  Check c;
  constexpr std::size_t kGames = 500;
  auto det = attacks::swap_test_lr_config(4, 0, 0, kGames);
  const auto d = attacks::lr_cpa_game(det, seeds_for(seed, 6, "deterministic"));
  c.expect(d.success_rate >= kCpaSuccess, format("deterministic success %.3f", d.success_rate));
  auto pq = attacks::swap_test_lr_config(4, 0, 4, kGames);
  const auto p = attacks::lr_cpa_game(pq, seeds_for(seed, 6, "pqas"));
  c.expect(p.advantage <= kCpaAdvantage, format("pqas m=4 advantage %.3f+-%.3f", p.advantage, 2 * p.std_error));
  return c;
}

Check qubit_count(std::uint64_t seed) {
  Check c;
  auto rate = [&](std::size_t m, const std::string& which) {
    const auto cfg = harness::ExperimentConfig::from_json({{"experiment", "qubit-count"}, {"m", m}, {"trials", 200}});
    for (const auto& r : harness::run_point(cfg.experiment, cfg.grid().at(0), seed))
      if (r.experiment == "qubit-count:" + which) return r.estimate;
    return -1.0;
  };
  const double correct = rate(0, "smallest");
  c.expect(correct >= kQubitCountRate, format("deterministic s=2 recovered %.3f", correct));
  const double abstain = rate(2, "abstain");
  c.expect(abstain >= kQubitCountRate, format("pqas m=2 abstained %.3f", abstain));
  return c;
}

Check vprdm(std::uint64_t seed) {
  Check c;
  constexpr std::size_t kN = 4, kM = 1;
  ScramblerSpec spec;
  const auto seeds = seeds_for(seed, 8, "");
  double worst = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    auto rng = seeds.child("complete").at(i);
    const auto key = SecretKey::generate(rng);
    const auto rho = primitives::vprdm_generate({kN, kM, key}, spec);
    worst = std::max(worst, std::abs(primitives::vprdm_verify(rho, key, kN, kM, spec) - 1.0));
  }
  c.expect(worst <= kExactTol, format("max |V - 1| %.3g", worst));
  SampleStats wrong;
  for (std::size_t i = 0; i < 500; ++i) {
    auto rng = seeds.child("wrong").at(i);
    const auto key = SecretKey::generate(rng);
    const auto other = SecretKey::generate(rng);
    wrong.add(primitives::vprdm_verify(primitives::vprdm_generate({kN, kM, key}, spec), other, kN, kM, spec));
  }
  const double target = std::ldexp(1.0, -static_cast<int>(kN - kM));
  c.expect(
      within(wrong.mean(), target, wrong.std_error(), 0.0),
      format("wrong-key V %.5f+-%.2g vs %.5f", wrong.mean(), wrong.std_error(), target));
  for (std::size_t n = 2; n < 5; ++n) {
    const double r = primitives::ghse_closeness(n + 1, 1, 2) / primitives::ghse_closeness(n, 1, 2);
    c.expect(r >= kRatioLo && r <= kRatioHi, format("ghse ratio n=%zu->%zu %.4f", n, n + 1, r));
  }
  return c;
}

Check efi(std::uint64_t seed) {
  Check c;
  std::size_t pairs = 0;
  bool fannes = true, s1 = true, s0 = true, mono = true, lower = true;
  double min_s1 = 1e9, max_s0_slack = -1e9, max_growth = -1e9;
  for (std::size_t lambda : {2, 4, 8}) {
    primitives::EfiParams p;
    p.lambda_eff = lambda;
    const auto pair = primitives::efi_pair(p, seeds_for(seed, 9, format("lambda=%zu", lambda)));
    for (double noise : {0.0, 0.1, 0.25}) {
      const auto rep = primitives::efi_noise_check(p, pair, KrausChannel::local_depolarizing(p.n, noise));
      for (const auto* r : {&rep.noiseless, &rep.noisy}) {
        ++pairs;
        fannes = fannes && r->fannes_holds(kExactTol);
        lower = lower && r->t_exact >= r->t_lower_bound - kExactTol;
      }
      mono = mono && rep.noisy.t_exact <= rep.noiseless.t_exact + kExactTol;
      max_growth = std::max(max_growth, rep.noisy.t_exact - rep.noiseless.t_exact);
    }
    const auto clean = primitives::efi_report(pair);
    s1 = s1 && clean.s1 >= static_cast<double>(p.m1()) - kExactTol;
    s0 = s0 && clean.s0 <= static_cast<double>(lambda + p.m0) + kExactTol;
    min_s1 = std::min(min_s1, clean.s1 - static_cast<double>(p.m1()));
    max_s0_slack = std::max(max_s0_slack, clean.s0 - static_cast<double>(lambda + p.m0));
  }
  c.expect(fannes, format("Fannes-Audenaert on %zu pairs", pairs));
  c.expect(lower, "T >= 1 - (S0+1)/S1");
  c.expect(s1, format("min S1 - m1 %.4f", min_s1));
  c.expect(s0, format("max S0 - (lambda+m0) %.4f", max_s0_slack));
  c.expect(mono, format("max T_noisy - T %.3g", max_growth));
  return c;
}

Check determinism(std::uint64_t seed) {
  Check c;
  const std::vector<harness::Json> docs = {
      {{"experiment", "security-scan"}, {"m", {1, 2}}, {"trials", 200}, {"seed", seed}},
      {{"experiment", "cpa"}, {"m", {0, 2}}, {"trials", 100}, {"seed", seed}},
      {{"experiment", "auth-sweep"}, {"channel", "tamper"}, {"trials", 100}, {"seed", seed}},
      {{"experiment", "efi"}, {"lambda_eff", 2}, {"p", 0.1}, {"seed", seed}},
  };
  for (const auto& doc : docs) {
    const auto cfg = harness::ExperimentConfig::from_json(doc);
    const auto a = harness::to_csv(harness::run(cfg));
    const auto b = harness::to_csv(harness::run(cfg, {.threads = 2}));
    c.expect(a == b, format("%s %zu bytes identical", cfg.experiment.c_str(), a.size()));
  }
  return c;
}

struct Entry {
  const char* name;
  Check (*fn)(std::uint64_t);
};

constexpr std::array<Entry, kCriteria> kEntries = {{
    {"completeness", completeness},
    {"closeness scaling", closeness_scaling},
    {"weingarten identities", weingarten},
    {"authentication averages", auth_averages},
    {"fidelity recovery", fidelity_recovery},
    {"cpa separation", cpa},
    {"qubit-number attack", qubit_count},
    {"vprdm", vprdm},
    {"efi pairs", efi},
    {"determinism", determinism},
}};

}  // namespace

std::string CriterionResult::line() const {
  return format("criterion %d %s %s: %s (%.1fs)", id, passed ? "PASS" : "FAIL", name.c_str(), detail.c_str(), seconds);
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kCriteria) throw std::out_of_range("criterion id");
  const auto& entry = kEntries[static_cast<std::size_t>(id - 1)];
  CriterionResult r;
  r.id = id;
  r.name = entry.name;
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto check = entry.fn(seed);
    r.passed = check.ok;
    r.detail = check.detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_all(std::uint64_t seed, const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    out.push_back(run_criterion(id, seed));
    if (on_result) on_result(out.back());
  }
  return out;
}

}  // namespace pqas::acceptance
