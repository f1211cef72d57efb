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

#include "pqaslab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "pqaslab/attacks.hpp"
#include "pqaslab/errors.hpp"
#include "pqaslab/moments.hpp"
#include "pqaslab/primitives.hpp"
#include "pqaslab/protocol.hpp"

namespace pqas::harness {

namespace {

using ensembles::ScramblerSpec;
using qcore::DensityMatrix;
using qcore::KrausChannel;
using qcore::PureState;
using qcore::QubitPartition;

const std::map<std::string, Json>& defaults() {
  static const std::map<std::string, Json> table = {
      {"security-scan", {{"n", 1}, {"l", 1}, {"m", 1}, {"t", 2}, {"q", 0}, {"trials", 2000}, {"state", "zero"}}},
      {"auth-sweep",
       {{"n", 2}, {"l", 2}, {"m", 1}, {"trials", 1000}, {"mode", "haar_exact"}, {"depth", 8},
        {"channel", "depolarizing"}, {"p", 0.3}, {"state", "zero"}}},
      {"cpa", {{"t", 4}, {"l", 0}, {"m", 0}, {"trials", 500}, {"mode", "haar_exact"}, {"depth", 8}}},
      {"multistate",
       {{"n", 2}, {"t", 4}, {"l", 0}, {"m", 0}, {"trials", 500}, {"mode", "haar_exact"}, {"depth", 8}}},
      {"qubit-count",
       {{"n", 2}, {"s", 2}, {"s_max", 2}, {"l", 0}, {"m", 0}, {"trials", 200}, {"shots", 10000},
        {"delta", 0.1}, {"mode", "haar_exact"}, {"depth", 8}}},
      {"decoy", {{"n", 1}, {"l", 1}, {"m", 3}, {"t", 2}, {"mode", "haar_exact"}, {"depth", 8}}},
      {"vprdm", {{"n", 4}, {"m", 1}, {"t", 2}, {"trials", 500}, {"mode", "haar_exact"}, {"depth", 8}}},
      {"efi",
       {{"n", 6}, {"m0", 1}, {"gamma", 0.5}, {"c", 0.25}, {"lambda_eff", 4}, {"p", 0.0},
        {"mode", "haar_exact"}, {"depth", 8}}},
      {"wg-selftest", {{"n", 2}, {"t", 2}}},
  };
  return table;
}

const std::set<std::string> kPositive = {"n", "t", "trials", "shots", "s", "s_max", "depth"};

const Json& defaults_for(const std::string& experiment) {
  const auto& table = defaults();
  const auto it = table.find(experiment);
  if (it == table.end()) throw ValidationError("experiment", "unknown experiment '" + experiment + "'");
  return it->second;
}

std::size_t get_size(const Json& point, const char* key) {
  const Json& v = point.at(key);
  if (!v.is_number()) throw ValidationError(key, "must be a number");
  const double x = v.get<double>();
  if (x < 0 || x != std::floor(x)) throw ValidationError(key, "must be a non-negative integer");
  return static_cast<std::size_t>(x);
}

std::size_t get_positive(const Json& point, const char* key) {
  const std::size_t x = get_size(point, key);
  if (x == 0) throw ValidationError(key, "must be at least 1");
  return x;
}

double get_real(const Json& point, const char* key) {
  const Json& v = point.at(key);
  if (!v.is_number()) throw ValidationError(key, "must be a number");
  return v.get<double>();
}

double get_probability(const Json& point, const char* key) {
  const double p = get_real(point, key);
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(key, "must be in [0, 1]");
  return p;
}

std::string get_string(const Json& point, const char* key) {
  const Json& v = point.at(key);
  if (!v.is_string()) throw ValidationError(key, "must be a string");
  return v.get<std::string>();
}

ScramblerSpec get_spec(const Json& point) {
  ScramblerSpec spec;
  try {
    spec.mode = ensembles::parse_scrambler_mode(get_string(point, "mode"));
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError("mode", e.what());
  }
  spec.pru_depth = get_positive(point, "depth");
  return spec;
}

QubitPartition get_partition(const Json& point) {
  return {get_positive(point, "n"), get_size(point, "l"), get_size(point, "m")};
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) { return std::strtod(format_real(x).c_str(), nullptr); }

std::string channel_label(const std::string& kind, double p) {
  if (kind == "identity" || kind == "tamper") return kind;
  return kind + "(p=" + format_real(p) + ")";
}

KrausChannel make_channel(const std::string& kind, double p, std::size_t z, const TrialSeeds& seeds) {
  if (kind == "identity") return KrausChannel::identity(Eigen::Index{1} << z);
  if (kind == "depolarizing") return KrausChannel::depolarizing(z, p);
  if (kind == "local_depolarizing") return KrausChannel::local_depolarizing(z, p);
  if (kind == "tamper") {
    auto rng = seeds.child("tamper").at(0);
    return KrausChannel::unitary(ensembles::sample_haar(z, rng));
  }
  throw ValidationError("channel", "unknown channel '" + kind + "'");
}

Estimate binomial(std::size_t hits, std::size_t trials) {
  SampleStats s;
  for (std::size_t i = 0; i < trials; ++i) s.add(i < hits ? 1.0 : 0.0);
  return s.estimate();
}

/// Success probability of the all-pairs SWAP adversary against deterministic
/// encryption: orthogonal pairs accept with probability 1/2 each.
double swap_adversary_success(std::size_t copies) {
  const double pairs = static_cast<double>(copies * (copies - 1) / 2);
  return 0.5 + 0.5 * (1.0 - std::pow(2.0, -pairs));
}

double closeness_leading(std::size_t t, std::size_t m) {
  return static_cast<double>(t * (t - 1)) / 2.0 * std::ldexp(1.0, -static_cast<int>(m));
}

struct Point {
  const Json& json;
  std::uint64_t seed;
  TrialSeeds seeds;

  ResultRecord record(std::string name) const {
    ResultRecord r;
    r.experiment = std::move(name);
    r.seed = seed;
    return r;
  }
};

void fill_partition(ResultRecord& r, const QubitPartition& p) {
  r.n = static_cast<std::int64_t>(p.n());
  r.l = static_cast<std::int64_t>(p.l());
  r.m = static_cast<std::int64_t>(p.m());
}

DensityMatrix scan_input(const std::string& state, std::size_t n, std::size_t t, std::size_t q, const TrialSeeds& seeds) {
  const std::size_t width = t * n + q;
  qcore::check_cap(width, "security-scan input");
  if (state == "zero") {
    if (q != 0) throw ValidationError("q", "state 'zero' is a product input and needs q = 0");
    return qcore::zero_state(width);
  }
  if (state == "ghz") {
    const Eigen::Index dim = Eigen::Index{1} << width;
    qcore::CVector amp = qcore::CVector::Zero(dim);
    amp(0) = amp(dim - 1) = 1.0 / std::sqrt(2.0);
    return DensityMatrix::from_pure(PureState::from_amplitudes(amp));
  }
  if (state == "random") {
    auto rng = seeds.child("state").at(0);
    return DensityMatrix::from_pure(ensembles::sample_haar_state(width, rng));
  }
  throw ValidationError("state", "unknown state '" + state + "'");
}

std::vector<ResultRecord> run_security_scan(const Point& pt) {
  const auto partition = get_partition(pt.json);
  const std::size_t t = get_positive(pt.json, "t");
  const std::size_t q = get_size(pt.json, "q");
  const std::size_t trials = get_positive(pt.json, "trials");
  const auto rho_g = scan_input(get_string(pt.json, "state"), partition.n(), t, q, pt.seeds);
  const auto res = protocol::security_scan(rho_g, partition, t, q, trials, pt.seeds);
  auto r = pt.record("security-scan");
  fill_partition(r, partition);
  r.t = static_cast<std::int64_t>(t);
  r.trials = static_cast<std::int64_t>(trials);
  r.mode = "haar_exact";
  r.estimate = res.estimate.value;
  r.std_error = res.estimate.std_error;
  r.exact = res.exact;
  r.prediction = closeness_leading(t, partition.m());
  return {r};
}

std::vector<ResultRecord> run_auth_sweep(const Point& pt) {
  const auto partition = get_partition(pt.json);
  const std::size_t trials = get_positive(pt.json, "trials");
  const auto spec = get_spec(pt.json);
  const auto kind = get_string(pt.json, "channel");
  const double p = get_probability(pt.json, "p");
  const auto state = get_string(pt.json, "state");
  qcore::check_cap(partition.z(), "auth-sweep ciphertext");
  PureState psi = PureState::basis(partition.n(), 0);
  if (state == "random") {
    auto rng = pt.seeds.child("state").at(0);
    psi = ensembles::sample_haar_state(partition.n(), rng);
  } else if (state != "zero") {
    throw ValidationError("state", "must be 'zero' or 'random'");
  }
  const auto channel = make_channel(kind, p, partition.z(), pt.seeds);
  const auto pred = protocol::predict_auth(partition, channel);
  const auto stats = protocol::auth_sweep(psi, partition, channel, trials, spec, pt.seeds);

  auto base = pt.record("");
  fill_partition(base, partition);
  base.trials = static_cast<std::int64_t>(trials);
  base.mode = std::string(ensembles::to_string(spec.mode));
  base.channel = channel_label(kind, p);

  std::vector<ResultRecord> out;
  auto add = [&](const char* name, Estimate e, std::optional<double> exact, std::optional<double> prediction) {
    auto r = base;
    r.experiment = std::string("auth-sweep:") + name;
    r.estimate = e.value;
    r.std_error = e.std_error;
    r.exact = exact;
    r.prediction = prediction;
    out.push_back(std::move(r));
  };
  add("P0", stats.p0, pred.p0_exact, pred.p0_leading);
  add("Fprime", stats.fprime, pred.fprime_exact, pred.fprime_leading);
  add("infidelity", stats.infidelity, std::nullopt, std::nullopt);
  auto gap = base;
  gap.experiment = "auth-sweep:min_gap";
  gap.estimate = stats.min_gap;
  gap.prediction = pred.finite_size_gap;
  out.push_back(std::move(gap));
  return out;
}

std::vector<ResultRecord> run_cpa(const Point& pt) {
  const std::size_t t = get_positive(pt.json, "t");
  auto cfg = attacks::swap_test_lr_config(t, get_size(pt.json, "l"), get_size(pt.json, "m"), get_positive(pt.json, "trials"));
  cfg.spec = get_spec(pt.json);
  const auto rep = attacks::lr_cpa_game(cfg, pt.seeds);
  auto r = pt.record("cpa");
  fill_partition(r, cfg.partition);
  r.t = static_cast<std::int64_t>(t);
  r.trials = static_cast<std::int64_t>(rep.trials);
  r.mode = std::string(ensembles::to_string(cfg.spec.mode));
  r.estimate = rep.success_rate;
  r.std_error = rep.std_error;
  if (cfg.partition.m() == 0) r.exact = swap_adversary_success(t);
  r.prediction = 0.5;
  return {r};
}

std::vector<ResultRecord> run_multistate(const Point& pt) {
  const auto partition = get_partition(pt.json);
  const std::size_t t = get_positive(pt.json, "t");
  const std::size_t trials = get_positive(pt.json, "trials");
  const auto spec = get_spec(pt.json);
  if (t < 2) throw ValidationError("t", "multistate needs at least 2 ciphertexts");
  if ((std::size_t{1} << partition.n()) < t) throw ValidationError("t", "needs 2^n >= t orthogonal plaintexts");
  qcore::check_cap(partition.z(), "multistate ciphertext");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto rng = pt.seeds.at(i);
    const auto key = SecretKey::generate(rng);
    const int b = rng.bit() ? 2 : 1;
    std::vector<protocol::Ciphertext> cts;
    for (std::size_t j = 0; j < t; ++j) {
      const auto psi = PureState::basis(partition.n(), b == 1 ? 0 : j);
      cts.push_back(protocol::encrypt(DensityMatrix::from_pure(psi), key, partition, spec));
    }
    if (attacks::multi_state_attack(cts, rng) == b) ++hits;
  }
  auto r = pt.record("multistate");
  fill_partition(r, partition);
  r.t = static_cast<std::int64_t>(t);
  r.trials = static_cast<std::int64_t>(trials);
  r.mode = std::string(ensembles::to_string(spec.mode));
  const auto e = binomial(hits, trials);
  r.estimate = e.value;
  r.std_error = e.std_error;
  if (partition.m() == 0) r.exact = swap_adversary_success(t);
  r.prediction = 0.5;
  return {r};
}

std::size_t factorial(std::size_t k) { return k <= 1 ? 1 : k * factorial(k - 1); }

std::vector<ResultRecord> run_qubit_count(const Point& pt) {
  const std::size_t n = get_positive(pt.json, "n");
  const std::size_t s = get_positive(pt.json, "s");
  const std::size_t s_max = get_positive(pt.json, "s_max");
  const std::size_t trials = get_positive(pt.json, "trials");
  const std::size_t shots = get_positive(pt.json, "shots");
  const double delta = get_probability(pt.json, "delta");
  const auto spec = get_spec(pt.json);
  if (s > s_max) throw ValidationError("s", "must not exceed s_max");
  if (s_max > 3) throw ValidationError("s_max", "must be at most 3");
  const QubitPartition partition{n * s, get_size(pt.json, "l"), get_size(pt.json, "m")};
  const std::size_t total = 2 * n * factorial(s_max);
  qcore::check_cap(total, "qubit-count intercepted stream");
  qcore::check_cap(partition.z(), "qubit-count ciphertext");

  std::size_t smallest = 0, largest = 0, abstained = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto rng = pt.seeds.at(i);
    const auto key = SecretKey::generate(rng);
    const auto ct = protocol::encrypt(
        DensityMatrix::from_pure(PureState::basis(partition.n(), 0)), key, partition, spec);
    const auto res = attacks::qubit_count_attack(attacks::intercept_stream(ct.state, total), n, s_max, delta, shots, rng);
    if (!res.smallest) ++abstained;
    if (res.smallest == s) ++smallest;
    if (res.largest == s) ++largest;
  }
  auto base = pt.record("");
  base.n = static_cast<std::int64_t>(n);
  base.l = static_cast<std::int64_t>(partition.l());
  base.m = static_cast<std::int64_t>(partition.m());
  base.trials = static_cast<std::int64_t>(trials);
  base.mode = std::string(ensembles::to_string(spec.mode));
  std::vector<ResultRecord> out;
  auto add = [&](const char* name, std::size_t hits) {
    auto r = base;
    r.experiment = std::string("qubit-count:") + name;
    const auto e = binomial(hits, trials);
    r.estimate = e.value;
    r.std_error = e.std_error;
    out.push_back(std::move(r));
  };
  add("smallest", smallest);
  add("largest", largest);
  add("abstain", abstained);
  return out;
}

std::vector<ResultRecord> run_decoy(const Point& pt) {
  const auto partition = get_partition(pt.json);
  const std::size_t t = get_positive(pt.json, "t");
  const auto spec = get_spec(pt.json);
  auto rng = pt.seeds.at(0);
  const auto rep = attacks::decoy_indistinguishability(partition, t, spec, rng);
  const auto zero = DensityMatrix::from_pure(PureState::basis(partition.n(), 0));
  auto r = pt.record("decoy");
  fill_partition(r, partition);
  r.t = static_cast<std::int64_t>(t);
  r.mode = std::string(ensembles::to_string(spec.mode));
  auto entropy = r;
  r.estimate = rep.closeness;
  r.exact = moments::closeness_exact(partition, zero, t);
  r.prediction = closeness_leading(t, partition.m());
  entropy.experiment = "decoy:entropy";
  entropy.t.reset();
  entropy.estimate = rep.ciphertext_half_entropy;
  entropy.prediction = rep.decoy_half_entropy;
  return {r, entropy};
}

std::vector<ResultRecord> run_vprdm(const Point& pt) {
  const std::size_t n = get_positive(pt.json, "n");
  const std::size_t m = get_size(pt.json, "m");
  const std::size_t t = get_positive(pt.json, "t");
  const std::size_t trials = get_positive(pt.json, "trials");
  const auto spec = get_spec(pt.json);
  primitives::VprdmParams{n, m, {}}.validate();

  SampleStats complete, wrong;
  for (std::size_t i = 0; i < trials; ++i) {
    auto rng = pt.seeds.at(i);
    const auto key = SecretKey::generate(rng);
    const auto other = SecretKey::generate(rng);
    const auto rho = primitives::vprdm_generate({n, m, key}, spec);
    complete.add(primitives::vprdm_verify(rho, key, n, m, spec));
    wrong.add(primitives::vprdm_verify(rho, other, n, m, spec));
  }
  auto base = pt.record("");
  base.n = static_cast<std::int64_t>(n);
  base.m = static_cast<std::int64_t>(m);
  base.trials = static_cast<std::int64_t>(trials);
  base.mode = std::string(ensembles::to_string(spec.mode));
  auto c = base;
  c.experiment = "vprdm:complete";
  c.estimate = complete.mean();
  c.std_error = complete.std_error();
  c.exact = 1.0;
  auto w = base;
  w.experiment = "vprdm:wrong";
  w.estimate = wrong.mean();
  w.std_error = wrong.std_error();
  w.exact = std::ldexp(1.0, -static_cast<int>(n - m));
  auto g = base;
  g.experiment = "vprdm:ghse";
  g.t = static_cast<std::int64_t>(t);
  g.trials.reset();
  g.mode.clear();
  g.estimate = primitives::ghse_closeness(n, m, t);
  g.exact = g.estimate;
  return {c, w, g};
}

std::vector<ResultRecord> run_efi(const Point& pt) {
  primitives::EfiParams params;
  params.n = get_positive(pt.json, "n");
  params.m0 = get_size(pt.json, "m0");
  params.gamma = get_real(pt.json, "gamma");
  params.c = get_real(pt.json, "c");
  params.lambda_eff = get_size(pt.json, "lambda_eff");
  params.spec = get_spec(pt.json);
  const double p = get_probability(pt.json, "p");
  params.validate();
  const auto pair = primitives::efi_pair(params, pt.seeds);
  const auto rep = primitives::efi_noise_check(params, pair, KrausChannel::local_depolarizing(params.n, p));

  auto base = pt.record("");
  base.n = static_cast<std::int64_t>(params.n);
  base.m = static_cast<std::int64_t>(params.m0);
  base.trials = std::int64_t{1} << params.lambda_eff;
  base.mode = std::string(ensembles::to_string(params.spec.mode));
  std::vector<ResultRecord> out;
  auto add = [&](const char* name, bool noisy, double estimate, std::optional<double> exact,
                 std::optional<double> prediction) {
    auto r = base;
    r.experiment = std::string("efi:") + name;
    if (noisy) r.channel = channel_label("local_depolarizing", p);
    r.estimate = estimate;
    r.exact = exact;
    r.prediction = prediction;
    out.push_back(std::move(r));
  };
  const auto& clean = rep.noiseless;
  add("S0", false, clean.s0, clean.s0, static_cast<double>(params.lambda_eff + params.m0));
  add("S1", false, clean.s1, clean.s1, static_cast<double>(params.m1()));
  add("T", false, clean.t_exact, clean.t_exact, clean.t_lower_bound);
  add("fannes", false, clean.fannes_lhs, std::nullopt, clean.fannes_rhs);
  add("T_noisy", true, rep.noisy.t_exact, rep.noisy.t_exact, clean.t_exact);
  add("fannes_noisy", true, rep.noisy.fannes_lhs, std::nullopt, rep.noisy.fannes_rhs);
  add("T_one_arm", true, rep.t_one_arm, rep.t_one_arm, std::nullopt);
  if (rep.noise_entropy) add("H", true, *rep.noise_entropy, std::nullopt, rep.theorem_budget);
  if (rep.per_qubit_entropy) add("H1", true, *rep.per_qubit_entropy, std::nullopt, rep.per_qubit_budget);
  return out;
}

std::vector<ResultRecord> run_wg_selftest(const Point& pt) {
  const std::size_t n = get_positive(pt.json, "n");
  const std::size_t t = get_positive(pt.json, "t");
  if (n > 16) throw ValidationError("n", "must be at most 16");
  const std::uint64_t d = std::uint64_t{1} << n;
  auto r = pt.record("wg-selftest");
  r.n = static_cast<std::int64_t>(n);
  r.t = static_cast<std::int64_t>(t);
  r.estimate = moments::sum_abs_weingarten(t, d);
  r.exact = moments::inverse_falling_factorial(d, t);
  const double dd = static_cast<double>(d);
  if (static_cast<double>(t * t) <= dd)
    r.prediction = std::pow(dd, -static_cast<double>(t)) * (1.0 + static_cast<double>(t * t) / dd);
  return {r};
}

std::string csv_field(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : ""; }
std::string csv_field(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<std::int64_t> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stoll(s);
}

std::optional<double> parse_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

Json json_value(const std::optional<std::int64_t>& v) { return v ? Json(*v) : Json(nullptr); }
Json json_value(const std::optional<double>& v) { return v ? Json(round12(*v)) : Json(nullptr); }

template <class T>
std::optional<T> json_optional(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

// Fields that have their own column, or show up in one.
const std::set<std::string> kShown = {"n", "l", "m", "t", "trials", "p", "m0", "lambda_eff", "mode", "channel"};

/// "@key=value" for every swept field without a column.
std::string sweep_tag(const Json& params, const Json& point) {
  std::string tag;
  for (const auto& [key, value] : params.items())
    if (value.is_array() && !kShown.contains(key)) tag += "@" + key + "=" + point[key].dump();
  return tag;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("config", "must be a JSON object");
  ExperimentConfig cfg;
  if (!doc.contains("experiment") || !doc["experiment"].is_string())
    throw ValidationError("experiment", "missing or not a string");
  cfg.experiment = doc["experiment"].get<std::string>();
  defaults_for(cfg.experiment);
  for (const auto& [key, value] : doc.items()) {
    if (key == "experiment") continue;
    if (key == "seed") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0)
        throw ValidationError("seed", "must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "out") {
      if (!value.is_string()) throw ValidationError("out", "must be a string");
      cfg.out = value.get<std::string>();
    } else if (key == "format") {
      if (!value.is_string()) throw ValidationError("format", "must be a string");
      parse_format(value.get<std::string>());
      cfg.format = value.get<std::string>();
    } else {
      cfg.params[key] = value;
    }
  }
  cfg.grid();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config", e.what());
  }
  return from_json(doc);
}

std::vector<Json> ExperimentConfig::grid() const {
  const Json& base = defaults_for(experiment);
  for (const auto& [key, value] : params.items()) {
    if (!base.contains(key)) throw ValidationError(key, "unknown field for experiment " + experiment);
    const bool numeric = base[key].is_number();
    const bool integral = base[key].is_number_integer();
    auto check = [&, &key = key](const Json& v) {
      if (numeric ? !v.is_number() : !v.is_string())
        throw ValidationError(key, numeric ? "must be a number" : "must be a string");
      if (!integral) return;
      const double x = v.get<double>();
      if (x < 0 || x != std::floor(x)) throw ValidationError(key, "must be a non-negative integer");
      if (x == 0 && kPositive.contains(key)) throw ValidationError(key, "must be at least 1");
    };
    if (value.is_array()) {
      if (!numeric) throw ValidationError(key, "only numeric fields can sweep");
      if (value.empty()) throw ValidationError(key, "sweep list is empty");
      for (const auto& v : value) check(v);
    } else {
      check(value);
    }
  }
  std::vector<Json> points{Json::object()};
  for (const auto& [key, fallback] : base.items()) {
    const Json value = params.contains(key) ? params[key] : fallback;
    const Json choices = value.is_array() ? value : Json::array({value});
    std::vector<Json> next;
    for (const auto& p : points) {
      for (const auto& c : choices) {
        Json q = p;
        q[key] = c;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : defaults()) names.push_back(name);
  return names;
}

std::vector<ResultRecord> run_point(const std::string& experiment, const Json& point, std::uint64_t seed) {
  defaults_for(experiment);
  const Point pt{point, seed, TrialSeeds{seed, experiment, point.dump()}};
  if (experiment == "security-scan") return run_security_scan(pt);
  if (experiment == "auth-sweep") return run_auth_sweep(pt);
  if (experiment == "cpa") return run_cpa(pt);
  if (experiment == "multistate") return run_multistate(pt);
  if (experiment == "qubit-count") return run_qubit_count(pt);
  if (experiment == "decoy") return run_decoy(pt);
  if (experiment == "vprdm") return run_vprdm(pt);
  if (experiment == "efi") return run_efi(pt);
  return run_wg_selftest(pt);
}

std::vector<ResultRecord> run(const ExperimentConfig& config, const RunOptions& options) {
  const auto points = config.grid();
  std::vector<std::vector<ResultRecord>> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        const auto start = std::chrono::steady_clock::now();
        results[i] = run_point(config.experiment, points[i], config.seed);
        const std::string tag = sweep_tag(config.params, points[i]);
        for (auto& r : results[i]) r.experiment += tag;
        if (options.timing) {
          const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
          for (auto& r : results[i]) r.wall_ms = ms.count();
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, points.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<ResultRecord> out;
  for (auto& rs : results)
    for (auto& r : rs) out.push_back(std::move(r));
  return out;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ValidationError("format", "must be csv or json");
}

std::string to_csv(std::span<const ResultRecord> records) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.experiment << ',' << csv_field(r.n) << ',' << csv_field(r.l) << ',' << csv_field(r.m) << ','
       << csv_field(r.t) << ',' << csv_field(r.trials) << ',' << r.mode << ',' << r.channel << ','
       << format_real(r.estimate) << ',' << csv_field(r.std_error) << ',' << csv_field(r.exact) << ','
       << csv_field(r.prediction) << ',' << r.seed << ',' << format_real(r.wall_ms) << '\n';
  }
  return os.str();
}

std::vector<ResultRecord> parse_csv(std::string_view text) {
  const auto lines = split(text, '\n');
  if (lines.empty() || lines[0] != kCsvHeader) throw ValidationError("csv", "missing or wrong header");
  std::vector<ResultRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split(lines[i], ',');
    if (f.size() != 14) throw ValidationError("csv", "line " + std::to_string(i + 1) + " has wrong field count");
    ResultRecord r;
    r.experiment = f[0];
    r.n = parse_int(f[1]);
    r.l = parse_int(f[2]);
    r.m = parse_int(f[3]);
    r.t = parse_int(f[4]);
    r.trials = parse_int(f[5]);
    r.mode = f[6];
    r.channel = f[7];
    r.estimate = std::stod(f[8]);
    r.std_error = parse_real(f[9]);
    r.exact = parse_real(f[10]);
    r.prediction = parse_real(f[11]);
    r.seed = std::stoull(f[12]);
    r.wall_ms = std::stod(f[13]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_json(std::span<const ResultRecord> records) {
  Json arr = Json::array();
  for (const auto& r : records) {
    arr.push_back({
        {"experiment", r.experiment},
        {"n", json_value(r.n)},
        {"l", json_value(r.l)},
        {"m", json_value(r.m)},
        {"t", json_value(r.t)},
        {"trials", json_value(r.trials)},
        {"mode", r.mode},
        {"channel", r.channel},
        {"estimate", round12(r.estimate)},
        {"stderr", json_value(r.std_error)},
        {"exact", json_value(r.exact)},
        {"prediction", json_value(r.prediction)},
        {"seed", r.seed},
        {"wall_ms", round12(r.wall_ms)},
    });
  }
  return arr.dump(2) + "\n";
}

std::vector<ResultRecord> parse_json(std::string_view text) {
  const Json arr = Json::parse(text);
  if (!arr.is_array()) throw ValidationError("json", "expected an array of records");
  std::vector<ResultRecord> out;
  for (const auto& o : arr) {
    ResultRecord r;
    r.experiment = o.at("experiment").get<std::string>();
    r.n = json_optional<std::int64_t>(o, "n");
    r.l = json_optional<std::int64_t>(o, "l");
    r.m = json_optional<std::int64_t>(o, "m");
    r.t = json_optional<std::int64_t>(o, "t");
    r.trials = json_optional<std::int64_t>(o, "trials");
    r.mode = o.at("mode").get<std::string>();
    r.channel = o.at("channel").get<std::string>();
    r.estimate = o.at("estimate").get<double>();
    r.std_error = json_optional<double>(o, "stderr");
    r.exact = json_optional<double>(o, "exact");
    r.prediction = json_optional<double>(o, "prediction");
    r.seed = o.at("seed").get<std::uint64_t>();
    r.wall_ms = o.at("wall_ms").get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

void emit(std::span<const ResultRecord> records, Format format, const std::string& path) {
  if (records.empty()) throw Error("emit: no records");
  const std::string text = format == Format::csv ? to_csv(records) : to_json(records);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out.flush()) throw Error("cannot write " + path);
}

}  // namespace pqas::harness
