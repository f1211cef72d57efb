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

#include "pqaslab/channel.hpp"

#include <cmath>
#include <numeric>

#include "pqaslab/gates.hpp"

namespace pqas::qcore {

namespace {

constexpr std::size_t kMaxMaterializedOps = std::size_t{1} << 14;

void check_probability(double p, const char* field) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(field, "probability outside [0, 1]");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Pauli weights of the single-qubit depolarizing channel, order I, X, Y, Z.
std::vector<double> local_weights(double p) {
  return {1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p};
}

}  // namespace

KrausChannel KrausChannel::from_ops(std::vector<CMatrix> ops) {
  if (ops.empty()) throw ValidationError("kraus_ops", "empty operator list");
  const Eigen::Index d = ops.front().rows();
  qubits_for_dim(d);
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& k : ops) {
    if (k.rows() != d || k.cols() != d) throw DimensionError("Kraus operators differ in shape");
    sum.noalias() += k.adjoint() * k;
  }
  if ((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kUnitaryTol) {
    throw ValidationError("kraus_ops", "sum K^dagger K differs from I (not trace preserving)");
  }
  return KrausChannel(d, Explicit{std::move(ops)});
}

KrausChannel KrausChannel::identity(Eigen::Index dim) {
  qubits_for_dim(dim);
  return KrausChannel(dim, Explicit{{CMatrix::Identity(dim, dim)}});
}

KrausChannel KrausChannel::unitary(const UnitaryMatrix& u) {
  return KrausChannel(u.dim(), Explicit{{u.matrix()}});
}

KrausChannel KrausChannel::mixed_unitary(
    const std::vector<double>& probabilities, const std::vector<UnitaryMatrix>& unitaries) {
  if (probabilities.size() != unitaries.size() || unitaries.empty()) {
    throw ValidationError("mixed_unitary", "need one probability per unitary");
  }
  double total = 0.0;
  std::vector<CMatrix> ops;
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    check_probability(probabilities[i], "mixed_unitary.p");
    total += probabilities[i];
    ops.push_back(std::sqrt(probabilities[i]) * unitaries[i].matrix());
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("mixed_unitary", "probabilities do not sum to 1");
  return from_ops(std::move(ops));
}

KrausChannel KrausChannel::depolarizing(std::size_t num_qubits, double p) {
  check_cap(num_qubits, "depolarizing channel");
  check_probability(p, "p");
  return KrausChannel(Eigen::Index{1} << num_qubits, GlobalDepolarizing{p});
}

KrausChannel KrausChannel::local_depolarizing(std::size_t num_qubits, double p) {
  check_cap(num_qubits, "local depolarizing channel");
  check_probability(p, "p");
  return KrausChannel(Eigen::Index{1} << num_qubits, LocalDepolarizing{p});
}

KrausChannel KrausChannel::mixture(
    const std::vector<double>& weights, const std::vector<KrausChannel>& parts) {
  if (weights.size() != parts.size() || parts.empty()) {
    throw ValidationError("mixture", "need one weight per channel");
  }
  std::vector<CMatrix> ops;
  double total = 0.0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    check_probability(weights[j], "mixture.weight");
    if (parts[j].dim() != parts.front().dim()) throw DimensionError("mixture of channels with different dimensions");
    total += weights[j];
    for (auto& k : parts[j].kraus_ops()) ops.push_back(std::sqrt(weights[j]) * k);
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("mixture", "weights do not sum to 1");
  return from_ops(std::move(ops));
}

CMatrix KrausChannel::apply(const CMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionError("channel dimension mismatch");
  return std::visit(
      Overloaded{
          [&](const Explicit& e) {
            CMatrix out = CMatrix::Zero(dim_, dim_);
            for (const auto& k : e.ops) out.noalias() += k * rho * k.adjoint();
            return out;
          },
          [&](const GlobalDepolarizing& g) {
            CMatrix out = (1.0 - g.p) * rho;
            out.diagonal().array() += g.p * rho.trace() / static_cast<double>(dim_);
            return out;
          },
          [&](const LocalDepolarizing& l) {
            const std::size_t nq = qubits_for_dim(dim_);
            const CMatrix paulis[3] = {gates::pauli_x(), gates::pauli_y(), gates::pauli_z()};
            CMatrix cur = rho;
            for (std::size_t q = 0; q < nq; ++q) {
              const std::size_t target[1] = {q};
              CMatrix next = (1.0 - 0.75 * l.p) * cur;
              for (const auto& s : paulis) {
                CMatrix term = cur;
                conjugate_by_gate(term, s, target, nq);
                next += 0.25 * l.p * term;
              }
              cur = std::move(next);
            }
            return cur;
          }},
      repr_);
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply(rho.matrix()), unchecked);
}

std::vector<CMatrix> KrausChannel::kraus_ops() const {
  const std::size_t nq = qubits_for_dim(dim_);
  return std::visit(
      Overloaded{
          [](const Explicit& e) { return e.ops; },
          [&](const GlobalDepolarizing& g) {
            if (static_cast<std::size_t>(dim_ * dim_) > kMaxMaterializedOps) {
              throw SizeLimitError("depolarizing channel too large to materialize");
            }
            std::vector<CMatrix> ops;
            const double d2 = static_cast<double>(dim_ * dim_);
            ops.push_back(std::sqrt(1.0 - g.p + g.p / d2) * CMatrix::Identity(dim_, dim_));
            for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim_); ++x) {
              for (std::uint64_t z = 0; z < static_cast<std::uint64_t>(dim_); ++z) {
                if (x == 0 && z == 0) continue;
                PauliString ps{nq, x, z, false};
                ops.push_back(std::sqrt(g.p / d2) * ps.matrix());
              }
            }
            return ops;
          },
          [&](const LocalDepolarizing& l) {
            if (static_cast<std::size_t>(dim_ * dim_) > kMaxMaterializedOps) {
              throw SizeLimitError("local depolarizing channel too large to materialize");
            }
            const auto w = local_weights(l.p);
            std::vector<CMatrix> ops;
            const std::size_t count = std::size_t{1} << (2 * nq);
            for (std::size_t code = 0; code < count; ++code) {
              PauliString ps{nq, 0, 0, false};
              double weight = 1.0;
              for (std::size_t q = 0; q < nq; ++q) {
                const std::size_t sym = (code >> (2 * q)) & 3U;  // 0=I 1=X 2=Y 3=Z
                weight *= w[sym];
                if (sym == 1 || sym == 2) ps.x |= std::uint64_t{1} << q;
                if (sym == 2 || sym == 3) ps.z |= std::uint64_t{1} << q;
              }
              if (weight == 0.0) continue;
              ops.push_back(std::sqrt(weight) * ps.matrix());
            }
            return ops;
          }},
      repr_);
}

double KrausChannel::kraus_trace_weight() const {
  const double d = static_cast<double>(dim_);
  return std::visit(
      Overloaded{
          [](const Explicit& e) {
            double s = 0.0;
            for (const auto& k : e.ops) s += std::norm(k.trace());
            return s;
          },
          [&](const GlobalDepolarizing& g) { return d * d * (1.0 - g.p) + g.p; },
          [&](const LocalDepolarizing& l) {
            return d * d * std::pow(1.0 - 0.75 * l.p, static_cast<double>(qubits_for_dim(dim_)));
          }},
      repr_);
}

std::optional<std::vector<double>> KrausChannel::mixed_unitary_weights() const {
  const double d = static_cast<double>(dim_);
  return std::visit(
      Overloaded{
          [&](const Explicit& e) -> std::optional<std::vector<double>> {
            std::vector<double> w;
            for (const auto& k : e.ops) {
              const CMatrix g = k.adjoint() * k;
              const double c = g.trace().real() / d;
              if ((g - c * CMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > 1e-9) {
                return std::nullopt;
              }
              w.push_back(c);
            }
            return w;
          },
          [&](const GlobalDepolarizing& g) -> std::optional<std::vector<double>> {
            std::vector<double> w(static_cast<std::size_t>(dim_ * dim_), g.p / (d * d));
            w[0] = 1.0 - g.p + g.p / (d * d);
            return w;
          },
          [&](const LocalDepolarizing& l) -> std::optional<std::vector<double>> {
            const auto base = local_weights(l.p);
            std::vector<double> w{1.0};
            for (std::size_t q = 0; q < qubits_for_dim(dim_); ++q) {
              std::vector<double> next;
              next.reserve(w.size() * 4);
              for (double a : w)
                for (double b : base) next.push_back(a * b);
              w = std::move(next);
            }
            return w;
          }},
      repr_);
}

std::optional<std::vector<double>> KrausChannel::local_mixture_weights() const {
  if (const auto* l = std::get_if<LocalDepolarizing>(&repr_)) return local_weights(l->p);
  return std::nullopt;
}

std::optional<double> KrausChannel::mixture_entropy_bits() const {
  if (const auto* l = std::get_if<LocalDepolarizing>(&repr_)) {
    const auto w = local_weights(l->p);
    return static_cast<double>(qubits_for_dim(dim_)) * shannon_entropy_bits(w);
  }
  const auto w = mixed_unitary_weights();
  if (!w) return std::nullopt;
  return shannon_entropy_bits(*w);
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel) {
  return channel.apply(rho);
}

}  // namespace pqas::qcore
