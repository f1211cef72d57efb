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

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "pqaslab/qcore.hpp"

namespace pqas::qcore {

/// CPTP map rho -> sum_i K_i rho K_i^dagger.
///
/// Depolarizing channels keep a closed-form representation so that they can
/// act on registers whose Pauli basis would be too large to materialize;
/// kraus_ops() expands them on request.
class KrausChannel {
 public:
  /// Validates sum_i K_i^dagger K_i = I within 1e-9.
  static KrausChannel from_ops(std::vector<CMatrix> ops);
  static KrausChannel identity(Eigen::Index dim);
  static KrausChannel unitary(const UnitaryMatrix& u);
  /// sum_i p_i U_i rho U_i^dagger; probabilities must sum to 1.
  static KrausChannel mixed_unitary(
      const std::vector<double>& probabilities,
      const std::vector<UnitaryMatrix>& unitaries);
  /// rho -> (1 - p) rho + p I / d on all num_qubits qubits.
  static KrausChannel depolarizing(std::size_t num_qubits, double p);
  /// Lambda_p on every qubit: (1 - 3p/4) rho + p/4 sum_a s_a rho s_a.
  static KrausChannel local_depolarizing(std::size_t num_qubits, double p);
  /// Convex combination sum_j w_j Gamma_j.
  static KrausChannel mixture(
      const std::vector<double>& weights, const std::vector<KrausChannel>& parts);

  Eigen::Index dim() const { return dim_; }
  std::size_t num_qubits() const { return qubits_for_dim(dim_); }

  CMatrix apply(const CMatrix& rho) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

  /// Explicit Kraus operators; throws SizeLimitError when a closed-form
  /// channel would need more than 2^14 operators.
  std::vector<CMatrix> kraus_ops() const;

  /// sum_i |tr K_i|^2.
  double kraus_trace_weight() const;

  /// Probabilities {p_i} when every K_i is proportional to a unitary,
  /// otherwise empty. For local depolarizing only the per-qubit
  /// distribution is returned by local_mixture_weights().
  std::optional<std::vector<double>> mixed_unitary_weights() const;
  std::optional<std::vector<double>> local_mixture_weights() const;

  /// Shannon entropy in bits of the mixed-unitary distribution, if any.
  std::optional<double> mixture_entropy_bits() const;

 private:
  struct Explicit {
    std::vector<CMatrix> ops;
  };
  struct GlobalDepolarizing {
    double p;
  };
  struct LocalDepolarizing {
    double p;
  };
  using Repr = std::variant<Explicit, GlobalDepolarizing, LocalDepolarizing>;

  KrausChannel(Eigen::Index dim, Repr repr) : dim_(dim), repr_(std::move(repr)) {}

  Eigen::Index dim_;
  Repr repr_;
};

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel);

}  // namespace pqas::qcore
