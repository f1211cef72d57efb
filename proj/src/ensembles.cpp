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

#include "pqaslab/ensembles.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace pqas::ensembles {

using qcore::Complex;
using qcore::CVector;

namespace {

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, KeyedStream& rng) {
  CMatrix g(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) g(r, c) = rng.complex_normal();
  }
  return g;
}

CMatrix haar_matrix(Eigen::Index d, KeyedStream& rng) {
  Eigen::HouseholderQR<CMatrix> qr(ginibre(d, d, rng));
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

// Dense GF(2) matrix.
class BitMat {
 public:
  explicit BitMat(std::size_t n) : n_(n), bits_(n * n, 0) {}

  static BitMat identity(std::size_t n) {
    BitMat m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  static BitMat from_quadrants(const BitMat& tl, const BitMat& tr, const BitMat& bl, const BitMat& br) {
    const std::size_t h = tl.n_;
    BitMat m(2 * h);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < h; ++c) {
        m.set(r, c, tl.get(r, c));
        m.set(r, c + h, tr.get(r, c));
        m.set(r + h, c, bl.get(r, c));
        m.set(r + h, c + h, br.get(r, c));
      }
    }
    return m;
  }

  bool get(std::size_t r, std::size_t c) const { return bits_[r * n_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v) { bits_[r * n_ + c] = v ? 1 : 0; }

  BitMat operator*(const BitMat& o) const {
    BitMat m(n_);
    for (std::size_t r = 0; r < n_; ++r) {
      for (std::size_t k = 0; k < n_; ++k) {
        if (!get(r, k)) continue;
        for (std::size_t c = 0; c < n_; ++c) m.bits_[r * n_ + c] ^= o.bits_[k * n_ + c];
      }
    }
    return m;
  }

  BitMat transposed() const {
    BitMat m(n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) m.set(c, r, get(r, c));
    return m;
  }

  // Inverse of a unit lower-triangular matrix by forward substitution.
  BitMat inv_lower_triangular() const {
    BitMat x(n_);
    for (std::size_t c = 0; c < n_; ++c) {
      x.set(c, c, true);
      for (std::size_t r = c + 1; r < n_; ++r) {
        bool b = false;
        for (std::size_t k = c; k < r; ++k) b ^= get(r, k) && x.get(k, c);
        x.set(r, c, b);
      }
    }
    return x;
  }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> bits_;
};

// Hadamard pattern and permutation from the quantum Mallows distribution.
void sample_qmallows(
    std::size_t n, KeyedStream& rng, std::vector<bool>& hada, std::vector<std::size_t>& perm) {
  std::vector<std::size_t> remaining(n);
  for (std::size_t k = 0; k < n; ++k) remaining[k] = k;
  hada.clear();
  perm.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = remaining.size();
    const double u = rng.uniform();
    const double eps = std::pow(4.0, -static_cast<double>(m));
    auto k = static_cast<std::size_t>(-std::ceil(std::log2(u + (1.0 - u) * eps)));
    hada.push_back(k < m);
    if (k >= m) k = 2 * m - k - 1;
    perm.push_back(remaining[k]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(k));
  }
}

BitMat random_symplectic(std::size_t n, KeyedStream& rng) {
  std::vector<bool> hada;
  std::vector<std::size_t> perm;
  sample_qmallows(n, rng, hada, perm);

  BitMat symmetric(n);
  for (std::size_t col = 0; col < n; ++col) {
    symmetric.set(col, col, rng.bit());
    for (std::size_t row = col + 1; row < n; ++row) {
      const bool b = rng.bit();
      symmetric.set(row, col, b);
      symmetric.set(col, row, b);
    }
  }

  BitMat symmetric_m(n);
  for (std::size_t col = 0; col < n; ++col) {
    symmetric_m.set(col, col, rng.bit() && hada[col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      bool b = hada[row] && hada[col];
      b |= hada[row] > hada[col] && perm[row] < perm[col];
      b |= hada[row] < hada[col] && perm[row] > perm[col];
      b &= rng.bit();
      symmetric_m.set(row, col, b);
      symmetric_m.set(col, row, b);
    }
  }

  BitMat lower = BitMat::identity(n);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t row = col + 1; row < n; ++row) lower.set(row, col, rng.bit());

  BitMat lower_m = BitMat::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t row = col + 1; row < n; ++row) {
      bool b = hada[row] < hada[col];
      b |= hada[row] && hada[col] && perm[row] > perm[col];
      b |= !hada[row] && !hada[col] && perm[row] < perm[col];
      b &= rng.bit();
      lower_m.set(row, col, b);
    }
  }

  const BitMat fused = BitMat::from_quadrants(
      lower, BitMat(n), symmetric * lower, lower.inv_lower_triangular().transposed());
  const BitMat fused_m = BitMat::from_quadrants(
      lower_m, BitMat(n), symmetric_m * lower_m, lower_m.inv_lower_triangular().transposed());

  BitMat u(2 * n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < 2 * n; ++col) {
      u.set(row, col, fused.get(perm[row], col));
      u.set(row + n, col, fused.get(perm[row] + n, col));
    }
  }
  for (std::size_t row = 0; row < n; ++row) {
    if (!hada[row]) continue;
    for (std::size_t col = 0; col < 2 * n; ++col) {
      const bool t = u.get(row, col);
      u.set(row, col, u.get(row + n, col));
      u.set(row + n, col, t);
    }
  }
  return fused_m * u;
}

KeyedStream key_stream(const SecretKey& key, std::string_view factor) {
  StreamKey sk;
  sk.add("scrambler").add(factor);
  if (factor == "pru" || factor == "haar_exact") sk.add(key.k1);
  if (factor == "design4" || factor == "haar_exact") sk.add(key.k2);
  if (factor == "clifford" || factor == "haar_exact") sk.add(key.k3);
  return KeyedStream(sk);
}

}  // namespace

UnitaryMatrix sample_haar(std::size_t z, KeyedStream& rng) {
  qcore::check_cap(z, "sample_haar");
  return UnitaryMatrix(haar_matrix(Eigen::Index{1} << z, rng), qcore::unchecked);
}

PureState sample_haar_state(std::size_t z, KeyedStream& rng) {
  qcore::check_cap(z, "sample_haar_state");
  CVector v = ginibre(Eigen::Index{1} << z, 1, rng).col(0);
  v.normalize();
  return PureState(std::move(v), qcore::unchecked);
}

CliffordTableau::CliffordTableau(std::size_t num_qubits) : n_(num_qubits) {
  for (std::size_t r = 0; r < 2 * n_; ++r) {
    PauliString p{n_, 0, 0, false};
    const std::size_t q = r % n_;
    if (r < n_) p.x = std::uint64_t{1} << q;
    else p.z = std::uint64_t{1} << q;
    rows_.push_back(p);
  }
}

bool CliffordTableau::is_valid() const {
  for (std::size_t a = 0; a < n_; ++a) {
    if (x_image(a).commutes_with(z_image(a))) return false;
    for (std::size_t b = a + 1; b < n_; ++b) {
      if (!x_image(a).commutes_with(x_image(b)) || !x_image(a).commutes_with(z_image(b)) ||
          !z_image(a).commutes_with(x_image(b)) || !z_image(a).commutes_with(z_image(b))) {
        return false;
      }
    }
  }
  return true;
}

UnitaryMatrix CliffordTableau::to_unitary() const {
  qcore::check_cap(n_, "Clifford synthesis");
  const Eigen::Index d = Eigen::Index{1} << n_;

  // C|0> is the joint +1 eigenvector of the Z images.
  CVector psi0;
  for (Eigen::Index j = 0; j < d; ++j) {
    CVector v = CVector::Zero(d);
    v(j) = 1.0;
    for (std::size_t q = 0; q < n_; ++q) {
      CVector sv = v;
      z_image(q).apply(sv);
      v = 0.5 * (v + sv);
    }
    if (v.squaredNorm() > 1e-8) {
      psi0 = v.normalized();
      break;
    }
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    if (std::abs(psi0(k)) > 1e-9) {
      psi0 *= std::conj(psi0(k)) / std::abs(psi0(k));
      break;
    }
  }

  // C|x> = prod_q (C X_q C^dagger)^{x_q} C|0>.
  CMatrix u(d, d);
  u.col(0) = psi0;
  for (Eigen::Index x = 1; x < d; ++x) {
    const auto ux = static_cast<std::uint64_t>(x);
    const int low = std::countr_zero(ux);
    CVector col = u.col(static_cast<Eigen::Index>(ux & (ux - 1)));
    x_image(n_ - 1 - static_cast<std::size_t>(low)).apply(col);
    u.col(x) = col;
  }
  return UnitaryMatrix(std::move(u), qcore::unchecked);
}

CliffordTableau sample_clifford_tableau(std::size_t z, KeyedStream& rng) {
  qcore::check_cap(z, "sample_clifford");
  const BitMat raw = random_symplectic(z, rng);
  CliffordTableau t(z);
  for (std::size_t row = 0; row < z; ++row) {
    PauliString& xi = t.x_image(row);
    PauliString& zi = t.z_image(row);
    xi.x = xi.z = zi.x = zi.z = 0;
    for (std::size_t col = 0; col < z; ++col) {
      const std::uint64_t bit = std::uint64_t{1} << col;
      if (raw.get(row, col)) xi.x |= bit;
      if (raw.get(row, col + z)) xi.z |= bit;
      if (raw.get(row + z, col)) zi.x |= bit;
      if (raw.get(row + z, col + z)) zi.z |= bit;
    }
  }
  for (std::size_t row = 0; row < z; ++row) {
    t.x_image(row).sign = rng.bit();
    t.z_image(row).sign = rng.bit();
  }
  return t;
}

UnitaryMatrix sample_clifford(std::size_t z, KeyedStream& rng) {
  return sample_clifford_tableau(z, rng).to_unitary();
}

UnitaryMatrix sample_design4_surrogate(std::size_t z, KeyedStream& rng) {
  return sample_haar(z, rng);
}

UnitaryMatrix sample_pru_surrogate(std::size_t z, KeyedStream& rng, std::size_t depth) {
  qcore::check_cap(z, "sample_pru_surrogate");
  if (depth == 0) throw ValidationError("pru_depth", "must be at least 1");
  const Eigen::Index d = Eigen::Index{1} << z;
  CMatrix u = CMatrix::Identity(d, d);
  if (z == 1) {
    for (std::size_t l = 0; l < depth; ++l) u = haar_matrix(2, rng) * u;
    return UnitaryMatrix(std::move(u), qcore::unchecked);
  }
  for (std::size_t l = 0; l < depth; ++l) {
    const std::size_t offset = z >= 3 ? l % 2 : 0;
    for (std::size_t i = offset; i + 1 < z; i += 2) {
      const CMatrix gate = haar_matrix(4, rng);
      const std::size_t pair[2] = {i, i + 1};
      qcore::apply_gate_left(u, gate, pair, z);
    }
  }
  return UnitaryMatrix(std::move(u), qcore::unchecked);
}

std::string_view to_string(ScramblerMode mode) {
  switch (mode) {
    case ScramblerMode::composed: return "composed";
    case ScramblerMode::haar_exact: return "haar_exact";
    case ScramblerMode::pru_only: return "pru_only";
  }
  return "unknown";
}

ScramblerMode parse_scrambler_mode(std::string_view name) {
  if (name == "composed") return ScramblerMode::composed;
  if (name == "haar_exact") return ScramblerMode::haar_exact;
  if (name == "pru_only") return ScramblerMode::pru_only;
  throw ValidationError("mode", "unknown scrambler mode '" + std::string(name) + "'");
}

KeyedStream pru_stream(const SecretKey& key) { return key_stream(key, "pru"); }
KeyedStream design4_stream(const SecretKey& key) { return key_stream(key, "design4"); }
KeyedStream clifford_stream(const SecretKey& key) { return key_stream(key, "clifford"); }
KeyedStream haar_exact_stream(const SecretKey& key) { return key_stream(key, "haar_exact"); }

UnitaryMatrix build_scrambler(const SecretKey& key, std::size_t z, const ScramblerSpec& spec) {
  qcore::check_cap(z, "build_scrambler");
  if (spec.pru_depth == 0) throw ValidationError("pru_depth", "must be at least 1");
  switch (spec.mode) {
    case ScramblerMode::haar_exact: {
      auto rng = haar_exact_stream(key);
      return sample_haar(z, rng);
    }
    case ScramblerMode::pru_only: {
      auto rng = pru_stream(key);
      return sample_pru_surrogate(z, rng, spec.pru_depth);
    }
    case ScramblerMode::composed: {
      auto r1 = pru_stream(key);
      auto r2 = design4_stream(key);
      auto r3 = clifford_stream(key);
      const UnitaryMatrix v2 = sample_clifford(z, r3);
      const UnitaryMatrix v4 = sample_design4_surrogate(z, r2);
      const UnitaryMatrix vp = sample_pru_surrogate(z, r1, spec.pru_depth);
      return vp * (v4 * v2);
    }
  }
  throw ValidationError("mode", "unknown scrambler mode");
}

DensityMatrix sample_ghse(std::size_t n, std::size_t m, KeyedStream& rng) {
  qcore::check_cap(n + m, "sample_ghse");
  const PureState psi = sample_haar_state(n + m, rng);
  const CMatrix full = psi.amplitudes() * psi.amplitudes().adjoint();
  std::vector<bool> keep(n + m, false);
  for (std::size_t q = 0; q < n; ++q) keep[q] = true;
  return DensityMatrix(qcore::partial_trace_qubits(full, keep), qcore::unchecked);
}

DensityMatrix sample_density(std::size_t z, KeyedStream& rng, std::size_t rank) {
  qcore::check_cap(z, "sample_density");
  const Eigen::Index d = Eigen::Index{1} << z;
  const Eigen::Index r = rank == 0 ? d : static_cast<Eigen::Index>(rank);
  if (r > d) throw ValidationError("rank", "exceeds dimension");
  const CMatrix g = ginibre(d, r, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho), qcore::unchecked);
}

}  // namespace pqas::ensembles
