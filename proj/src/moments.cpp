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

#include "pqaslab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace pqas::moments {

namespace {

std::uint64_t ipow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

void check_copies(std::size_t t) {
  if (t == 0) throw ValidationError("t", "must be at least 1");
  if (t > kMaxCopies) throw SizeLimitError("t = " + std::to_string(t) + " exceeds the S_t limit of 6");
}

// Hermitian part, to absorb rounding before eigendecomposition.
CMatrix herm(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

CMatrix positive_projector(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm(h));
  CMatrix p = CMatrix::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    if (es.eigenvalues()(k) > 0.0) p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  }
  return p;
}

}  // namespace

Permutation::Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto v : images_) {
    if (v >= images_.size() || seen[v]) throw ValidationError("permutation", "images are not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t t) {
  std::vector<std::size_t> im(t);
  std::iota(im.begin(), im.end(), 0);
  return Permutation(std::move(im));
}

Permutation Permutation::transposition(std::size_t t, std::size_t a, std::size_t b) {
  std::vector<std::size_t> im(t);
  std::iota(im.begin(), im.end(), 0);
  std::swap(im.at(a), im.at(b));
  return Permutation(std::move(im));
}

std::vector<Permutation> Permutation::all(std::size_t t) {
  check_copies(t);
  std::vector<std::size_t> im(t);
  std::iota(im.begin(), im.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

Permutation Permutation::compose(const Permutation& rhs) const {
  if (rhs.size() != size()) throw DimensionError("composing permutations of different degree");
  std::vector<std::size_t> im(size());
  for (std::size_t i = 0; i < size(); ++i) im[i] = images_[rhs.images_[i]];
  return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> im(size());
  for (std::size_t i = 0; i < size(); ++i) im[images_[i]] = i;
  return Permutation(std::move(im));
}

std::vector<std::size_t> Permutation::cycle_lengths() const {
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> lengths;
  for (std::size_t s = 0; s < size(); ++s) {
    if (seen[s]) continue;
    std::size_t len = 0;
    for (std::size_t i = s; !seen[i]; i = images_[i]) {
      seen[i] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  return lengths;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

std::size_t cycles(const Permutation& p) { return p.cycle_lengths().size(); }

std::size_t permutation_rank(const Permutation& p) {
  // Lehmer code.
  std::size_t rank = 0;
  const std::size_t t = p.size();
  for (std::size_t i = 0; i < t; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < t; ++j)
      if (p(j) < p(i)) ++smaller;
    rank = rank * (t - i) + smaller;
  }
  return rank;
}

std::vector<std::uint64_t> permutation_index_map(const Permutation& p, std::uint64_t d) {
  const std::size_t t = p.size();
  const std::uint64_t total = ipow(d, t);
  std::vector<std::uint64_t> place(t);
  for (std::size_t k = 0; k < t; ++k) place[k] = ipow(d, t - 1 - k);
  std::vector<std::uint64_t> f(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t out = 0;
    for (std::size_t k = 0; k < t; ++k) {
      const std::uint64_t digit = (i / place[k]) % d;
      out += digit * place[p(k)];
    }
    f[i] = out;
  }
  return f;
}

CMatrix permutation_operator(const Permutation& p, std::uint64_t d) {
  const std::uint64_t total = ipow(d, p.size());
  if (total > kMaxMomentDim) throw SizeLimitError("permutation operator larger than 4096");
  const auto f = permutation_index_map(p, d);
  const auto n = static_cast<Eigen::Index>(total);
  CMatrix m = CMatrix::Zero(n, n);
  for (std::uint64_t i = 0; i < total; ++i) m(static_cast<Eigen::Index>(f[i]), static_cast<Eigen::Index>(i)) = 1.0;
  return m;
}

const std::vector<double>& weingarten_table(std::size_t t, std::uint64_t d) {
  check_copies(t);
  if (d < t) throw ValidationError("d", "Weingarten function needs d >= t");
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::uint64_t>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({t, d});
  if (it != cache.end()) return it->second;

  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const auto perms = Permutation::all(t);
  const auto k = static_cast<Eigen::Index>(perms.size());
  const long double dl = static_cast<long double>(d);
  // Scaled by d^-t for conditioning.
  LMatrix g(k, k);
  for (Eigen::Index s = 0; s < k; ++s) {
    const Permutation sinv = perms[static_cast<std::size_t>(s)].inverse();
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto c = cycles(sinv.compose(perms[static_cast<std::size_t>(r)]));
      g(s, r) = std::pow(dl, static_cast<long double>(c) - static_cast<long double>(t));
    }
  }
  LVector e = LVector::Zero(k);
  e(0) = 1.0L;
  const LVector w = g.partialPivLu().solve(e);
  std::vector<double> out(perms.size());
  const long double scale = std::pow(dl, -static_cast<long double>(t));
  for (Eigen::Index r = 0; r < k; ++r) out[static_cast<std::size_t>(r)] = static_cast<double>(w(r) * scale);
  return cache.emplace(std::make_pair(t, d), std::move(out)).first->second;
}

double weingarten(const Permutation& p, std::uint64_t d) {
  return weingarten_table(p.size(), d)[permutation_rank(p)];
}

double sum_abs_weingarten(std::size_t t, std::uint64_t d) {
  double s = 0.0;
  for (double w : weingarten_table(t, d)) s += std::abs(w);
  return s;
}

double inverse_falling_factorial(std::uint64_t d, std::size_t t) {
  long double r = 1.0L;
  for (std::size_t i = 0; i < t; ++i) r /= static_cast<long double>(d - i);
  return static_cast<double>(r);
}

double sum_cycles_nonidentity(std::size_t t, std::uint64_t d) {
  double s = 0.0;
  for (const auto& p : Permutation::all(t)) {
    if (!p.is_identity()) s += std::pow(static_cast<double>(d), static_cast<double>(cycles(p)));
  }
  return s;
}

CMatrix haar_moment(const CMatrix& o, std::size_t t, std::uint64_t d) {
  check_copies(t);
  const std::uint64_t total = ipow(d, t);
  if (total > kMaxMomentDim) throw SizeLimitError("haar_moment: d^t exceeds 4096");
  if (o.rows() != static_cast<Eigen::Index>(total) || o.cols() != o.rows()) {
    throw DimensionError("haar_moment: operator is not d^t x d^t");
  }
  const auto perms = Permutation::all(t);
  const auto& wg = weingarten_table(t, d);
  std::vector<std::vector<std::uint64_t>> maps;
  std::vector<qcore::Complex> traces;
  for (const auto& p : perms) {
    maps.push_back(permutation_index_map(p, d));
    qcore::Complex tr = 0.0;
    for (std::uint64_t j = 0; j < total; ++j) tr += o(static_cast<Eigen::Index>(maps.back()[j]), static_cast<Eigen::Index>(j));
    traces.push_back(tr);
  }
  const auto n = static_cast<Eigen::Index>(total);
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t eta = 0; eta < perms.size(); ++eta) {
    const Permutation eta_inv = perms[eta].inverse();
    qcore::Complex c = 0.0;
    for (std::size_t pi = 0; pi < perms.size(); ++pi) c += wg[permutation_rank(eta_inv.compose(perms[pi]))] * traces[pi];
    for (std::uint64_t j = 0; j < total; ++j) out(static_cast<Eigen::Index>(maps[eta][j]), static_cast<Eigen::Index>(j)) += c;
  }
  return out;
}

MomentTerms encrypted_moment_terms(
    const QubitPartition& partition, const DensityMatrix& rho_g, std::size_t t, std::size_t q) {
  check_copies(t);
  const std::uint64_t dm = std::uint64_t{1} << partition.n();
  const std::uint64_t dx = ipow(dm, t);
  const auto dq = Eigen::Index{1} << q;
  if (rho_g.dim() != static_cast<Eigen::Index>(dx) * dq) {
    throw DimensionError("joint input must hold t message registers and q purifying qubits");
  }
  MomentTerms terms;
  terms.t = t;
  terms.d = std::uint64_t{1} << partition.z();
  terms.q = q;
  terms.perms = Permutation::all(t);
  const auto& wg = weingarten_table(t, terms.d);
  const double db = std::ldexp(1.0, static_cast<int>(partition.m()));
  const CMatrix& g = rho_g.matrix();

  // Y_pi[p, p'] = sum_x rho_g[(f_pi(x), p), (x, p')].
  std::vector<CMatrix> y;
  for (const auto& pi : terms.perms) {
    const auto f = permutation_index_map(pi, dm);
    CMatrix yp = CMatrix::Zero(dq, dq);
    for (std::uint64_t x = 0; x < dx; ++x) {
      const auto row = static_cast<Eigen::Index>(f[x]) * dq;
      const auto col = static_cast<Eigen::Index>(x) * dq;
      yp += g.block(row, col, dq, dq);
    }
    y.push_back(std::move(yp));
  }
  terms.reference = y[0];

  std::vector<double> mixed_weight;
  for (const auto& pi : terms.perms) {
    mixed_weight.push_back(std::pow(db, static_cast<double>(cycles(pi)) - static_cast<double>(t)));
  }
  for (const auto& eta : terms.perms) {
    const Permutation eta_inv = eta.inverse();
    CMatrix c = CMatrix::Zero(dq, dq);
    for (std::size_t pi = 0; pi < terms.perms.size(); ++pi) {
      c += wg[permutation_rank(eta_inv.compose(terms.perms[pi]))] * mixed_weight[pi] * y[pi];
    }
    terms.coeff.push_back(std::move(c));
  }
  return terms;
}

CMatrix dense_moment(const MomentTerms& terms) {
  const std::uint64_t total = ipow(terms.d, terms.t);
  const auto dq = Eigen::Index{1} << terms.q;
  if (total * static_cast<std::uint64_t>(dq) > kMaxMomentDim) throw SizeLimitError("moment operator larger than 4096");
  const auto n = static_cast<Eigen::Index>(total) * dq;
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t eta = 0; eta < terms.perms.size(); ++eta) {
    const auto f = permutation_index_map(terms.perms[eta], terms.d);
    for (std::uint64_t j = 0; j < total; ++j) {
      out.block(static_cast<Eigen::Index>(f[j]) * dq, static_cast<Eigen::Index>(j) * dq, dq, dq) += terms.coeff[eta];
    }
  }
  return out;
}

CMatrix encrypted_moment_exact(const QubitPartition& partition, const DensityMatrix& rho, std::size_t t) {
  if (rho.num_qubits() != partition.n()) throw DimensionError("message state does not match partition");
  check_copies(t);
  std::vector<DensityMatrix> copies(t, rho);
  return dense_moment(encrypted_moment_terms(partition, qcore::tensor(copies), t, 0));
}

double TwoCopyDeviation::trace_norm() const {
  return trace_p_plus * qcore::trace_norm(herm(z_plus)) + trace_p_minus * qcore::trace_norm(herm(z_minus));
}

CMatrix TwoCopyDeviation::positive_plus() const { return positive_projector(z_plus); }
CMatrix TwoCopyDeviation::positive_minus() const { return positive_projector(z_minus); }

TwoCopyDeviation two_copy_deviation(const MomentTerms& terms) {
  if (terms.t != 2) throw ValidationError("t", "two-copy deviation needs t = 2");
  const double d = static_cast<double>(terms.d);
  // perms = {e, swap}; I = P+ + P-, S = P+ - P-.
  const CMatrix shifted = terms.coeff[0] - terms.reference / (d * d);
  TwoCopyDeviation dev;
  dev.trace_p_plus = d * (d + 1.0) / 2.0;
  dev.trace_p_minus = d * (d - 1.0) / 2.0;
  dev.z_plus = shifted + terms.coeff[1];
  dev.z_minus = shifted - terms.coeff[1];
  dev.reference = terms.reference;
  return dev;
}

double closeness_from_terms(const MomentTerms& terms) {
  const double d = static_cast<double>(terms.d);
  if (terms.t == 1) return d * qcore::trace_norm(herm(terms.coeff[0] - terms.reference / d));
  if (terms.t == 2) return two_copy_deviation(terms).trace_norm();
  CMatrix delta = dense_moment(terms);
  const auto dq = Eigen::Index{1} << terms.q;
  const double scale = std::pow(d, -static_cast<double>(terms.t));
  for (Eigen::Index b = 0; b < delta.rows(); b += dq) delta.block(b, b, dq, dq) -= scale * terms.reference;
  return qcore::trace_norm(herm(delta));
}

double closeness_exact(const QubitPartition& partition, const DensityMatrix& rho, std::size_t t) {
  if (rho.num_qubits() != partition.n()) throw DimensionError("message state does not match partition");
  check_copies(t);
  std::vector<DensityMatrix> copies(t, rho);
  return closeness_from_terms(encrypted_moment_terms(partition, qcore::tensor(copies), t, 0));
}

double closeness_exact_joint(
    const QubitPartition& partition, const DensityMatrix& rho_g, std::size_t t, std::size_t q) {
  return closeness_from_terms(encrypted_moment_terms(partition, rho_g, t, q));
}

}  // namespace pqas::moments
