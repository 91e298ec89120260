// Independent reference constructions used only by tests: dense Fock-space
// operators through the Jordan-Wigner mapping, built without touching the
// code paths they check.
#pragma once

#include <complex>
#include <vector>

#include "lcu/integrals.hpp"

namespace oracles {

using CMat = std::vector<std::vector<std::complex<double>>>;

inline CMat cidentity(int dim) {
  CMat m(dim, std::vector<std::complex<double>>(dim, 0.0));
  for (int i = 0; i < dim; ++i) m[i][i] = 1.0;
  return m;
}

inline CMat matmul(const CMat& a, const CMat& b) {
  int n = static_cast<int>(a.size());
  CMat out(n, std::vector<std::complex<double>>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      auto v = a[i][k];
      if (v == std::complex<double>{}) continue;
      for (int j = 0; j < n; ++j) out[i][j] += v * b[k][j];
    }
  return out;
}

inline CMat add(const CMat& a, const CMat& b, std::complex<double> sb = 1.0) {
  CMat out = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) out[i][j] += sb * b[i][j];
  return out;
}

inline CMat scale(const CMat& a, std::complex<double> s) {
  CMat out = a;
  for (auto& row : out)
    for (auto& v : row) v *= s;
  return out;
}

// Single-qubit Pauli embedded at position `pos` of an n-qubit space,
// little-endian (qubit 0 is the least significant index bit).
inline CMat pauli_at(int n, int pos, char which) {
  int dim = 1 << n;
  CMat m(dim, std::vector<std::complex<double>>(dim, 0.0));
  const std::complex<double> I{0.0, 1.0};
  for (int col = 0; col < dim; ++col) {
    int bit = (col >> pos) & 1;
    switch (which) {
      case 'X': m[col ^ (1 << pos)][col] = 1.0; break;
      case 'Y': m[col ^ (1 << pos)][col] = bit ? -I : I; break;
      case 'Z': m[col][col] = bit ? -1.0 : 1.0; break;
      default: throw std::logic_error("pauli_at");
    }
  }
  return m;
}

// Q_{pq sigma}: X Z..Z X for p < q, Y Z..Z Y for p > q, (1 - Z)/2 for p = q,
// with spin-orbital ordering sigma * n_spatial + p.
inline CMat q_operator(int n_spatial, int p, int q, int sigma) {
  int n = 2 * n_spatial;
  int jp = sigma * n_spatial + p;
  int jq = sigma * n_spatial + q;
  if (p == q) {
    CMat m = cidentity(1 << n);
    CMat z = pauli_at(n, jp, 'Z');
    return scale(add(m, z, -1.0), 0.5);
  }
  char kind = p < q ? 'X' : 'Y';
  CMat m = pauli_at(n, jp, kind);
  m = matmul(m, pauli_at(n, jq, kind));
  for (int j = std::min(jp, jq) + 1; j < std::max(jp, jq); ++j)
    m = matmul(m, pauli_at(n, j, 'Z'));
  return m;
}

// Qubit Hamiltonian sum_sigma T Q + sum_ab V Q Q over 2 * n_spatial qubits.
inline CMat hamiltonian_matrix(const lcu::IntegralSet& iset) {
  int n = iset.n_spatial;
  CMat h = scale(cidentity(1 << (2 * n)), 0.0);
  for (int sigma = 0; sigma < 2; ++sigma)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        h = add(h, q_operator(n, p, q, sigma), iset.T(p, q));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s)
              h = add(h, matmul(q_operator(n, p, q, a), q_operator(n, r, s, b)),
                      iset.V.at(p, q, r, s));
  return h;
}

// Fermionic ladder operators through Jordan-Wigner, for the Fock-space
// equality oracle: a_j = (prod_{i<j} Z_i) sigma^-_j.
inline CMat annihilation(int n_modes, int j) {
  int dim = 1 << n_modes;
  CMat m(dim, std::vector<std::complex<double>>(dim, 0.0));
  for (int col = 0; col < dim; ++col) {
    if (((col >> j) & 1) == 0) continue;
    int sign = 1;
    for (int i = 0; i < j; ++i)
      if ((col >> i) & 1) sign = -sign;
    m[col ^ (1 << j)][col] = sign;
  }
  return m;
}

inline CMat dagger(const CMat& a) {
  int n = static_cast<int>(a.size());
  CMat out(n, std::vector<std::complex<double>>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = std::conj(a[j][i]);
  return out;
}

// Physics-form Hamiltonian from raw integrals:
//   sum_sigma h1 a+ a + 1/2 sum (pq|rs) a+_{p a} a+_{r b} a_{s b} a_{q a}.
inline CMat physics_hamiltonian(const lcu::RawIntegrals& raw) {
  int n = raw.n_spatial;
  int modes = 2 * n;
  int dim = 1 << modes;
  std::vector<CMat> ann, cre;
  for (int j = 0; j < modes; ++j) {
    ann.push_back(annihilation(modes, j));
    cre.push_back(dagger(ann.back()));
  }
  auto idx = [&](int p, int sigma) { return sigma * n + p; };
  CMat h = scale(cidentity(dim), 0.0);
  for (int sigma = 0; sigma < 2; ++sigma)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        h = add(h, matmul(cre[idx(p, sigma)], ann[idx(q, sigma)]), raw.h1(p, q));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s) {
              CMat term = matmul(matmul(cre[idx(p, a)], cre[idx(r, b)]),
                                 matmul(ann[idx(s, b)], ann[idx(q, a)]));
              h = add(h, term, 0.5 * raw.h2.at(p, q, r, s));
            }
  return h;
}

// Chemist-form Hamiltonian sum T a+ a + sum V a+ a a+ a for the same oracle.
inline CMat chemist_hamiltonian(const lcu::IntegralSet& iset) {
  int n = iset.n_spatial;
  int modes = 2 * n;
  int dim = 1 << modes;
  std::vector<CMat> ann, cre;
  for (int j = 0; j < modes; ++j) {
    ann.push_back(annihilation(modes, j));
    cre.push_back(dagger(ann.back()));
  }
  auto idx = [&](int p, int sigma) { return sigma * n + p; };
  CMat h = scale(cidentity(dim), 0.0);
  for (int sigma = 0; sigma < 2; ++sigma)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        h = add(h, matmul(cre[idx(p, sigma)], ann[idx(q, sigma)]), iset.T(p, q));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s) {
              CMat term = matmul(matmul(cre[idx(p, a)], ann[idx(q, a)]),
                                 matmul(cre[idx(r, b)], ann[idx(s, b)]));
              h = add(h, term, iset.V.at(p, q, r, s));
            }
  return h;
}

inline double max_abs_diff(const CMat& a, const CMat& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

}  // namespace oracles
