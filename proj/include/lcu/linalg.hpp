#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lcu {

/// Dense row-major matrix of doubles. Small sizes only; the eigensolver
/// below is the whole reason this exists.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  bool operator==(const Matrix&) const = default;
};

Matrix matmul(const Matrix& x, const Matrix& y);
Matrix transpose(const Matrix& x);
double max_abs(const Matrix& x);
double frobenius_norm(const Matrix& x);

struct SymmetricEigen {
  std::vector<double> values;  // unsorted, as produced by the sweep
  Matrix vectors;              // column j is the eigenvector for values[j]
};

/// Cyclic Jacobi eigensolve of a symmetric matrix. Sweeps run until the
/// off-diagonal Frobenius norm drops below rel_tol times the input norm.
SymmetricEigen jacobi_eigensolve(Matrix w, double rel_tol = 1e-12);

/// Smallest m >= 0 with 2^m >= x. Exact power comparisons, no log rounding.
int ceil_log2(double x);

/// Number of bits needed to represent v (bit_width); 0 for v == 0.
int bit_width_u64(uint64_t v);

/// Deterministic RNG: fixed xoshiro-free mt19937_64 stream with a manual
/// uniform so output does not depend on the standard library's
/// distribution implementation.
struct DetRng {
  explicit DetRng(uint64_t seed);
  uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)

 private:
  uint64_t s_[4];
};

}  // namespace lcu
