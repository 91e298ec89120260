#include "lcu/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace lcu {

Matrix matmul(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matmul: shape mismatch");
  Matrix out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      double xv = x(i, k);
      if (xv == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) out(i, j) += xv * y(k, j);
    }
  return out;
}

Matrix transpose(const Matrix& x) {
  Matrix out(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) out(j, i) = x(i, j);
  return out;
}

double max_abs(const Matrix& x) {
  double m = 0.0;
  for (double v : x.a) m = std::max(m, std::fabs(v));
  return m;
}

double frobenius_norm(const Matrix& x) {
  double s = 0.0;
  for (double v : x.a) s += v * v;
  return std::sqrt(s);
}

static double off_diagonal_norm(const Matrix& w) {
  double s = 0.0;
  for (int i = 0; i < w.rows; ++i)
    for (int j = 0; j < w.cols; ++j)
      if (i != j) s += w(i, j) * w(i, j);
  return std::sqrt(s);
}

SymmetricEigen jacobi_eigensolve(Matrix w, double rel_tol) {
  if (w.rows != w.cols) throw std::invalid_argument("jacobi: matrix not square");
  const int n = w.rows;
  Matrix v(n, n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  const double norm = frobenius_norm(w);
  const double tol = rel_tol * (norm > 0.0 ? norm : 1.0);
  const int max_sweeps = 100;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(w) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = w(p, q);
        if (std::fabs(apq) == 0.0) continue;
        double app = w(p, p), aqq = w(q, q);
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double wkp = w(k, p), wkq = w(k, q);
          w(k, p) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        for (int k = 0; k < n; ++k) {
          double wpk = w(p, k), wqk = w(q, k);
          w(p, k) = c * wpk - s * wqk;
          w(q, k) = s * wpk + c * wqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = w(i, i);
  out.vectors = std::move(v);
  return out;
}

int ceil_log2(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("ceil_log2: nonpositive input");
  int m = 0;
  while (std::ldexp(1.0, m) < x) ++m;
  return m;
}

int bit_width_u64(uint64_t v) {
  int b = 0;
  while (v != 0) {
    v >>= 1;
    ++b;
  }
  return b;
}

DetRng::DetRng(uint64_t seed) {
  // splitmix64 expansion of the seed into xoshiro256** state
  uint64_t z = seed;
  for (int i = 0; i < 4; ++i) {
    z += 0x9e3779b97f4a7c15ULL;
    uint64_t t = z;
    t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ULL;
    t = (t ^ (t >> 27)) * 0x94d049bb133111ebULL;
    s_[i] = t ^ (t >> 31);
  }
}

static inline uint64_t rotl64(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

uint64_t DetRng::next_u64() {
  uint64_t result = rotl64(s_[1] * 5, 7) * 9;
  uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl64(s_[3], 45);
  return result;
}

double DetRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double DetRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

}  // namespace lcu
