#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "lcu/linalg.hpp"

namespace lcu {

/// Rank-4 tensor over spatial orbital indices, dense storage.
struct Tensor4 {
  int n = 0;
  std::vector<double> v;

  Tensor4() = default;
  explicit Tensor4(int n_) : n(n_), v(static_cast<size_t>(n_) * n_ * n_ * n_, 0.0) {}

  double& at(int p, int q, int r, int s) {
    return v[((static_cast<size_t>(p) * n + q) * n + r) * n + s];
  }
  double at(int p, int q, int r, int s) const {
    return v[((static_cast<size_t>(p) * n + q) * n + r) * n + s];
  }

  bool operator==(const Tensor4&) const = default;
};

/// One- and two-electron integrals exactly as read from disk: h1 symmetric,
/// h2 in chemist (ij|kl) convention with the 8-fold index symmetry.
struct RawIntegrals {
  int n_spatial = 0;
  Matrix h1;
  Tensor4 h2;
  double core_energy = 0.0;
};

/// Hamiltonian coefficients in the a†a a†a arrangement: T symmetric one-body
/// matrix, V the two-body tensor with full 8-fold symmetry. Everything in
/// Hartree. Immutable after construction by convention.
struct IntegralSet {
  int n_spin_orbitals = 0;  // N
  int n_spatial = 0;        // N/2
  Matrix T;
  Tensor4 V;
  double core_energy = 0.0;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks T symmetry, the 8-fold V symmetry, and finiteness. Throws
/// ValidationError describing the first violation.
void validate(const IntegralSet& iset, double tol = 1e-10);
void validate(const RawIntegrals& raw, double tol = 1e-10);

/// Parses an FCIDUMP document. Each stored representative is expanded to all
/// 8 symmetry images; unspecified entries are zero. Duplicate entries are
/// accepted when they agree to 1e-12 (last writer wins) and rejected with the
/// line number otherwise.
RawIntegrals load_fcidump(std::istream& in);
RawIntegrals load_fcidump_file(const std::string& path);

/// Emits canonical representatives (p>=q, r>=s, pq>=rs, one per line,
/// %.16e values) preceded by a minimal header.
void write_fcidump(std::ostream& out, const RawIntegrals& raw);
std::string fcidump_to_string(const RawIntegrals& raw);

/// Normal-orders the two-body operator: V = h2/2 and
/// T_pq = h1_pq - (1/2) sum_r h2_prrq. The resulting operator
/// sum T a†a + sum V a†a a†a equals the input form exactly.
IntegralSet to_chemist_form(const RawIntegrals& raw);

/// Reshape of V into the (n^2 x n^2) matrix W over composite indices
/// pq = p*n + q (rows) and rs (columns).
Matrix matricize(const IntegralSet& iset);

/// Test fixture generator: V = sum_l c_l g_l (x) g_l with c_l > 0 and g_l
/// random symmetric, so W is PSD with rank at most `rank`; T random
/// symmetric. Deterministic in seed.
IntegralSet random_integrals(uint64_t seed, int n_spatial, int rank);

}  // namespace lcu
