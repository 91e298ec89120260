#pragma once

#include <string>

#include "lcu/integrals.hpp"

namespace lcu {

/// Eigendecomposition of the matricized Coulomb operator, truncated to the
/// kept rank. Eigenvalues sorted descending; each g_l is the n x n symmetric
/// reshape of a unit-norm eigenvector; sign fixed so the first nonzero entry
/// of the flattened vector is positive.
struct FactorizedCoulomb {
  int n_spatial = 0;
  int rank = 0;       // kept eigenpairs
  int full_rank = 0;  // eigenpairs above the zero cutoff at factorize time
  std::vector<double> eigenvalues;
  std::vector<Matrix> eigenvectors;
};

struct LambdaReport {
  double lambda_T = 0.0;
  double lambda_V = 0.0;
  double lambda_W = 0.0;
  double lambda_total = 0.0;  // lambda_T + lambda_W
};

/// Diagonalizes W = matricize(iset) with cyclic Jacobi; keeps eigenpairs
/// above 1e-10 * max eigenvalue, clamping small negatives to zero. Throws
/// ValidationError if eigenvalues are negative beyond tolerance or an
/// eigenvector is asymmetric beyond 1e-6 after symmetrization.
FactorizedCoulomb factorize(const IntegralSet& iset);

/// Keeps the L largest eigenpairs. Errors if L exceeds the current rank.
FactorizedCoulomb truncate(const FactorizedCoulomb& fac, int L);

/// Keeps eigenpairs with eigenvalue >= threshold.
FactorizedCoulomb truncate_by_threshold(const FactorizedCoulomb& fac, double threshold);

/// Rebuilds the two-body tensor sum_l w_l g_l (x) g_l from the kept rank.
Tensor4 reconstruct_tensor(const FactorizedCoulomb& fac);
Matrix reconstruct_w(const FactorizedCoulomb& fac);

/// lambda_T = 2 sum |T|; lambda_W = 4 sum_l w_l (sum |g_l|)^2;
/// lambda_V = 4 sum |V| with V taken from the original tensor at full rank
/// and rebuilt from the factorization when truncated.
LambdaReport lambdas(const IntegralSet& iset, const FactorizedCoulomb& fac);

/// L*(N^2/8 + N/4) unique coefficients, or (L+1)*(...) counting the one-body
/// block. N is the spin-orbital count and must be even.
long long unique_coefficient_count(long long L, long long N, bool include_zero_block);

/// Versioned JSON serialization of a factorization.
std::string factorization_to_json(const FactorizedCoulomb& fac);
FactorizedCoulomb factorization_from_json(const std::string& text);

}  // namespace lcu
