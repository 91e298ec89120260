#include <cmath>

#include "doctest.h"
#include "lcu/factorization.hpp"

using namespace lcu;

TEST_CASE("eigendecomposition of the matricized operator") {
  SUBCASE("zero tensor factorizes to rank zero") {
    IntegralSet iset = random_integrals(1, 3, 0);
    FactorizedCoulomb fac = factorize(iset);
    CHECK(fac.rank == 0);
    CHECK(fac.eigenvalues.empty());
  }
  SUBCASE("constructed rank bound is tight") {
    IntegralSet iset = random_integrals(17, 4, 3);
    FactorizedCoulomb fac = factorize(iset);
    CHECK(fac.rank == 3);
    int above = 0;
    for (double w : fac.eigenvalues)
      if (w > 1e-10) ++above;
    CHECK(above == 3);
  }
  SUBCASE("reconstruction, residuals, symmetry and ordering") {
    for (int n : {2, 3, 4, 6}) {
      IntegralSet iset = random_integrals(300 + n, n, std::min(n * n, 5));
      Matrix w = matricize(iset);
      FactorizedCoulomb fac = factorize(iset);
      Matrix rebuilt = reconstruct_w(fac);
      double err = 0.0;
      for (size_t i = 0; i < w.a.size(); ++i)
        err = std::max(err, std::fabs(w.a[i] - rebuilt.a[i]));
      CHECK(err < 1e-8 * std::max(1.0, max_abs(w)));

      double fnorm = frobenius_norm(w);
      for (int l = 0; l < fac.rank; ++l) {
        const Matrix& g = fac.eigenvectors[l];
        // eigen-residual ||W g - w g|| < 1e-8 ||W||_F
        int dim = n * n;
        std::vector<double> gv(dim), wg(dim, 0.0);
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) gv[p * n + q] = g(p, q);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) wg[i] += w(i, j) * gv[j];
        double res = 0.0;
        for (int i = 0; i < dim; ++i) {
          double dv = wg[i] - fac.eigenvalues[l] * gv[i];
          res += dv * dv;
        }
        CHECK(std::sqrt(res) < 1e-8 * fnorm);
        // symmetry and sign convention
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) CHECK(g(p, q) == g(q, p));
        double lead = 0.0;
        for (double x : g.a)
          if (std::fabs(x) > 1e-10) {
            lead = x;
            break;
          }
        CHECK(lead >= 0.0);
        if (l > 0) CHECK(fac.eigenvalues[l] <= fac.eigenvalues[l - 1]);
      }
      // flattened eigenvectors mutually orthonormal
      for (int a = 0; a < fac.rank; ++a)
        for (int b = 0; b <= a; ++b) {
          double dot = 0.0;
          for (size_t i = 0; i < fac.eigenvectors[a].a.size(); ++i)
            dot += fac.eigenvectors[a].a[i] * fac.eigenvectors[b].a[i];
          CHECK(std::fabs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
        }
    }
  }
}

TEST_CASE("rank truncation") {
  IntegralSet iset = random_integrals(23, 4, 6);
  FactorizedCoulomb fac = factorize(iset);
  SUBCASE("full-rank truncation is the identity") {
    FactorizedCoulomb t = truncate(fac, fac.rank);
    CHECK(t.eigenvalues == fac.eigenvalues);
  }
  SUBCASE("rank zero is the zero operator") {
    FactorizedCoulomb t = truncate(fac, 0);
    CHECK(t.rank == 0);
    Tensor4 v = reconstruct_tensor(t);
    for (double x : v.v) CHECK(x == 0.0);
  }
  SUBCASE("beyond the rank is an error") { CHECK_THROWS(truncate(fac, fac.rank + 1)); }
  SUBCASE("reconstruction error is monotone nonincreasing in L") {
    Matrix w = matricize(iset);
    double prev = 1e300;
    for (int L = 0; L <= fac.rank; ++L) {
      Matrix rebuilt = reconstruct_w(truncate(fac, L));
      double err = 0.0;
      for (size_t i = 0; i < w.a.size(); ++i) err += (w.a[i] - rebuilt.a[i]) * (w.a[i] - rebuilt.a[i]);
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
  }
  SUBCASE("threshold helper keeps the leading block") {
    FactorizedCoulomb t = truncate_by_threshold(fac, fac.eigenvalues[2]);
    CHECK(t.rank == 3);
  }
}

TEST_CASE("lambda norms") {
  SUBCASE("identity one-body term, no Coulomb part") {
    IntegralSet iset;
    iset.n_spatial = 3;
    iset.n_spin_orbitals = 6;
    iset.T = Matrix(3, 3);
    for (int i = 0; i < 3; ++i) iset.T(i, i) = 1.0;
    iset.V = Tensor4(3);
    FactorizedCoulomb fac = factorize(iset);
    LambdaReport rep = lambdas(iset, fac);
    CHECK(rep.lambda_T == doctest::Approx(6.0));
    CHECK(rep.lambda_W == doctest::Approx(0.0));
  }
  SUBCASE("rank-one closed form") {
    // V = g (x) g with g = I/sqrt(2) on two orbitals: lambda_W = 4 (sum|g|)^2 = 8
    IntegralSet iset;
    iset.n_spatial = 2;
    iset.n_spin_orbitals = 4;
    iset.T = Matrix(2, 2);
    iset.V = Tensor4(2);
    double r = 1.0 / std::sqrt(2.0);
    Matrix g(2, 2);
    g(0, 0) = r;
    g(1, 1) = r;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        for (int s = 0; s < 2; ++s)
          for (int t = 0; t < 2; ++t) iset.V.at(p, q, s, t) = g(p, q) * g(s, t);
    FactorizedCoulomb fac = factorize(iset);
    REQUIRE(fac.rank == 1);
    LambdaReport rep = lambdas(iset, fac);
    CHECK(rep.lambda_W == doctest::Approx(8.0));
  }
  SUBCASE("lambda_V never exceeds lambda_W across 200 random instances") {
    int idx = 0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
      int n = 2 + static_cast<int>(seed % 3);
      IntegralSet iset = random_integrals(900 + seed, n, std::min(n * n, 4));
      FactorizedCoulomb fac = factorize(iset);
      for (int L : {fac.rank, std::max(0, fac.rank - 1), std::max(0, fac.rank / 2),
                    std::max(0, fac.rank - 2)}) {
        LambdaReport rep = lambdas(iset, truncate(fac, L));
        CHECK(rep.lambda_V <= rep.lambda_W * (1.0 + 1e-9));
        ++idx;
      }
    }
    CHECK(idx >= 200);
  }
  SUBCASE("full-rank lambda_V equals the raw tensor sum") {
    IntegralSet iset = random_integrals(31, 3, 5);
    FactorizedCoulomb fac = factorize(iset);
    LambdaReport rep = lambdas(iset, fac);
    double direct = 0.0;
    for (double v : iset.V.v) direct += std::fabs(v);
    CHECK(rep.lambda_V == doctest::Approx(4.0 * direct).epsilon(1e-9));
  }
  SUBCASE("lambda_W is nonincreasing as the rank shrinks") {
    IntegralSet iset = random_integrals(53, 4, 6);
    FactorizedCoulomb fac = factorize(iset);
    double prev = 1e300;
    for (int L = fac.rank; L >= 0; --L) {
      LambdaReport rep = lambdas(iset, truncate(fac, L));
      CHECK(rep.lambda_W <= prev + 1e-12);
      prev = rep.lambda_W;
    }
  }
}

TEST_CASE("factorization serialization") {
  IntegralSet iset = random_integrals(77, 3, 4);
  FactorizedCoulomb fac = factorize(iset);
  std::string text = factorization_to_json(fac);
  FactorizedCoulomb back = factorization_from_json(text);
  CHECK(back.rank == fac.rank);
  CHECK(back.eigenvalues == fac.eigenvalues);
  for (int l = 0; l < fac.rank; ++l) CHECK(back.eigenvectors[l].a == fac.eigenvectors[l].a);
  CHECK(factorization_to_json(back) == text);
  CHECK_THROWS(factorization_from_json("{\"format\":\"other\"}"));
}
