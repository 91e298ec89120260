#include "lcu/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace lcu {

namespace {

// Round-at-1e-10 lexicographic comparison used to order degenerate pairs.
int compare_rounded(const std::vector<double>& a, const std::vector<double>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    double x = std::round(a[i] * 1e10);
    double y = std::round(b[i] * 1e10);
    if (x < y) return -1;
    if (x > y) return 1;
  }
  return 0;
}

}  // namespace

FactorizedCoulomb factorize(const IntegralSet& iset) {
  const int n = iset.n_spatial;
  Matrix w = matricize(iset);
  SymmetricEigen eig = jacobi_eigensolve(w, 1e-12);

  const int dim = n * n;
  double max_eig = 0.0;
  for (double v : eig.values) max_eig = std::max(max_eig, v);
  const double psd_tol = 1e-8 * (max_eig > 0.0 ? max_eig : 1.0);
  const double zero_cut = 1e-10 * (max_eig > 0.0 ? max_eig : 1.0);

  struct Pair {
    double value;
    std::vector<double> vec;
  };
  std::vector<Pair> kept;
  for (int j = 0; j < dim; ++j) {
    double val = eig.values[j];
    if (val < -psd_tol)
      throw ValidationError("factorize: negative eigenvalue beyond PSD tolerance");
    if (val < 0.0) val = 0.0;
    if (val <= zero_cut) continue;
    std::vector<double> vec(dim);
    for (int i = 0; i < dim; ++i) vec[i] = eig.vectors(i, j);
    kept.push_back({val, std::move(vec)});
  }

  std::stable_sort(kept.begin(), kept.end(), [](const Pair& a, const Pair& b) {
    if (a.value != b.value) return a.value > b.value;
    return compare_rounded(a.vec, b.vec) < 0;
  });

  FactorizedCoulomb fac;
  fac.n_spatial = n;
  fac.rank = static_cast<int>(kept.size());
  fac.full_rank = fac.rank;
  for (auto& kp : kept) {
    Matrix g(n, n);
    double asym = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        double gpq = kp.vec[p * n + q];
        double gqp = kp.vec[q * n + p];
        asym = std::max(asym, std::fabs(gpq - gqp));
        g(p, q) = 0.5 * (gpq + gqp);
      }
    if (asym > 1e-6)
      throw ValidationError("factorize: eigenvector asymmetry beyond 1e-6 (corrupted V symmetry)");
    // unit 2-norm and a positive leading entry for reproducible output
    double norm = 0.0;
    for (double x : g.a) norm += x * x;
    norm = std::sqrt(norm);
    double sign = 1.0;
    for (double x : g.a) {
      if (std::fabs(x) > 1e-12 * norm) {
        sign = x > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (double& x : g.a) x *= sign / norm;
    fac.eigenvalues.push_back(kp.value * norm * norm);
    fac.eigenvectors.push_back(std::move(g));
  }
  return fac;
}

FactorizedCoulomb truncate(const FactorizedCoulomb& fac, int L) {
  if (L < 0 || L > fac.rank) throw std::invalid_argument("truncate: L out of range [0, rank]");
  FactorizedCoulomb out;
  out.n_spatial = fac.n_spatial;
  out.rank = L;
  out.full_rank = fac.full_rank;
  out.eigenvalues.assign(fac.eigenvalues.begin(), fac.eigenvalues.begin() + L);
  out.eigenvectors.assign(fac.eigenvectors.begin(), fac.eigenvectors.begin() + L);
  return out;
}

FactorizedCoulomb truncate_by_threshold(const FactorizedCoulomb& fac, double threshold) {
  int L = 0;
  while (L < fac.rank && fac.eigenvalues[L] >= threshold) ++L;
  return truncate(fac, L);
}

Tensor4 reconstruct_tensor(const FactorizedCoulomb& fac) {
  const int n = fac.n_spatial;
  Tensor4 v(n);
  for (int l = 0; l < fac.rank; ++l) {
    const Matrix& g = fac.eigenvectors[l];
    double w = fac.eigenvalues[l];
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) v.at(p, q, r, s) += w * g(p, q) * g(r, s);
  }
  return v;
}

Matrix reconstruct_w(const FactorizedCoulomb& fac) {
  const int n = fac.n_spatial;
  Matrix w(n * n, n * n);
  for (int l = 0; l < fac.rank; ++l) {
    const Matrix& g = fac.eigenvectors[l];
    double wl = fac.eigenvalues[l];
    for (int i = 0; i < n * n; ++i)
      for (int j = 0; j < n * n; ++j)
        w(i, j) += wl * g(i / n, i % n) * g(j / n, j % n);
  }
  return w;
}

LambdaReport lambdas(const IntegralSet& iset, const FactorizedCoulomb& fac) {
  LambdaReport rep;
  for (double t : iset.T.a) rep.lambda_T += std::fabs(t);
  rep.lambda_T *= 2.0;

  for (int l = 0; l < fac.rank; ++l) {
    double s = 0.0;
    for (double g : fac.eigenvectors[l].a) s += std::fabs(g);
    rep.lambda_W += fac.eigenvalues[l] * s * s;
  }
  rep.lambda_W *= 4.0;

  double sv = 0.0;
  if (fac.rank == fac.full_rank) {
    for (double v : iset.V.v) sv += std::fabs(v);
  } else {
    Tensor4 vt = reconstruct_tensor(fac);
    for (double v : vt.v) sv += std::fabs(v);
  }
  rep.lambda_V = 4.0 * sv;
  rep.lambda_total = rep.lambda_T + rep.lambda_W;
  return rep;
}

long long unique_coefficient_count(long long L, long long N, bool include_zero_block) {
  if (N <= 0 || N % 2 != 0) throw std::invalid_argument("unique_coefficient_count: N must be even positive");
  long long per_l = N * (N + 2) / 8;  // N^2/8 + N/4, exact for even N
  return (include_zero_block ? L + 1 : L) * per_l;
}

std::string factorization_to_json(const FactorizedCoulomb& fac) {
  nlohmann::ordered_json j;
  j["format"] = "lcu-factorization";
  j["version"] = 1;
  j["n_spatial"] = fac.n_spatial;
  j["rank"] = fac.rank;
  j["full_rank"] = fac.full_rank;
  j["eigenvalues"] = fac.eigenvalues;
  auto vecs = nlohmann::ordered_json::array();
  for (const Matrix& g : fac.eigenvectors) vecs.push_back(g.a);
  j["eigenvectors"] = std::move(vecs);
  return j.dump(2) + "\n";
}

FactorizedCoulomb factorization_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "lcu-factorization" || j.value("version", 0) != 1)
    throw ValidationError("factorization file: unknown format/version");
  FactorizedCoulomb fac;
  fac.n_spatial = j.at("n_spatial").get<int>();
  fac.rank = j.at("rank").get<int>();
  fac.full_rank = j.at("full_rank").get<int>();
  fac.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  for (const auto& va : j.at("eigenvectors")) {
    Matrix g(fac.n_spatial, fac.n_spatial);
    g.a = va.get<std::vector<double>>();
    if (g.a.size() != static_cast<size_t>(fac.n_spatial) * fac.n_spatial)
      throw ValidationError("factorization file: eigenvector size mismatch");
    fac.eigenvectors.push_back(std::move(g));
  }
  if (fac.eigenvectors.size() != fac.eigenvalues.size() ||
      fac.rank != static_cast<int>(fac.eigenvalues.size()))
    throw ValidationError("factorization file: rank mismatch");
  return fac;
}

}  // namespace lcu
