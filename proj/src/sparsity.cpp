#include "lcu/sparsity.hpp"

#include "lcu/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace lcu {

double zeta(int p, int q) {
  if (p < q) return std::sqrt(2.0);
  if (p == q) return 1.0;
  return 0.0;
}

double zeta4(int p, int q, int r, int s) {
  if (std::pair{p, q} < std::pair{r, s}) return std::sqrt(2.0);
  if (std::pair{p, q} == std::pair{r, s}) return 1.0;
  return 0.0;
}

char kappa(int p, int q) {
  if (p < q) return '0';
  if (p > q) return '1';
  return '+';
}

char kappa4(int p, int q, int r, int s) {
  if (std::pair{p, q} < std::pair{r, s}) return '0';
  if (std::pair{p, q} > std::pair{r, s}) return '1';
  return '+';
}

std::array<int, 4> canonical_rep(int p, int q, int r, int s) {
  if (p > q) std::swap(p, q);
  if (r > s) std::swap(r, s);
  if (std::pair{p, q} > std::pair{r, s}) {
    std::swap(p, r);
    std::swap(q, s);
  }
  return {p, q, r, s};
}

int orbit_size(int p, int q, int r, int s) {
  std::set<std::array<int, 4>> images;
  const std::array<std::array<int, 4>, 8> perms = {{{p, q, r, s},
                                                    {q, p, r, s},
                                                    {p, q, s, r},
                                                    {q, p, s, r},
                                                    {r, s, p, q},
                                                    {s, r, p, q},
                                                    {r, s, q, p},
                                                    {s, r, q, p}}};
  for (const auto& im : perms) images.insert(im);
  return static_cast<int>(images.size());
}

SparseCoulomb truncate_tensor(const IntegralSet& iset, double c) {
  if (c < 0.0) throw std::invalid_argument("truncate_tensor: threshold must be nonnegative");
  validate(iset);
  const int n = iset.n_spatial;
  SparseCoulomb sc;
  sc.threshold = c;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = r; s < n; ++s) {
          if (std::pair{p, q} > std::pair{r, s}) continue;
          double v = iset.V.at(p, q, r, s);
          if (v == 0.0 || std::fabs(v) < c) continue;
          sc.entries.push_back({p, q, r, s, v});
          sc.nonzero_full += orbit_size(p, q, r, s);
        }
  // loop order already emits lexicographic (p,q,r,s)
  sc.unique_count = static_cast<long long>(sc.entries.size());
  return sc;
}

long long sparse_prepare_dimension(const SparseCoulomb& sc, const IntegralSet& iset) {
  long long n_one_body = unique_coefficient_count(1, iset.n_spin_orbitals, false);
  return sc.unique_count + n_one_body;
}

std::vector<TargetAmplitude> target_amplitudes(const SparseCoulomb& sc, const IntegralSet& iset,
                                               double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("target_amplitudes: lambda must be positive");
  std::vector<TargetAmplitude> out;
  const int n = iset.n_spatial;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      double t = iset.T(p, q);
      if (t == 0.0) continue;
      out.push_back({false, p, q, 0, 0, zeta(p, q) * std::sqrt(std::fabs(t) / lambda),
                     t < 0.0 ? 1 : 0});
    }
  for (const SparseEntry& e : sc.entries) {
    double w = zeta(e.p, e.q) * zeta(e.r, e.s) * zeta4(e.p, e.q, e.r, e.s);
    out.push_back({true, e.p, e.q, e.r, e.s, w * std::sqrt(std::fabs(e.value) / lambda),
                   e.value < 0.0 ? 1 : 0});
  }
  return out;
}

std::string sparse_entries_csv(const SparseCoulomb& sc) {
  std::ostringstream os;
  os << "p,q,r,s,value\n";
  char buf[64];
  for (const SparseEntry& e : sc.entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.value);
    os << e.p << "," << e.q << "," << e.r << "," << e.s << "," << buf << "\n";
  }
  return os.str();
}

std::vector<ThresholdScanRow> threshold_scan(const IntegralSet& iset,
                                             const std::vector<double>& thresholds) {
  std::vector<ThresholdScanRow> rows;
  for (double c : thresholds) {
    SparseCoulomb sc = truncate_tensor(iset, c);
    double lv = 0.0;
    for (const SparseEntry& e : sc.entries) lv += orbit_size(e.p, e.q, e.r, e.s) * std::fabs(e.value);
    rows.push_back({c, sc.nonzero_full, sc.unique_count, 4.0 * lv});
  }
  return rows;
}

std::string threshold_scan_csv(const std::vector<ThresholdScanRow>& rows) {
  std::ostringstream os;
  os << "threshold,nonzero_full,unique_count,lambda_v\n";
  char b1[64], b2[64];
  for (const auto& r : rows) {
    std::snprintf(b1, sizeof b1, "%.17g", r.c);
    std::snprintf(b2, sizeof b2, "%.17g", r.lambda_v);
    os << b1 << "," << r.nonzero_full << "," << r.unique_count << "," << b2 << "\n";
  }
  return os.str();
}

}  // namespace lcu
