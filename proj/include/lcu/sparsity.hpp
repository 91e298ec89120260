#pragma once

#include <array>
#include <tuple>

#include "lcu/integrals.hpp"

namespace lcu {

/// Two-body entry surviving threshold truncation, stored once per orbit of
/// the 8-fold symmetry group with p<=q, r<=s, (p,q)<=(r,s).
struct SparseEntry {
  int p, q, r, s;
  double value;
};

struct SparseCoulomb {
  double threshold = 0.0;
  std::vector<SparseEntry> entries;  // lexicographically sorted representatives
  long long nonzero_full = 0;        // nonzero surviving slots in the full tensor
  long long unique_count = 0;        // entries.size()
};

/// zeta weight: sqrt(2) below the diagonal ordering, 1 on it, 0 above.
double zeta(int p, int q);
/// Composite-index variant comparing (p,q) with (r,s) lexicographically.
double zeta4(int p, int q, int r, int s);

/// kappa label for the symmetry register: 0 for p<q, 1 for p>q, '+' for p=q.
char kappa(int p, int q);
char kappa4(int p, int q, int r, int s);

/// Canonical orbit representative (p<=q, r<=s, (p,q)<=(r,s)).
std::array<int, 4> canonical_rep(int p, int q, int r, int s);

/// Orbit size of an index tuple under the 8-fold group (1, 2, 4, or 8).
int orbit_size(int p, int q, int r, int s);

/// Keeps entries with |V_pqrs| >= c (ties kept), dropping exact zeros.
SparseCoulomb truncate_tensor(const IntegralSet& iset, double c);

/// unique_count plus the N^2/8 + N/4 one-body terms; the QROAM dimension d.
long long sparse_prepare_dimension(const SparseCoulomb& sc, const IntegralSet& iset);

struct TargetAmplitude {
  bool two_body;
  int p, q, r, s;  // r = s = 0 for one-body entries
  double amplitude;
  int theta;  // sign bit of the coefficient
};

/// Alias-sampling targets: zeta_pq sqrt(|T_pq|/lambda) over one-body
/// representatives and zeta_pq zeta_rs zeta_pqrs sqrt(|V|/lambda) over
/// two-body representatives. lambda must be the truncated-operator
/// lambda_T + lambda_V so the expanded squared weights sum to one.
std::vector<TargetAmplitude> target_amplitudes(const SparseCoulomb& sc, const IntegralSet& iset,
                                               double lambda);

/// CSV export of the representative list: header then p,q,r,s,value rows.
std::string sparse_entries_csv(const SparseCoulomb& sc);

struct ThresholdScanRow {
  double c;
  long long nonzero_full;
  long long unique_count;
  double lambda_v;  // 4 sum |V| over survivors
};

/// Sweep of truncation thresholds for count-vs-c reporting.
std::vector<ThresholdScanRow> threshold_scan(const IntegralSet& iset,
                                             const std::vector<double>& thresholds);
std::string threshold_scan_csv(const std::vector<ThresholdScanRow>& rows);

}  // namespace lcu
