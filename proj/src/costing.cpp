#include "lcu/costing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace lcu {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kPi = 3.141592653589793;

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

int log2_exact(long long k) {
  int e = 0;
  while ((1LL << e) < k) ++e;
  if ((1LL << e) != k) throw std::invalid_argument("k must be a power of two");
  return e;
}

int trailing_zeros_ll(long long v) {
  if (v == 0) return 0;
  int t = 0;
  while ((v & 1) == 0) {
    v >>= 1;
    ++t;
  }
  return t;
}

std::string format_double(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

int repetitions(const PhaseEstimationParams& p, bool reallocate_error) {
  if (!(p.lambda > 0.0) || !(p.delta_e > 0.0))
    throw std::invalid_argument("repetitions: lambda and delta_e must be positive");
  if (reallocate_error) return ceil_log2(kPi * p.lambda / (2.0 * p.delta_e));
  return ceil_log2(kSqrt2 * kPi * p.lambda / (2.0 * p.delta_e));
}

int keep_probability_bits(const PhaseEstimationParams& p) {
  if (!(p.lambda > 0.0) || !(p.delta_e > 0.0) || p.n_prep_stages < 1)
    throw std::invalid_argument("keep_probability_bits: invalid parameters");
  return ceil_log2(2.0 * kSqrt2 * p.lambda * p.n_prep_stages / p.delta_e);
}

double step_error(const PhaseEstimationParams& p) { return kSqrt2 * p.delta_e / (4.0 * p.lambda); }

QroamCost qroam_cost(const QroamConfig& cfg) {
  if (cfg.d <= 0 || cfg.M <= 0) throw std::invalid_argument("qroam_cost: d and M must be positive");
  auto one_side = [&](long long k, bool uncompute) {
    if (k < 1) throw std::invalid_argument("qroam_cost: k must be >= 1");
    log2_exact(k);  // power-of-two check
    if (k > 1 && k >= cfg.d) throw std::invalid_argument("qroam_cost: need k < d");
    long long blocks = ceil_div(cfg.d, k);
    long long iter_workspace = (k == 1) ? ceil_log2(static_cast<double>(cfg.d))
                                        : ceil_log2(static_cast<double>(cfg.d)) - log2_exact(k);
    QroamCost side;
    if (k == 1) {
      // plain QROM, both directions
      long long c = cfg.d;
      if (!uncompute) {
        side.compute_toffoli = c;
        side.compute_clean_ancilla = iter_workspace;
      } else {
        side.uncompute_toffoli = c;
        side.uncompute_clean_ancilla = iter_workspace;
      }
      return side;
    }
    if (cfg.mode == QroamMode::Clean) {
      if (!uncompute) {
        side.compute_toffoli = blocks + static_cast<long long>(cfg.M) * (k - 1);
        side.compute_clean_ancilla = (k - 1) * cfg.M + iter_workspace;
      } else {
        side.uncompute_toffoli = blocks + k;
        side.uncompute_clean_ancilla = k + iter_workspace;
      }
    } else {
      if (!uncompute) {
        long long dirty = (k - 1) * cfg.M;
        if (cfg.dirty_budget > 0 && dirty > cfg.dirty_budget)
          throw std::invalid_argument("qroam_cost: dirty ancilla budget exceeded");
        side.compute_toffoli = 2 * blocks + 4LL * cfg.M * (k - 1);
        side.compute_dirty_ancilla = dirty;
        side.compute_clean_ancilla = iter_workspace;
      } else {
        long long dirty = k - 1;
        if (cfg.dirty_budget > 0 && dirty > cfg.dirty_budget)
          throw std::invalid_argument("qroam_cost: dirty ancilla budget exceeded");
        side.uncompute_toffoli = 2 * blocks + 4 * k;
        side.uncompute_dirty_ancilla = dirty;
        side.uncompute_clean_ancilla = iter_workspace + 1;
      }
    }
    return side;
  };
  QroamCost c = one_side(cfg.k_compute, false);
  QroamCost u = one_side(cfg.k_uncompute, true);
  c.uncompute_toffoli = u.uncompute_toffoli;
  c.uncompute_clean_ancilla = u.uncompute_clean_ancilla;
  c.uncompute_dirty_ancilla = u.uncompute_dirty_ancilla;
  return c;
}

KChoice optimal_k(long long d, int M, QroamMode mode, KObjective objective, long long budget,
                  long long max_k_compute) {
  if (d <= 0 || M <= 0) throw std::invalid_argument("optimal_k: d and M must be positive");
  // Candidate block sizes: 1 (plain lookup) and powers of two from 4 up.
  // A block size of 2 never beats the plain lookup once both directions are
  // accounted, so it is excluded from the search.
  std::vector<long long> candidates{1};
  for (long long k = 4; k < d; k *= 2) candidates.push_back(k);

  auto pick = [&](bool uncompute) {
    long long best_k = 1;
    long long best_cost = -1;
    for (long long k : candidates) {
      if (!uncompute && max_k_compute > 0 && k > max_k_compute) continue;
      long long ancilla_needed = 0;
      if (mode == QroamMode::Dirty)
        ancilla_needed = uncompute ? (k - 1) : (k - 1) * M;
      else if (objective == KObjective::Qubits)
        ancilla_needed = uncompute ? k : (k - 1) * M;
      if (k > 1 && budget > 0 && ancilla_needed > budget) continue;
      QroamConfig cfg{d, M, 1, 1, mode, 0};
      if (uncompute)
        cfg.k_uncompute = k;
      else
        cfg.k_compute = k;
      QroamCost qc = qroam_cost(cfg);
      long long cost = uncompute ? qc.uncompute_toffoli : qc.compute_toffoli;
      if (best_cost < 0 || cost < best_cost) {
        best_cost = cost;
        best_k = k;
      }
    }
    return best_k;
  };
  return KChoice{pick(false), pick(true)};
}

long long arithmetic_cost(ArithKind kind, int n_bits, bool constant_operand, int trailing_zeros) {
  if (n_bits < 1 || trailing_zeros < 0 || trailing_zeros >= n_bits)
    throw std::invalid_argument("arithmetic_cost: invalid bit counts");
  long long base;
  switch (kind) {
    case ArithKind::Add:
    case ArithKind::Subtract:
      base = n_bits - 1;
      break;
    case ArithKind::AddCarry:
    case ArithKind::Inequality:
      base = n_bits;
      break;
    default:
      throw std::invalid_argument("arithmetic_cost: unknown kind");
  }
  base -= trailing_zeros;
  if (constant_operand) base -= 1;
  return std::max<long long>(0, base);
}

long long select_cost(int N) {
  if (N < 2) throw std::invalid_argument("select_cost: N must be >= 2");
  return 4LL * N + 4LL * ceil_log2(static_cast<double>(N));
}

namespace {

long long ineq_test_cost(const IneqTestSpec& t) {
  long long c = t.bits;
  if (t.constant) c -= 1 + trailing_zeros_ll(t.constant_value);
  return std::max<long long>(0, c);
}

}  // namespace

SuperpositionCost equal_superposition_cost(const SuperpositionPrepSpec& spec,
                                           bool include_unprepare) {
  if (spec.state_qubits < 2 || spec.aa_steps < 1 || !(spec.success_states > 0.0))
    throw std::invalid_argument("equal_superposition_cost: inconsistent spec");
  long long s = 0;
  for (const auto& t : spec.state_tests) s += ineq_test_cost(t);
  long long a = spec.ancilla_test ? ineq_test_cost(*spec.ancilla_test) : 0;
  int n_tests = static_cast<int>(spec.state_tests.size()) + (spec.ancilla_test ? 1 : 0);
  long long r = spec.reflection_cost_override >= 0
                    ? spec.reflection_cost_override
                    : (spec.state_qubits - 2) + std::max(0, n_tests - 2);
  long long f = spec.flag_cost_override >= 0
                    ? spec.flag_cost_override
                    : std::max<long long>(0, static_cast<long long>(spec.state_tests.size()) - 1);
  long long k = spec.aa_steps;
  SuperpositionCost out;
  out.toffoli = s * (2 * k + 1) + a * (2 * k) + r * k + f;
  out.toffoli_total = include_unprepare ? 2 * out.toffoli : out.toffoli;
  double sin_phi = std::sqrt(spec.success_states / std::ldexp(1.0, spec.total_bits));
  if (sin_phi > 1.0) throw std::invalid_argument("equal_superposition_cost: success count too large");
  out.amplitude = std::sin((2.0 * k + 1.0) * std::asin(sin_phi));
  return out;
}

SuperpositionCost equal_superposition_cost(const std::vector<SuperpositionPrepSpec>& preps,
                                           bool include_unprepare) {
  SuperpositionCost total;
  total.amplitude = 1.0;
  for (const auto& p : preps) {
    SuperpositionCost c = equal_superposition_cost(p, include_unprepare);
    total.toffoli += c.toffoli;
    total.toffoli_total += c.toffoli_total;
    total.amplitude = std::min(total.amplitude, c.amplitude);
  }
  return total;
}

ContiguousSchedule default_contiguous_schedule(int N) {
  long long target = static_cast<long long>(N) * (N + 2) / 8;
  ContiguousSchedule sched;
  for (int b = 0; b < 62; ++b)
    if (target & (1LL << b)) sched.terms.push_back({1LL << b, +1, 0});
  return sched;
}

std::vector<ContiguousStep> contiguous_index_steps(int N, int L, const ContiguousSchedule& sched) {
  if (N < 4 || N % 2 != 0) throw std::invalid_argument("contiguous_index: N must be even, >= 4");
  if (L < 0) throw std::invalid_argument("contiguous_index: L must be nonnegative");
  const long long per_l = static_cast<long long>(N) * (N + 2) / 8;
  long long sum = 0;
  for (const auto& t : sched.terms) {
    if (t.coefficient <= 0 || (t.coefficient & (t.coefficient - 1)) != 0)
      throw std::invalid_argument("contiguous_index: schedule coefficients must be powers of two");
    sum += t.sign >= 0 ? t.coefficient : -t.coefficient;
  }
  if (sum != per_l)
    throw std::invalid_argument("contiguous_index: schedule does not sum to N^2/8 + N/4");

  const int n = ceil_log2(N / 2.0);
  const long long maxp = N / 2 - 1;
  const long long maxq = maxp;

  // Bracket value added at stage j, as a function of p:
  //   j = 0: p0 * p, at shift 0
  //   j >= 1: pj * (1 + 4 * floor(p / 2^(j+1))), at shift 2j - 1
  auto bracket = [&](int j, long long p) -> long long {
    long long pj = (p >> j) & 1;
    if (pj == 0) return 0;
    if (j == 0) return p;
    return 1 + 4 * (p >> (j + 1));
  };

  std::vector<ContiguousStep> steps;
  std::vector<long long> cum(maxp + 1);
  for (long long p = 0; p <= maxp; ++p) cum[p] = p >> 1;
  auto cum_max = [&]() { return *std::max_element(cum.begin(), cum.end()); };

  steps.push_back({ContiguousOp::CopyBase, "copy_p_suffix", 0, cum_max(), 0,
                   bit_width_u64(cum_max()), 0, 0});

  bool q_added = false;
  for (int j = 0; j < n; ++j) {
    steps.push_back({ContiguousOp::CtrlCopy, "controlled_copy_bracket_" + std::to_string(j),
                     std::max(0, n - 1 - j), cum_max() + (q_added ? maxq : 0), 0, 0, j, 0});
    int shift = (j == 0) ? 0 : 2 * j - 1;
    for (long long p = 0; p <= maxp; ++p) cum[p] += bracket(j, p) << shift;
    long long mx = cum_max() + (q_added ? maxq : 0);
    int width = bit_width_u64(mx);
    long long cost = std::max<long long>(0, width - 1 - shift);
    steps.push_back(
        {ContiguousOp::AddBracket, "add_bracket_" + std::to_string(j), cost, mx, shift, width, j, 0});
    if (j == 0) {
      q_added = true;
      long long mq = cum_max() + maxq;
      steps.push_back({ContiguousOp::AddQ, "add_q", bit_width_u64(mq) - 1, mq, 0,
                       bit_width_u64(mq), 0, 0});
    }
  }

  // Sanity: the brackets reproduce p(p+1)/2 exactly.
  for (long long p = 0; p <= maxp; ++p)
    if (cum[p] != p * (p + 1) / 2)
      throw std::logic_error("contiguous_index: bracket decomposition mismatch");

  long long running = cum_max() + maxq;  // N^2/8 + N/4 - 1
  for (const auto& t : sched.terms) {
    int tz = trailing_zeros_ll(t.coefficient);
    long long after;
    int width;
    if (t.sign >= 0) {
      after = running + t.coefficient * L;
      width = t.width_override > 0 ? t.width_override : bit_width_u64(after);
    } else {
      after = running - t.coefficient * L;
      if (after < 0) throw std::invalid_argument("contiguous_index: schedule underflows");
      width = t.width_override > 0 ? t.width_override : bit_width_u64(running);
    }
    long long cost = std::max<long long>(0, width - 1 - tz);
    steps.push_back({t.sign >= 0 ? ContiguousOp::AddL : ContiguousOp::SubL,
                     (t.sign >= 0 ? std::string("add_l_x") : std::string("sub_l_x")) +
                         std::to_string(t.coefficient),
                     cost, after, tz, width, 0, t.coefficient});
    running = after;
  }
  return steps;
}

long long contiguous_index_cost(int N, int L, const ContiguousSchedule& sched) {
  long long total = 0;
  for (const auto& s : contiguous_index_steps(N, L, sched)) total += s.toffoli;
  return total;
}

long long contiguous_index_cost(int N, int L) {
  return contiguous_index_cost(N, L, default_contiguous_schedule(N));
}

// ---------------------------------------------------------------------------
// Variant assembly
// ---------------------------------------------------------------------------

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::LowRankDirty: return "lowrank-dirty";
    case Variant::LowRankClean: return "lowrank-clean";
    case Variant::Sparse: return "sparse";
  }
  return "?";
}

std::optional<Variant> variant_from_name(const std::string& name) {
  if (name == "lowrank-dirty") return Variant::LowRankDirty;
  if (name == "lowrank-clean") return Variant::LowRankClean;
  if (name == "sparse") return Variant::Sparse;
  return std::nullopt;
}

namespace {

void finish_report(CostReport& rep, int m) {
  rep.m = m;
  rep.per_step_toffoli = 0;
  for (const auto& line : rep.step_costs) rep.per_step_toffoli += line.toffoli;
  rep.total_toffoli = rep.per_step_toffoli << m;
  rep.qubit_total = 0;
  for (const auto& line : rep.qubits) rep.qubit_total += line.count;
  rep.notes.push_back("surface-code CCZ distillation at 24 qubitseconds per Toffoli: about " +
                      format_double(24.0 * static_cast<double>(rep.total_toffoli), "%.2e") +
                      " qubitseconds");
}

ContiguousSchedule schedule_for(const DatasetParams& p) {
  return p.contiguous.terms.empty() ? default_contiguous_schedule(p.N) : p.contiguous;
}

}  // namespace

CostReport estimate_variant(Variant variant, const DatasetParams& p) {
  if (p.N < 4 || p.N % 2 != 0) throw std::invalid_argument("estimate_variant: bad N");
  CostReport rep;
  rep.variant = variant_name(variant);
  rep.dataset = p.name;
  for (const auto& n : p.dataset_notes) rep.notes.push_back(n);

  const int nb2 = ceil_log2(p.N / 2.0);
  const long long per_l = static_cast<long long>(p.N) * (p.N + 2) / 8;
  const int lbits = bit_width_u64(static_cast<uint64_t>(p.L));

  if (variant == Variant::LowRankDirty || variant == Variant::LowRankClean) {
    if (p.L <= 0) throw std::invalid_argument("estimate_variant: missing rank L");
    const double lambda = p.lambda_T + p.lambda_W;
    const long long d1 = (p.L + 1LL) * per_l;
    const long long d2 = static_cast<long long>(p.L) * per_l;
    const int s_bits = ceil_log2(static_cast<double>(d1));
    const long long sel = select_cost(p.N);
    const SuperpositionCost sup = equal_superposition_cost(p.superposition_lowrank, true);
    const long long sym_swaps = 4LL * nb2;
    const long long contiguous = 4 * contiguous_index_cost(p.N, p.L, schedule_for(p));

    if (variant == Variant::LowRankDirty) {
      // steps 1 and 3 merged: two chained preparations
      PhaseEstimationParams pe{lambda, p.delta_e, 2};
      const int mu = keep_probability_bits(pe);
      rep.mu = mu;
      const int M1 = lbits + 2 * nb2 + 2 + mu;
      const int M2 = 2 * nb2 + 2 + mu;
      const KChoice k1 = optimal_k(d1, M1, QroamMode::Dirty, KObjective::Toffoli, p.N + M2);
      const KChoice k2 = optimal_k(d2, M2, QroamMode::Dirty, KObjective::Toffoli, p.N + M1);
      const QroamCost q1 = qroam_cost({d1, M1, k1.k_compute, k1.k_uncompute, QroamMode::Dirty, 0});
      const QroamCost q2 = qroam_cost({d2, M2, k2.k_compute, k2.k_uncompute, QroamMode::Dirty, 0});
      rep.step_costs = {
          {"state_prep_1_qroam", q1.total()},
          {"state_prep_2_qroam", q2.total()},
          {"select", sel},
          {"equal_superposition", sup.toffoli_total},
          {"inequality_and_swap", 2LL * (2 * mu + (lbits + 2 * nb2 + 1) + (2 * nb2 + 1))},
          {"symmetry_swaps", sym_swaps},
          {"contiguous_index", contiguous},
      };
      rep.qubits = {
          {"system", p.N},
          {"prepared_state", lbits + 6 + 4LL * nb2},
          {"superposition_ancilla", static_cast<long long>([&] {
             int b = 0;
             for (const auto& sp : p.superposition_lowrank) b += sp.ancilla_bits;
             return b + 1;
           }())},
          {"index_arithmetic", 2LL * s_bits},
          {"qrom_outputs", M1 + M2},
          {"qroam_workspace", s_bits - log2_exact(k1.k_compute)},
          {"inequality_registers", 2LL * (mu + 1)},
          {"phase_bits", repetitions(pe, p.reallocate_error)},
      };
      finish_report(rep, repetitions(pe, p.reallocate_error));
      return rep;
    }

    // LowRankClean: three separate preparation stages
    PhaseEstimationParams pe{lambda, p.delta_e, 3};
    const int mu = keep_probability_bits(pe);
    rep.mu = mu;
    const int M = 2 * nb2 + 2 + mu;
    const KChoice k = p.lowrank_clean_k;
    const QroamCost q1 = qroam_cost({d1, M, k.k_compute, k.k_uncompute, QroamMode::Clean, 0});
    const QroamCost q2 = qroam_cost({d2, M, k.k_compute, k.k_uncompute, QroamMode::Clean, 0});
    rep.step_costs = {
        {"l_stage_qrom", p.L},
        {"state_prep_1_qroam", q1.total()},
        {"state_prep_2_qroam", q2.total()},
        {"select", sel},
        {"equal_superposition", sup.toffoli_total},
        {"inequality_and_swap", 6LL * mu + 2LL * (lbits + 2 * (2 * nb2 + 1))},
        {"symmetry_swaps", sym_swaps},
        {"contiguous_index", contiguous},
    };
    const int m = repetitions(pe, p.reallocate_error);
    const int ledger_m =
        p.ledger_m_override_lowrank_clean > 0 ? p.ledger_m_override_lowrank_clean : m;
    rep.qubits = {
        {"system", p.N},
        {"prepared_state", lbits + 6 + 4LL * nb2},
        {"superposition_ancilla", static_cast<long long>([&] {
           int b = 0;
           for (const auto& sp : p.superposition_lowrank) b += sp.ancilla_bits;
           return b + 1;
         }())},
        {"index_arithmetic", 2LL * s_bits},
        {"qrom_outputs", lbits + 2LL * M},
        {"qroam_workspace", (k.k_compute - 1) * M + s_bits - log2_exact(k.k_compute)},
        {"inequality_registers", 2LL * (mu + 1)},
        {"phase_bits", ledger_m},
    };
    finish_report(rep, m);
    return rep;
  }

  // Sparse variant
  if (p.sparse_unique_v <= 0) throw std::invalid_argument("estimate_variant: missing sparse counts");
  const double lambda = p.lambda_T + p.lambda_V;
  PhaseEstimationParams pe{lambda, p.delta_e, 1};
  const int mu = keep_probability_bits(pe);
  rep.mu = mu;
  const int M = mu + 8 * nb2 + 4;
  const long long d = p.sparse_unique_v + per_l;
  KChoice k = p.sparse_k;
  if (k.k_compute == 0)
    k = optimal_k(d, M, QroamMode::Clean, KObjective::Toffoli, 0, p.sparse_max_k_compute);
  const QroamCost q = qroam_cost({d, M, k.k_compute, k.k_uncompute, QroamMode::Clean, 0});
  const SuperpositionCost sup = equal_superposition_cost(p.superposition_sparse, true);
  const long long swap_width = 2 + 4LL * nb2;
  rep.step_costs = {
      {"state_prep_qroam", q.total()},
      {"select", select_cost(p.N)},
      {"equal_superposition", sup.toffoli_total},
      {"inequality_and_swap", 2LL * (mu + swap_width)},
      {"symmetry_swaps", 4LL * nb2},
  };
  const int m = repetitions(pe, p.reallocate_error);
  const int d_bits = ceil_log2(static_cast<double>(d));
  rep.qubits = {
      {"system", p.N},
      {"prepared_state", 7 + 4LL * nb2},
      {"superposition_ancilla", p.superposition_sparse.ancilla_bits + 1LL},
      {"address", d_bits},
      {"qroam_outputs_and_workspace", k.k_compute * static_cast<long long>(M) - swap_width},
      {"qroam_iteration", d_bits - log2_exact(k.k_compute) + p.sparse_workspace_adjust},
      {"phase_bits", m},
  };
  finish_report(rep, m);
  return rep;
}

std::string report_to_json(const CostReport& rep) {
  nlohmann::ordered_json j;
  j["variant"] = rep.variant;
  j["dataset"] = rep.dataset;
  j["per_step_toffoli"] = rep.per_step_toffoli;
  j["m"] = rep.m;
  j["mu"] = rep.mu;
  j["total_toffoli"] = rep.total_toffoli;
  auto lines = nlohmann::ordered_json::array();
  for (const auto& line : rep.step_costs)
    lines.push_back({{"name", line.name}, {"toffoli", line.toffoli}});
  j["minor_costs"] = std::move(lines);
  auto qs = nlohmann::ordered_json::array();
  for (const auto& line : rep.qubits) qs.push_back({{"name", line.name}, {"count", line.count}});
  j["qubits"] = std::move(qs);
  j["qubit_total"] = rep.qubit_total;
  j["notes"] = rep.notes;
  return j.dump(2) + "\n";
}

}  // namespace lcu
