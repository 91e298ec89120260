#pragma once

#include <optional>
#include <string>

#include "lcu/linalg.hpp"

namespace lcu {

// ---------------------------------------------------------------------------
// Phase estimation parameters
// ---------------------------------------------------------------------------

struct PhaseEstimationParams {
  double lambda = 0.0;
  double delta_e = 0.0016;  // chemical accuracy, Hartree
  int n_prep_stages = 1;    // chained state-preparation stages per step
};

/// Default repetition exponent m = ceil(log2(sqrt(2) pi lambda / (2 dE))).
/// With error reallocation, the minimal m with pi lambda / 2^(m+1) <= dE.
int repetitions(const PhaseEstimationParams& p, bool reallocate_error);

/// Keep-probability bits mu = ceil(log2(2 sqrt(2) lambda stages / dE)).
/// Each chained preparation stage spends part of the error budget, which is
/// what the stage multiplier inside the log accounts for.
int keep_probability_bits(const PhaseEstimationParams& p);

/// Allowable per-step implementation error sqrt(2) dE / (4 lambda).
double step_error(const PhaseEstimationParams& p);

// ---------------------------------------------------------------------------
// QROAM lookup costs
// ---------------------------------------------------------------------------

enum class QroamMode { Clean, Dirty };

struct QroamConfig {
  long long d = 0;  // table entries
  int M = 0;        // output bits
  long long k_compute = 1;
  long long k_uncompute = 1;
  QroamMode mode = QroamMode::Clean;
  long long dirty_budget = 0;  // borrowable qubits, dirty mode only
};

struct QroamCost {
  long long compute_toffoli = 0;
  long long uncompute_toffoli = 0;
  long long compute_clean_ancilla = 0;
  long long compute_dirty_ancilla = 0;
  long long uncompute_clean_ancilla = 0;
  long long uncompute_dirty_ancilla = 0;
  long long total() const { return compute_toffoli + uncompute_toffoli; }
};

/// Clean: compute ceil(d/k) + M(k-1), uncompute ceil(d/k) + k.
/// Dirty: compute 2 ceil(d/k) + 4M(k-1), uncompute 2 ceil(d/k) + 4k.
/// k = 1 degenerates to a plain QROM costing d in both directions.
QroamCost qroam_cost(const QroamConfig& cfg);

enum class KObjective { Toffoli, Qubits };

struct KChoice {
  long long k_compute = 1;
  long long k_uncompute = 1;
};

/// Exhaustive search over k in {1} u {4, 8, 16, ...} below d (block sizes of
/// 2 never beat a plain lookup once the uncompute is accounted), minimizing
/// Toffolis or fitting the ancilla budget. Ties break toward smaller k.
/// max_k_compute caps the compute-side block size when positive.
KChoice optimal_k(long long d, int M, QroamMode mode, KObjective objective,
                  long long budget = 0, long long max_k_compute = 0);

// ---------------------------------------------------------------------------
// Elementary arithmetic costs (adder / subtractor / inequality rules)
// ---------------------------------------------------------------------------

enum class ArithKind { Add, AddCarry, Subtract, Inequality };

/// Base cost n (AddCarry, Inequality) or n-1 (Add, Subtract), minus the
/// operand's trailing zeros, minus 1 more for a classical constant, floored
/// at zero.
long long arithmetic_cost(ArithKind kind, int n_bits, bool constant_operand, int trailing_zeros);

/// 4N + 4 ceil(log2 N): two selected ranged-operator pairs per step.
long long select_cost(int N);

// ---------------------------------------------------------------------------
// Equal-superposition preparation (amplitude amplification)
// ---------------------------------------------------------------------------

struct IneqTestSpec {
  int bits = 0;
  bool constant = false;
  long long constant_value = 0;  // trailing zeros of this value are savings
};

/// One amplitude-amplified equal-superposition preparation. The published
/// configurations occasionally depart from the generic assembly rules by a
/// Toffoli or two; the overrides carry those published line values.
struct SuperpositionPrepSpec {
  std::string name;
  std::vector<IneqTestSpec> state_tests;
  std::optional<IneqTestSpec> ancilla_test;
  int state_qubits = 0;    // everything reflected, ancilla bits included
  int ancilla_bits = 0;    // ancilla-superposition qubits (subset of state_qubits)
  int aa_steps = 1;        // k
  double success_states = 0.0;  // numerator of sin^2(phi)
  int total_bits = 0;           // sin^2(phi) = success_states / 2^total_bits
  int reflection_cost_override = -1;
  int flag_cost_override = -1;
};

struct SuperpositionCost {
  long long toffoli = 0;       // one direction (prepare only)
  long long toffoli_total = 0; // prepare + unprepare when requested
  double amplitude = 0.0;      // sin((2k+1) phi)
};

/// Per-prep assembly: S(2k+1) + A(2k) + Rk + F with S the summed state-test
/// costs, A the ancilla test, R the two reflections, F the success flag.
SuperpositionCost equal_superposition_cost(const SuperpositionPrepSpec& spec,
                                           bool include_unprepare = true);
SuperpositionCost equal_superposition_cost(const std::vector<SuperpositionPrepSpec>& preps,
                                           bool include_unprepare = true);

// ---------------------------------------------------------------------------
// Contiguous-register index arithmetic (s = l (N^2/8+N/4) + p(p+1)/2 + q)
// ---------------------------------------------------------------------------

struct ScheduleTerm {
  long long coefficient = 0;  // power-of-two multiple of l to add/subtract
  int sign = +1;
  int width_override = 0;     // published register width, when it departs
                              // from the tracked maximum (0 = compute)
};

struct ContiguousSchedule {
  std::vector<ScheduleTerm> terms;
};

/// Signed power-of-two decomposition of N^2/8 + N/4 in ascending order.
ContiguousSchedule default_contiguous_schedule(int N);

enum class ContiguousOp {
  CopyBase,    // copy the p suffix into the output, no Toffolis
  CtrlCopy,    // controlled copy of a p suffix into the working register
  AddBracket,  // add the working register at the step's shift
  AddQ,        // add q
  AddL,        // add coefficient * l
  SubL,        // subtract coefficient * l
};

struct ContiguousStep {
  ContiguousOp op;
  std::string what;
  long long toffoli = 0;
  long long running_max = 0;  // register maximum after this step
  int shift = 0;              // power-of-two alignment of the operand
  int width = 0;              // output bits the step acts through (from bit 0)
  int param = 0;              // bracket index (CtrlCopy / AddBracket)
  long long coefficient = 0;  // schedule coefficient (AddL / SubL)
};

/// The step table shared between the cost model and the circuit builder:
/// controlled suffix copies, width-tracked additions, then the l-multiple
/// schedule. Throws if the schedule does not sum to N^2/8 + N/4.
std::vector<ContiguousStep> contiguous_index_steps(int N, int L, const ContiguousSchedule& sched);

long long contiguous_index_cost(int N, int L, const ContiguousSchedule& sched);
long long contiguous_index_cost(int N, int L);  // default schedule

// ---------------------------------------------------------------------------
// Per-variant cost reports
// ---------------------------------------------------------------------------

enum class Variant { LowRankDirty, LowRankClean, Sparse };

std::string variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);

struct CostLine {
  std::string name;
  long long toffoli = 0;
};

struct QubitLine {
  std::string name;
  long long count = 0;
};

struct CostReport {
  std::string variant;
  std::string dataset;
  long long per_step_toffoli = 0;
  int m = 0;
  int mu = 0;
  long long total_toffoli = 0;  // 2^m * per_step
  std::vector<CostLine> step_costs;  // QROAM lines plus the minor costs
  std::vector<QubitLine> qubits;
  long long qubit_total = 0;
  std::vector<std::string> notes;
};

/// Inputs for one estimate. Published FeMoco datasets are provided by the
/// fixtures module; file-derived parameters can fill the same struct.
struct DatasetParams {
  std::string name;
  int N = 0;
  double lambda_T = 0.0;
  double lambda_W = 0.0;  // at rank L (low-rank variants)
  double lambda_V = 0.0;  // truncated-tensor weight (sparse variant)
  int L = 0;
  long long sparse_unique_v = 0;  // symmetry-unique surviving two-body values
  double delta_e = 0.0016;
  bool reallocate_error = false;

  // published structural choices
  KChoice lowrank_clean_k{64, 512};
  KChoice sparse_k{0, 0};            // 0 = optimize
  long long sparse_max_k_compute = 0;
  ContiguousSchedule contiguous;     // empty = default_contiguous_schedule(N)
  std::vector<SuperpositionPrepSpec> superposition_lowrank;
  SuperpositionPrepSpec superposition_sparse;

  // published-value adjustments, carried with explanatory notes
  int ledger_m_override_lowrank_clean = 0;  // 0 = use m
  long long sparse_workspace_adjust = 0;
  std::vector<std::string> dataset_notes;
};

CostReport estimate_variant(Variant variant, const DatasetParams& params);

std::string report_to_json(const CostReport& rep);

}  // namespace lcu
