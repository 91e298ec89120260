#pragma once

#include <complex>

#include "lcu/circuit.hpp"

namespace lcu {

using Amplitude = std::complex<double>;

/// Dense statevector over at most 22 qubits, little-endian (qubit 0 is the
/// least significant index bit). Norm is preserved by construction; checked
/// after measurements.
struct StateVector {
  int n_qubits = 0;
  std::vector<Amplitude> amps;

  StateVector() = default;
  explicit StateVector(int n);
  static StateVector basis(int n, uint64_t value);

  double norm() const;
};

struct Branch {
  StateVector state;
  std::vector<std::pair<int, int>> outcomes;  // (measurement id, bit)
  double weight = 1.0;

  int outcome_of(int mid) const;
};

struct RunOptions {
  double prune_threshold = 1e-14;
  /// Coalesce sibling branches whose states agree up to a global phase.
  /// Measurement-based uncomputation produces exactly such siblings; keeping
  /// them split is only useful when a test wants to inspect every branch.
  bool merge_equivalent = false;
  uint64_t initial_basis_state = 0;
};

inline constexpr int kMaxRunQubits = 22;
inline constexpr int kMaxUnitaryQubits = 12;

std::vector<Branch> run(const Circuit& circuit, const RunOptions& opts = {});
std::vector<Branch> run_from(const Circuit& circuit, StateVector initial,
                             const RunOptions& opts = {});

/// Applies a measurement-free circuit to a state in place.
void apply_circuit(const Circuit& circuit, StateVector& state);

struct ComplexMatrix {
  int dim = 0;
  std::vector<Amplitude> a;
  Amplitude& at(int i, int j) { return a[static_cast<size_t>(i) * dim + j]; }
  Amplitude at(int i, int j) const { return a[static_cast<size_t>(i) * dim + j]; }
};

/// Column-by-column unitary extraction; rejects circuits with measurements
/// and more than kMaxUnitaryQubits qubits.
ComplexMatrix unitary_of(const Circuit& circuit);

double fidelity(const StateVector& a, const StateVector& b);
Amplitude inner_product(const StateVector& a, const StateVector& b);

}  // namespace lcu
