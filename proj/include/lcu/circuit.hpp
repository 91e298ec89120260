#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace lcu {

enum class GateKind {
  X,
  Y,
  Z,
  H,
  S,
  CNOT,
  CZ,
  CCX,
  CSWAP,     // counts as one Toffoli (CNOT-Toffoli-CNOT decomposition)
  MeasureX,
  MeasureZ,
  CondX,     // applied when the XOR of the referenced outcomes is 1
  CondZ,
  CondCZ,
  StatePrep,  // composite isometry used by the walk builder
};

struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  int mid = -1;           // measurement id for MeasureX / MeasureZ
  std::vector<int> cond;  // measurement ids forming a parity condition
  int prep = -1;          // index into Circuit::preps for StatePrep
};

struct QuantumRegister {
  std::string name;
  std::string role;  // system | address | output | workspace | dirty | flag | data
  std::vector<int> qubits;
};

/// Target amplitudes for a StatePrep op over its qubit list (little-endian
/// within the list). Applied as the Householder reflection sending |0...0>
/// to the target vector; real amplitudes only.
struct PrepBlob {
  std::vector<double> amplitudes;
};

struct Circuit {
  int n_qubits = 0;
  std::vector<QuantumRegister> registers;
  std::vector<Gate> gates;
  int n_measurements = 0;
  std::vector<PrepBlob> preps;

  int add_register(const std::string& name, const std::string& role, int count);
  int add_qubit(const std::string& name, const std::string& role);
  const QuantumRegister& reg(const std::string& name) const;
  bool has_reg(const std::string& name) const;

  void gate(GateKind kind, std::vector<int> qubits);
  void cond_gate(GateKind kind, std::vector<int> qubits, std::vector<int> cond);
  int measure(GateKind kind, int qubit);  // returns the measurement id
  void state_prep(std::vector<int> qubits, std::vector<double> amplitudes);

  /// Number of Toffoli-equivalent gates (CCX plus CSWAP).
  long long toffoli_count() const;

  void validate() const;  // qubit ranges and measurement references

  /// Line-oriented text format: register table then one gate per line,
  /// conditioned gates annotated with "@cond:mId[,mId...]".
  std::string to_text() const;
};

Circuit circuit_from_text(const std::string& text);

const char* gate_name(GateKind kind);

}  // namespace lcu
