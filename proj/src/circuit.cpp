#include "lcu/circuit.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lcu {

namespace {

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::S:
    case GateKind::MeasureX:
    case GateKind::MeasureZ:
    case GateKind::CondX:
    case GateKind::CondZ:
      return 1;
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::CondCZ:
      return 2;
    case GateKind::CCX:
    case GateKind::CSWAP:
      return 3;
    case GateKind::StatePrep:
      return -1;
  }
  return -1;
}

}  // namespace

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CCX: return "CCX";
    case GateKind::CSWAP: return "CSWAP";
    case GateKind::MeasureX: return "MX";
    case GateKind::MeasureZ: return "MZ";
    case GateKind::CondX: return "CX?";
    case GateKind::CondZ: return "CZ?";
    case GateKind::CondCZ: return "CCZ?";
    case GateKind::StatePrep: return "PREP";
  }
  return "?";
}

int Circuit::add_register(const std::string& name, const std::string& role, int count) {
  QuantumRegister r{name, role, {}};
  for (int i = 0; i < count; ++i) r.qubits.push_back(n_qubits++);
  registers.push_back(std::move(r));
  return registers.back().qubits.front();
}

int Circuit::add_qubit(const std::string& name, const std::string& role) {
  return add_register(name, role, 1);
}

const QuantumRegister& Circuit::reg(const std::string& name) const {
  for (const auto& r : registers)
    if (r.name == name) return r;
  throw std::out_of_range("no register named " + name);
}

bool Circuit::has_reg(const std::string& name) const {
  for (const auto& r : registers)
    if (r.name == name) return true;
  return false;
}

void Circuit::gate(GateKind kind, std::vector<int> qubits) {
  gates.push_back(Gate{kind, std::move(qubits), -1, {}, -1});
}

void Circuit::cond_gate(GateKind kind, std::vector<int> qubits, std::vector<int> cond) {
  if (kind != GateKind::CondX && kind != GateKind::CondZ && kind != GateKind::CondCZ)
    throw std::invalid_argument("cond_gate: conditioned gates are X / Z / CZ");
  gates.push_back(Gate{kind, std::move(qubits), -1, std::move(cond), -1});
}

int Circuit::measure(GateKind kind, int qubit) {
  if (kind != GateKind::MeasureX && kind != GateKind::MeasureZ)
    throw std::invalid_argument("measure: not a measurement kind");
  int mid = n_measurements++;
  gates.push_back(Gate{kind, {qubit}, mid, {}, -1});
  return mid;
}

void Circuit::state_prep(std::vector<int> qubits, std::vector<double> amplitudes) {
  if (amplitudes.size() != (size_t{1} << qubits.size()))
    throw std::invalid_argument("state_prep: amplitude count must be 2^#qubits");
  preps.push_back(PrepBlob{std::move(amplitudes)});
  gates.push_back(Gate{GateKind::StatePrep, std::move(qubits), -1, {},
                       static_cast<int>(preps.size()) - 1});
}

long long Circuit::toffoli_count() const {
  long long n = 0;
  for (const auto& g : gates)
    if (g.kind == GateKind::CCX || g.kind == GateKind::CSWAP) ++n;
  return n;
}

void Circuit::validate() const {
  for (const auto& g : gates) {
    int arity = gate_arity(g.kind);
    if (arity >= 0 && static_cast<int>(g.qubits.size()) != arity)
      throw std::logic_error("circuit: gate arity mismatch");
    for (int q : g.qubits)
      if (q < 0 || q >= n_qubits) throw std::logic_error("circuit: qubit index out of range");
    for (size_t i = 0; i < g.qubits.size(); ++i)
      for (size_t j = i + 1; j < g.qubits.size(); ++j)
        if (g.qubits[i] == g.qubits[j]) throw std::logic_error("circuit: repeated qubit in gate");
    for (int c : g.cond)
      if (c < 0 || c >= n_measurements)
        throw std::logic_error("circuit: condition references unknown measurement");
  }
  // conditions must reference measurements that appear earlier
  std::vector<bool> seen(static_cast<size_t>(n_measurements), false);
  for (const auto& g : gates) {
    for (int c : g.cond)
      if (!seen[c]) throw std::logic_error("circuit: condition precedes its measurement");
    if (g.mid >= 0) seen[g.mid] = true;
  }
}

std::string Circuit::to_text() const {
  std::ostringstream os;
  os << "qubits " << n_qubits << "\n";
  for (const auto& r : registers) {
    os << "reg " << r.name << " " << r.role;
    for (int q : r.qubits) os << " " << q;
    os << "\n";
  }
  for (const auto& g : gates) {
    os << gate_name(g.kind);
    for (int q : g.qubits) os << " " << q;
    if (g.mid >= 0) os << " ->m" << g.mid;
    if (!g.cond.empty()) {
      os << " @cond:";
      for (size_t i = 0; i < g.cond.size(); ++i) os << (i ? "," : "") << "m" << g.cond[i];
    }
    if (g.kind == GateKind::StatePrep) {
      os << " #amps";
      char buf[64];
      for (double a : preps[g.prep].amplitudes) {
        std::snprintf(buf, sizeof buf, "%.17g", a);
        os << " " << buf;
      }
    }
    os << "\n";
  }
  return os.str();
}

Circuit circuit_from_text(const std::string& text) {
  Circuit c;
  std::istringstream in(text);
  std::string line;
  std::map<std::string, GateKind> names;
  for (GateKind k : {GateKind::X, GateKind::Y, GateKind::Z, GateKind::H, GateKind::S,
                     GateKind::CNOT, GateKind::CZ, GateKind::CCX, GateKind::CSWAP,
                     GateKind::MeasureX, GateKind::MeasureZ, GateKind::CondX, GateKind::CondZ,
                     GateKind::CondCZ, GateKind::StatePrep})
    names[gate_name(k)] = k;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "qubits") {
      ls >> c.n_qubits;
    } else if (tok == "reg") {
      QuantumRegister r;
      ls >> r.name >> r.role;
      int q;
      while (ls >> q) r.qubits.push_back(q);
      c.registers.push_back(std::move(r));
    } else {
      auto it = names.find(tok);
      if (it == names.end()) throw std::runtime_error("circuit text: unknown gate " + tok);
      Gate g{it->second, {}, -1, {}, -1};
      std::vector<double> amps;
      std::string field;
      while (ls >> field) {
        if (field.rfind("->m", 0) == 0) {
          g.mid = std::stoi(field.substr(3));
          c.n_measurements = std::max(c.n_measurements, g.mid + 1);
        } else if (field.rfind("@cond:", 0) == 0) {
          std::istringstream cs(field.substr(6));
          std::string m;
          while (std::getline(cs, m, ','))
            g.cond.push_back(std::stoi(m.substr(1)));
        } else if (field == "#amps") {
          double a;
          while (ls >> a) amps.push_back(a);
        } else {
          g.qubits.push_back(std::stoi(field));
        }
      }
      if (g.kind == GateKind::StatePrep) {
        c.preps.push_back(PrepBlob{std::move(amps)});
        g.prep = static_cast<int>(c.preps.size()) - 1;
      }
      c.gates.push_back(std::move(g));
    }
  }
  c.validate();
  return c;
}

}  // namespace lcu
