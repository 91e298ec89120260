#include "lcu/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lcu {

namespace {

constexpr Amplitude kI{0.0, 1.0};

// Walks the subspace where the given qubits take fixed values: expands a
// compressed counter by inserting the (ascending) bit positions, set or
// clear per set_mask. Lets the permutation gates touch each orbit once.
struct SubspaceIter {
  uint64_t bits[3];
  uint64_t set_mask;
  int n = 0;

  void add(int qubit, bool set) {
    uint64_t b = 1ULL << qubit;
    int pos = n++;
    while (pos > 0 && bits[pos - 1] > b) {
      bits[pos] = bits[pos - 1];
      --pos;
    }
    bits[pos] = b;
    if (set) set_mask |= b;
  }
  uint64_t expand(uint64_t g) const {
    uint64_t out = g;
    for (int i = 0; i < n; ++i) out = ((out & ~(bits[i] - 1)) << 1) | (out & (bits[i] - 1));
    return out | set_mask;
  }
};

void apply_single(StateVector& st, int q, Amplitude u00, Amplitude u01, Amplitude u10,
                  Amplitude u11) {
  const uint64_t bit = 1ULL << q;
  const uint64_t half = st.amps.size() >> 1;
  for (uint64_t gidx = 0; gidx < half; ++gidx) {
    uint64_t i = ((gidx & ~(bit - 1)) << 1) | (gidx & (bit - 1));
    Amplitude a0 = st.amps[i];
    Amplitude a1 = st.amps[i | bit];
    st.amps[i] = u00 * a0 + u01 * a1;
    st.amps[i | bit] = u10 * a0 + u11 * a1;
  }
}

void apply_phase_mask(StateVector& st, uint64_t mask, Amplitude phase) {
  // phase on every index with all mask bits set
  SubspaceIter it{};
  for (int q = 0; q < st.n_qubits; ++q)
    if (mask & (1ULL << q)) it.add(q, true);
  const uint64_t count = st.amps.size() >> it.n;
  for (uint64_t g = 0; g < count; ++g) st.amps[it.expand(g)] *= phase;
}

void apply_gate(StateVector& st, const Gate& g, const Circuit& c) {
  switch (g.kind) {
    case GateKind::X: {
      const uint64_t bit = 1ULL << g.qubits[0];
      const uint64_t half = st.amps.size() >> 1;
      for (uint64_t gidx = 0; gidx < half; ++gidx) {
        uint64_t i = ((gidx & ~(bit - 1)) << 1) | (gidx & (bit - 1));
        std::swap(st.amps[i], st.amps[i | bit]);
      }
      break;
    }
    case GateKind::Y:
      apply_single(st, g.qubits[0], 0.0, -kI, kI, 0.0);
      break;
    case GateKind::Z:
      apply_phase_mask(st, 1ULL << g.qubits[0], -1.0);
      break;
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      apply_single(st, g.qubits[0], r, r, r, -r);
      break;
    }
    case GateKind::S:
      apply_phase_mask(st, 1ULL << g.qubits[0], kI);
      break;
    case GateKind::CNOT: {
      const uint64_t tgt = 1ULL << g.qubits[1];
      SubspaceIter it{};
      it.add(g.qubits[0], true);
      it.add(g.qubits[1], false);
      const uint64_t count = st.amps.size() >> 2;
      for (uint64_t gidx = 0; gidx < count; ++gidx) {
        uint64_t i = it.expand(gidx);
        std::swap(st.amps[i], st.amps[i | tgt]);
      }
      break;
    }
    case GateKind::CZ:
      apply_phase_mask(st, (1ULL << g.qubits[0]) | (1ULL << g.qubits[1]), -1.0);
      break;
    case GateKind::CCX: {
      const uint64_t tgt = 1ULL << g.qubits[2];
      SubspaceIter it{};
      it.add(g.qubits[0], true);
      it.add(g.qubits[1], true);
      it.add(g.qubits[2], false);
      const uint64_t count = st.amps.size() >> 3;
      for (uint64_t gidx = 0; gidx < count; ++gidx) {
        uint64_t i = it.expand(gidx);
        std::swap(st.amps[i], st.amps[i | tgt]);
      }
      break;
    }
    case GateKind::CSWAP: {
      const uint64_t a = 1ULL << g.qubits[1];
      const uint64_t b = 1ULL << g.qubits[2];
      SubspaceIter it{};
      it.add(g.qubits[0], true);
      it.add(g.qubits[1], true);
      it.add(g.qubits[2], false);
      const uint64_t count = st.amps.size() >> 3;
      for (uint64_t gidx = 0; gidx < count; ++gidx) {
        uint64_t i = it.expand(gidx);
        std::swap(st.amps[i], st.amps[(i ^ a) | b]);
      }
      break;
    }
    case GateKind::StatePrep: {
      // Householder reflection sending |0..0> on the targeted qubits to the
      // stored amplitude vector: U = I - 2 v v^T with v ~ (e0 - t).
      const auto& amps = c.preps[g.prep].amplitudes;
      const int t = static_cast<int>(g.qubits.size());
      const uint64_t sub = 1ULL << t;
      double nrm = 0.0;
      for (double x : amps) nrm += x * x;
      if (std::fabs(nrm - 1.0) > 1e-9)
        throw std::invalid_argument("state_prep: amplitudes must be normalized");
      std::vector<double> v(amps.size());
      for (uint64_t i = 0; i < sub; ++i) v[i] = (i == 0 ? 1.0 : 0.0) - amps[i];
      double vn = 0.0;
      for (double x : v) vn += x * x;
      if (vn < 1e-24) break;  // target is |0..0>, nothing to do
      vn = std::sqrt(vn);
      for (double& x : v) x /= vn;

      // Iterate over configurations of the untouched qubits.
      const uint64_t full = st.amps.size() - 1;
      uint64_t outer_mask = full;
      for (int q : g.qubits) outer_mask &= ~(1ULL << q);
      std::vector<uint64_t> offsets(sub, 0);
      for (uint64_t i = 0; i < sub; ++i)
        for (int b = 0; b < t; ++b)
          if (i & (1ULL << b)) offsets[i] |= 1ULL << g.qubits[b];
      uint64_t base = 0;
      while (true) {
        Amplitude dot = 0.0;
        for (uint64_t i = 0; i < sub; ++i) dot += v[i] * st.amps[base | offsets[i]];
        dot *= 2.0;
        for (uint64_t i = 0; i < sub; ++i) st.amps[base | offsets[i]] -= dot * v[i];
        // next configuration of the outer qubits
        uint64_t next = (base | (full & ~outer_mask)) + 1;
        if (next > full) break;
        base = next & outer_mask;
      }
      break;
    }
    default:
      throw std::logic_error("apply_gate: unhandled kind");
  }
}

bool parity_of(const std::vector<int>& cond, const Branch& br) {
  int p = 0;
  for (int mid : cond) p ^= br.outcome_of(mid);
  return p != 0;
}

bool states_equal_up_to_phase(const StateVector& a, const StateVector& b, double tol) {
  // both are unit norm, so they agree up to a global phase iff |<a|b>| = 1
  Amplitude ip = 0.0;
  for (size_t i = 0; i < a.amps.size(); ++i) ip += std::conj(a.amps[i]) * b.amps[i];
  return std::norm(ip) > 1.0 - tol;
}

}  // namespace

StateVector::StateVector(int n) : n_qubits(n), amps(size_t{1} << n, 0.0) {
  if (n < 0 || n > kMaxRunQubits) throw std::invalid_argument("statevector: qubit count out of range");
  amps[0] = 1.0;
}

StateVector StateVector::basis(int n, uint64_t value) {
  StateVector st(n);
  st.amps[0] = 0.0;
  st.amps[value] = 1.0;
  return st;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const Amplitude& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

int Branch::outcome_of(int mid) const {
  for (const auto& [m, bit] : outcomes)
    if (m == mid) return bit;
  throw std::out_of_range("branch: no outcome recorded for measurement");
}

std::vector<Branch> run_from(const Circuit& circuit, StateVector initial, const RunOptions& opts) {
  circuit.validate();
  if (circuit.n_qubits > kMaxRunQubits)
    throw std::invalid_argument("run: circuit exceeds the simulator qubit limit");
  if (initial.n_qubits != circuit.n_qubits)
    throw std::invalid_argument("run: initial state size mismatch");

  std::vector<Branch> branches;
  branches.push_back(Branch{std::move(initial), {}, 1.0});

  auto merge_pass = [&] {
    if (branches.size() < 2) return;
    std::vector<Branch> merged;
    for (Branch& br : branches) {
      bool absorbed = false;
      for (Branch& m : merged) {
        if (states_equal_up_to_phase(m.state, br.state, 1e-10)) {
          m.weight += br.weight;
          absorbed = true;
          break;
        }
      }
      if (!absorbed) merged.push_back(std::move(br));
    }
    branches = std::move(merged);
  };

  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::MeasureX || g.kind == GateKind::MeasureZ) {
      std::vector<Branch> next;
      for (Branch& br : branches) {
        if (g.kind == GateKind::MeasureX)
          apply_gate(br.state, Gate{GateKind::H, g.qubits, -1, {}, -1}, circuit);
        const uint64_t bit = 1ULL << g.qubits[0];
        const uint64_t half = br.state.amps.size() >> 1;
        auto upper = [&](uint64_t gidx) {
          return (((gidx & ~(bit - 1)) << 1) | (gidx & (bit - 1))) | bit;
        };
        double p1 = 0.0;
        for (uint64_t gidx = 0; gidx < half; ++gidx) p1 += std::norm(br.state.amps[upper(gidx)]);
        double p0 = std::max(0.0, 1.0 - p1);
        if (p1 >= opts.prune_threshold) {
          Branch nb;
          nb.state = StateVector(br.state.n_qubits);
          nb.state.amps.assign(br.state.amps.size(), 0.0);
          double scale = 1.0 / std::sqrt(p1);
          for (uint64_t gidx = 0; gidx < half; ++gidx) {
            uint64_t i = upper(gidx);
            nb.state.amps[i] = br.state.amps[i] * scale;
          }
          nb.outcomes = br.outcomes;
          nb.outcomes.emplace_back(g.mid, 1);
          nb.weight = br.weight * p1;
          next.push_back(std::move(nb));
        }
        if (p0 >= opts.prune_threshold) {
          // reuse the parent state for the 0 outcome
          double scale = 1.0 / std::sqrt(p0);
          for (uint64_t gidx = 0; gidx < half; ++gidx) {
            uint64_t i = upper(gidx);
            br.state.amps[i ^ bit] *= scale;
            br.state.amps[i] = 0.0;
          }
          br.outcomes.emplace_back(g.mid, 0);
          br.weight *= p0;
          next.push_back(std::move(br));
        }
      }
      branches = std::move(next);
    } else if (!g.cond.empty()) {
      Gate applied = g;
      applied.cond.clear();
      switch (g.kind) {
        case GateKind::CondX: applied.kind = GateKind::X; break;
        case GateKind::CondZ: applied.kind = GateKind::Z; break;
        case GateKind::CondCZ: applied.kind = GateKind::CZ; break;
        default: throw std::logic_error("run: conditioned gate of fixed kind");
      }
      for (Branch& br : branches)
        if (parity_of(g.cond, br)) apply_gate(br.state, applied, circuit);
      // fixups are where sibling branches become equal again
      if (opts.merge_equivalent) merge_pass();
    } else {
      for (Branch& br : branches) apply_gate(br.state, g, circuit);
    }
  }
  if (opts.merge_equivalent) merge_pass();
  return branches;
}

std::vector<Branch> run(const Circuit& circuit, const RunOptions& opts) {
  return run_from(circuit, StateVector::basis(circuit.n_qubits, opts.initial_basis_state), opts);
}

void apply_circuit(const Circuit& circuit, StateVector& state) {
  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::MeasureX || g.kind == GateKind::MeasureZ || !g.cond.empty())
      throw std::invalid_argument("apply_circuit: circuit must be measurement-free");
    apply_gate(state, g, circuit);
  }
}

ComplexMatrix unitary_of(const Circuit& circuit) {
  circuit.validate();
  if (circuit.n_qubits > kMaxUnitaryQubits)
    throw std::invalid_argument("unitary_of: circuit exceeds the unitary qubit limit");
  for (const Gate& g : circuit.gates)
    if (g.kind == GateKind::MeasureX || g.kind == GateKind::MeasureZ)
      throw std::invalid_argument("unitary_of: circuit contains measurements");
  const int dim = 1 << circuit.n_qubits;
  ComplexMatrix u;
  u.dim = dim;
  u.a.assign(static_cast<size_t>(dim) * dim, 0.0);
  for (int col = 0; col < dim; ++col) {
    StateVector st = StateVector::basis(circuit.n_qubits, static_cast<uint64_t>(col));
    apply_circuit(circuit, st);
    for (int row = 0; row < dim; ++row) u.at(row, col) = st.amps[row];
  }
  return u;
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits != b.n_qubits) throw std::invalid_argument("inner_product: size mismatch");
  Amplitude s = 0.0;
  for (size_t i = 0; i < a.amps.size(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
  return s;
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

}  // namespace lcu
