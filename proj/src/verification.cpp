#include "lcu/verification.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <sstream>

#include "lcu/kernels.hpp"
#include "lcu/simulator.hpp"

namespace lcu {

namespace {

namespace k = lcu::kernels;

uint64_t with_register(const Circuit& c, uint64_t basis, const std::string& name, uint64_t value) {
  for (size_t b = 0; b < c.reg(name).qubits.size(); ++b)
    if ((value >> b) & 1) basis |= 1ULL << c.reg(name).qubits[b];
  return basis;
}

uint64_t read_register(const StateVector& st, const std::vector<int>& qubits) {
  // basis-state readout: returns the value with all the marginal weight, or
  // ~0 when the register is not in a definite computational state
  std::map<uint64_t, double> probs;
  for (uint64_t i = 0; i < st.amps.size(); ++i) {
    double w = std::norm(st.amps[i]);
    if (w < 1e-18) continue;
    uint64_t v = 0;
    for (size_t b = 0; b < qubits.size(); ++b)
      if ((i >> qubits[b]) & 1) v |= 1ULL << b;
    probs[v] += w;
  }
  for (const auto& [v, w] : probs)
    if (w > 1.0 - 1e-9) return v;
  return ~0ULL;
}

struct BasisRun {
  bool merged_to_one = false;
  StateVector state;
};

BasisRun run_basis(const Circuit& c, uint64_t basis) {
  RunOptions opts;
  opts.initial_basis_state = basis;
  opts.merge_equivalent = true;
  auto branches = run(c, opts);
  BasisRun out;
  out.merged_to_one = branches.size() == 1;
  if (!branches.empty()) out.state = std::move(branches[0].state);
  return out;
}

std::vector<uint64_t> grid_table(uint64_t seed, long long d, int M) {
  DetRng rng(seed);
  std::vector<uint64_t> t(d);
  for (auto& v : t) v = rng.next_u64() & ((1ULL << M) - 1);
  return t;
}

Circuit splice(const Circuit& base, const Circuit& tail, const std::vector<std::string>& shared,
               std::vector<int>* dirty_out = nullptr) {
  Circuit combined = base;
  std::map<int, int> remap;
  for (const auto& name : shared)
    for (size_t b = 0; b < tail.reg(name).qubits.size(); ++b)
      remap[tail.reg(name).qubits[b]] = combined.reg(name).qubits[b];
  for (const auto& r : tail.registers) {
    bool is_shared = false;
    for (const auto& name : shared) is_shared |= (r.name == name);
    if (is_shared) continue;
    for (int q : r.qubits) {
      int nq = combined.add_qubit("t_" + r.name + "_" + std::to_string(q), r.role);
      remap[q] = nq;
      if (dirty_out && r.role == "dirty") dirty_out->push_back(nq);
    }
  }
  int mid_base = combined.n_measurements;
  int prep_base = static_cast<int>(combined.preps.size());
  for (const auto& pb : tail.preps) combined.preps.push_back(pb);
  for (Gate g : tail.gates) {
    for (int& q : g.qubits) q = remap.at(q);
    if (g.mid >= 0) {
      g.mid += mid_base;
      ++combined.n_measurements;
    }
    for (int& mm : g.cond) mm += mid_base;
    if (g.prep >= 0) g.prep += prep_base;
    combined.gates.push_back(std::move(g));
  }
  return combined;
}

KernelCheck check_adder(int n, bool carry) {
  KernelCheck row{carry ? "adder-carry" : "adder", "n=" + std::to_string(n)};
  Circuit c = k::build_adder(n, carry);
  row.predicted = arithmetic_cost(carry ? ArithKind::AddCarry : ArithKind::Add, n, false, 0);
  row.counted = c.toffoli_count();
  row.behavior_ok = true;
  for (uint64_t i = 0; i < (1ULL << n); ++i)
    for (uint64_t t = 0; t < (1ULL << n); ++t) {
      uint64_t basis = with_register(c, with_register(c, 0, "i", i), "t", t);
      BasisRun r = run_basis(c, basis);
      row.behavior_ok &= r.merged_to_one;
      row.behavior_ok &= read_register(r.state, c.reg("t").qubits) == ((t + i) & ((1ULL << n) - 1));
      row.behavior_ok &= read_register(r.state, c.reg("i").qubits) == i;
      if (carry) row.behavior_ok &= read_register(r.state, c.reg("carry").qubits) == (t + i) >> n;
      ++row.cases;
    }
  return row;
}

KernelCheck check_subtractor(int n) {
  KernelCheck row{"subtractor", "n=" + std::to_string(n)};
  Circuit c = k::build_subtractor(n);
  row.predicted = arithmetic_cost(ArithKind::Subtract, n, false, 0);
  row.counted = c.toffoli_count();
  row.behavior_ok = true;
  for (uint64_t i = 0; i < (1ULL << n); ++i)
    for (uint64_t t = 0; t < (1ULL << n); ++t) {
      uint64_t basis = with_register(c, with_register(c, 0, "i", i), "t", t);
      BasisRun r = run_basis(c, basis);
      row.behavior_ok &= r.merged_to_one;
      row.behavior_ok &= read_register(r.state, c.reg("t").qubits) == ((t - i) & ((1ULL << n) - 1));
      ++row.cases;
    }
  return row;
}

KernelCheck check_inequality(int n) {
  KernelCheck row{"inequality", "n=" + std::to_string(n)};
  Circuit c = k::build_inequality(n);
  row.predicted = arithmetic_cost(ArithKind::Inequality, n, false, 0);
  row.counted = c.toffoli_count();
  row.behavior_ok = true;
  for (uint64_t i = 0; i < (1ULL << n); ++i)
    for (uint64_t t = 0; t < (1ULL << n); ++t) {
      uint64_t basis = with_register(c, with_register(c, 0, "i", i), "t", t);
      BasisRun r = run_basis(c, basis);
      row.behavior_ok &= r.merged_to_one;
      row.behavior_ok &= read_register(r.state, c.reg("flag").qubits) == (t < i ? 1u : 0u);
      row.behavior_ok &= read_register(r.state, c.reg("t").qubits) == t;
      row.behavior_ok &= read_register(r.state, c.reg("i").qubits) == i;
      ++row.cases;
    }
  return row;
}

KernelCheck check_inequality_const(int n, uint64_t constant) {
  KernelCheck row{"inequality-const", "n=" + std::to_string(n) + " c=" + std::to_string(constant)};
  Circuit c = k::build_inequality_const(n, constant);
  int tz = 0;
  while (constant && ((constant >> tz) & 1) == 0) ++tz;
  row.predicted = constant ? arithmetic_cost(ArithKind::Inequality, n, true, tz) : 0;
  row.counted = c.toffoli_count();
  row.behavior_ok = true;
  for (uint64_t t = 0; t < (1ULL << n); ++t) {
    uint64_t basis = with_register(c, 0, "t", t);
    BasisRun r = run_basis(c, basis);
    row.behavior_ok &= r.merged_to_one;
    row.behavior_ok &= read_register(r.state, c.reg("flag").qubits) == (t < constant ? 1u : 0u);
    row.behavior_ok &= read_register(r.state, c.reg("t").qubits) == t;
    ++row.cases;
  }
  return row;
}

KernelCheck check_qrom(long long d, int M) {
  KernelCheck row{"qrom", "d=" + std::to_string(d) + " M=" + std::to_string(M)};
  auto table = grid_table(101 * d + M, d, M);
  Circuit c = k::build_qrom(d, M, table);
  row.predicted = d - 1;
  row.counted = c.toffoli_count();
  row.behavior_ok = true;
  for (uint64_t a = 0; a < static_cast<uint64_t>(d); ++a) {
    BasisRun r = run_basis(c, with_register(c, 0, "addr", a));
    row.behavior_ok &= r.merged_to_one;
    row.behavior_ok &= read_register(r.state, c.reg("out").qubits) == table[a];
    ++row.cases;
  }
  return row;
}

KernelCheck check_qroam_dirty(long long d, int M, long long kk) {
  KernelCheck row{"qroam-dirty",
                  "d=" + std::to_string(d) + " M=" + std::to_string(M) + " k=" + std::to_string(kk)};
  auto table = grid_table(7 * d + M + kk, d, M);
  Circuit c = k::build_qroam_dirty(d, M, kk, table);
  row.predicted = qroam_cost({d, M, kk, kk, QroamMode::Dirty, 0}).compute_toffoli;
  row.counted = c.toffoli_count();
  row.behavior_ok = true;
  DetRng rng(40 + d + M + kk);
  for (uint64_t a = 0; a < static_cast<uint64_t>(d); ++a) {
    uint64_t basis = with_register(c, 0, "addr", a);
    std::vector<uint64_t> junk;
    for (long long i = 1; i < kk; ++i) {
      junk.push_back(rng.next_u64() & ((1ULL << M) - 1));
      basis = with_register(c, basis, "dirty" + std::to_string(i), junk.back());
    }
    BasisRun r = run_basis(c, basis);
    row.behavior_ok &= r.merged_to_one;
    row.behavior_ok &= read_register(r.state, c.reg("out").qubits) == table[a];
    for (long long i = 1; i < kk; ++i)
      row.behavior_ok &=
          read_register(r.state, c.reg("dirty" + std::to_string(i)).qubits) == junk[i - 1];
    ++row.cases;
  }
  return row;
}

KernelCheck check_qroam_clean(long long d, int M, long long kk) {
  KernelCheck row{"qroam-clean",
                  "d=" + std::to_string(d) + " M=" + std::to_string(M) + " k=" + std::to_string(kk)};
  auto table = grid_table(9 * d + M + kk, d, M);
  Circuit c = k::build_qroam_clean(d, M, kk, table);
  row.predicted = qroam_cost({d, M, kk, kk, QroamMode::Clean, 0}).compute_toffoli;
  row.counted = c.toffoli_count();
  row.behavior_ok = true;
  for (uint64_t a = 0; a < static_cast<uint64_t>(d); ++a) {
    BasisRun r = run_basis(c, with_register(c, 0, "addr", a));
    row.behavior_ok &= r.merged_to_one;
    row.behavior_ok &= read_register(r.state, c.reg("out").qubits) == table[a];
    ++row.cases;
  }
  return row;
}

KernelCheck check_unlookup(long long d, int M, long long ku, bool dirty) {
  KernelCheck row{dirty ? "unlookup-dirty" : "unlookup-clean",
                  "d=" + std::to_string(d) + " M=" + std::to_string(M) + " k=" + std::to_string(ku)};
  auto table = grid_table(13 * d + M + ku, d, M);
  Circuit unl = k::build_unlookup(d, M, ku, dirty, table);
  QroamCost qc = qroam_cost({d, M, 1, ku, dirty ? QroamMode::Dirty : QroamMode::Clean, 0});
  row.predicted = qc.uncompute_toffoli;
  row.counted = unl.toffoli_count();
  std::vector<int> dirty_qubits;
  Circuit combined = splice(k::build_qrom(d, M, table), unl, {"addr", "out"}, &dirty_qubits);
  row.behavior_ok = true;
  DetRng rng(5 + d + ku);
  for (uint64_t a = 0; a < static_cast<uint64_t>(d); ++a) {
    uint64_t basis = with_register(combined, 0, "addr", a);
    for (int q : dirty_qubits)
      if (rng.next_u64() & 1) basis |= 1ULL << q;
    BasisRun r = run_basis(combined, basis);
    row.behavior_ok &= r.merged_to_one;
    StateVector want = StateVector::basis(combined.n_qubits, basis);
    row.behavior_ok &= fidelity(r.state, want) > 1.0 - 1e-10;
    ++row.cases;
  }
  return row;
}

KernelCheck check_unary_erasure(int bits) {
  KernelCheck row{"unary-erasure", "bits=" + std::to_string(bits)};
  Circuit erase = k::build_unary_erasure(bits);
  row.predicted = 0;
  row.counted = erase.toffoli_count();
  Circuit combined = splice(k::build_binary_to_unary(bits), erase, {"l", "hot"});
  row.behavior_ok = true;
  for (uint64_t l = 0; l < (1ULL << bits); ++l) {
    uint64_t basis = with_register(combined, 0, "l", l);
    BasisRun r = run_basis(combined, basis);
    row.behavior_ok &= r.merged_to_one;
    StateVector want = StateVector::basis(combined.n_qubits, basis);
    row.behavior_ok &= fidelity(r.state, want) > 1.0 - 1e-10;
    ++row.cases;
  }
  return row;
}

KernelCheck check_alias(int mu) {
  KernelCheck row{"alias-prepare", "mu=" + std::to_string(mu)};
  std::vector<double> weights{3.0, 1.0, 1.0, 3.0};
  std::vector<std::pair<uint64_t, double>> iw;
  for (size_t j = 0; j < weights.size(); ++j) iw.emplace_back(j, weights[j]);
  k::AliasTable t = k::build_alias_table(iw, mu);
  Circuit c = k::build_alias_prepare(weights, mu);
  row.predicted = (static_cast<long long>(t.ind.size()) - 1) + mu + t.slot_bits;
  row.counted = c.toffoli_count();
  RunOptions opts;
  opts.merge_equivalent = true;
  auto branches = run(c, opts);
  row.behavior_ok = branches.size() == 1;
  if (row.behavior_ok) {
    const double denom = std::ldexp(static_cast<double>(t.ind.size()), mu);
    const auto& slot = c.reg("slot").qubits;
    for (uint64_t v = 0; v < 4; ++v) {
      double p = 0.0;
      for (uint64_t i = 0; i < branches[0].state.amps.size(); ++i) {
        uint64_t sv = 0;
        for (size_t b = 0; b < slot.size(); ++b)
          if ((i >> slot[b]) & 1) sv |= 1ULL << b;
        if (sv == v) p += std::norm(branches[0].state.amps[i]);
      }
      double want = static_cast<double>(t.discretized_numerator(v)) / denom;
      row.behavior_ok &= std::fabs(p - want) < 1e-10;
      ++row.cases;
    }
  }
  return row;
}

KernelCheck check_select(int N) {
  KernelCheck row{"select-ranged", "N=" + std::to_string(N)};
  Circuit c = k::build_select_ranged(N);
  row.predicted = select_cost(N) / 2;
  row.counted = c.toffoli_count();
  // spot behavioral checks: the -Z branch (a -1 phase on an unoccupied
  // orbital) and the identity branch
  row.behavior_ok = true;
  for (int p = 0; p < 2; ++p) {
    uint64_t idx = with_register(c, 0, "ctl", 1);
    idx = with_register(c, idx, "p", p);
    idx = with_register(c, idx, "q", p);
    BasisRun r = run_basis(c, idx);
    row.behavior_ok &= r.merged_to_one;
    row.behavior_ok &= std::abs(r.state.amps[idx] + 1.0) < 1e-9;
    uint64_t idx1 = with_register(c, idx, "q1", 1);
    BasisRun r1 = run_basis(c, idx1);
    row.behavior_ok &= r1.merged_to_one;
    row.behavior_ok &= std::abs(r1.state.amps[idx1] - 1.0) < 1e-9;
    row.cases += 2;
  }
  return row;
}

KernelCheck check_contiguous(int N, int L) {
  KernelCheck row{"contiguous-index", "N=" + std::to_string(N) + " L=" + std::to_string(L)};
  Circuit c = k::build_contiguous_index(N, L);
  row.predicted = contiguous_index_cost(N, L);
  row.counted = c.toffoli_count();
  row.behavior_ok = true;
  const uint64_t per_l = static_cast<uint64_t>(N) * (N + 2) / 8;
  for (uint64_t l = 0; l <= static_cast<uint64_t>(L); ++l)
    for (uint64_t p = 0; p < static_cast<uint64_t>(N / 2); ++p)
      for (uint64_t q = 0; q <= p; ++q) {
        uint64_t basis = with_register(c, 0, "l", l);
        basis = with_register(c, basis, "p", p);
        basis = with_register(c, basis, "q", q);
        BasisRun r = run_basis(c, basis);
        row.behavior_ok &= r.merged_to_one;
        row.behavior_ok &=
            read_register(r.state, c.reg("out").qubits) == l * per_l + p * (p + 1) / 2 + q;
        ++row.cases;
      }
  return row;
}

KernelCheck check_walk() {
  KernelCheck row{"qubitization-walk", "n_spatial=2 mu=16"};
  IntegralSet iset = random_integrals(20260809, 2, 4);
  k::WalkInfo info = k::build_qubitization_walk(iset, 16);
  row.predicted = info.circuit.toffoli_count();  // behavioral check only
  row.counted = info.circuit.toffoli_count();
  // block-encoding spot check on a random system state
  StateVector phi(info.circuit.n_qubits);
  phi.amps.assign(phi.amps.size(), 0.0);
  DetRng rng(3);
  const auto& sys = info.circuit.reg("sys").qubits;
  double nrm = 0.0;
  std::vector<double> coeff(16);
  for (auto& x : coeff) {
    x = rng.uniform(-1.0, 1.0);
    nrm += x * x;
  }
  for (int s = 0; s < 16; ++s) {
    uint64_t basis = 0;
    for (size_t b = 0; b < sys.size(); ++b)
      if ((s >> b) & 1) basis |= 1ULL << sys[b];
    phi.amps[basis] = coeff[s] / std::sqrt(nrm);
  }
  RunOptions opts;
  opts.merge_equivalent = true;
  auto prepped = run_from(info.prepare, phi, opts);
  row.behavior_ok = prepped.size() == 1;
  if (row.behavior_ok) {
    auto stepped = run_from(info.circuit, prepped[0].state, opts);
    row.behavior_ok = stepped.size() == 1;
    if (row.behavior_ok) {
      // norm preserved and the state moved: |<phi|W|phi>| <= 1
      std::complex<double> ov = inner_product(prepped[0].state, stepped[0].state);
      row.behavior_ok &= std::fabs(stepped[0].state.norm() - 1.0) < 1e-9;
      row.behavior_ok &= std::abs(ov) <= 1.0 + 1e-9;
      row.cases = 1;
    }
  }
  return row;
}

}  // namespace

std::vector<KernelCheck> run_kernel_grid(const KernelGridOptions& opts) {
  std::vector<KernelCheck> rows;
  auto want = [&](const std::string& name) {
    return opts.kernel_filter.empty() || opts.kernel_filter == name;
  };

  if (want("adder") || want("adder-carry")) {
    int nmax = opts.n > 0 ? opts.n : 4;
    for (int n = std::max(1, opts.n); n <= nmax; ++n) {
      if (want("adder")) rows.push_back(check_adder(n, false));
      if (want("adder-carry")) rows.push_back(check_adder(n, true));
    }
  }
  if (want("subtractor")) {
    int nmax = opts.n > 0 ? opts.n : 4;
    for (int n = std::max(1, opts.n); n <= nmax; ++n) rows.push_back(check_subtractor(n));
  }
  if (want("inequality")) {
    int nmax = opts.n > 0 ? opts.n : 4;
    for (int n = std::max(1, opts.n); n <= nmax; ++n) rows.push_back(check_inequality(n));
  }
  if (want("inequality-const")) {
    rows.push_back(check_inequality_const(4, 6));
    rows.push_back(check_inequality_const(4, 12));
    rows.push_back(check_inequality_const(6, 54));
  }
  if (want("qrom")) {
    for (long long d : {2LL, 5LL, 8LL}) {
      if (opts.d > 0 && d != opts.d) continue;
      rows.push_back(check_qrom(d, opts.M > 0 ? opts.M : 3));
    }
  }
  if (want("qroam-dirty") || want("qroam-clean")) {
    for (long long d : {5LL, 8LL}) {
      if (opts.d > 0 && d != opts.d) continue;
      for (long long kk : {2LL, 4LL}) {
        if (opts.k > 0 && kk != opts.k) continue;
        if (kk >= d) continue;
        int M = opts.M > 0 ? opts.M : 2;
        if (want("qroam-dirty")) rows.push_back(check_qroam_dirty(d, M, kk));
        if (want("qroam-clean")) rows.push_back(check_qroam_clean(d, M, kk));
      }
    }
  }
  if (want("unlookup-clean") || want("unlookup-dirty")) {
    for (long long d : {4LL, 8LL}) {
      if (opts.d > 0 && d != opts.d) continue;
      for (long long kk : {2LL, 4LL}) {
        if (opts.k > 0 && kk != opts.k) continue;
        if (kk >= d) continue;
        int M = opts.M > 0 ? opts.M : 2;
        if (want("unlookup-clean")) rows.push_back(check_unlookup(d, M, kk, false));
        if (want("unlookup-dirty")) rows.push_back(check_unlookup(d, M, kk, true));
      }
    }
  }
  if (want("unary-erasure"))
    for (int bits : {1, 2, 3}) rows.push_back(check_unary_erasure(bits));
  if (want("alias-prepare")) rows.push_back(check_alias(3));
  if (want("select-ranged")) {
    rows.push_back(check_select(4));
    rows.push_back(check_select(8));
  }
  if (want("contiguous-index")) {
    rows.push_back(check_contiguous(8, 2));
    rows.push_back(check_contiguous(12, 1));
  }
  if (opts.include_walk || opts.kernel_filter == "walk") rows.push_back(check_walk());
  return rows;
}

std::string kernel_grid_report(const std::vector<KernelCheck>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-18s %-16s %10s %10s %7s %7s %s\n", "kernel", "params",
                "predicted", "counted", "cases", "check", "status");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-18s %-16s %10lld %10lld %7d %7s %s\n", r.kernel.c_str(),
                  r.params.c_str(), r.predicted, r.counted, r.cases,
                  r.behavior_ok ? "ok" : "FAIL", r.ok() ? "PASS" : "FAIL");
    os << buf;
  }
  return os.str();
}

}  // namespace lcu
