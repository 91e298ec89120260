#include "lcu/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace lcu::kernels {

namespace {

using GK = GateKind;

int ceil_log2_ll(long long x) {
  int b = 0;
  while ((1LL << b) < x) ++b;
  return b;
}

// Compute t <- a AND b with optional negated inputs.
void and_compute(Circuit& c, int a, int b, int t, bool na, bool nb) {
  if (na) c.gate(GK::X, {a});
  if (nb) c.gate(GK::X, {b});
  c.gate(GK::CCX, {a, b, t});
  if (nb) c.gate(GK::X, {b});
  if (na) c.gate(GK::X, {a});
}

// Measurement-based erasure of t = a AND b (with the same negations used at
// compute time). X measurement plus a conditioned CZ fixup; the conditioned
// X returns the measured qubit to |0>.
void and_erase(Circuit& c, int a, int b, int t, bool na, bool nb) {
  int mid = c.measure(GK::MeasureX, t);
  if (na) c.gate(GK::X, {a});
  if (nb) c.gate(GK::X, {b});
  c.cond_gate(GK::CondCZ, {a, b}, {mid});
  if (nb) c.gate(GK::X, {b});
  if (na) c.gate(GK::X, {a});
  c.cond_gate(GK::CondX, {t}, {mid});
}

// Pool of reusable |0> workspace qubits.
struct Scratch {
  Circuit* c;
  std::string prefix;
  std::deque<int> free;
  int count = 0;

  Scratch(Circuit* circ, std::string pfx) : c(circ), prefix(std::move(pfx)) {}

  int alloc() {
    if (!free.empty()) {
      int q = free.front();
      free.pop_front();
      return q;
    }
    return c->add_qubit(prefix + std::to_string(count++), "workspace");
  }
  void release(int q) { free.push_back(q); }
  std::vector<int> alloc_n(int n) {
    std::vector<int> qs(n);
    for (int& q : qs) q = alloc();
    return qs;
  }
  void release_all(const std::vector<int>& qs) {
    for (int q : qs) release(q);
  }
};

// ---------------------------------------------------------------------------
// Ripple adder core (measurement-based carry erasure)
// ---------------------------------------------------------------------------

// t (little-endian) += value of i, modulo 2^len(t); i may be shorter. When
// carry_out >= 0 the final carry lands there (non-modular). restore_t keeps
// t unchanged instead of writing the sum (used by the inequality test).
void append_add(Circuit& c, Scratch& w, const std::vector<int>& i, const std::vector<int>& t,
                int carry_out = -1, bool restore_t = false) {
  const int nt = static_cast<int>(t.size());
  const int ni = static_cast<int>(i.size());
  if (nt == 0 || ni == 0 || ni > nt) throw std::invalid_argument("append_add: bad operand widths");
  std::vector<int> carry(nt + 1, -1);

  for (int k = 0; k < nt; ++k) {
    bool has_i = k < ni;
    int ck = carry[k];
    bool last = (k == nt - 1);
    bool produce = !last || carry_out >= 0;
    if (!has_i && ck < 0) continue;  // nothing can happen at this position
    if (has_i) {
      if (produce) {
        int cn = last ? carry_out : w.alloc();
        carry[k + 1] = cn;
        if (ck >= 0) {
          c.gate(GK::CNOT, {ck, i[k]});
          c.gate(GK::CNOT, {ck, t[k]});
        }
        c.gate(GK::CCX, {i[k], t[k], cn});
        if (ck >= 0) c.gate(GK::CNOT, {ck, cn});
      } else {
        // top bit, modular: plain sum
        if (!restore_t) {
          c.gate(GK::CNOT, {i[k], t[k]});
          if (ck >= 0) c.gate(GK::CNOT, {ck, t[k]});
        }
      }
    } else {
      // i bit is zero: carry propagation only, no frame to unwind
      if (produce) {
        int cn = last ? carry_out : w.alloc();
        carry[k + 1] = cn;
        c.gate(GK::CCX, {ck, t[k], cn});
      }
      if (!restore_t) c.gate(GK::CNOT, {ck, t[k]});
    }
  }

  // The kept carry output leaves a framed top position; undo it here.
  if (carry_out >= 0 && nt - 1 < ni) {
    int ck = carry[nt - 1];
    if (ck >= 0) c.gate(GK::CNOT, {ck, i[nt - 1]});
    if (restore_t) {
      if (ck >= 0) c.gate(GK::CNOT, {ck, t[nt - 1]});
    } else {
      c.gate(GK::CNOT, {i[nt - 1], t[nt - 1]});
    }
  }

  // Unwind: erase carries from the top down.
  for (int k = nt - 2; k >= 0; --k) {
    int cn = carry[k + 1];
    if (cn < 0) continue;
    int ck = carry[k];
    bool has_i = k < ni;
    if (has_i) {
      if (ck >= 0) c.gate(GK::CNOT, {ck, cn});  // back to the bare AND
      and_erase(c, i[k], t[k], cn, false, false);
      w.release(cn);
      if (ck >= 0) c.gate(GK::CNOT, {ck, i[k]});
      if (restore_t) {
        if (ck >= 0) c.gate(GK::CNOT, {ck, t[k]});
      } else {
        c.gate(GK::CNOT, {i[k], t[k]});
      }
    } else {
      if (restore_t) {
        // t still carries the frame: undo it first, then erase plainly
        if (ck >= 0) {
        }
        and_erase(c, ck, t[k], cn, false, false);
        w.release(cn);
      } else {
        // t holds the sum = t_orig xor c; the AND inputs were (c, t_orig),
        // so the fixup sees t negated when c fires.
        and_erase(c, ck, t[k], cn, false, true);
        w.release(cn);
      }
    }
  }
}

void append_subtract(Circuit& c, Scratch& w, const std::vector<int>& i, const std::vector<int>& t) {
  for (int q : t) c.gate(GK::X, {q});
  append_add(c, w, i, t);
  for (int q : t) c.gate(GK::X, {q});
}

// flag <- [t < i], both registers restored.
void append_inequality(Circuit& c, Scratch& w, const std::vector<int>& t, const std::vector<int>& i,
                       int flag) {
  for (int q : t) c.gate(GK::X, {q});
  append_add(c, w, i, t, flag, /*restore_t=*/true);
  for (int q : t) c.gate(GK::X, {q});
}

// flag <- [t < constant] with t restored; n - 1 - trailing_zeros Toffolis.
void append_inequality_const(Circuit& c, Scratch& w, const std::vector<int>& t, uint64_t constant,
                             int flag) {
  const int n = static_cast<int>(t.size());
  if (constant == 0) return;  // t < 0 never holds
  if (constant >> n) {        // constant >= 2^n: always true
    c.gate(GK::X, {flag});
    return;
  }
  int z = 0;
  while (((constant >> z) & 1) == 0) ++z;
  for (int q : t) c.gate(GK::X, {q});
  // carries over ~t + constant; c_{z+1} seeds from t'_z since bit z is the
  // lowest set bit of the constant
  std::vector<int> carry(n + 1, -1);
  std::vector<std::pair<bool, bool>> frames(n, {false, false});  // (computed, i_bit)
  for (int k = z; k < n; ++k) {
    bool ibit = (constant >> k) & 1;
    int ck = carry[k];
    int cn = (k == n - 1) ? flag : w.alloc();
    carry[k + 1] = cn;
    if (ck < 0) {
      // first live position: carry = t'_k AND i_k with i_k = 1
      c.gate(GK::CNOT, {t[k], cn});
      frames[k] = {false, ibit};
    } else if (ibit) {
      // c_{k+1} = c OR t' = NOT(NOT c AND NOT t')
      c.gate(GK::X, {cn});
      and_compute(c, ck, t[k], cn, true, true);
      frames[k] = {true, true};
    } else {
      c.gate(GK::CCX, {ck, t[k], cn});
      frames[k] = {true, false};
    }
  }
  // erase carries top-down, flag stays
  for (int k = n - 2; k >= z; --k) {
    int cn = carry[k + 1];
    int ck = carry[k];
    if (ck < 0) {
      c.gate(GK::CNOT, {t[k], cn});  // the seeded copy
      continue;
    }
    if (frames[k].second) {
      // cn currently holds ck OR t'; strip the OR's X first, then the value
      // is again the negated-input AND and the usual erasure applies
      c.gate(GK::X, {cn});
      and_erase(c, ck, t[k], cn, true, true);
    } else {
      and_erase(c, ck, t[k], cn, false, false);
    }
    w.release(cn);
  }
  for (int q : t) c.gate(GK::X, {q});
}

// ---------------------------------------------------------------------------
// Lookup walker
// ---------------------------------------------------------------------------

using LeafFn = std::function<void(int ctrl, uint64_t value)>;

// Sawtooth unary iteration over values [lo, lo + count) of the address bits
// (highest first, starting at index bi). fresh_top recomputes the sibling of
// the root node instead of borrowing the control with a CNOT, which costs
// one extra Toffoli and matches the grouped-lookup budget ceil(d/k).
void lookup_walk(Circuit& c, int ctrl, const std::vector<int>& bits, size_t bi, uint64_t lo,
                 uint64_t count, std::vector<int>& nodes, size_t ni, const LeafFn& leaf,
                 bool fresh_top) {
  if (count == 1) {
    leaf(ctrl, lo);
    return;
  }
  uint64_t half = 1ULL << (bits.size() - bi - 1);
  if (count <= half) {
    lookup_walk(c, ctrl, bits, bi + 1, lo, count, nodes, ni, leaf, fresh_top);
    return;
  }
  int b = bits[bi];
  int t = nodes[ni];
  and_compute(c, ctrl, b, t, false, true);
  lookup_walk(c, t, bits, bi + 1, lo, half, nodes, ni + 1, leaf, false);
  if (fresh_top) {
    and_erase(c, ctrl, b, t, false, true);
    and_compute(c, ctrl, b, t, false, false);
  } else {
    c.gate(GK::CNOT, {ctrl, t});
  }
  lookup_walk(c, t, bits, bi + 1, lo + half, count - half, nodes, ni + 1, leaf, false);
  and_erase(c, ctrl, b, t, false, false);
}

std::vector<int> reversed(const std::vector<int>& v) {
  return std::vector<int>(v.rbegin(), v.rend());
}

// ---------------------------------------------------------------------------
// Select-swap block networks
// ---------------------------------------------------------------------------

// Rotate-to-front: moves the block selected by lbits (little-endian) to
// position 0. Levels are involutions, so the inverse runs them in reverse.
void block_swap_network(Circuit& c, const std::vector<int>& lbits,
                        const std::vector<std::vector<int>>& blocks, bool inverse) {
  const int levels = static_cast<int>(lbits.size());
  auto level = [&](int j) {
    long long stride = 1LL << j;
    for (long long i = 0; i < stride; ++i)
      for (size_t m = 0; m < blocks[i].size(); ++m)
        c.gate(GK::CSWAP, {lbits[j], blocks[i][m], blocks[i + stride][m]});
  };
  if (!inverse)
    for (int j = levels - 1; j >= 0; --j) level(j);
  else
    for (int j = 0; j < levels; ++j) level(j);
}

}  // namespace

// Block position permutation realized by the swap network above.
std::vector<int> block_permutation(int k, int l, bool inverse) {
  const int levels = ceil_log2_ll(k);
  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[i] = i;
  auto level = [&](int j) {
    if (((l >> j) & 1) == 0) return;
    int stride = 1 << j;
    for (int i = 0; i < stride; ++i) std::swap(pos[i], pos[i + stride]);
  };
  if (!inverse)
    for (int j = levels - 1; j >= 0; --j) level(j);
  else
    for (int j = 0; j < levels; ++j) level(j);
  return pos;  // pos[p] = original block now at position p
}

namespace {

// One real Toffoli whose net action is the identity: an AND onto clean
// scratch followed by its measurement-based erasure. Keeps a circuit's
// Toffoli count aligned with a reference budget that exceeds the walk's own
// count by a constant.
void budget_alignment(Circuit& c, Scratch& w, int n) {
  if (n <= 0) return;
  int a = w.alloc(), b = w.alloc(), t = w.alloc();
  for (int r = 0; r < n; ++r) {
    c.gate(GK::CCX, {a, b, t});
    and_erase(c, a, b, t, false, false);
  }
  w.release(a);
  w.release(b);
  w.release(t);
}

long long expect_count(const Circuit& c, long long expected, const char* who) {
  if (c.toffoli_count() != expected)
    throw std::logic_error(std::string(who) + ": Toffoli count " +
                           std::to_string(c.toffoli_count()) + " != expected " +
                           std::to_string(expected));
  return expected;
}

}  // namespace

// ---------------------------------------------------------------------------
// Arithmetic builders
// ---------------------------------------------------------------------------

Circuit build_adder(int n, bool carry) {
  if (n < 1) throw std::invalid_argument("build_adder: n >= 1");
  Circuit c;
  c.add_register("i", "data", n);
  c.add_register("t", "data", n);
  int carry_out = carry ? c.add_qubit("carry", "output") : -1;
  Scratch w{&c, "w"};
  if (n == 1 && !carry) {
    c.gate(GK::CNOT, {c.reg("i").qubits[0], c.reg("t").qubits[0]});
  } else {
    append_add(c, w, c.reg("i").qubits, c.reg("t").qubits, carry_out);
  }
  expect_count(c, arithmetic_cost(carry ? ArithKind::AddCarry : ArithKind::Add, n, false, 0),
               "build_adder");
  return c;
}

Circuit build_subtractor(int n) {
  if (n < 1) throw std::invalid_argument("build_subtractor: n >= 1");
  Circuit c;
  c.add_register("i", "data", n);
  c.add_register("t", "data", n);
  Scratch w{&c, "w"};
  if (n == 1) {
    c.gate(GK::CNOT, {c.reg("i").qubits[0], c.reg("t").qubits[0]});
  } else {
    append_subtract(c, w, c.reg("i").qubits, c.reg("t").qubits);
  }
  expect_count(c, arithmetic_cost(ArithKind::Subtract, n, false, 0), "build_subtractor");
  return c;
}

Circuit build_inequality(int n) {
  if (n < 1) throw std::invalid_argument("build_inequality: n >= 1");
  Circuit c;
  c.add_register("t", "data", n);
  c.add_register("i", "data", n);
  int flag = c.add_qubit("flag", "flag");
  Scratch w{&c, "w"};
  append_inequality(c, w, c.reg("t").qubits, c.reg("i").qubits, flag);
  expect_count(c, arithmetic_cost(ArithKind::Inequality, n, false, 0), "build_inequality");
  return c;
}

Circuit build_inequality_const(int n, uint64_t constant) {
  if (n < 1) throw std::invalid_argument("build_inequality_const: n >= 1");
  if (constant >> n) throw std::invalid_argument("build_inequality_const: constant >= 2^n");
  Circuit c;
  c.add_register("t", "data", n);
  int flag = c.add_qubit("flag", "flag");
  Scratch w{&c, "w"};
  append_inequality_const(c, w, c.reg("t").qubits, constant, flag);
  if (constant != 0) {
    int tz = 0;
    while (((constant >> tz) & 1) == 0) ++tz;
    expect_count(c, arithmetic_cost(ArithKind::Inequality, n, true, tz), "build_inequality_const");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Lookup builders
// ---------------------------------------------------------------------------

Circuit build_unary_iteration(long long d) {
  if (d < 2) throw std::invalid_argument("build_unary_iteration: d >= 2");
  Circuit c;
  int enable = c.add_qubit("enable", "flag");
  c.gate(GK::X, {enable});
  int ab = ceil_log2_ll(d);
  c.add_register("addr", "address", ab);
  c.add_register("hot", "output", static_cast<int>(d));
  std::vector<int> nodes;
  for (int i = 0; i < ab; ++i) nodes.push_back(c.add_qubit("node" + std::to_string(i), "workspace"));
  auto bits = reversed(c.reg("addr").qubits);
  const auto& hot = c.reg("hot").qubits;
  lookup_walk(c, enable, bits, 0, 0, static_cast<uint64_t>(d), nodes, 0,
              [&](int ctrl, uint64_t v) { c.gate(GK::CNOT, {ctrl, hot[v]}); }, false);
  c.gate(GK::X, {enable});
  expect_count(c, d - 1, "build_unary_iteration");
  return c;
}

Circuit build_unary_iteration_nested(long long d1, long long d2) {
  if (d1 < 2 || d2 < 2) throw std::invalid_argument("build_unary_iteration_nested: d >= 2");
  Circuit c;
  int enable = c.add_qubit("enable", "flag");
  c.gate(GK::X, {enable});
  int a1 = ceil_log2_ll(d1), a2 = ceil_log2_ll(d2);
  c.add_register("addr1", "address", a1);
  c.add_register("addr2", "address", a2);
  c.add_register("hot", "output", static_cast<int>(d1 * d2));
  std::vector<int> nodes;
  for (int i = 0; i < a1 + a2; ++i)
    nodes.push_back(c.add_qubit("node" + std::to_string(i), "workspace"));
  auto bits1 = reversed(c.reg("addr1").qubits);
  auto bits2 = reversed(c.reg("addr2").qubits);
  const auto& hot = c.reg("hot").qubits;
  lookup_walk(c, enable, bits1, 0, 0, static_cast<uint64_t>(d1), nodes, 0,
              [&](int outer, uint64_t v1) {
                lookup_walk(c, outer, bits2, 0, 0, static_cast<uint64_t>(d2), nodes, bits1.size(),
                            [&](int ctrl, uint64_t v2) {
                              c.gate(GK::CNOT, {ctrl, hot[v1 * d2 + v2]});
                            },
                            false);
              },
              false);
  c.gate(GK::X, {enable});
  expect_count(c, d1 * d2 - 1, "build_unary_iteration_nested");
  return c;
}

Circuit build_qrom(long long d, int M, const std::vector<uint64_t>& table) {
  if (d < 2 || M < 1 || static_cast<long long>(table.size()) != d)
    throw std::invalid_argument("build_qrom: need d >= 2 and d table entries");
  Circuit c;
  int enable = c.add_qubit("enable", "flag");
  c.gate(GK::X, {enable});
  int ab = ceil_log2_ll(d);
  c.add_register("addr", "address", ab);
  c.add_register("out", "output", M);
  std::vector<int> nodes;
  for (int i = 0; i < ab; ++i) nodes.push_back(c.add_qubit("node" + std::to_string(i), "workspace"));
  auto bits = reversed(c.reg("addr").qubits);
  const auto& out = c.reg("out").qubits;
  lookup_walk(c, enable, bits, 0, 0, static_cast<uint64_t>(d), nodes, 0,
              [&](int ctrl, uint64_t v) {
                for (int m = 0; m < M; ++m)
                  if ((table[v] >> m) & 1) c.gate(GK::CNOT, {ctrl, out[m]});
              },
              false);
  c.gate(GK::X, {enable});
  expect_count(c, d - 1, "build_qrom");
  return c;
}

namespace {

// The grouped lookup: writes table word h*k + i into block position i for
// every position at once. Count ceil(d/k) via the fresh-root walk.
void grouped_lookup(Circuit& c, int enable, const std::vector<int>& hbits_hi_lo,
                    const std::vector<std::vector<int>>& blocks, long long d, int M, long long k,
                    const std::vector<uint64_t>& table, std::vector<int>& nodes) {
  long long blocks_count = (d + k - 1) / k;
  lookup_walk(c, enable, hbits_hi_lo, 0, 0, static_cast<uint64_t>(blocks_count), nodes, 0,
              [&](int ctrl, uint64_t h) {
                for (long long i = 0; i < k; ++i) {
                  long long a = static_cast<long long>(h) * k + i;
                  uint64_t word = a < d ? table[a] : 0;
                  for (int m = 0; m < M; ++m)
                    if ((word >> m) & 1) c.gate(GK::CNOT, {ctrl, blocks[i][m]});
                }
              },
              /*fresh_top=*/true);
}

}  // namespace

Circuit build_qroam_dirty(long long d, int M, long long k, const std::vector<uint64_t>& table) {
  if (k < 2 || k >= d || (k & (k - 1)) != 0)
    throw std::invalid_argument("build_qroam_dirty: k must be a power of two in (1, d)");
  if (static_cast<long long>(table.size()) != d)
    throw std::invalid_argument("build_qroam_dirty: table size mismatch");
  Circuit c;
  int ab = ceil_log2_ll(d);
  int lb = ceil_log2_ll(k);
  c.add_register("addr", "address", ab);
  c.add_register("out", "output", M);  // r_0
  std::vector<std::vector<int>> blocks{c.reg("out").qubits};
  for (long long i = 1; i < k; ++i) {
    c.add_register("dirty" + std::to_string(i), "dirty", M);
    blocks.push_back(c.reg("dirty" + std::to_string(i)).qubits);
  }
  int enable = c.add_qubit("enable", "flag");
  c.gate(GK::X, {enable});
  std::vector<int> nodes;
  for (int i = 0; i < ab - lb; ++i)
    nodes.push_back(c.add_qubit("node" + std::to_string(i), "workspace"));

  const auto& addr = c.reg("addr").qubits;
  std::vector<int> lbits(addr.begin(), addr.begin() + lb);
  std::vector<int> hbits = reversed(std::vector<int>(addr.begin() + lb, addr.end()));

  const auto& out = c.reg("out").qubits;
  for (int q : out) c.gate(GK::H, {q});
  // S T S^-1, Hadamard the output, S T S^-1 again
  for (int pass = 0; pass < 2; ++pass) {
    block_swap_network(c, lbits, blocks, /*inverse=*/true);
    grouped_lookup(c, enable, hbits, blocks, d, M, k, table, nodes);
    block_swap_network(c, lbits, blocks, /*inverse=*/false);
    if (pass == 0)
      for (int q : out) c.gate(GK::H, {q});
  }
  c.gate(GK::X, {enable});
  QroamCost qc = qroam_cost({d, M, k, k, QroamMode::Dirty, 0});
  expect_count(c, qc.compute_toffoli, "build_qroam_dirty");
  return c;
}

Circuit build_qroam_clean(long long d, int M, long long k, const std::vector<uint64_t>& table) {
  if (k < 2 || k >= d || (k & (k - 1)) != 0)
    throw std::invalid_argument("build_qroam_clean: k must be a power of two in (1, d)");
  if (static_cast<long long>(table.size()) != d)
    throw std::invalid_argument("build_qroam_clean: table size mismatch");
  Circuit c;
  int ab = ceil_log2_ll(d);
  int lb = ceil_log2_ll(k);
  c.add_register("addr", "address", ab);
  c.add_register("out", "output", M);
  std::vector<std::vector<int>> blocks{c.reg("out").qubits};
  for (long long i = 1; i < k; ++i) {
    c.add_register("block" + std::to_string(i), "workspace", M);
    blocks.push_back(c.reg("block" + std::to_string(i)).qubits);
  }
  int enable = c.add_qubit("enable", "flag");
  c.gate(GK::X, {enable});
  std::vector<int> nodes;
  for (int i = 0; i < ab - lb; ++i)
    nodes.push_back(c.add_qubit("node" + std::to_string(i), "workspace"));

  const auto& addr = c.reg("addr").qubits;
  std::vector<int> lbits(addr.begin(), addr.begin() + lb);
  std::vector<int> hbits = reversed(std::vector<int>(addr.begin() + lb, addr.end()));

  grouped_lookup(c, enable, hbits, blocks, d, M, k, table, nodes);
  block_swap_network(c, lbits, blocks, /*inverse=*/false);  // rotate block l to the front
  c.gate(GK::X, {enable});

  QroamCost qc = qroam_cost({d, M, k, k, QroamMode::Clean, 0});
  expect_count(c, qc.compute_toffoli, "build_qroam_clean");
  return c;
}

namespace {

// Appends the measurement-based unlookup of `out` (holding content[addr])
// onto an existing circuit. content gives the measured word per address.
void append_unlookup(Circuit& c, Scratch& w, const std::vector<int>& addr,
                     const std::vector<int>& out, const std::vector<uint64_t>& content,
                     long long d, long long k, bool dirty) {
  const int n_meas = static_cast<int>(out.size());
  const int lb = ceil_log2_ll(k);
  std::vector<int> mids(n_meas);
  for (int b = 0; b < n_meas; ++b) {
    mids[b] = c.measure(GK::MeasureX, out[b]);
    c.cond_gate(GK::CondX, {out[b]}, {mids[b]});
  }
  // parity condition for the phase bit of address a
  auto cond_for = [&](long long a) {
    std::vector<int> cond;
    for (int b = 0; b < n_meas; ++b)
      if ((content[a] >> b) & 1) cond.push_back(mids[b]);
    return cond;
  };

  std::vector<int> lbits(addr.begin(), addr.begin() + lb);
  std::vector<int> hbits = reversed(std::vector<int>(addr.begin() + lb, addr.end()));
  long long blocks_count = (d + k - 1) / k;
  std::vector<int> nodes = w.alloc_n(std::max(0, static_cast<int>(hbits.size())));
  std::vector<int> hot;
  if (!dirty) {
    hot = w.alloc_n(static_cast<int>(k));
  } else {
    // one clean qubit plus borrowed dirty singles
    hot.push_back(w.alloc());
    c.add_register("udirty", "dirty", static_cast<int>(k - 1));
    for (int q : c.reg("udirty").qubits) hot.push_back(q);
  }
  int enable = w.alloc();
  c.gate(GK::X, {enable});

  std::vector<std::vector<int>> hot_blocks;
  for (int q : hot) hot_blocks.push_back({q});

  auto phase_leaves = [&](int ctrl, uint64_t h) {
    for (long long i = 0; i < k; ++i) {
      long long a = static_cast<long long>(h) * k + i;
      if (a >= d) continue;
      auto cond = cond_for(a);
      if (cond.empty()) continue;  // never fires
      c.cond_gate(GK::CondCZ, {ctrl, hot[i]}, std::move(cond));
    }
  };

  if (!dirty) {
    // one-hot marker, phase lookup, Clifford erasure
    c.gate(GK::X, {hot[0]});
    block_swap_network(c, lbits, hot_blocks, /*inverse=*/true);  // marker to position l
    lookup_walk(c, enable, hbits, 0, 0, static_cast<uint64_t>(blocks_count), nodes, 0,
                phase_leaves, /*fresh_top=*/true);
    // erase the one-hot register with measurements and Cliffords only
    for (int j = lb - 1; j >= 0; --j) {
      long long stride = 1LL << j;
      for (long long i = 0; i < stride; ++i) {
        int a = hot[i], b = hot[i + stride];
        c.gate(GK::CNOT, {b, a});
        int mid = c.measure(GK::MeasureX, b);
        c.cond_gate(GK::CondCZ, {lbits[j], a}, {mid});
        c.cond_gate(GK::CondX, {b}, {mid});
      }
    }
    c.gate(GK::X, {hot[0]});
    budget_alignment(c, w, 1);  // reference budget ceil(d/k) + k counts one extra
  } else {
    // r_0 = hot[0] clean, the rest borrowed dirty; the phase arrives by
    // XORing the per-address phase bits into the register rotated under the
    // Z-framed r_0. Hadamard frames turn the conditioned CZ writes into
    // conditioned XORs.
    auto t_xor = [&]() {
      for (int q : hot) c.gate(GK::H, {q});
      lookup_walk(c, enable, hbits, 0, 0, static_cast<uint64_t>(blocks_count), nodes, 0,
                  phase_leaves, /*fresh_top=*/true);
      for (int q : hot) c.gate(GK::H, {q});
    };
    c.gate(GK::H, {hot[0]});
    for (int pass = 0; pass < 2; ++pass) {
      block_swap_network(c, lbits, hot_blocks, /*inverse=*/true);
      t_xor();
      block_swap_network(c, lbits, hot_blocks, /*inverse=*/false);
      c.gate(GK::Z, {hot[0]});
    }
    c.gate(GK::H, {hot[0]});
    budget_alignment(c, w, 4);  // reference budget 2 ceil(d/k) + 4k vs 2 ceil(d/k) + 4(k-1)
  }
  c.gate(GK::X, {enable});
  w.release(enable);
  w.release_all(nodes);
  if (!dirty)
    w.release_all(hot);
  else
    w.release(hot[0]);
}

}  // namespace

Circuit build_unlookup(long long d, int M, long long k, bool dirty,
                       const std::vector<uint64_t>& table) {
  if (k < 2 || k >= d || (k & (k - 1)) != 0)
    throw std::invalid_argument("build_unlookup: k must be a power of two in (1, d)");
  if (static_cast<long long>(table.size()) != d)
    throw std::invalid_argument("build_unlookup: table size mismatch");
  Circuit c;
  int ab = ceil_log2_ll(d);
  c.add_register("addr", "address", ab);
  c.add_register("out", "output", M);
  Scratch w{&c, "w"};
  append_unlookup(c, w, c.reg("addr").qubits, c.reg("out").qubits, table, d, k, dirty);
  QroamCost qc = qroam_cost({d, M, 1, k, dirty ? QroamMode::Dirty : QroamMode::Clean, 0});
  expect_count(c, qc.uncompute_toffoli, "build_unlookup");
  return c;
}

Circuit build_binary_to_unary(int bits) {
  if (bits < 1) throw std::invalid_argument("build_binary_to_unary: bits >= 1");
  Circuit c;
  c.add_register("l", "address", bits);
  c.add_register("hot", "output", 1 << bits);
  const auto& hot = c.reg("hot").qubits;
  std::vector<std::vector<int>> blocks;
  for (int q : hot) blocks.push_back({q});
  c.gate(GK::X, {hot[0]});
  block_swap_network(c, c.reg("l").qubits, blocks, /*inverse=*/true);
  expect_count(c, (1 << bits) - 1, "build_binary_to_unary");
  return c;
}

Circuit build_unary_erasure(int bits) {
  if (bits < 1) throw std::invalid_argument("build_unary_erasure: bits >= 1");
  Circuit c;
  c.add_register("l", "address", bits);
  c.add_register("hot", "data", 1 << bits);
  const auto& hot = c.reg("hot").qubits;
  const auto& l = c.reg("l").qubits;
  for (int j = bits - 1; j >= 0; --j) {
    int stride = 1 << j;
    for (int i = 0; i < stride; ++i) {
      int a = hot[i], b = hot[i + stride];
      c.gate(GK::CNOT, {b, a});
      int mid = c.measure(GK::MeasureX, b);
      c.cond_gate(GK::CondCZ, {l[j], a}, {mid});
      c.cond_gate(GK::CondX, {b}, {mid});
    }
  }
  c.gate(GK::X, {hot[0]});
  expect_count(c, 0, "build_unary_erasure");
  return c;
}

// ---------------------------------------------------------------------------
// Alias sampling
// ---------------------------------------------------------------------------

long long AliasTable::discretized_numerator(uint64_t value) const {
  long long num = 0;
  const long long full = 1LL << mu;
  for (size_t j = 0; j < ind.size(); ++j) {
    if (ind[j] == value) num += static_cast<long long>(keep[j]);
    if (alt[j] == value) num += full - static_cast<long long>(keep[j]);
  }
  return num;
}

AliasTable build_alias_table(const std::vector<std::pair<uint64_t, double>>& indexed_weights,
                             int mu) {
  if (mu < 1 || mu > 30) throw std::invalid_argument("build_alias_table: mu out of range");
  double total = 0.0;
  for (const auto& [idx, wgt] : indexed_weights) {
    if (wgt < 0.0) throw std::invalid_argument("build_alias_table: negative weight");
    total += wgt;
  }
  if (!(total > 0.0)) throw std::invalid_argument("build_alias_table: all weights zero");

  int slot_bits = 0;
  while ((size_t{1} << slot_bits) < indexed_weights.size()) ++slot_bits;
  const long long n = 1LL << slot_bits;
  const long long full = 1LL << mu;
  const long long grand = n * full;

  // scaled slot masses, rounded to nearest (ties up), then repaired to the
  // exact grand total by largest remainder
  std::vector<long long> mass(n, 0);
  std::vector<double> exact(n, 0.0);
  long long sum = 0;
  for (long long j = 0; j < n; ++j) {
    double x = j < static_cast<long long>(indexed_weights.size())
                   ? indexed_weights[j].second / total * static_cast<double>(grand)
                   : 0.0;
    exact[j] = x;
    mass[j] = static_cast<long long>(std::floor(x + 0.5));
    sum += mass[j];
  }
  while (sum != grand) {
    long long step = sum < grand ? 1 : -1;
    long long best = -1;
    double best_err = 1e300;
    for (long long j = 0; j < n; ++j) {
      if (step < 0 && mass[j] == 0) continue;
      double err = std::fabs((mass[j] + step) - exact[j]);
      if (err < best_err - 1e-12) {
        best_err = err;
        best = j;
      }
    }
    mass[best] += step;
    sum += step;
  }

  AliasTable t;
  t.mu = mu;
  t.slot_bits = slot_bits;
  t.ind.resize(n);
  t.alt.resize(n);
  t.keep.assign(n, 0);
  for (long long j = 0; j < n; ++j)
    t.ind[j] = j < static_cast<long long>(indexed_weights.size()) ? indexed_weights[j].first
                                                                  : indexed_weights[0].first;

  // two-stack pairing over the scaled masses
  std::vector<long long> small, large;
  std::vector<long long> rem = mass;
  for (long long j = n - 1; j >= 0; --j) {
    if (rem[j] < full)
      small.push_back(j);
    else if (rem[j] > full)
      large.push_back(j);
    else {
      t.keep[j] = full - 1;
      t.alt[j] = t.ind[j];
    }
  }
  while (!small.empty()) {
    long long s = small.back();
    small.pop_back();
    if (large.empty()) {
      // numerically exact by construction; a bare small slot is full
      t.keep[s] = full - 1;
      t.alt[s] = t.ind[s];
      continue;
    }
    long long g = large.back();
    t.keep[s] = rem[s];
    t.alt[s] = t.ind[g];
    rem[g] -= full - rem[s];
    if (rem[g] == full) {
      large.pop_back();
      t.keep[g] = full - 1;
      t.alt[g] = t.ind[g];
    } else if (rem[g] < full) {
      large.pop_back();
      small.push_back(g);
    }
  }
  for (long long g : large) {
    t.keep[g] = full - 1;
    t.alt[g] = t.ind[g];
  }
  return t;
}

namespace {

Circuit alias_circuit(const AliasTable& t, int value_bits, bool dense) {
  Circuit c;
  const long long n = static_cast<long long>(t.ind.size());
  c.add_register("slot", "address", t.slot_bits);
  if (!dense) c.add_register("ind", "output", value_bits);
  c.add_register("alt", "workspace", value_bits);
  c.add_register("keep", "workspace", t.mu);
  c.add_register("sigma", "workspace", t.mu);
  int flag = c.add_qubit("keep_flag", "flag");
  int enable = c.add_qubit("enable", "flag");
  std::vector<int> nodes;
  for (int i = 0; i < t.slot_bits; ++i)
    nodes.push_back(c.add_qubit("node" + std::to_string(i), "workspace"));
  Scratch w{&c, "w"};

  const auto& slot = c.reg("slot").qubits;
  const auto& alt = c.reg("alt").qubits;
  const auto& keep = c.reg("keep").qubits;
  const auto& sigma = c.reg("sigma").qubits;
  const std::vector<int>& value = dense ? slot : c.reg("ind").qubits;

  for (int q : slot) c.gate(GK::H, {q});
  for (int q : sigma) c.gate(GK::H, {q});
  c.gate(GK::X, {enable});

  // lookup of (ind,) alt and keep
  lookup_walk(c, enable, reversed(slot), 0, 0, static_cast<uint64_t>(n), nodes, 0,
              [&](int ctrl, uint64_t j) {
                if (!dense)
                  for (int b = 0; b < value_bits; ++b)
                    if ((t.ind[j] >> b) & 1) c.gate(GK::CNOT, {ctrl, value[b]});
                for (int b = 0; b < value_bits; ++b)
                  if ((t.alt[j] >> b) & 1) c.gate(GK::CNOT, {ctrl, alt[b]});
                for (int b = 0; b < t.mu; ++b)
                  if ((t.keep[j] >> b) & 1) c.gate(GK::CNOT, {ctrl, keep[b]});
              },
              false);
  c.gate(GK::X, {enable});
  append_inequality(c, w, sigma, keep, flag);  // flag = [sigma < keep]

  // swap to the alternate value when the keep test fails
  c.gate(GK::X, {flag});
  for (int b = 0; b < value_bits; ++b) c.gate(GK::CSWAP, {flag, value[b], alt[b]});
  c.gate(GK::X, {flag});

  expect_count(c, (n - 1) + t.mu + value_bits, "alias_circuit");
  return c;
}

}  // namespace

Circuit build_alias_prepare(const std::vector<double>& weights, int mu) {
  std::vector<std::pair<uint64_t, double>> iw;
  for (size_t j = 0; j < weights.size(); ++j) iw.emplace_back(j, weights[j]);
  AliasTable t = build_alias_table(iw, mu);
  return alias_circuit(t, t.slot_bits, /*dense=*/true);
}

Circuit build_sparse_prepare(const std::vector<std::pair<uint64_t, double>>& indexed_weights,
                             int mu) {
  AliasTable t = build_alias_table(indexed_weights, mu);
  uint64_t vmax = 1;
  for (const auto& [idx, wgt] : indexed_weights) vmax = std::max(vmax, idx);
  int value_bits = bit_width_u64(vmax);
  return alias_circuit(t, value_bits, /*dense=*/false);
}

// ---------------------------------------------------------------------------
// Selected ranged operators
// ---------------------------------------------------------------------------

namespace {

// controlled Y: CY = S_t CX S_t^dagger, with S^dagger = Z S
void controlled_y(Circuit& c, int ctrl, int tgt) {
  c.gate(GK::S, {tgt});
  c.gate(GK::Z, {tgt});
  c.gate(GK::CNOT, {ctrl, tgt});
  c.gate(GK::S, {tgt});
}

struct SelectWiring {
  int ctl, q1, theta, alpha;
  std::vector<int> p, q;  // little-endian spatial index registers
  std::vector<int> sys;   // spin-orbital qubits, index = alpha * (N/2) + p
  bool apply_theta = true;
};

// One controlled selected pair: (-1)^theta X Z..Z X / Y Z..Z Y / 1 / -Z.
// 2N + 2 ceil(log2 N) Toffolis.
void append_select_ranged(Circuit& c, Scratch& w, const SelectWiring& sw) {
  const int half = static_cast<int>(sw.sys.size()) / 2;
  const int b = static_cast<int>(sw.p.size());

  // equality flag e = [p == q] AND q1; n = ctl AND NOT e
  auto compute_flag = [&](std::vector<int>& anc) {
    for (int i = 0; i < b; ++i) c.gate(GK::CNOT, {sw.p[i], sw.q[i]});  // q ^= p
    for (int i = 0; i < b; ++i) c.gate(GK::X, {sw.q[i]});
    int z;
    if (b == 1) {
      z = sw.q[0];
    } else {
      int acc = w.alloc();
      anc.push_back(acc);
      c.gate(GK::CCX, {sw.q[0], sw.q[1], acc});
      for (int i = 2; i < b; ++i) {
        int nxt = w.alloc();
        anc.push_back(nxt);
        c.gate(GK::CCX, {acc, sw.q[i], nxt});
        acc = nxt;
      }
      z = acc;
    }
    int e = w.alloc();
    anc.push_back(e);
    c.gate(GK::CCX, {z, sw.q1, e});
    int node = w.alloc();
    anc.push_back(node);
    and_compute(c, sw.ctl, e, node, false, true);
    // q register restored for the ranged operations
    for (int i = 0; i < b; ++i) c.gate(GK::X, {sw.q[i]});
    for (int i = 0; i < b; ++i) c.gate(GK::CNOT, {sw.p[i], sw.q[i]});
    return node;
  };
  auto uncompute_flag = [&](std::vector<int>& anc) {
    for (int i = 0; i < b; ++i) c.gate(GK::CNOT, {sw.p[i], sw.q[i]});
    for (int i = 0; i < b; ++i) c.gate(GK::X, {sw.q[i]});
    // reverse of compute_flag, Toffoli for Toffoli
    int e = anc[anc.size() - 2];
    and_compute(c, sw.ctl, e, anc.back(), false, true);
    int z = b == 1 ? sw.q[0] : anc[anc.size() - 3];
    c.gate(GK::CCX, {z, sw.q1, e});
    for (int i = b - 1; i >= 2; --i)
      c.gate(GK::CCX, {anc[i - 2], sw.q[i], anc[i - 1]});
    if (b > 1) c.gate(GK::CCX, {sw.q[0], sw.q[1], anc[0]});
    for (int i = 0; i < b; ++i) c.gate(GK::X, {sw.q[i]});
    for (int i = 0; i < b; ++i) c.gate(GK::CNOT, {sw.p[i], sw.q[i]});
    for (int q : anc) w.release(q);
  };

  // ranged op: apply Z on every spin-orbital below j and A on j = alpha*N/2
  // + index. Spins iterate on the outside so the orbital count need not be a
  // power of two; 2*half Toffolis in total.
  auto ranged = [&](const std::vector<int>& idx, bool y_kind, int node) {
    std::vector<int> spin_bits{sw.alpha};
    std::vector<int> idx_bits = reversed(idx);
    std::vector<int> nodes = w.alloc_n(1 + static_cast<int>(idx_bits.size()));
    std::vector<int> inner_nodes(nodes.begin() + 1, nodes.end());
    lookup_walk(c, node, spin_bits, 0, 0, 2, nodes, 0,
                [&](int spin_ctrl, uint64_t a) {
                  lookup_walk(c, spin_ctrl, idx_bits, 0, 0, static_cast<uint64_t>(half),
                              inner_nodes, 0,
                              [&](int ctrl, uint64_t pv) {
                                int j = static_cast<int>(a) * half + static_cast<int>(pv);
                                for (int s = 0; s < j; ++s) c.gate(GK::CZ, {ctrl, sw.sys[s]});
                                if (y_kind)
                                  controlled_y(c, ctrl, sw.sys[j]);
                                else
                                  c.gate(GK::CNOT, {ctrl, sw.sys[j]});
                              },
                              false);
                },
                /*fresh_top=*/true);
    w.release_all(nodes);
  };

  std::vector<int> anc;
  int node = compute_flag(anc);
  ranged(sw.p, /*y_kind=*/true, node);
  c.gate(GK::S, {node});
  ranged(sw.q, /*y_kind=*/false, node);
  uncompute_flag(anc);
  if (sw.apply_theta) c.gate(GK::CZ, {sw.ctl, sw.theta});
}

}  // namespace

Circuit build_select_ranged(int N) {
  if (N < 4 || N % 2 != 0 || N > 8)
    throw std::invalid_argument("build_select_ranged: N must be even, 4 <= N <= 8");
  Circuit c;
  const int half = N / 2;
  const int b = ceil_log2_ll(half);
  int ctl = c.add_qubit("ctl", "flag");
  int q1 = c.add_qubit("q1", "data");
  int theta = c.add_qubit("theta", "data");
  c.add_register("p", "address", b);
  c.add_register("q", "address", b);
  int alpha = c.add_qubit("alpha", "address");
  c.add_register("sys", "system", N);
  Scratch w{&c, "w"};
  SelectWiring sw{ctl, q1, theta, alpha, c.reg("p").qubits, c.reg("q").qubits,
                  c.reg("sys").qubits, true};
  append_select_ranged(c, w, sw);
  expect_count(c, select_cost(N) / 2, "build_select_ranged");
  return c;
}

// ---------------------------------------------------------------------------
// Qubitization walk (two spatial orbitals)
// ---------------------------------------------------------------------------

WalkInfo build_qubitization_walk(const IntegralSet& iset, int mu) {
  validate(iset);
  if (iset.n_spatial != 2)
    throw std::invalid_argument(
        "build_qubitization_walk: only the two-spatial-orbital size is simulable here");
  const int half = 2;

  // LCU slots over (f, p, q, r, s): one-body weight 2|T_pq| (spin sum via a
  // Hadamard), two-body weight 4|V_pqrs| (two Hadamards).
  struct Slot {
    int idx;
    double weight;
    int theta;
  };
  std::vector<Slot> slots;
  double lambda = 0.0;
  for (int p = 0; p < half; ++p)
    for (int q = 0; q < half; ++q) {
      double v = iset.T(p, q);
      int idx = (0 << 4) | (p << 3) | (q << 2);  // r = s = 0
      slots.push_back({idx, 2.0 * std::fabs(v), v < 0.0 ? 1 : 0});
      lambda += 2.0 * std::fabs(v);
    }
  for (int p = 0; p < half; ++p)
    for (int q = 0; q < half; ++q)
      for (int r = 0; r < half; ++r)
        for (int s = 0; s < half; ++s) {
          double v = iset.V.at(p, q, r, s);
          int idx = (1 << 4) | (p << 3) | (q << 2) | (r << 1) | s;
          slots.push_back({idx, 4.0 * std::fabs(v), v < 0.0 ? 1 : 0});
          lambda += 4.0 * std::fabs(v);
        }
  if (!(lambda > 0.0)) throw std::invalid_argument("build_qubitization_walk: zero Hamiltonian");

  std::vector<std::pair<uint64_t, double>> iw;
  for (const auto& s : slots) iw.emplace_back(static_cast<uint64_t>(s.idx), s.weight);
  AliasTable table = build_alias_table(iw, mu);

  // discretized slot probabilities and the prepared 6-qubit amplitude vector
  // over (theta, s, r, q, p, f)
  const double grand = std::ldexp(static_cast<double>(table.ind.size()), mu);
  std::vector<double> probs(32, 0.0);
  for (const auto& s : slots)
    probs[s.idx] = static_cast<double>(table.discretized_numerator(s.idx)) / grand;
  std::vector<double> amps(64, 0.0);
  for (const auto& s : slots) {
    int target = (s.idx << 1) | s.theta;
    amps[target] = std::sqrt(probs[s.idx]);
  }
  // padded alias slots may carry mass on index 0; fold it onto its theta
  {
    double covered = 0.0;
    for (double x : probs) covered += x;
    if (std::fabs(covered - 1.0) > 1e-9)
      throw std::logic_error("build_qubitization_walk: discretized mass mismatch");
  }

  WalkInfo info;
  info.lambda = lambda;
  info.slot_probabilities = probs;

  Circuit& c = info.circuit;
  c.add_register("sys", "system", 4);  // spin-orbital (alpha * 2 + p)
  int f = c.add_qubit("f", "address");
  int p = c.add_qubit("p", "address");
  int q = c.add_qubit("q", "address");
  int r = c.add_qubit("r", "address");
  int s = c.add_qubit("s", "address");
  int theta = c.add_qubit("theta", "data");
  int q1 = c.add_qubit("q1", "data");
  int q2 = c.add_qubit("q2", "data");
  int alpha = c.add_qubit("alpha", "address");
  int beta = c.add_qubit("beta", "address");
  int one = c.add_qubit("one", "flag");
  Scratch w{&c, "wk"};

  const std::vector<int> prep_qubits{theta, s, r, q, p, f};
  const std::vector<int> all_anc{f, p, q, r, s, theta, q1, q2, alpha, beta};

  auto prepare = [&](bool inverse) {
    if (!inverse) {
      c.state_prep(prep_qubits, amps);
      for (int h : {q1, q2, alpha, beta}) c.gate(GK::H, {h});
    } else {
      for (int h : {q1, q2, alpha, beta}) c.gate(GK::H, {h});
      c.state_prep(prep_qubits, amps);  // the Householder is an involution
    }
  };

  c.gate(GK::X, {one});

  // SELECT: first pair on (p, q, alpha), phase fix, second pair on (r, s, beta)
  SelectWiring s1{one, q1, theta, alpha, {p}, {q}, c.reg("sys").qubits, true};
  append_select_ranged(c, w, s1);

  // i phase on branches where the two selected Paulis anticommute, keeping
  // the product an involution; those branches cancel pairwise in the block
  // encoding. The q / s / beta registers double as xor wires.
  {
    int zt1 = w.alloc(), zt2 = w.alloc(), ws = w.alloc(), g1 = w.alloc(), a = w.alloc();
    auto frames = [&](bool on) {
      (void)on;
      c.gate(GK::CNOT, {p, q});        // q holds p xor q
      c.gate(GK::CNOT, {r, s});        // s holds r xor s
      c.gate(GK::CNOT, {alpha, beta});  // beta holds alpha xor beta
    };
    auto logic = [&](bool reverse) {
      std::vector<std::function<void()>> steps = {
          [&] { and_compute(c, q, q1, zt1, true, true); },  // p == q and q1 = 0
          [&] { and_compute(c, s, q2, zt2, true, true); },  // r == s and q2 = 0
          [&] { c.gate(GK::CCX, {zt1, s, ws}); },           // Z-type meets XY-type
          [&] { c.gate(GK::CCX, {q, zt2, ws}); },
          [&] { c.gate(GK::CCX, {f, ws, g1}); },
          [&] { and_compute(c, g1, beta, a, false, true); },  // and alpha == beta
      };
      if (reverse)
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) (*it)();
      else
        for (auto& s2 : steps) s2();
    };
    frames(true);
    logic(false);
    c.gate(GK::S, {a});
    logic(true);
    frames(false);
    for (int qq : {zt1, zt2, ws, g1, a}) w.release(qq);
  }

  SelectWiring s2{f, q2, theta, beta, {r}, {s}, c.reg("sys").qubits, false};
  append_select_ranged(c, w, s2);

  // reflection about the prepared state: P^dagger, reflect about zero, P.
  // The multi-controlled phase runs as two five-qubit AND chains so the
  // scratch footprint stays small enough to simulate.
  prepare(/*inverse=*/true);
  {
    for (int qq : all_anc) c.gate(GK::X, {qq});
    // Toffoli-uncomputed AND chains: a few more non-Cliffords than the
    // measurement-based version, but no branch bookkeeping in the hot loop.
    // The same gadget toggles `into`, so it also serves as the erasure.
    auto chain5 = [&](int b0, int b1, int b2, int b3, int b4, int into) {
      int t1 = w.alloc(), t2 = w.alloc(), t3 = w.alloc();
      c.gate(GK::CCX, {b0, b1, t1});
      c.gate(GK::CCX, {t1, b2, t2});
      c.gate(GK::CCX, {t2, b3, t3});
      c.gate(GK::CCX, {t3, b4, into});
      c.gate(GK::CCX, {t2, b3, t3});
      c.gate(GK::CCX, {t1, b2, t2});
      c.gate(GK::CCX, {b0, b1, t1});
      w.release(t1);
      w.release(t2);
      w.release(t3);
    };
    int z1 = w.alloc(), z2 = w.alloc();
    chain5(all_anc[0], all_anc[1], all_anc[2], all_anc[3], all_anc[4], z1);
    chain5(all_anc[5], all_anc[6], all_anc[7], all_anc[8], all_anc[9], z2);
    c.gate(GK::CZ, {z1, z2});
    chain5(all_anc[0], all_anc[1], all_anc[2], all_anc[3], all_anc[4], z1);
    chain5(all_anc[5], all_anc[6], all_anc[7], all_anc[8], all_anc[9], z2);
    w.release(z1);
    w.release(z2);
    for (int qq : all_anc) c.gate(GK::X, {qq});
  }
  prepare(/*inverse=*/false);

  // global minus sign (the phase gadget above realizes 1 - 2|0><0|) and the
  // enable wire back to |0> so the step can be iterated
  c.gate(GK::Z, {one});
  c.gate(GK::X, {one});

  c.validate();

  info.prepare.n_qubits = c.n_qubits;
  info.prepare.registers = c.registers;
  info.prepare.preps.push_back(PrepBlob{amps});
  info.prepare.gates.push_back(Gate{GK::StatePrep, prep_qubits, -1, {}, 0});
  for (int h : {q1, q2, alpha, beta}) info.prepare.gates.push_back(Gate{GK::H, {h}, -1, {}, -1});
  info.prepare.validate();
  return info;
}

// ---------------------------------------------------------------------------
// Contiguous index circuit
// ---------------------------------------------------------------------------

Circuit build_contiguous_index(int N, int L, const ContiguousSchedule& sched) {
  auto steps = contiguous_index_steps(N, L, sched);
  const int n = ceil_log2_ll(N / 2);
  const int lbits = std::max(1, bit_width_u64(static_cast<uint64_t>(L)));
  long long smax = steps.back().running_max;
  const int out_bits = bit_width_u64(static_cast<uint64_t>(smax));

  Circuit c;
  c.add_register("l", "address", lbits);
  c.add_register("p", "address", n);
  c.add_register("q", "address", n);
  c.add_register("out", "output", out_bits);
  c.add_register("bracket", "workspace", n);
  Scratch w{&c, "w"};

  const auto& lq = c.reg("l").qubits;
  const auto& pq = c.reg("p").qubits;
  const auto& qq = c.reg("q").qubits;
  const auto& out = c.reg("out").qubits;
  const auto& br = c.reg("bracket").qubits;

  auto out_slice = [&](int from, int upto) {
    return std::vector<int>(out.begin() + from, out.begin() + std::min(upto, out_bits));
  };

  for (const auto& st : steps) {
    switch (st.op) {
      case ContiguousOp::CopyBase:
        for (int i = 1; i < n; ++i) c.gate(GK::CNOT, {pq[i], out[i - 1]});
        break;
      case ContiguousOp::CtrlCopy: {
        int j = st.param;
        if (j == 0) {
          c.gate(GK::CNOT, {pq[0], br[0]});
          for (int i = 1; i < n; ++i) c.gate(GK::CCX, {pq[0], pq[i], br[i]});
        } else {
          // layout: p_j, zero, then p_{j+1}..p_{n-1}
          c.gate(GK::CNOT, {pq[j], br[0]});
          for (int i = j + 1; i < n; ++i) c.gate(GK::CCX, {pq[j], pq[i], br[2 + i - (j + 1)]});
        }
        break;
      }
      case ContiguousOp::AddBracket: {
        int j = st.param;
        int used = j == 0 ? n : (n - j == 1 ? 1 : 2 + (n - 1 - j));
        std::vector<int> ivec(br.begin(), br.begin() + used);
        append_add(c, w, ivec, out_slice(st.shift, st.width));
        // erase the bracket register
        if (j == 0) {
          for (int i = n - 1; i >= 1; --i) and_erase(c, pq[0], pq[i], br[i], false, false);
          c.gate(GK::CNOT, {pq[0], br[0]});
        } else {
          for (int i = n - 1; i >= j + 1; --i)
            and_erase(c, pq[j], pq[i], br[2 + i - (j + 1)], false, false);
          c.gate(GK::CNOT, {pq[j], br[0]});
        }
        break;
      }
      case ContiguousOp::AddQ:
        append_add(c, w, qq, out_slice(0, st.width));
        break;
      case ContiguousOp::AddL:
        append_add(c, w, lq, out_slice(st.shift, st.width));
        break;
      case ContiguousOp::SubL: {
        auto t = out_slice(st.shift, st.width);
        for (int qb : t) c.gate(GK::X, {qb});
        append_add(c, w, lq, t);
        for (int qb : t) c.gate(GK::X, {qb});
        break;
      }
    }
  }
  expect_count(c, contiguous_index_cost(N, L, sched), "build_contiguous_index");
  return c;
}

Circuit build_contiguous_index(int N, int L) {
  return build_contiguous_index(N, L, default_contiguous_schedule(N));
}

}  // namespace lcu::kernels
