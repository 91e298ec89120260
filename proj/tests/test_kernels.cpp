#include <cmath>
#include <map>

#include "doctest.h"
#include "lcu/fixtures.hpp"
#include "lcu/kernels.hpp"
#include "lcu/simulator.hpp"

using namespace lcu;
namespace k = lcu::kernels;

namespace {

uint64_t with_register(const Circuit& c, uint64_t basis, const std::string& name, uint64_t value) {
  for (size_t b = 0; b < c.reg(name).qubits.size(); ++b)
    if ((value >> b) & 1) basis |= 1ULL << c.reg(name).qubits[b];
  return basis;
}

double register_value_probability(const StateVector& st, const std::vector<int>& qubits,
                                  uint64_t value) {
  double p = 0.0;
  for (uint64_t i = 0; i < st.amps.size(); ++i) {
    uint64_t v = 0;
    for (size_t b = 0; b < qubits.size(); ++b)
      if ((i >> qubits[b]) & 1) v |= 1ULL << b;
    if (v == value) p += std::norm(st.amps[i]);
  }
  return p;
}

// Runs on a basis input and checks that every branch reads `value` on the
// named register with certainty. Sibling branches are merged as they arise;
// the merge only coalesces branches whose states agree exactly, so a single
// surviving branch certifies that every measurement branch agreed.
void expect_register(const Circuit& c, uint64_t basis, const std::string& name, uint64_t expect) {
  RunOptions opts;
  opts.initial_basis_state = basis;
  opts.merge_equivalent = true;
  auto branches = run(c, opts);
  REQUIRE(branches.size() == 1);
  for (const auto& br : branches) {
    double p = register_value_probability(br.state, c.reg(name).qubits, expect);
    CHECK(p == doctest::Approx(1.0).epsilon(1e-9));
  }
}

std::vector<uint64_t> random_table(uint64_t seed, long long d, int M) {
  DetRng rng(seed);
  std::vector<uint64_t> t(d);
  for (auto& v : t) v = rng.next_u64() & ((1ULL << M) - 1);
  return t;
}

// Appends `tail` onto `base`, sharing the named registers and giving every
// other tail register fresh qubits.
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

}  // namespace

TEST_CASE("adder circuits") {
  SUBCASE("pinned Toffoli counts") {
    CHECK(k::build_adder(5, false).toffoli_count() == 4);
    CHECK(k::build_adder(1, false).toffoli_count() == 0);
    CHECK(k::build_adder(4, true).toffoli_count() == 4);
  }
  SUBCASE("exhaustive behavior up to n = 4") {
    for (int n = 1; n <= 4; ++n) {
      Circuit modular = k::build_adder(n, false);
      Circuit carry = k::build_adder(n, true);
      for (uint64_t i = 0; i < (1ULL << n); ++i)
        for (uint64_t t = 0; t < (1ULL << n); ++t) {
          uint64_t basis = with_register(modular, 0, "i", i);
          basis = with_register(modular, basis, "t", t);
          expect_register(modular, basis, "t", (t + i) & ((1ULL << n) - 1));
          expect_register(modular, basis, "i", i);

          uint64_t cb = with_register(carry, 0, "i", i);
          cb = with_register(carry, cb, "t", t);
          expect_register(carry, cb, "t", (t + i) & ((1ULL << n) - 1));
          expect_register(carry, cb, "carry", (t + i) >> n);
          expect_register(carry, cb, "i", i);
        }
    }
  }
  SUBCASE("adder on |t=3,i=5> with carry reads 8 in every branch") {
    Circuit c = k::build_adder(4, true);
    uint64_t basis = with_register(c, 0, "i", 5);
    basis = with_register(c, basis, "t", 3);
    expect_register(c, basis, "t", 8);
    expect_register(c, basis, "carry", 0);
  }
}

TEST_CASE("subtractor circuits") {
  CHECK(k::build_subtractor(5).toffoli_count() == 4);
  for (int n = 1; n <= 4; ++n) {
    Circuit c = k::build_subtractor(n);
    for (uint64_t i = 0; i < (1ULL << n); ++i)
      for (uint64_t t = 0; t < (1ULL << n); ++t) {
        uint64_t basis = with_register(c, 0, "i", i);
        basis = with_register(c, basis, "t", t);
        expect_register(c, basis, "t", (t - i) & ((1ULL << n) - 1));
        expect_register(c, basis, "i", i);
      }
  }
}

TEST_CASE("inequality circuits") {
  SUBCASE("variable comparison, inputs restored, cost n") {
    for (int n = 1; n <= 4; ++n) {
      Circuit c = k::build_inequality(n);
      CHECK(c.toffoli_count() == n);
      for (uint64_t i = 0; i < (1ULL << n); ++i)
        for (uint64_t t = 0; t < (1ULL << n); ++t) {
          uint64_t basis = with_register(c, 0, "i", i);
          basis = with_register(c, basis, "t", t);
          expect_register(c, basis, "flag", t < i ? 1 : 0);
          expect_register(c, basis, "t", t);
          expect_register(c, basis, "i", i);
        }
    }
  }
  SUBCASE("constant comparison with trailing-zero savings") {
    CHECK(k::build_inequality_const(6, 54).toffoli_count() == 4);
    for (int n = 2; n <= 4; ++n)
      for (uint64_t constant = 0; constant < (1ULL << n); ++constant) {
        Circuit c = k::build_inequality_const(n, constant);
        for (uint64_t t = 0; t < (1ULL << n); ++t) {
          uint64_t basis = with_register(c, 0, "t", t);
          expect_register(c, basis, "flag", t < constant ? 1 : 0);
          expect_register(c, basis, "t", t);
        }
      }
  }
}

TEST_CASE("unary iteration") {
  CHECK(k::build_unary_iteration(2).toffoli_count() == 1);
  CHECK(k::build_unary_iteration_nested(4, 4).toffoli_count() == 15);
  for (long long d : {2LL, 3LL, 5LL, 8LL}) {
    Circuit c = k::build_unary_iteration(d);
    CHECK(c.toffoli_count() == d - 1);
    for (uint64_t a = 0; a < static_cast<uint64_t>(d); ++a) {
      uint64_t basis = with_register(c, 0, "addr", a);
      expect_register(c, basis, "hot", 1ULL << a);
    }
  }
  Circuit nested = k::build_unary_iteration_nested(3, 4);
  CHECK(nested.toffoli_count() == 11);
  for (uint64_t a = 0; a < 3; ++a)
    for (uint64_t b = 0; b < 4; ++b) {
      uint64_t basis = with_register(nested, 0, "addr1", a);
      basis = with_register(nested, basis, "addr2", b);
      expect_register(nested, basis, "hot", 1ULL << (a * 4 + b));
    }
}

TEST_CASE("qrom lookup") {
  for (long long d : {2LL, 5LL, 8LL})
    for (int M : {1, 3, 4}) {
      auto table = random_table(11 * d + M, d, M);
      Circuit c = k::build_qrom(d, M, table);
      CHECK(c.toffoli_count() == d - 1);
      for (uint64_t a = 0; a < static_cast<uint64_t>(d); ++a) {
        uint64_t basis = with_register(c, 0, "addr", a);
        expect_register(c, basis, "out", table[a]);
        expect_register(c, basis, "addr", a);
      }
    }
}

TEST_CASE("qroam with dirty ancillae") {
  SUBCASE("pinned count 2*4 + 4*2*1 = 16") {
    auto table = random_table(3, 8, 2);
    CHECK(k::build_qroam_dirty(8, 2, 2, table).toffoli_count() == 16);
  }
  SUBCASE("lookup correct and dirty registers restored for random contents") {
    for (long long d : {5LL, 8LL})
      for (int M : {1, 3})
        for (long long kk : {2LL, 4LL}) {
          auto table = random_table(97 * d + 13 * M + kk, d, M);
          Circuit c = k::build_qroam_dirty(d, M, kk, table);
          QroamCost qc = qroam_cost({d, M, kk, kk, QroamMode::Dirty, 0});
          CHECK(c.toffoli_count() == qc.compute_toffoli);
          DetRng rng(500 + d + M + kk);
          for (int trial = 0; trial < 20; ++trial) {
            uint64_t a = rng.next_u64() % d;
            uint64_t basis = with_register(c, 0, "addr", a);
            std::vector<uint64_t> junk;
            for (long long i = 1; i < kk; ++i) {
              junk.push_back(rng.next_u64() & ((1ULL << M) - 1));
              basis = with_register(c, basis, "dirty" + std::to_string(i), junk.back());
            }
            expect_register(c, basis, "out", table[a]);
            for (long long i = 1; i < kk; ++i)
              expect_register(c, basis, "dirty" + std::to_string(i), junk[i - 1]);
          }
        }
  }
  SUBCASE("superposed addresses match the directly prepared target") {
    const long long d = 8, kk = 4;
    const int M = 2;
    auto table = random_table(77, d, M);
    Circuit c = k::build_qroam_dirty(d, M, kk, table);
    Circuit driver = c;
    driver.gates.clear();
    for (int q : driver.reg("addr").qubits) driver.gate(GateKind::H, {q});
    for (long long i = 1; i < kk; ++i)
      for (int q : driver.reg("dirty" + std::to_string(i)).qubits) driver.gate(GateKind::X, {q});
    for (const auto& g : c.gates) driver.gates.push_back(g);
    RunOptions opts;
    opts.merge_equivalent = true;
    auto branches = run(driver, opts);
    REQUIRE(branches.size() == 1);
    StateVector want(driver.n_qubits);
    want.amps.assign(want.amps.size(), 0.0);
    double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (uint64_t a = 0; a < static_cast<uint64_t>(d); ++a) {
      uint64_t basis = with_register(driver, 0, "addr", a);
      basis = with_register(driver, basis, "out", table[a]);
      for (long long i = 1; i < kk; ++i)
        basis = with_register(driver, basis, "dirty" + std::to_string(i), (1ULL << M) - 1);
      want.amps[basis] = amp;
    }
    CHECK(fidelity(branches[0].state, want) > 1.0 - 1e-10);
  }
}

TEST_CASE("clean qroam and measurement-based unlookup") {
  SUBCASE("clean lookup count and output") {
    auto table = random_table(21, 8, 3);
    Circuit c = k::build_qroam_clean(8, 3, 2, table);
    CHECK(c.toffoli_count() == qroam_cost({8, 3, 2, 2, QroamMode::Clean, 0}).compute_toffoli);
    for (uint64_t a = 0; a < 8; ++a) {
      uint64_t basis = with_register(c, 0, "addr", a);
      expect_register(c, basis, "out", table[a]);
    }
  }
  SUBCASE("unlookup pinned count ceil(8/2) + 2 = 6") {
    auto table = random_table(5, 8, 2);
    CHECK(k::build_unlookup(8, 2, 2, false, table).toffoli_count() == 6);
  }
  SUBCASE("lookup then clean unlookup restores |addr>|0> in every branch") {
    for (long long d : {4LL, 8LL})
      for (int M : {1, 3})
        for (long long ku : {2LL, 4LL}) {
          if (ku >= d) continue;
          auto table = random_table(31 * d + M + ku, d, M);
          Circuit combined =
              splice(k::build_qrom(d, M, table), k::build_unlookup(d, M, ku, false, table),
                     {"addr", "out"});
          for (uint64_t a = 0; a < static_cast<uint64_t>(d); ++a) {
            uint64_t basis = with_register(combined, 0, "addr", a);
            RunOptions opts;
            opts.initial_basis_state = basis;
            opts.merge_equivalent = true;  // equal-state merge: one branch left
            auto branches = run(combined, opts);
            REQUIRE(branches.size() == 1);
            StateVector want = StateVector::basis(combined.n_qubits, basis);
            CHECK(fidelity(branches[0].state, want) > 1.0 - 1e-10);
          }
        }
  }
  SUBCASE("dirty unlookup count and borrowed-register restoration") {
    auto table8 = random_table(5, 8, 2);
    Circuit counted = k::build_unlookup(8, 2, 2, true, table8);
    CHECK(counted.toffoli_count() ==
          qroam_cost({8, 2, 1, 2, QroamMode::Dirty, 0}).uncompute_toffoli);

    const long long d = 8, ku = 4;
    const int M = 3;
    auto table = random_table(123, d, M);
    std::vector<int> dirty_qubits;
    Circuit combined = splice(k::build_qrom(d, M, table), k::build_unlookup(d, M, ku, true, table),
                              {"addr", "out"}, &dirty_qubits);
    REQUIRE(dirty_qubits.size() == ku - 1);
    DetRng rng(9);
    for (uint64_t a = 0; a < static_cast<uint64_t>(d); ++a) {
      uint64_t basis = with_register(combined, 0, "addr", a);
      uint64_t junk = rng.next_u64() & ((1ULL << dirty_qubits.size()) - 1);
      for (size_t b = 0; b < dirty_qubits.size(); ++b)
        if ((junk >> b) & 1) basis |= 1ULL << dirty_qubits[b];
      RunOptions opts;
      opts.initial_basis_state = basis;
      opts.merge_equivalent = true;
      auto branches = run(combined, opts);
      REQUIRE(branches.size() == 1);
      StateVector want = StateVector::basis(combined.n_qubits, basis);
      CHECK(fidelity(branches[0].state, want) > 1.0 - 1e-10);
    }
  }
  SUBCASE("clean qroam followed by unlookup of the whole block row") {
    const long long d = 8, kk = 2;
    const int M = 2;
    auto table = random_table(55, d, M);
    Circuit lookup = k::build_qroam_clean(d, M, kk, table);
    // measured content: all block registers as a function of the address
    std::vector<int> measured = lookup.reg("out").qubits;
    for (long long i = 1; i < kk; ++i)
      for (int q : lookup.reg("block" + std::to_string(i)).qubits) measured.push_back(q);
    // content word per address from the network permutation
    std::vector<uint64_t> content(d, 0);
    for (long long a = 0; a < d; ++a) {
      long long h = a / kk, l = a % kk;
      std::vector<int> pos = k::block_permutation(kk, static_cast<int>(l), false);
      for (long long p = 0; p < kk; ++p) {
        long long src = h * kk + pos[p];
        uint64_t word = src < d ? table[src] : 0;
        content[a] |= word << (p * M);
      }
    }
    Circuit unl = k::build_unlookup(d, static_cast<int>(kk * M), 2, false, content);
    // share addr; share unl's "out" with the concatenated measured qubits
    Circuit combined = lookup;
    std::map<int, int> remap;
    for (size_t b = 0; b < unl.reg("addr").qubits.size(); ++b)
      remap[unl.reg("addr").qubits[b]] = combined.reg("addr").qubits[b];
    for (size_t b = 0; b < unl.reg("out").qubits.size(); ++b)
      remap[unl.reg("out").qubits[b]] = measured[b];
    for (const auto& r : unl.registers) {
      if (r.name == "addr" || r.name == "out") continue;
      for (int q : r.qubits) remap[q] = combined.add_qubit("u" + std::to_string(q), r.role);
    }
    int mid_base = combined.n_measurements;
    for (Gate g : unl.gates) {
      for (int& q : g.qubits) q = remap.at(q);
      if (g.mid >= 0) {
        g.mid += mid_base;
        ++combined.n_measurements;
      }
      for (int& mm : g.cond) mm += mid_base;
      combined.gates.push_back(std::move(g));
    }
    for (uint64_t a = 0; a < static_cast<uint64_t>(d); ++a) {
      uint64_t basis = with_register(combined, 0, "addr", a);
      RunOptions opts;
      opts.initial_basis_state = basis;
      opts.merge_equivalent = true;
      auto branches = run(combined, opts);
      REQUIRE(branches.size() == 1);
      StateVector want = StateVector::basis(combined.n_qubits, basis);
      CHECK(fidelity(branches[0].state, want) > 1.0 - 1e-10);
    }
  }
  SUBCASE("binary-to-unary erasure uses no Toffolis") {
    CHECK(k::build_unary_erasure(3).toffoli_count() == 0);
    for (int bits : {1, 2, 3}) {
      Circuit combined =
          splice(k::build_binary_to_unary(bits), k::build_unary_erasure(bits), {"l", "hot"});
      for (uint64_t l = 0; l < (1ULL << bits); ++l) {
        uint64_t basis = with_register(combined, 0, "l", l);
        RunOptions opts;
        opts.initial_basis_state = basis;
        opts.merge_equivalent = true;
        auto branches = run(combined, opts);
        REQUIRE(branches.size() == 1);
        StateVector want = StateVector::basis(combined.n_qubits, basis);
        CHECK(fidelity(branches[0].state, want) > 1.0 - 1e-10);
      }
    }
  }
}

TEST_CASE("alias-sampled state preparation") {
  SUBCASE("uniform weights produce the exact uniform distribution") {
    Circuit c = k::build_alias_prepare({1.0, 1.0, 1.0, 1.0}, 3);
    RunOptions opts;
    opts.merge_equivalent = true;
    auto branches = run(c, opts);
    REQUIRE(branches.size() == 1);
    for (uint64_t v = 0; v < 4; ++v) {
      double p = register_value_probability(branches[0].state, c.reg("slot").qubits, v);
      CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
    }
  }
  SUBCASE("weights (3,1,1,3)/8 at mu = 3 match the discretized target exactly") {
    std::vector<double> weights{3.0, 1.0, 1.0, 3.0};
    std::vector<std::pair<uint64_t, double>> iw;
    for (size_t j = 0; j < weights.size(); ++j) iw.emplace_back(j, weights[j]);
    k::AliasTable t = k::build_alias_table(iw, 3);
    Circuit c = k::build_alias_prepare(weights, 3);
    RunOptions opts;
    opts.merge_equivalent = true;
    auto branches = run(c, opts);
    REQUIRE(branches.size() == 1);
    const double denom = std::ldexp(static_cast<double>(t.ind.size()), t.mu);
    for (uint64_t v = 0; v < 4; ++v) {
      double p = register_value_probability(branches[0].state, c.reg("slot").qubits, v);
      double want = static_cast<double>(t.discretized_numerator(v)) / denom;
      CHECK(p == doctest::Approx(want).epsilon(1e-12));
      CHECK(want == doctest::Approx(weights[v] / 8.0).epsilon(1e-12));  // exactly representable
    }
  }
  SUBCASE("sparse preparation hits exactly the given index set") {
    std::vector<std::pair<uint64_t, double>> iw{{5, 2.0}, {9, 1.0}, {12, 1.0}};
    k::AliasTable t = k::build_alias_table(iw, 3);
    Circuit c = k::build_sparse_prepare(iw, 3);
    RunOptions opts;
    opts.merge_equivalent = true;
    auto branches = run(c, opts);
    REQUIRE(branches.size() == 1);
    const double denom = std::ldexp(static_cast<double>(t.ind.size()), t.mu);
    double covered = 0.0;
    for (uint64_t v = 0; v < 16; ++v) {
      double p = register_value_probability(branches[0].state, c.reg("ind").qubits, v);
      double want = static_cast<double>(t.discretized_numerator(v)) / denom;
      CHECK(p == doctest::Approx(want).epsilon(1e-10));
      if (v != 5 && v != 9 && v != 12) CHECK(p == doctest::Approx(0.0));
      covered += p;
    }
    CHECK(covered == doctest::Approx(1.0));
  }
  SUBCASE("discretization error stays below 2^-mu per slot") {
    DetRng rng(4242);
    for (int trial = 0; trial < 5; ++trial) {
      int mu = 6;
      std::vector<std::pair<uint64_t, double>> iw;
      double total = 0.0;
      for (uint64_t j = 0; j < 5; ++j) {
        double x = rng.uniform(0.1, 1.0);
        iw.emplace_back(j, x);
        total += x;
      }
      k::AliasTable t = k::build_alias_table(iw, mu);
      const double denom = std::ldexp(static_cast<double>(t.ind.size()), mu);
      for (const auto& [v, wgt] : iw) {
        double got = static_cast<double>(t.discretized_numerator(v)) / denom;
        CHECK(std::fabs(got - wgt / total) < std::ldexp(1.0, -mu));
      }
    }
  }
}

TEST_CASE("contiguous index circuits match the cost model") {
  SUBCASE("gate-for-gate counts on the n = 2..5 grid") {
    for (int N : {8, 12, 16, 24, 32, 48, 64})
      for (int L : {1, 3}) {
        Circuit c = k::build_contiguous_index(N, L);
        CHECK(c.toffoli_count() == contiguous_index_cost(N, L));
      }
  }
  SUBCASE("exhaustive behavior at N = 8 and N = 12") {
    {
      Circuit c = k::build_contiguous_index(8, 2);
      const uint64_t per_l = 8 * 10 / 8;
      for (uint64_t l = 0; l <= 2; ++l)
        for (uint64_t p = 0; p < 4; ++p)
          for (uint64_t q = 0; q <= p; ++q) {
            uint64_t basis = with_register(c, 0, "l", l);
            basis = with_register(c, basis, "p", p);
            basis = with_register(c, basis, "q", q);
            uint64_t s = l * per_l + p * (p + 1) / 2 + q;
            expect_register(c, basis, "out", s);
            expect_register(c, basis, "p", p);
            expect_register(c, basis, "q", q);
            expect_register(c, basis, "l", l);
          }
    }
    {
      Circuit c = k::build_contiguous_index(12, 1);
      const uint64_t per_l = 12 * 14 / 8;
      for (uint64_t l = 0; l <= 1; ++l)
        for (uint64_t p = 0; p < 6; ++p)
          for (uint64_t q = 0; q <= p; ++q) {
            uint64_t basis = with_register(c, 0, "l", l);
            basis = with_register(c, basis, "p", p);
            basis = with_register(c, basis, "q", q);
            uint64_t s = l * per_l + p * (p + 1) / 2 + q;
            expect_register(c, basis, "out", s);
          }
    }
  }
}
