#include <cmath>

#include "doctest.h"
#include "lcu/simulator.hpp"

using namespace lcu;

namespace {

bool matrices_close(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 1e-10) {
  if (a.dim != b.dim) return false;
  for (size_t i = 0; i < a.a.size(); ++i)
    if (std::abs(a.a[i] - b.a[i]) > tol) return false;
  return true;
}

ComplexMatrix identity(int dim) {
  ComplexMatrix m;
  m.dim = dim;
  m.a.assign(static_cast<size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("measurement branching") {
  SUBCASE("H then Z-measure splits into two half-weight branches") {
    Circuit c;
    int q = c.add_qubit("q", "data");
    c.gate(GateKind::H, {q});
    c.measure(GateKind::MeasureZ, q);
    auto branches = run(c);
    REQUIRE(branches.size() == 2);
    CHECK(branches[0].weight == doctest::Approx(0.5));
    CHECK(branches[1].weight == doctest::Approx(0.5));
  }
  SUBCASE("X-basis measurement of |+> gives a single + branch") {
    Circuit c;
    int q = c.add_qubit("q", "data");
    c.gate(GateKind::H, {q});
    c.measure(GateKind::MeasureX, q);
    auto branches = run(c);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].outcomes[0].second == 0);
    CHECK(branches[0].weight == doctest::Approx(1.0));
  }
  SUBCASE("branch weights sum to one after any prefix") {
    Circuit c;
    int a = c.add_qubit("a", "data");
    int b = c.add_qubit("b", "data");
    c.gate(GateKind::H, {a});
    c.gate(GateKind::CNOT, {a, b});
    c.measure(GateKind::MeasureZ, a);
    c.gate(GateKind::H, {b});
    c.measure(GateKind::MeasureZ, b);
    auto branches = run(c);
    double total = 0.0;
    for (const auto& br : branches) {
      total += br.weight;
      CHECK(br.state.norm() == doctest::Approx(1.0));
    }
    CHECK(total == doctest::Approx(1.0));
  }
  SUBCASE("conditioned gates evaluate per branch") {
    // the AND gadget: compute t = a AND b on |++>, erase it with an X
    // measurement and a conditioned CZ; the fixup makes both branches equal
    Circuit c;
    int a = c.add_qubit("a", "data");
    int b = c.add_qubit("b", "data");
    int t = c.add_qubit("t", "workspace");
    c.gate(GateKind::H, {a});
    c.gate(GateKind::H, {b});
    c.gate(GateKind::CCX, {a, b, t});
    int mid = c.measure(GateKind::MeasureX, t);
    c.cond_gate(GateKind::CondCZ, {a, b}, {mid});
    c.cond_gate(GateKind::CondX, {t}, {mid});
    RunOptions opts;
    opts.merge_equivalent = true;
    auto branches = run(c, opts);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].weight == doctest::Approx(1.0));
    StateVector want(3);
    want.amps.assign(8, 0.0);
    want.amps[0] = want.amps[1] = want.amps[2] = want.amps[3] = 0.5;
    CHECK(fidelity(branches[0].state, want) == doctest::Approx(1.0));
  }
}

TEST_CASE("gate algebra spot checks") {
  SUBCASE("HZH = X") {
    Circuit hzh;
    int q = hzh.add_qubit("q", "data");
    hzh.gate(GateKind::H, {q});
    hzh.gate(GateKind::Z, {q});
    hzh.gate(GateKind::H, {q});
    Circuit x;
    q = x.add_qubit("q", "data");
    x.gate(GateKind::X, {q});
    CHECK(matrices_close(unitary_of(hzh), unitary_of(x)));
  }
  SUBCASE("S^4 = I") {
    Circuit c;
    int q = c.add_qubit("q", "data");
    for (int i = 0; i < 4; ++i) c.gate(GateKind::S, {q});
    CHECK(matrices_close(unitary_of(c), identity(2)));
  }
  SUBCASE("Toffoli^2 = I") {
    Circuit c;
    int a = c.add_qubit("a", "data");
    int b = c.add_qubit("b", "data");
    int t = c.add_qubit("t", "data");
    c.gate(GateKind::CCX, {a, b, t});
    c.gate(GateKind::CCX, {a, b, t});
    CHECK(matrices_close(unitary_of(c), identity(8)));
  }
  SUBCASE("CNOT matrix is the standard permutation") {
    Circuit c;
    int ctl = c.add_qubit("c", "data");
    int tgt = c.add_qubit("t", "data");
    c.gate(GateKind::CNOT, {ctl, tgt});
    ComplexMatrix u = unitary_of(c);
    // qubit 0 = control (LSB): |01> -> |11>, |11> -> |01>
    CHECK(u.at(3, 1) == Amplitude{1.0, 0.0});
    CHECK(u.at(1, 3) == Amplitude{1.0, 0.0});
    CHECK(u.at(0, 0) == Amplitude{1.0, 0.0});
    CHECK(u.at(2, 2) == Amplitude{1.0, 0.0});
  }
  SUBCASE("empty circuit is the identity") {
    Circuit c;
    c.add_register("r", "data", 3);
    CHECK(matrices_close(unitary_of(c), identity(8)));
  }
}

TEST_CASE("extracted unitaries are unitary") {
  Circuit c;
  c.add_register("r", "data", 3);
  c.gate(GateKind::H, {0});
  c.gate(GateKind::CNOT, {0, 1});
  c.gate(GateKind::S, {1});
  c.gate(GateKind::CCX, {0, 1, 2});
  c.gate(GateKind::Y, {2});
  c.gate(GateKind::CZ, {1, 2});
  ComplexMatrix u = unitary_of(c);
  double err = 0.0;
  for (int i = 0; i < u.dim; ++i)
    for (int j = 0; j < u.dim; ++j) {
      Amplitude s = 0.0;
      for (int k = 0; k < u.dim; ++k) s += std::conj(u.at(k, i)) * u.at(k, j);
      err = std::max(err, std::abs(s - (i == j ? Amplitude{1.0} : Amplitude{0.0})));
    }
  CHECK(err < 1e-10);
}

TEST_CASE("state prep composite") {
  Circuit c;
  c.add_register("r", "data", 2);
  std::vector<double> target{0.5, -0.5, 0.5, 0.5};
  c.state_prep({0, 1}, target);
  auto branches = run(c);
  REQUIRE(branches.size() == 1);
  for (int i = 0; i < 4; ++i)
    CHECK(branches[0].state.amps[i].real() == doctest::Approx(target[i]).epsilon(1e-12));
  // involution: applying it twice returns |00>
  c.state_prep({0, 1}, target);
  branches = run(c);
  CHECK(std::abs(branches[0].state.amps[0]) == doctest::Approx(1.0));
}

TEST_CASE("circuit text round trip") {
  Circuit c;
  c.add_register("a", "address", 2);
  int f = c.add_qubit("f", "flag");
  c.gate(GateKind::H, {0});
  c.gate(GateKind::CCX, {0, 1, f});
  int mid = c.measure(GateKind::MeasureX, f);
  c.cond_gate(GateKind::CondZ, {0}, {mid});
  std::string text = c.to_text();
  Circuit back = circuit_from_text(text);
  CHECK(back.to_text() == text);
  CHECK(back.toffoli_count() == c.toffoli_count());
}

TEST_CASE("qubit limits enforced") {
  Circuit c;
  c.add_register("r", "data", 23);
  CHECK_THROWS(run(c));
  Circuit u;
  u.add_register("r", "data", 13);
  CHECK_THROWS(unitary_of(u));
  Circuit m;
  m.add_register("r", "data", 2);
  m.measure(GateKind::MeasureZ, 0);
  CHECK_THROWS(unitary_of(m));
}
