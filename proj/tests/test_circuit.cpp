#include <cmath>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "clb/circuit.hpp"

using namespace clb;

TEST_CASE("register layout widths") {
  const RegisterLayout d2 = carleman_layout(make_model("D2Q9"), Grid({8, 1}));
  CHECK(d2.qubits() == 1 + 7 + 1 + 4 + 4 + 3 + 3 + 1);
  CHECK(d2.qubits() == 24);
  CHECK(d2.reg("m").width == 7);
  CHECK(d2.reg("a").offset == 0);
  CHECK(d2.reg("eq").offset == 23);
  const RegisterLayout d1 = carleman_layout(make_model("D1Q3"), Grid({4}));
  CHECK(d1.qubits() == 15);
  CHECK(d1.reg("m").width == 4);
  CHECK(d1.reg("v1").width == 2);
  const RegisterLayout sq = carleman_layout(make_model("D2Q9"), Grid({4, 8}));
  CHECK(sq.reg("x").width == 5);
  CHECK(axis_qubits(Grid({5, 1})) == std::vector<int>{3, 0});
}

TEST_CASE("register values and site codes") {
  const RegisterLayout l({{"a", 1}, {"b", 3}, {"c", 2}});
  const std::uint64_t i = l.index({{"b", 5}, {"c", 2}});
  CHECK(i == (5u << 1 | 2u << 4));
  CHECK(l.value(i, "b") == 5);
  CHECK(l.value(i, "c") == 2);
  CHECK(l.value(i, "a") == 0);
  CHECK_THROWS_AS(l.index({{"b", 8}}), InvalidInput);
  CHECK_THROWS_AS(l.reg("zz"), InvalidInput);
  const Grid g({4, 4});
  for (Index s = 0; s < g.sites(); ++s) CHECK(site_code(g, s) == std::uint64_t(s));
  const Grid odd({3, 2});
  CHECK(site_code(odd, odd.site_index({2, 1})) == (2u | 1u << 2));
}

TEST_CASE("gate validation") {
  Circuit c{RegisterLayout({{"q", 3}}), {}, "t", {}};
  c.add({GateKind::X, {0}, {{1, 1}}, 0});
  CHECK_THROWS_AS(c.add({GateKind::X, {0}, {{0, 1}}, 0}), InvalidInput);
  CHECK_THROWS_AS(c.add({GateKind::X, {3}, {}, 0}), InvalidInput);
  CHECK_THROWS_AS(c.add({GateKind::SWAP, {0}, {}, 0}), InvalidInput);
  CHECK_THROWS_AS(c.add({GateKind::X, {0}, {{1, 2}}, 0}), InvalidInput);
  CHECK_THROWS_AS(c.add({GateKind::RY, {0}, {}, std::nan("")}), InvalidInput);
  CHECK(c.gates.size() == 1);
}

TEST_CASE("gate report cost model") {
  Circuit c{RegisterLayout({{"q", 6}}), {}, "t", {}};
  CHECK(gate_report(c).total == 0);
  CHECK(gate_report(c).two_qubit_estimate == 0);
  CHECK(gate_report(c).depth == 0);
  c.add({GateKind::X, {1}, {{0, 1}}, 0});
  CHECK(gate_report(c).two_qubit_estimate == 1);
  c.add({GateKind::X, {2}, {{0, 1}, {1, 0}}, 0});
  c.add({GateKind::SWAP, {4, 5}, {}, 0});
  c.add({GateKind::H, {3}, {}, 0});
  c.add({GateKind::RY, {5}, {{0, 1}, {1, 1}, {2, 1}, {3, 1}}, 0.3});
  const GateCountReport r = gate_report(c);
  CHECK(r.total == 5);
  CHECK(r.two_qubit_estimate == 1 + 3 + 3 + 0 + 7);
  CHECK(r.by_kind.at("X") == 2);
  CHECK(r.two_qubit_by_kind.at("X") == 4);
  CHECK(r.by_control_arity.at(0) == 2);
  CHECK(r.by_control_arity.at(4) == 1);
  CHECK(r.work_qubits == 2);
  // Layers: {CX01}, {CCX012, SWAP45, H3}, {C4RY}
  CHECK(r.depth == 3);
  CHECK(r.two_qubit_estimate >= r.total - r.by_control_arity.at(0));
}

TEST_CASE("inverse reverses and negates angles") {
  Circuit c{RegisterLayout({{"q", 2}}), {}, "t", {}};
  c.add({GateKind::H, {0}, {}, 0});
  c.add({GateKind::RY, {1}, {{0, 1}}, 0.7});
  const Circuit inv = c.inverse();
  REQUIRE(inv.gates.size() == 2);
  CHECK(inv.gates[0].kind == GateKind::RY);
  CHECK(inv.gates[0].theta == -0.7);
  CHECK(inv.gates[1].kind == GateKind::H);
}

TEST_CASE("text and JSON round trips") {
  Circuit c{RegisterLayout({{"a", 1}, {"m", 3}, {"eq", 1}}), {}, "demo", {{"omega", "0.31"}}};
  c.add({GateKind::H, {1}, {}, 0});
  c.add({GateKind::RY, {0}, {{1, 0}, {2, 1}}, -1.2345678901234567});
  c.add({GateKind::SWAP, {2, 3}, {{4, 1}}, 0});
  c.add({GateKind::X, {4}, {{1, 1}, {2, 1}, {3, 0}}, 0});

  std::stringstream text;
  write_circuit_text(text, c);
  CHECK(text.str().find("RY 0 ctrl=1:0;2:1 theta=-1.2345678901234567") != std::string::npos);
  CHECK(text.str().find("# register m 1 3") != std::string::npos);
  const Circuit t = read_circuit_text(text);
  CHECK(t.gates == c.gates);
  CHECK(t.name == "demo");
  CHECK(t.parameters == c.parameters);
  CHECK(t.layout.qubits() == 5);
  CHECK(t.layout.reg("m").offset == 1);

  std::stringstream json;
  write_circuit_json(json, c);
  const Circuit j = read_circuit_json(json);
  CHECK(j.gates == c.gates);
  CHECK(j.parameters == c.parameters);
  CHECK(j.layout.reg("eq").offset == 4);

  std::istringstream broken("# register q 0 1\nFOO 0\n");
  CHECK_THROWS_AS(read_circuit_text(broken), InvalidInput);
}
