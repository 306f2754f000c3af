// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <random>

#include "cdstream/encoding.hpp"
#include "cdstream/engine.hpp"
#include "cdstream/oracle.hpp"
#include "cdstream/pup.hpp"
#include "cdstream/qc.hpp"
#include "cdstream/stream_gen.hpp"
#include "support/bruteforce.hpp"

using namespace cdstream;

namespace {

// The security-layout example: six zones over six sensors, four units,
// ucap = iucap = 2.
PupInstance layout_instance() {
  PupInstance inst;
  inst.zones = {"z1", "z123", "z24", "z35", "z456", "z6"};
  inst.sensors = {"s1", "s2", "s3", "s4", "s5", "s6"};
  inst.edges = {{"z1", "s1"},   {"z123", "s1"}, {"z123", "s2"}, {"z123", "s3"},
                {"z24", "s2"},  {"z24", "s4"},  {"z35", "s3"},  {"z35", "s5"},
                {"z456", "s4"}, {"z456", "s5"}, {"z456", "s6"}, {"z6", "s6"}};
  inst.units = 4;
  inst.ucap = 2;
  inst.iucap = 2;
  return inst;
}

PupSolution layout_solution() {
  PupSolution sol;
  sol.zone_unit = {{"z1", 1}, {"z123", 1}, {"z24", 2}, {"z35", 2}, {"z456", 3}, {"z6", 3}};
  sol.sensor_unit = {{"s1", 1}, {"s2", 1}, {"s3", 2}, {"s4", 2}, {"s5", 3}, {"s6", 3}};
  sol.unit_unit = {{1, 2}, {2, 3}};
  return sol;
}

// Pins every decision variable of the encoding to the solution's value and
// asks the engine for a model; satisfiable means the solution (plus the
// all-on selectors) extends to the auxiliary counter variables.
bool solution_satisfies_encoding(const PupEncoding& enc, const PupInstance& inst,
                                 const PupSolution& sol) {
  std::vector<Clause> clauses = enc.clauses;
  std::set<Atom> true_atoms;
  for (const auto& [z, u] : sol.zone_unit) true_atoms.insert(enc.zu.at({z, u}));
  for (const auto& [s, u] : sol.sensor_unit) true_atoms.insert(enc.su.at({s, u}));
  for (const auto& [uv, atom] : enc.uu)
    if (std::find(sol.unit_unit.begin(), sol.unit_unit.end(), uv) != sol.unit_unit.end())
      true_atoms.insert(atom);
  for (const auto& [key, atom] : enc.zu)
    clauses.push_back(make_clause({Literal(atom, true_atoms.contains(atom))}));
  for (const auto& [key, atom] : enc.su)
    clauses.push_back(make_clause({Literal(atom, true_atoms.contains(atom))}));
  for (const auto& [key, atom] : enc.uu)
    clauses.push_back(make_clause({Literal(atom, true_atoms.contains(atom))}));
  (void)inst;
  Engine e(clauses, enc.atom_count);
  std::vector<Literal> on;
  for (const auto& [atom, value] : enc.selectors.defaults) on.emplace_back(atom, value);
  return e.solve(on).is_model();
}

std::vector<Literal> selector_assumptions(const PupEncoding& enc, const PupInstance& inst) {
  std::vector<Literal> lits;
  for (const auto& [name, binding] : enc.selectors.bindings) {
    bool value = true;
    if (name.starts_with("zone_off_"))
      value = !inst.disabled_zones.contains(name.substr(9));
    else if (name.starts_with("sensor_off_"))
      value = !inst.disabled_sensors.contains(name.substr(11));
    lits.emplace_back(binding.selector, value);
  }
  std::sort(lits.begin(), lits.end());
  return lits;
}

}  // namespace

TEST_CASE("layout instance solution satisfies the encoding", "[pup]") {
  const PupInstance inst = layout_instance();
  const PupEncoding enc = encode_pup(inst);
  REQUIRE(solution_satisfies_encoding(enc, inst, layout_solution()));
}

TEST_CASE("decoding the pinned layout model recovers its edges", "[pup]") {
  const PupInstance inst = layout_instance();
  const PupEncoding enc = encode_pup(inst);
  const PupSolution sol = layout_solution();
  std::vector<Clause> clauses = enc.clauses;
  std::set<Atom> true_atoms;
  for (const auto& [z, u] : sol.zone_unit) true_atoms.insert(enc.zu.at({z, u}));
  for (const auto& [s, u] : sol.sensor_unit) true_atoms.insert(enc.su.at({s, u}));
  true_atoms.insert(enc.uu.at({1, 2}));
  true_atoms.insert(enc.uu.at({2, 3}));
  for (const auto& m : {enc.zu, enc.su})
    for (const auto& [key, atom] : m)
      clauses.push_back(make_clause({Literal(atom, true_atoms.contains(atom))}));
  for (const auto& [key, atom] : enc.uu)
    clauses.push_back(make_clause({Literal(atom, true_atoms.contains(atom))}));
  Engine e(clauses, enc.atom_count);
  std::vector<Literal> on;
  for (const auto& [atom, value] : enc.selectors.defaults) on.emplace_back(atom, value);
  const auto out = e.solve(on);
  REQUIRE(out.is_model());
  const PupSolution decoded = decode_pup(out.model, enc);
  REQUIRE(decoded.zone_unit.size() + decoded.sensor_unit.size() == 12);
  REQUIRE(decoded.unit_unit.size() == 2);
  REQUIRE(check_pup(inst, decoded));
}

TEST_CASE("all components disabled is satisfiable with an empty solution", "[pup]") {
  PupInstance inst = layout_instance();
  for (const auto& z : inst.zones) inst.disabled_zones.insert(z);
  for (const auto& s : inst.sensors) inst.disabled_sensors.insert(s);
  const PupEncoding enc = encode_pup(inst);
  Engine e(enc.clauses, enc.atom_count);
  const auto out = e.solve(selector_assumptions(enc, inst));
  REQUIRE(out.is_model());
  // the encoding forces all placement variables off; an empty H checks out
  const PupSolution decoded = decode_pup(out.model, enc);
  REQUIRE(decoded.zone_unit.empty());
  REQUIRE(decoded.sensor_unit.empty());
  REQUIRE(check_pup(inst, PupSolution{}));
}

TEST_CASE("checker rejects a broken cover", "[pup]") {
  const PupInstance inst = layout_instance();
  PupSolution sol = layout_solution();
  REQUIRE(check_pup(inst, sol));
  sol.zone_unit.erase(sol.zone_unit.begin());  // drop (z1, u1)
  REQUIRE_FALSE(check_pup(inst, sol));
}

TEST_CASE("checker rejects a missing partner edge", "[pup]") {
  const PupInstance inst = layout_instance();
  PupSolution sol = layout_solution();
  sol.unit_unit = {{2, 3}};  // z123 on u1 and s3 on u2 now lack (u1, u2)
  REQUIRE_FALSE(check_pup(inst, sol));
}

TEST_CASE("checker rejects capacity violations", "[pup]") {
  const PupInstance inst = layout_instance();
  PupSolution sol = layout_solution();
  // pile three zones onto u1 (ucap = 2)
  for (auto& [z, u] : sol.zone_unit)
    if (z == "z24") u = 1;
  REQUIRE_FALSE(check_pup(inst, sol));
  PupSolution sol2 = layout_solution();
  sol2.unit_unit = {{1, 2}, {2, 3}, {2, 4}};  // u2 exceeds iucap = 2... needs 3 partners
  REQUIRE_FALSE(check_pup(inst, sol2));
}

TEST_CASE("row-length-2 solver status equals the exhaustive oracle on every disable set",
          "[pup][slow]") {
  const PupInstance base = gen_double_pup(2);
  const PupEncoding enc = encode_pup(base);
  Engine e(enc.clauses, enc.atom_count);
  const std::size_t nz = base.zones.size(), ns = base.sensors.size();
  for (std::uint32_t mask = 0; mask < (1u << (nz + ns)); ++mask) {
    PupInstance inst = base;
    for (std::size_t i = 0; i < nz; ++i)
      if (mask >> i & 1) inst.disabled_zones.insert(base.zones[i]);
    for (std::size_t j = 0; j < ns; ++j)
      if (mask >> (nz + j) & 1) inst.disabled_sensors.insert(base.sensors[j]);
    const bool expect = pup_oracle_satisfiable(inst);
    const auto out = e.solve(selector_assumptions(enc, inst));
    REQUIRE(out.is_model() == expect);
    if (out.is_model()) REQUIRE(check_pup(inst, decode_pup(out.model, enc)));
  }
}

TEST_CASE("row-length-3 solver status equals the oracle on sampled disable sets", "[pup][slow]") {
  const PupInstance base = gen_double_pup(3);
  const PupEncoding enc = encode_pup(base);
  Engine e(enc.clauses, enc.atom_count);
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 120; ++iter) {
    PupInstance inst = base;
    for (const auto& z : base.zones)
      if ((rng() & 3) == 0) inst.disabled_zones.insert(z);
    for (const auto& s : base.sensors)
      if ((rng() & 3) == 0) inst.disabled_sensors.insert(s);
    const bool expect = pup_oracle_satisfiable(inst);
    const auto out = e.solve(selector_assumptions(enc, inst));
    REQUIRE(out.is_model() == expect);
    if (out.is_model()) REQUIRE(check_pup(inst, decode_pup(out.model, enc)));
  }
}

TEST_CASE("tiny instance: checker accepts exactly the encodable solutions", "[pup]") {
  PupInstance inst;
  inst.zones = {"a"};
  inst.sensors = {"b"};
  inst.edges = {{"a", "b"}};
  inst.units = 2;
  inst.ucap = 1;
  inst.iucap = 1;
  const PupEncoding enc = encode_pup(inst);
  // enumerate all candidate solutions over the 5 decision variables
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    PupSolution sol;
    if (mask & 1) sol.zone_unit.emplace_back("a", 1);
    if (mask & 2) sol.zone_unit.emplace_back("a", 2);
    if (mask & 4) sol.sensor_unit.emplace_back("b", 1);
    if (mask & 8) sol.sensor_unit.emplace_back("b", 2);
    if (mask & 16) sol.unit_unit.emplace_back(1, 2);
    std::vector<Clause> clauses = enc.clauses;
    clauses.push_back(make_clause({Literal(enc.zu.at({"a", 1}), (mask & 1) != 0)}));
    clauses.push_back(make_clause({Literal(enc.zu.at({"a", 2}), (mask & 2) != 0)}));
    clauses.push_back(make_clause({Literal(enc.su.at({"b", 1}), (mask & 4) != 0)}));
    clauses.push_back(make_clause({Literal(enc.su.at({"b", 2}), (mask & 8) != 0)}));
    clauses.push_back(make_clause({Literal(enc.uu.at({1, 2}), (mask & 16) != 0)}));
    Engine e(clauses, enc.atom_count);
    std::vector<Literal> on;
    for (const auto& [atom, value] : enc.selectors.defaults) on.emplace_back(atom, value);
    REQUIRE(e.solve(on).is_model() == check_pup(inst, sol));
  }
}

TEST_CASE("sequential counter matches popcount semantics", "[encoding][slow]") {
  for (const std::size_t m : {4u, 5u}) {
    for (const std::size_t bound : {2u, 3u}) {
      VarPool pool;
      std::vector<Atom> xs;
      for (std::size_t i = 0; i < m; ++i) xs.push_back(pool.fresh("x" + std::to_string(i)));
      std::vector<Clause> clauses;
      at_most_k(clauses, pool, xs, bound, "amk");
      const Atom atoms = pool.count();
      const auto table = test::satisfying_table(clauses, atoms);
      // project satisfiable assignments onto the x variables
      std::vector<bool> reachable(1u << m, false);
      for (std::uint64_t a = 0; a < (std::uint64_t{1} << atoms); ++a)
        if (table[a]) reachable[a & ((1u << m) - 1)] = true;
      for (std::uint32_t x = 0; x < (1u << m); ++x)
        REQUIRE(reachable[x] == (static_cast<std::size_t>(std::popcount(x)) <= bound));
    }
  }
}

TEST_CASE("pairwise at-most-one", "[encoding]") {
  VarPool pool;
  std::vector<Atom> xs = {pool.fresh("a"), pool.fresh("b"), pool.fresh("c")};
  std::vector<Clause> clauses;
  at_most_one_pairwise(clauses, xs);
  REQUIRE(clauses.size() == 3);
  const auto table = test::satisfying_table(clauses, 3);
  for (std::uint32_t x = 0; x < 8; ++x) REQUIRE(table[x] == (std::popcount(x) <= 1));
}

TEST_CASE("qc board for n=4 has exactly two complete placements", "[qc]") {
  const QcEncoding enc = encode_qc(4);
  // board clauses are exactly those over the q variables (allocated first)
  std::vector<Clause> board;
  for (const Clause& c : enc.clauses)
    if (c.max_atom() <= 16) board.push_back(c);
  const auto table = test::satisfying_table(board, 16);
  REQUIRE(std::count(table.begin(), table.end(), true) == 2);
  // and they are the two classic solutions
  const auto idx = [&](int r, int c) { return (enc.q.at({r, c}) - 1); };
  std::uint32_t first = 0, second = 0;
  for (const auto& [r, c] : std::vector<std::pair<int, int>>{{1, 2}, {2, 4}, {3, 1}, {4, 3}})
    first |= 1u << idx(r, c);
  for (const auto& [r, c] : std::vector<std::pair<int, int>>{{1, 3}, {2, 1}, {3, 4}, {4, 2}})
    second |= 1u << idx(r, c);
  REQUIRE(table[first]);
  REQUIRE(table[second]);
}

TEST_CASE("assuming a full valid placement is satisfiable", "[qc]") {
  const QcEncoding enc = encode_qc(4);
  Engine e(enc.clauses, enc.atom_count);
  std::vector<Literal> assumptions;
  const std::set<std::pair<int, int>> queens = {{1, 2}, {2, 4}, {3, 1}, {4, 3}};
  for (const auto& [name, binding] : enc.selectors.bindings) {
    const auto rc = parse_queen_atom(name);
    assumptions.emplace_back(binding.selector, queens.contains(rc));
  }
  std::sort(assumptions.begin(), assumptions.end());
  const auto out = e.solve(assumptions);
  REQUIRE(out.is_model());
  REQUIRE(check_qc(4, decode_qc(out.model, enc)));
}

TEST_CASE("two attacking queens assumed are incoherent", "[qc]") {
  const QcEncoding enc = encode_qc(5);
  Engine e(enc.clauses, enc.atom_count);
  std::vector<Literal> assumptions;
  for (const auto& [name, binding] : enc.selectors.bindings) {
    const auto [r, c] = parse_queen_atom(name);
    const bool on = (r == 1 && c == 1) || (r == 3 && c == 3);  // same diagonal
    assumptions.emplace_back(binding.selector, on);
  }
  std::sort(assumptions.begin(), assumptions.end());
  REQUIRE(e.solve(assumptions).status == SolveStatus::Incoherent);
}

TEST_CASE("check_qc accepts the known n=4 solution and rejects attacks", "[qc]") {
  REQUIRE(check_qc(4, {{1, 2}, {2, 4}, {3, 1}, {4, 3}}));
  REQUIRE_FALSE(check_qc(4, {{1, 1}, {2, 1}, {3, 1}, {4, 1}}));  // shared column
  REQUIRE_FALSE(check_qc(4, {{1, 2}, {2, 4}, {3, 1}, {4, 2}}));  // column clash
  REQUIRE_FALSE(check_qc(4, {{1, 2}, {2, 4}, {3, 1}, {2, 3}}));  // diagonal attack
  REQUIRE_FALSE(check_qc(4, {{1, 2}, {2, 4}, {3, 1}}));          // wrong count
  REQUIRE_FALSE(check_qc(4, {{1, 2}, {2, 4}, {3, 1}, {4, 9}}));  // off the board
}

TEST_CASE("every generator-emittable atom resolves through the selector map", "[selector]") {
  const PupInstance pup = gen_double_pup(3);
  const PupEncoding penc = encode_pup(pup);
  for (const auto& z : pup.zones) REQUIRE(penc.selectors.bindings.contains("zone_off_" + z));
  for (const auto& s : pup.sensors) REQUIRE(penc.selectors.bindings.contains("sensor_off_" + s));
  REQUIRE_THROWS_AS(penc.selectors.at("zone_off_nonexistent"), UnknownAtomError);

  const QcEncoding qenc = encode_qc(8);
  for (int r = 1; r <= 8; ++r)
    for (int c = 1; c <= 8; ++c)
      REQUIRE(qenc.selectors.bindings.contains("queen_" + std::to_string(r) + "_" +
                                               std::to_string(c)));
}

TEST_CASE("instance json round-trips", "[io]") {
  const PupInstance inst = gen_double_pup(4);
  const PupInstance back = pup_from_json(pup_to_json(inst));
  REQUIRE(back.zones == inst.zones);
  REQUIRE(back.sensors == inst.sensors);
  REQUIRE(back.edges == inst.edges);
  REQUIRE(back.units == inst.units);
  const QcInstance q{9, {{1, 2}, {5, 7}}};
  const QcInstance qback = qc_from_json(qc_to_json(q));
  REQUIRE(qback.n == 9);
  REQUIRE(qback.placed == q.placed);
}

TEST_CASE("encode_qc rejects boards under 4", "[qc]") {
  REQUIRE_THROWS_AS(encode_qc(3), ConfigError);
}
