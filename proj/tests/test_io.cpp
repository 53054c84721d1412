#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "orbitlin/io.hpp"

using namespace orbitlin;

static const char* kVectorJson = R"({
  "field": "q",
  "world": "ordered-henson-k3",
  "presentation": {
    "elements": ["a", "b", "c", "z"],
    "order": ["a", "b", "c", "z"],
    "binary_facts": {"E": [["a", "b"], ["b", "c"], ["a", "z"]]}
  },
  "entries": [[["a", "b"], "1"], [["b", "c"], "-1"], [["b", "a"], "2"]]
})";

TEST_CASE("vector files load, normalize and merge entries") {
    VectorFile vf = load_vector_file(kVectorJson);
    CHECK(vf.lw.world.verify_no_forbidden());
    VectorFS v = to_single_orbit(vf, 0);
    CHECK(v.orbit.dim() == 2);
    // (b, a) normalizes onto (a, b): coefficients merge to 3
    CHECK(v.at({vf.lw.atom("a"), vf.lw.atom("b")})[0] == vf.field.from_int(3));
    CHECK(v.entries.size() == 2);
}

TEST_CASE("facts adding forbidden structures are rejected at load") {
    const char* bad = R"({
      "field": "q",
      "world": "ordered-henson-k3",
      "presentation": {
        "elements": ["a", "b", "c"],
        "binary_facts": {"E": [["a","b"],["b","c"],["a","c"]]}
      },
      "entries": [[["a","b"], "1"]]
    })";
    CHECK_THROWS_AS(load_vector_file(bad), Error);
}

TEST_CASE("mixed-orbit entries are rejected by the single-orbit view") {
    const char* mixed = R"({
      "field": "q",
      "world": "order",
      "presentation": {"elements": ["a", "b"]},
      "entries": [[["a", "b"], "1"], [["a", "a"], "1"]]
    })";
    VectorFile vf = load_vector_file(mixed);
    CHECK_THROWS_AS(to_single_orbit(vf, 0), Error);
}

TEST_CASE("power vectors route tuples into ambient components") {
    const char* raw = R"({
      "field": "q",
      "world": "order",
      "presentation": {"elements": ["a", "b"]},
      "entries": [[["a", "b"], "1"], [["b", "a"], "1"], [["a", "a"], "5"]]
    })";
    VectorFile vf = load_vector_file(raw);
    PowerAmbient pa = power_ambient(vf.lw.world, 2);
    SumVector v = to_power_vector(vf, pa, 0);
    size_t nonzero = 0;
    for (const auto& [tag, part] : v.parts) nonzero += part.entries.size();
    CHECK(nonzero == 3);  // three distinct components touched
}

TEST_CASE("structures parse with symmetric closure") {
    Vocabulary voc;
    FiniteStructure b = parse_structure(R"({
      "vocabulary": {"binary": ["E"], "symmetric": ["E"]},
      "elements": ["x", "y", "z"],
      "binary_facts": {"E": [["x", "y"]]}
    })", voc);
    CHECK(b.size == 3);
    CHECK(b.has_edge(0, 0, 1));
    CHECK(b.has_edge(0, 1, 0));
    CHECK_FALSE(b.has_edge(0, 0, 2));
}

TEST_CASE("rado-bit presentations take naturals and reject explicit facts") {
    const char* ok = R"({
      "field": "q", "world": "rado-bit",
      "presentation": {"elements": [0, 1, 2]},
      "entries": [[[1, 2], "1"]]
    })";
    VectorFile vf = load_vector_file(ok);
    CHECK(vf.lw.world.fact(0, 1, 2));
    const char* bad = R"({
      "field": "q", "world": "rado-bit",
      "presentation": {"elements": [0, 1], "binary_facts": {"E": [["0","1"]]}},
      "entries": [[[0], "1"]]
    })";
    CHECK_THROWS_AS(load_vector_file(bad), Error);
}

TEST_CASE("automaton files round-trip through the runner") {
    const char* aut = R"({
      "field": "q", "world": "order",
      "presentation": {"elements": ["x", "y"]},
      "support": [],
      "states": [{"name": "start", "rep": []}, {"name": "seen", "rep": ["x"]}],
      "letters": [{"name": "a", "rep": ["x"]}],
      "initial": [["start", [], "1"]],
      "output": {"start": "0", "seen": "1"},
      "delta": [
        {"state": "start", "letter": "a", "rep_state": [], "rep_letter": ["x"],
         "to": [["1", "seen", ["x"]]]},
        {"state": "seen", "letter": "a", "rep_state": ["x"], "rep_letter": ["x"],
         "to": [["1", "seen", ["x"]]]},
        {"state": "seen", "letter": "a", "rep_state": ["x"], "rep_letter": ["y"],
         "to": [["1", "seen", ["x"]]]},
        {"state": "seen", "letter": "a", "rep_state": ["y"], "rep_letter": ["x"],
         "to": [["1", "seen", ["y"]]]}
      ]
    })";
    LoadedWorld lw;
    WeightedAutomaton A = load_automaton(aut, lw);
    validate_total(lw.world, A);
    Field f = A.field;
    AtomId x = lw.atom("x"), y = lw.atom("y");
    CHECK(run(lw.world, A, {}) == f.zero());
    CHECK(run(lw.world, A, {{x}, {y}}) == f.one());
}

TEST_CASE("subspace files round-trip the echelon data") {
    World w = World::dense_order();
    AtomId a = w.add_atom(), b = w.add_atom();
    Field f = Field::rationals();
    PowerAmbient pa = power_ambient(w, 2);
    SumVector g = sum_zero(f);
    auto [tag, t] = route_tuple(w, pa, {a, b});
    g.add_part_entry(pa.space, tag, t, Coeff{f.from_int(2)});
    EqSubspace W = subspace_from_generators(f, pa.space, {g});
    EqSubspace W2 = subspace_from_json(subspace_to_json(W), f);
    CHECK(W == W2);
    CHECK(subspace_to_json(W) == subspace_to_json(W2));
}
