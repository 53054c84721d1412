#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "orbitlin/automata.hpp"

using namespace orbitlin;

namespace {

Field Q() { return Field::rationals(); }

// A small ordered-atom automaton counting letters weighted by the head
// state; used to exercise the saturation engine.
WeightedAutomaton counting_automaton(World& w, const Scalar& out_scale, const Scalar& init_scale) {
    Field f = Q();
    std::vector<AtomId> win = w.window(2);
    WeightedAutomaton A;
    A.field = f;
    OrbitDescriptor zero_dim = descriptor_of(w, {}, {});
    OrbitDescriptor one_dim = descriptor_of(w, {win[0]}, {});
    A.states = {{"seen", one_dim}, {"start", zero_dim}};
    A.letters = {{"a", one_dim}};
    A.initial = sum_zero(f, 1);
    A.initial.add_part_entry(A.state_ambient(), "start", {}, Coeff{init_scale});
    A.output["start"] = f.zero();
    A.output["seen"] = out_scale;
    auto add = [&](const std::string& st, Tuple rs, Tuple rl,
                   std::vector<std::tuple<Coeff, std::string, Tuple>> tpl) {
        WeightedAutomaton::Transition tr;
        tr.state_tag = st;
        tr.letter_tag = "a";
        tr.rep_state = rs;
        tr.rep_letter = rl;
        Tuple joint = rs;
        joint.insert(joint.end(), rl.begin(), rl.end());
        tr.joint_key = qf_type(w, joint, A.support).str();
        tr.templ = std::move(tpl);
        A.delta.push_back(std::move(tr));
    };
    // start --a--> seen(a); seen(x) --a--> seen(x) regardless of the letter.
    add("start", {}, {win[0]}, {{Coeff{f.one()}, "seen", {win[0]}}});
    add("seen", {win[0]}, {win[0]}, {{Coeff{f.one()}, "seen", {win[0]}}});
    add("seen", {win[0]}, {win[1]}, {{Coeff{f.one()}, "seen", {win[0]}}});
    add("seen", {win[1]}, {win[0]}, {{Coeff{f.one()}, "seen", {win[1]}}});
    return A;
}

}  // namespace

TEST_CASE("the first-letter automaton computes f") {
    World w = World::rado_bit();
    Field f = Q();
    WeightedAutomaton A = first_letter_adjacent_automaton(w, f);
    validate_total(w, A);
    std::vector<AtomId> win = w.window(5);
    // f(a b) with edge(a, b): atoms 1, 2 are adjacent
    CHECK(run(w, A, {{1}, {2}}) == f.one());
    CHECK(run(w, A, {}) == f.zero());
    CHECK(run(w, A, {{1}}) == f.one());
    // 1 adjacent to 2 but 1 not adjacent to 4 (bit 1 of 4 is 0)
    CHECK(run(w, A, {{1}, {2}, {4}}) == f.zero());
    CHECK(run(w, A, {{0}, {0}}) == f.zero());  // repeated letter: irreflexive
    // exhaustive cross-check on all short words over the window
    std::vector<Word> words = {{}};
    for (int len = 0; len < 3; ++len) {
        std::vector<Word> next;
        for (const Word& word : words) {
            CHECK(run(w, A, word) == first_letter_adjacent_eval(w, f, word));
            for (AtomId a : win) {
                Word w2 = word;
                w2.push_back({a});
                next.push_back(w2);
            }
        }
        words = std::move(next);
    }
}

TEST_CASE("run is linear in the initial vector") {
    World w = World::dense_order();
    WeightedAutomaton A = counting_automaton(w, Q().one(), Q().one());
    WeightedAutomaton B = counting_automaton(w, Q().one(), Q().from_int(3));
    std::vector<AtomId> win = w.window(3);
    for (const Word& word : {Word{}, Word{{win[0]}}, Word{{win[1]}, {win[2]}}}) {
        Scalar x = run(w, A, word);
        Scalar y = run(w, B, word);
        CHECK(y == Q().mul(Q().from_int(3), x));
    }
}

TEST_CASE("letters outside the alphabet are rejected") {
    World w = World::dense_order();
    WeightedAutomaton A = counting_automaton(w, Q().one(), Q().one());
    try {
        run(w, A, {{}});
        FAIL("expected LetterNotInAlphabet");
    } catch (const Error& e) {
        CHECK(e.kind() == "LetterNotInAlphabet");
    }
}

TEST_CASE("an automaton is equivalent to itself and to its scaled variant") {
    World w = World::dense_order();
    WeightedAutomaton A = counting_automaton(w, Q().one(), Q().one());
    EquivalenceResult self = equivalent(w, A, A);
    CHECK(self.equivalent);
    // outputs scaled by 2, initial vector scaled by 1/2
    WeightedAutomaton B = counting_automaton(w, Q().from_int(2), Q().from_rational(Rational(1, 2)));
    CHECK(equivalent(w, A, B).equivalent);
}

TEST_CASE("inequivalence produces a verified witness word") {
    World w = World::dense_order();
    WeightedAutomaton A = counting_automaton(w, Q().one(), Q().one());
    WeightedAutomaton B = counting_automaton(w, Q().from_int(2), Q().one());
    EquivalenceResult r = equivalent(w, A, B);
    CHECK_FALSE(r.equivalent);
    REQUIRE_FALSE(r.witness.empty());
    CHECK_FALSE(run(w, A, r.witness) == run(w, B, r.witness));
}

TEST_CASE("saturation agrees with bounded word enumeration") {
    World w = World::dense_order();
    WeightedAutomaton A = counting_automaton(w, Q().one(), Q().one());
    WeightedAutomaton B = counting_automaton(w, Q().from_int(2), Q().from_rational(Rational(1, 2)));
    WeightedAutomaton C = counting_automaton(w, Q().from_int(2), Q().one());
    std::vector<AtomId> win = w.window(4);
    std::vector<Tuple> letters;
    for (AtomId a : win) letters.push_back({a});
    CHECK(equivalent(w, A, B).equivalent ==
          enumeration_equivalent(w, A, B, letters, 3).equivalent);
    CHECK(equivalent(w, A, C).equivalent ==
          enumeration_equivalent(w, A, C, letters, 3).equivalent);
}

TEST_CASE("the saturation engine refuses unordered worlds") {
    World w = World::rado_bit();
    WeightedAutomaton A = first_letter_adjacent_automaton(w, Q());
    try {
        equivalent(w, A, A);
        FAIL("expected UnsupportedWorld");
    } catch (const Error& e) {
        CHECK(e.kind() == "UnsupportedWorld");
    }
    // the bounded fallback still answers
    std::vector<Tuple> letters = {{0}, {1}, {2}};
    CHECK(enumeration_equivalent(w, A, A, letters, 3).equivalent);
}

TEST_CASE("left derivatives of f fall into three classes") {
    World w = World::rado_bit();
    WeightedAutomaton A = first_letter_adjacent_automaton(w, Q());
    std::vector<AtomId> win = w.window(4);
    std::vector<Tuple> letters;
    for (AtomId a : win) letters.push_back({a});
    CHECK(derivative_orbit_census(w, A, letters, 2) == 3);
    // derivative by the empty word is the initial configuration itself
    CHECK(sum_equal(left_derivative(w, A, {}), A.initial));
    // derivative by a non-adjacent pair is the dead (always-zero) residual
    SumVector dead = left_derivative(w, A, {{0}, {2}});
    for (const Word& probe : {Word{}, Word{{1}}, Word{{3}}}) {
        SumVector cfg = dead;
        for (const Tuple& l : probe) cfg = step(w, A, cfg, l);
        CHECK(Q().is_zero(output_of(A, cfg)));
    }
}

TEST_CASE("right-derivative ranks grow strictly") {
    World w = World::rado_bit();
    std::vector<size_t> ranks = right_derivative_rank(w, Q(), 3, 6);
    REQUIRE(ranks.size() == 3);
    CHECK(ranks[0] == 6);
    for (size_t i = 1; i < ranks.size(); ++i) CHECK(ranks[i] > ranks[i - 1]);
    // two distinct singletons are independent
    World w2 = World::rado_bit();
    std::vector<size_t> r1 = right_derivative_rank(w2, Q(), 1, 2);
    CHECK(r1[0] == 2);
}

TEST_CASE("rank growth without widening reports the window as too small") {
    World w = World::rado_bit();
    try {
        right_derivative_rank(w, Q(), 2, 4, false);
        FAIL("expected WindowTooSmall");
    } catch (const Error& e) {
        CHECK(e.kind() == "WindowTooSmall");
    }
}

TEST_CASE("rank growth with no sets is empty") {
    World w = World::rado_bit();
    CHECK(right_derivative_rank(w, Q(), 0, 4).empty());
}
