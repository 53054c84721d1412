#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "orbitlin/world.hpp"

using namespace orbitlin;

TEST_CASE("equality atoms have no relations") {
    World w = World::equality();
    AtomId a = w.add_atom();
    AtomId b = w.add_atom();
    RelationProfile p = w.relate(a, b);
    CHECK_FALSE(p.equal);
    CHECK(p.ord == Ord::None);
    CHECK(p.fwd == 0);
    CHECK(p.bwd == 0);
    CHECK(w.relate(a, a).equal);
}

TEST_CASE("rado-bit edges follow the BIT rule") {
    World w = World::rado_bit();
    w.add_rado_natural(0);
    w.add_rado_natural(1);
    w.add_rado_natural(2);
    CHECK(w.relate(1, 2).fwd == 1);  // bit 1 of 2 is set
    CHECK(w.relate(1, 2).bwd == 1);  // symmetric
    CHECK(w.relate(0, 2).fwd == 0);  // bit 0 of 2 is clear
    CHECK(w.relate(0, 1).fwd == 1);  // bit 0 of 1 is set
    // pure function of the ids: stable across re-query
    CHECK(w.relate(1, 2).fwd == 1);
}

TEST_CASE("unknown atoms are rejected") {
    World w = World::dense_order();
    AtomId a = w.add_atom();
    CHECK_THROWS_AS((void)w.relate(a, 999), Error);
}

TEST_CASE("forbidden family needs all pairs related") {
    Vocabulary v;
    v.binary = {"E"};
    v.symmetric = {true};
    FiniteStructure two;
    two.size = 2;
    two.unary = {0, 0};
    two.binary.resize(1);  // no edge between the two elements
    CHECK_THROWS_AS(ForbiddenFamily::make(v, {two}), Error);
}

TEST_CASE("triangle-free world rejects a triangle-completing atom") {
    World w = World::preset("ordered-henson-k3");
    AtomId a = w.add_atom();
    AtomId b = w.add_atom();
    w.add_fact(0, a, b);
    FreshRequest req;
    req.facts_fwd = {{0, a}, {0, b}};
    req.above = {b};
    CHECK_THROWS_AS(w.realize(req), Error);
    // The rejected atom must not linger.
    CHECK(w.atom_count() == 2);
    CHECK(w.verify_no_forbidden());
}

TEST_CASE("lemma-mode realize clones relations and slots just above") {
    World w = World::preset("ordered-rado");
    AtomId a = w.add_atom();
    AtomId b = w.add_atom();
    AtomId c = w.add_atom();
    w.add_fact(0, a, b);
    AtomId z = w.realize(FreshRequest::lemma(b, {a, c}, {c}));
    CHECK(w.fact(0, z, a));       // copied edge toward X
    CHECK_FALSE(w.fact(0, z, b)); // unrelated to the anchor
    CHECK_FALSE(w.fact(0, z, c)); // unrelated to Y
    CHECK(w.order_key(b) < w.order_key(z));
    CHECK(w.order_key(z) < w.order_key(c));
}

TEST_CASE("lemma-mode realize never fails on free-amalgamation presets") {
    World w = World::preset("ordered-henson-k3");
    std::vector<AtomId> atoms;
    for (int i = 0; i < 4; ++i) atoms.push_back(w.add_atom());
    w.add_fact(0, atoms[0], atoms[1]);
    w.add_fact(0, atoms[1], atoms[2]);
    for (int round = 0; round < 10; ++round) {
        AtomId z = w.realize(FreshRequest::lemma(atoms[static_cast<size_t>(round) % 4],
                                                 {atoms[0], atoms[1], atoms[2], atoms[3]}));
        atoms.push_back(z);
        CHECK(w.verify_no_forbidden());
    }
}

TEST_CASE("inconsistent order demands are rejected") {
    World w = World::dense_order();
    AtomId a = w.add_atom();
    AtomId b = w.add_atom();
    FreshRequest req;
    req.above = {b};
    req.below = {a};  // wants a-key > fresh > b-key with a < b
    CHECK_THROWS_AS(w.realize(req), Error);
}

TEST_CASE("apply_renaming validates order against the support") {
    World w = World::dense_order();
    AtomId a = w.add_atom();  // a < s < b
    AtomId s = w.add_atom();
    AtomId b = w.add_atom();
    CHECK_NOTHROW(w.apply_renaming({{a, a}, {b, b}}, {s}));
    CHECK_THROWS_AS(w.apply_renaming({{a, b}}, {s}), Error);
}

TEST_CASE("apply_renaming accepts a profile-matching rado clone") {
    World w = World::rado_bit();
    std::vector<AtomId> win = w.window(3);
    FreshRequest req;
    // same adjacency toward {0, 2} as atom 1 has
    for (AtomId t : {win[0], win[2]})
        if (w.fact(0, 1, t)) req.facts_fwd.push_back({0, t});
    AtomId v = w.realize(req);
    CHECK_NOTHROW(w.apply_renaming({{1, v}}, {win[0], win[2]}));
}
