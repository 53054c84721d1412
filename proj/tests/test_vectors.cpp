#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "orbitlin/extended_example.hpp"
#include "orbitlin/vectors.hpp"

using namespace orbitlin;

namespace {

Field Q() { return Field::rationals(); }

VectorFS single(const Field& f, const OrbitDescriptor& o, const Tuple& t, long long c) {
    VectorFS v = vec_zero(f, 1, o);
    v.add_entry(t, Coeff{f.from_int(c)});
    return v;
}

}  // namespace

TEST_CASE("projection sums along fibers") {
    World w = World::dense_order();
    AtomId a = w.add_atom(), b = w.add_atom(), c = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a, b}, {});
    VectorFS v = vec_zero(Q(), 1, o);
    v.add_entry({a, b}, Coeff{Q().from_int(2)});
    v.add_entry({a, c}, Coeff{Q().from_int(1)});
    v.add_entry({b, c}, Coeff{Q().from_int(-3)});
    VectorFS first = project(v, {o.positions[0]});
    CHECK(first.at({a})[0] == Q().from_int(3));
    CHECK(first.at({b})[0] == Q().from_int(-3));
    VectorFS none = project(v, {});
    CHECK(none.at({})[0] == Q().from_int(0));
    CHECK(none.is_zero());
    CHECK(project(vec_zero(Q(), 1, o), {o.positions[0]}).is_zero());
}

TEST_CASE("balancedness basics") {
    World w = World::equality();
    AtomId a = w.add_atom(), b = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a}, {});
    VectorFS v = single(Q(), o, {a}, 1);
    CHECK_FALSE(is_balanced(v));
    v.add_entry({b}, Coeff{Q().from_int(-1)});
    CHECK(is_balanced(v));
}

TEST_CASE("make_duo interleaves fresh partners") {
    World w = World::dense_order();
    AtomId x = w.add_atom(), y = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {x, y}, {});
    Duo d = make_duo(w, {x, y}, o);
    CHECK(w.order_key(x) < w.order_key(d.b[0]));
    CHECK(w.order_key(d.b[0]) < w.order_key(y));
    CHECK(w.order_key(y) < w.order_key(d.b[1]));
}

TEST_CASE("make_duo matches the worked triangle-free extension") {
    // gh extends to a duo with fresh partners carrying the postulated edges.
    ExtendedExample ex = make_extended_example(Q());
    World& w = ex.world;
    AtomId g = ex.atom["g"], h = ex.atom["h"];
    Duo d = make_duo(w, {g, h}, ex.orbit);
    CHECK(w.fact(0, d.b[0], h));        // the g-clone keeps the edge to h
    CHECK(w.fact(0, d.b[0], d.b[1]));   // and to the fresh h-partner
    CHECK_FALSE(w.fact(0, d.b[0], g));
    CHECK(w.verify_no_forbidden());
}

TEST_CASE("empty duo yields the empty-tuple cog") {
    World w = World::dense_order();
    OrbitDescriptor o = descriptor_of(w, {}, {});
    Duo d{{}, {}, o};
    VectorFS c = cog(Q(), d);
    CHECK(c.at({})[0] == Q().one());
    CHECK(c.entries.size() == 1);
}

TEST_CASE("one-dimensional cog is a difference") {
    World w = World::dense_order();
    AtomId a = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a}, {});
    Duo d = make_duo(w, {a}, o);
    VectorFS c = cog(Q(), d);
    CHECK(c.at({a})[0] == Q().one());
    CHECK(c.at({d.b[0]})[0] == Q().from_int(-1));
}

TEST_CASE("cogs are balanced") {
    ExtendedExample ex = make_extended_example(Q());
    World& w = ex.world;
    Duo d = make_duo(w, {ex.atom["a"], ex.atom["h"]}, ex.orbit);
    VectorFS c = cog(Q(), d);
    CHECK(c.entries.size() == 4);
    CHECK(is_balanced(c));
    CHECK(find_conflicts(w, c).empty());
}

TEST_CASE("the worked vector is balanced with the known conflicts") {
    ExtendedExample ex = make_extended_example(Q());
    CHECK(is_balanced(ex.v));
    ConflictReport rep = find_conflicts(ex.world, ex.v);
    bool g_equational = false;
    bool ab_relational = false;
    for (const auto& c : rep.items) {
        if (c.equational && c.atom1 == ex.atom["g"] && c.atom2 == ex.atom["g"])
            g_equational = true;
        if (!c.equational && c.pos1 == 0 && c.pos2 == 0 &&
            ((c.atom1 == ex.atom["a"] && c.atom2 == ex.atom["b"]) ||
             (c.atom1 == ex.atom["b"] && c.atom2 == ex.atom["a"])))
            ab_relational = true;
    }
    CHECK(g_equational);
    CHECK(ab_relational);
}

TEST_CASE("extract_cog peels a cog from a - 2b") {
    // ordered expansion of the equality atoms
    World w = World::dense_order();
    AtomId a = w.add_atom(), b = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a}, {});
    VectorFS v = single(Q(), o, {a}, 1);
    v.add_entry({b}, Coeff{Q().from_int(-2)});
    auto [c, d] = extract_cog(w, v);
    CHECK(d.a == Tuple{a});
    CHECK(c.at({a})[0] == Q().one());
    CHECK(c.entries.size() == 2);
    CHECK(is_balanced(c));
}

TEST_CASE("extract_cog of a cog returns a cog") {
    World w = World::dense_order();
    AtomId a = w.add_atom(), b = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a, b}, {});
    Duo d = make_duo(w, {a, b}, o);
    VectorFS c = cog(Q(), d);
    auto [c2, d2] = extract_cog(w, c);
    CHECK(vec_equal(c2, cog(Q(), d2)));
}

TEST_CASE("extract_cog over F2 handles a + b") {
    World w = World::dense_order();
    Field f = Field::prime(2);
    AtomId a = w.add_atom(), b = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a}, {});
    VectorFS v = vec_zero(f, 1, o);
    v.add_entry({a}, Coeff{f.one()});
    v.add_entry({b}, Coeff{f.one()});
    CHECK(is_balanced(v));  // 1 + 1 = 0
    auto [c, d] = extract_cog(w, v);
    CHECK(vec_equal(c, cog(f, d)));
    CHECK(c.at({d.a[0]})[0] == f.one());
}

TEST_CASE("extract_cog rejects the zero vector") {
    World w = World::dense_order();
    AtomId a = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a}, {});
    CHECK_THROWS_AS(extract_cog(w, vec_zero(Q(), 1, o)), Error);
}

TEST_CASE("decompose handles simple equality-atom vectors") {
    World w = World::dense_order();
    AtomId a = w.add_atom(), b = w.add_atom(), c = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a}, {});
    VectorFS v = vec_zero(Q(), 1, o);
    v.add_entry({a}, Coeff{Q().one()});
    v.add_entry({b}, Coeff{Q().one()});
    v.add_entry({c}, Coeff{Q().from_int(-2)});
    auto terms = decompose(w, v);
    CHECK(vec_equal(expand(Q(), 1, o, terms), v));
    for (const auto& t : terms) CHECK_NOTHROW(validate_duo(w, t.duo));
}

TEST_CASE("decompose rejects unbalanced input with the failing position") {
    World w = World::dense_order();
    AtomId a = w.add_atom(), b = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a, b}, {});
    VectorFS v = single(Q(), o, {a, b}, 1);
    try {
        decompose(w, v);
        FAIL("expected NotBalanced");
    } catch (const Error& e) {
        CHECK(e.kind() == "NotBalanced");
    }
}

TEST_CASE("decompose of the zero vector is empty") {
    World w = World::dense_order();
    AtomId a = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a}, {});
    CHECK(decompose(w, vec_zero(Q(), 1, o)).empty());
}

TEST_CASE("decompose reproduces the worked example within twelve fresh atoms") {
    ExtendedExample ex = make_extended_example(Q());
    long long before = ex.world.fresh_count();
    auto terms = decompose(ex.world, ex.v);
    CHECK(vec_equal(expand(Q(), 1, ex.orbit, terms), ex.v));
    CHECK(ex.world.fresh_count() - before <= 12);
    CHECK(ex.world.verify_no_forbidden());
}

TEST_CASE("the hand witness expands to the worked vector") {
    ExtendedExample ex = make_extended_example(Q());
    auto witness = extended_example_witness(ex);
    REQUIRE(witness.size() == 7);
    CHECK(vec_equal(expand(Q(), 1, ex.orbit, witness), ex.v));
}

TEST_CASE("projected subvectors of balanced vectors stay balanced") {
    ExtendedExample ex = make_extended_example(Q());
    // every v^{i:a}|^{-i} of the balanced worked vector is balanced
    for (size_t pos = 0; pos < 2; ++pos) {
        std::set<AtomId> atoms;
        for (const auto& [t, c] : ex.v.entries) atoms.insert(t[pos]);
        for (AtomId a : atoms) CHECK(is_balanced(pinned_subvector(ex.v, pos, a)));
    }
}

TEST_CASE("decompose keeps coefficients inside a declared space") {
    // E = {(k, -k)} in F^2.
    World w = World::dense_order();
    Field f = Q();
    AtomId a = w.add_atom(), b = w.add_atom();
    OrbitDescriptor o = descriptor_of(w, {a, b}, {});
    CoeffSpace E = CoeffSpace::span(f, 2, {{f.one(), f.from_int(-1)}});
    Duo d1 = make_duo(w, {a, b}, o);
    VectorFS v = cog(f, d1, Coeff{f.from_int(3), f.from_int(-3)});
    auto terms = decompose(w, v, E);
    CHECK(vec_equal(expand(f, 2, o, terms), v));
    for (const auto& t : terms) CHECK(E.contains(t.coeff));

    VectorFS bad = cog(f, d1, Coeff{f.one(), f.one()});
    try {
        decompose(w, bad, E);
        FAIL("expected CoefficientOutsideSpace");
    } catch (const Error& e) {
        CHECK(e.kind() == "CoefficientOutsideSpace");
    }
}

TEST_CASE("random cog combinations round-trip per world") {
    std::mt19937 rng(7);
    for (const char* preset : {"order", "ordered-rado", "ordered-henson-k3"}) {
        for (size_t d = 1; d <= 3; ++d) {
            World w = World::preset(preset);
            // a d-clique is triangle-free only for d < 3
            bool edges = std::string(preset) != "order" &&
                         (std::string(preset) != "ordered-henson-k3" || d < 3);
            std::vector<AtomId> base;
            for (size_t i = 0; i < d; ++i) base.push_back(w.add_atom());
            if (edges)
                for (size_t i = 0; i < d; ++i)
                    for (size_t j = i + 1; j < d; ++j) w.add_fact(0, base[i], base[j]);
            OrbitDescriptor o = descriptor_of(w, base, {});
            auto reps = enumerate_orbit_reps(w, o, 3);
            VectorFS v = vec_zero(Field::rationals(), 1, o);
            size_t k = 1 + rng() % 6;
            for (size_t i = 0; i < k; ++i) {
                Duo duo = make_duo(w, reps[rng() % reps.size()], o);
                long long c = static_cast<long long>(rng() % 7) - 3;
                v = vec_add(v, cog(Field::rationals(), duo,
                                   Coeff{Field::rationals().from_int(c)}));
            }
            CHECK(is_balanced(v));
            auto terms = decompose(w, v);
            CHECK(vec_equal(expand(Field::rationals(), 1, o, terms), v));
        }
    }
}

TEST_CASE("the empty tuple extends to the empty duo") {
    World w = World::dense_order();
    OrbitDescriptor o = descriptor_of(w, {}, {});
    Duo d = make_duo(w, {}, o);
    CHECK(d.a.empty());
    CHECK(d.b.empty());
}

TEST_CASE("window-balanced kernel vectors decompose exactly") {
    // Balanced vectors supported on a finite window, found by exact kernel
    // computation; unlike cog combinations these carry many conflicts.
    std::mt19937 rng(21);
    Field f = Field::rationals();
    for (int round = 0; round < 10; ++round) {
        World w = World::preset(round % 2 ? "ordered-henson-k3" : "ordered-rado");
        std::vector<AtomId> win;
        for (int i = 0; i < 6; ++i) {
            AtomId a = w.add_atom();
            for (AtomId b : win) {
                if (rng() % 2 == 0) continue;
                try {
                    w.add_fact(0, b, a);
                } catch (const Error&) {
                }
            }
            win.push_back(a);
        }
        // the orbit of adjacent increasing pairs (skip rounds without edges)
        OrbitDescriptor o;
        std::vector<Tuple> tuples;
        bool found = false;
        for (size_t i = 0; i < win.size() && !found; ++i)
            for (size_t j = i + 1; j < win.size() && !found; ++j)
                if (w.fact(0, win[i], win[j])) {
                    o = descriptor_of(w, {win[i], win[j]}, {});
                    found = true;
                }
        if (!found) continue;
        for (size_t i = 0; i < win.size(); ++i)
            for (size_t j = i + 1; j < win.size(); ++j)
                if (tuple_matches(w, o, {win[i], win[j]})) tuples.push_back({win[i], win[j]});

        // kernel of both drop projections over the window tuples
        std::map<AtomId, size_t> first_idx, second_idx;
        for (const Tuple& t : tuples) {
            first_idx.emplace(t[0], first_idx.size());
            second_idx.emplace(t[1], second_idx.size());
        }
        size_t rows_n = first_idx.size() + second_idx.size();
        ScalarRowSpace constraints = make_row_space(f, tuples.size());
        for (size_t c = 0; c < rows_n; ++c) {
            std::vector<Scalar> row(tuples.size(), f.zero());
            bool nonzero = false;
            for (size_t k = 0; k < tuples.size(); ++k) {
                bool hit = c < first_idx.size() ? first_idx.at(tuples[k][0]) == c
                                                : second_idx.at(tuples[k][1]) == c - first_idx.size();
                if (hit) {
                    row[k] = f.one();
                    nonzero = true;
                }
            }
            if (nonzero) constraints.insert(std::move(row));
        }
        // free columns give a kernel basis by back-substitution
        std::set<size_t> pivots(constraints.pivots().begin(), constraints.pivots().end());
        for (size_t j = 0; j < tuples.size(); ++j) {
            if (pivots.count(j)) continue;
            VectorFS v = vec_zero(f, 1, o);
            v.add_entry(tuples[j], Coeff{f.one()});
            for (size_t k = 0; k < constraints.dim(); ++k)
                v.add_entry(tuples[constraints.pivots()[k]],
                            Coeff{f.neg(constraints.rows()[k][j])});
            REQUIRE(is_balanced(v));
            auto terms = decompose(w, v);
            CHECK(vec_equal(expand(f, 1, o, terms), v));
            CHECK(w.verify_no_forbidden());
        }
    }
}

TEST_CASE("directed cog combinations round-trip") {
    std::mt19937 rng(17);
    for (int round = 0; round < 8; ++round) {
        World w = World::preset("ordered-digraph");
        size_t d = 1 + rng() % 2;
        std::vector<AtomId> base;
        for (size_t i = 0; i < d; ++i) base.push_back(w.add_atom());
        for (size_t i = 0; i < d; ++i)
            for (size_t j = i + 1; j < d; ++j) {
                size_t pick = rng() % 3;
                if (pick == 0) continue;
                w.add_fact(0, pick == 1 ? base[i] : base[j], pick == 1 ? base[j] : base[i]);
            }
        OrbitDescriptor o = descriptor_of(w, base, {});
        auto reps = enumerate_orbit_reps(w, o, 2);
        VectorFS v = vec_zero(Field::rationals(), 1, o);
        for (int k = 0; k < 3; ++k) {
            Duo duo = make_duo(w, reps[rng() % reps.size()], o);
            v = vec_add(v, cog(Field::rationals(), duo,
                               Coeff{Field::rationals().from_int(
                                   static_cast<long long>(rng() % 5) - 2)}));
        }
        auto terms = decompose(w, v);
        CHECK(vec_equal(expand(Field::rationals(), 1, o, terms), v));
        CHECK(w.verify_no_forbidden());
    }
}
