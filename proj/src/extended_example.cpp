#include "orbitlin/extended_example.hpp"

namespace orbitlin {

ExtendedExample make_extended_example(const Field& f) {
    ExtendedExample ex;
    ex.world = World::preset("ordered-henson-k3");
    const std::string names = "abcdefghi";
    for (char c : names) ex.atom[std::string(1, c)] = ex.world.add_atom();
    auto edge = [&](const std::string& x, const std::string& y) {
        ex.world.add_fact(0, ex.atom[x], ex.atom[y]);
    };
    // The triangle-free graph on a..i, ordered alphabetically.
    edge("a", "b");
    edge("a", "e");
    edge("a", "h");
    edge("b", "f");
    edge("b", "i");
    edge("c", "e");
    edge("c", "g");
    edge("d", "f");
    edge("d", "g");
    edge("g", "h");
    edge("g", "i");

    auto at = [&](const std::string& s) { return ex.atom[s]; };
    ex.orbit = descriptor_of(ex.world, {at("a"), at("h")}, {});
    ex.v = vec_zero(f, 1, ex.orbit);
    auto put = [&](const std::string& x, const std::string& y, long long c) {
        ex.v.add_entry({at(x), at(y)}, Coeff{f.from_int(c)});
    };
    // v = ah - ae + ce - cg + dg - df + bf - bi + gi - gh
    put("a", "h", 1);
    put("a", "e", -1);
    put("c", "e", 1);
    put("c", "g", -1);
    put("d", "g", 1);
    put("d", "f", -1);
    put("b", "f", 1);
    put("b", "i", -1);
    put("g", "i", 1);
    put("g", "h", -1);
    return ex;
}

std::vector<CogTerm> extended_example_witness(ExtendedExample& ex) {
    World& w = ex.world;
    const Field& f = ex.v.field;
    auto at = [&](const std::string& s) { return ex.atom.at(s); };

    // g' > g with edges to h and i only; b' > b with edges to f and i only.
    FreshRequest rg;
    rg.above = {at("g")};
    rg.below = {at("h")};
    rg.facts_fwd = {{0, at("h")}, {0, at("i")}};
    AtomId gp = w.realize(rg);
    FreshRequest rb;
    rb.above = {at("b")};
    rb.below = {at("c")};
    rb.facts_fwd = {{0, at("f")}, {0, at("i")}};
    AtomId bp = w.realize(rb);

    // z larger than everything, adjacent to the five sources a, c, d, g', b'
    // of the repaired vector and to nothing else.
    FreshRequest rz;
    rz.above = {at("i")};
    rz.facts_fwd = {{0, at("a")}, {0, at("c")}, {0, at("d")}, {0, gp}, {0, bp}};
    AtomId z = w.realize(rz);

    auto term = [&](long long c, AtomId a1, AtomId a2, AtomId b1, AtomId b2) {
        Duo d{{a1, a2}, {b1, b2}, ex.orbit};
        validate_duo(w, d);
        return CogTerm{Coeff{f.from_int(c)}, d};
    };
    // v = (ah . g'z) - (ae . cz) - (cg . dz) + (b'f . dz) - (b'i . g'z)
    //     - (gh . g'i) + (bf . b'i)
    return {
        term(1, at("a"), at("h"), gp, z),
        term(-1, at("a"), at("e"), at("c"), z),
        term(-1, at("c"), at("g"), at("d"), z),
        term(1, bp, at("f"), at("d"), z),
        term(-1, bp, at("i"), gp, z),
        term(-1, at("g"), at("h"), gp, at("i")),
        term(1, at("b"), at("f"), bp, at("i")),
    };
}

}  // namespace orbitlin
