#include "orbitlin/vectors.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace orbitlin {

void VectorFS::add_entry(const Tuple& t, const Coeff& c) {
    auto it = entries.find(t);
    if (it == entries.end()) {
        if (!coeff_is_zero(field, c)) entries.emplace(t, c);
        return;
    }
    Coeff sum = coeff_add(field, it->second, c);
    if (coeff_is_zero(field, sum)) entries.erase(it);
    else it->second = std::move(sum);
}

VectorFS vec_zero(const Field& f, size_t m, OrbitDescriptor orbit) {
    VectorFS v;
    v.field = f;
    v.coeff_len = m;
    v.orbit = std::move(orbit);
    return v;
}

VectorFS vec_add(const VectorFS& a, const VectorFS& b) {
    assert(a.orbit == b.orbit && a.coeff_len == b.coeff_len);
    VectorFS r = a;
    for (const auto& [t, c] : b.entries) r.add_entry(t, c);
    return r;
}

VectorFS vec_sub(const VectorFS& a, const VectorFS& b) {
    VectorFS r = a;
    for (const auto& [t, c] : b.entries) r.add_entry(t, coeff_neg(a.field, c));
    return r;
}

VectorFS vec_neg(const VectorFS& a) {
    VectorFS r = a;
    for (auto& [t, c] : r.entries) c = coeff_neg(a.field, c);
    return r;
}

VectorFS vec_scale(const VectorFS& a, const Scalar& s) {
    VectorFS r = vec_zero(a.field, a.coeff_len, a.orbit);
    for (const auto& [t, c] : a.entries) r.add_entry(t, coeff_scale(a.field, s, c));
    return r;
}

bool vec_equal(const VectorFS& a, const VectorFS& b) {
    return a.orbit == b.orbit && a.entries == b.entries;
}

VectorFS project(const VectorFS& v, const IndexSet& J) {
    if (!is_index_subset(J, v.orbit.positions)) throw err_bad_index_set("project: J not in I");
    std::vector<size_t> idx;
    for (const auto& p : J)
        idx.push_back(static_cast<size_t>(
            std::find(v.orbit.positions.begin(), v.orbit.positions.end(), p) -
            v.orbit.positions.begin()));
    VectorFS r = vec_zero(v.field, v.coeff_len, project_descriptor(v.orbit, J));
    for (const auto& [t, c] : v.entries) {
        Tuple p(idx.size());
        for (size_t k = 0; k < idx.size(); ++k) p[k] = t[idx[k]];
        r.add_entry(p, c);
    }
    return r;
}

VectorFS project_drop(const VectorFS& v, size_t pos_index) {
    IndexSet J;
    for (size_t i = 0; i < v.orbit.dim(); ++i)
        if (i != pos_index) J.push_back(v.orbit.positions[i]);
    return project(v, J);
}

std::optional<Rational> balance_defect(const VectorFS& v) {
    for (size_t i = 0; i < v.orbit.dim(); ++i)
        if (!project_drop(v, i).is_zero()) return v.orbit.positions[i];
    return std::nullopt;
}

bool is_balanced(const VectorFS& v) { return !balance_defect(v).has_value(); }

void validate_duo(const World& w, const Duo& d) {
    const OrbitDescriptor& o = d.orbit;
    if (!o.ordered) throw err_unsupported_world("duos require an ordered universe");
    if (!tuple_matches(w, o, d.a) || !tuple_matches(w, o, d.b))
        throw err_format("duo tuples do not inhabit the orbit");
    size_t n = o.dim();
    for (size_t i = 0; i < n; ++i)
        if (!(w.order_key(d.a[i]) < w.order_key(d.b[i])))
            throw err_format("duo: a_i < b_i violated");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (!(w.order_key(d.b[i]) < w.order_key(d.a[j])))
                throw err_format("duo: b_i < a_j violated");
    size_t nsym = w.vocab().binary.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t s = 0; s < nsym; ++s) {
                int sym = static_cast<int>(s);
                bool ref = i == j ? false : w.fact(sym, d.a[i], d.a[j]);
                if (w.fact(sym, d.a[i], d.b[j]) != ref || w.fact(sym, d.b[i], d.b[j]) != ref ||
                    w.fact(sym, d.b[i], d.a[j]) != ref)
                    throw err_format("duo: cross-relation condition violated at (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
            }
}

Duo make_duo(World& w, const Tuple& a, const OrbitDescriptor& orbit) {
    if (!tuple_matches(w, orbit, a)) throw err_format("make_duo: tuple not in orbit");
    Duo d;
    d.a = a;
    d.orbit = orbit;
    std::vector<AtomId> base = orbit.support;
    base.insert(base.end(), a.begin(), a.end());
    for (size_t i = 0; i < a.size(); ++i) {
        std::vector<AtomId> X;
        for (AtomId x : base)
            if (x != a[i]) X.push_back(x);
        X.insert(X.end(), d.b.begin(), d.b.end());
        d.b.push_back(w.realize(FreshRequest::lemma(a[i], X)));
    }
    validate_duo(w, d);
    return d;
}

VectorFS cog(const Field& f, const Duo& d, const Coeff& lambda) {
    VectorFS v = vec_zero(f, lambda.size(), d.orbit);
    size_t n = d.orbit.dim();
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        Tuple t(n);
        size_t bits = 0;
        for (size_t i = 0; i < n; ++i) {
            bool flip = (mask >> i) & 1;
            bits += flip;
            t[i] = flip ? d.b[i] : d.a[i];
        }
        v.add_entry(t, bits % 2 == 0 ? lambda : coeff_neg(f, lambda));
    }
    return v;
}

VectorFS expand(const Field& f, size_t coeff_len, const OrbitDescriptor& orbit,
                const std::vector<CogTerm>& terms) {
    VectorFS acc = vec_zero(f, coeff_len, orbit);
    for (const auto& t : terms) {
        assert(t.duo.orbit == orbit);
        acc = vec_add(acc, cog(f, t.duo, t.coeff));
    }
    return acc;
}

bool ConflictReport::has_equational() const {
    for (const auto& c : items)
        if (c.equational) return true;
    return false;
}

ConflictReport find_conflicts(const World& w, const OrbitDescriptor& orbit,
                              const std::vector<Tuple>& tuples) {
    // Locations, sorted by (position, atom id).
    std::set<std::pair<size_t, AtomId>> locs;
    for (const auto& t : tuples)
        for (size_t i = 0; i < t.size(); ++i) locs.insert({i, t[i]});
    std::vector<std::pair<size_t, AtomId>> L(locs.begin(), locs.end());
    ConflictReport rep;
    for (size_t x = 0; x < L.size(); ++x)
        for (size_t y = x + 1; y < L.size(); ++y) {
            auto [i, a] = L[x];
            auto [j, b] = L[y];
            if (a == b) {
                if (i != j) rep.items.push_back({i, a, j, b, true});
                continue;
            }
            RelationProfile actual = w.relate(a, b);
            if (actual.fwd == 0 && actual.bwd == 0) continue;  // unrelated: never a conflict
            uint32_t want_fwd = 0, want_bwd = 0;
            if (i != j) {
                const RelationProfile& q =
                    i < j ? orbit.pairs[i][j] : orbit.pairs[j][i];
                want_fwd = i < j ? q.fwd : q.bwd;
                want_bwd = i < j ? q.bwd : q.fwd;
            }
            // Same position: entries play the same role, whose reference
            // relation is equality, i.e. unrelated.
            if (actual.fwd != want_fwd || actual.bwd != want_bwd)
                rep.items.push_back({i, a, j, b, false});
        }
    return rep;
}

ConflictReport find_conflicts(const World& w, const VectorFS& v) {
    std::vector<Tuple> ts;
    for (const auto& [t, c] : v.entries) ts.push_back(t);
    return find_conflicts(w, v.orbit, ts);
}

VectorFS pinned_subvector(const VectorFS& v, size_t pos, AtomId a) {
    VectorFS r = vec_zero(v.field, v.coeff_len, fix_position(v.orbit, pos, a));
    for (const auto& [t, c] : v.entries) {
        if (t[pos] != a) continue;
        Tuple s;
        for (size_t i = 0; i < t.size(); ++i)
            if (i != pos) s.push_back(t[i]);
        r.add_entry(s, c);
    }
    return r;
}

namespace {

Tuple insert_at(const Tuple& t, size_t pos, AtomId a) {
    Tuple r = t;
    r.insert(r.begin() + pos, a);
    return r;
}

// Least location (by position, then atom) taking part in a conflict of the
// requested kind, together with the set of atoms conflicting with it.
struct PickedLocation {
    size_t pos;
    AtomId atom;
    std::vector<AtomId> conflicting;
};

PickedLocation pick_location(const ConflictReport& rep, bool equational) {
    std::optional<std::pair<size_t, AtomId>> best;
    for (const auto& c : rep.items) {
        if (equational && !c.equational) continue;
        std::pair<size_t, AtomId> l1{c.pos1, c.atom1}, l2{c.pos2, c.atom2};
        if (!best || l1 < *best) best = l1;
        if (!best || l2 < *best) best = l2;
    }
    assert(best);
    PickedLocation p{best->first, best->second, {}};
    std::set<AtomId> others;
    for (const auto& c : rep.items) {
        if (equational && !c.equational) continue;
        if (c.pos1 == p.pos && c.atom1 == p.atom) others.insert(c.atom2);
        if (c.pos2 == p.pos && c.atom2 == p.atom) others.insert(c.atom1);
    }
    p.conflicting.assign(others.begin(), others.end());
    return p;
}

std::vector<CogTerm> decompose_rec(World& w, const VectorFS& v, int depth);

// Shared resolution step of the two conflict cases: peel the pinned
// subvector at (pos, a), re-root it at a fresh clone a' of a, recurse on the
// rest. Y is empty in the equational case and holds the relationally
// conflicting atoms otherwise.
std::vector<CogTerm> resolve_location(World& w, const VectorFS& v, size_t pos, AtomId a,
                                      const std::vector<AtomId>& Y, int depth) {
    VectorFS sub = pinned_subvector(v, pos, a);
    std::vector<CogTerm> inner = decompose_rec(w, sub, depth + 1);

    // The clone copies a's relations toward the duo atoms only (they cover
    // the pinned subvector); staying unrelated elsewhere avoids minting new
    // conflicts.
    std::set<AtomId> xs(v.orbit.support.begin(), v.orbit.support.end());
    for (const auto& term : inner) {
        for (AtomId x : term.duo.a) xs.insert(x);
        for (AtomId x : term.duo.b) xs.insert(x);
    }
    xs.erase(a);
    for (AtomId y : Y) xs.erase(y);
    AtomId fresh = w.realize(FreshRequest::lemma(
        a, std::vector<AtomId>(xs.begin(), xs.end()), Y));

    std::vector<CogTerm> terms;
    for (const auto& term : inner) {
        Duo d;
        d.a = insert_at(term.duo.a, pos, a);
        d.b = insert_at(term.duo.b, pos, fresh);
        d.orbit = v.orbit;
        validate_duo(w, d);
        terms.push_back({term.coeff, d});
    }
    VectorFS rest = vec_sub(v, expand(v.field, v.coeff_len, v.orbit, terms));
    assert(pinned_subvector(rest, pos, a).is_zero());
    std::vector<CogTerm> tail = decompose_rec(w, rest, depth + 1);
    terms.insert(terms.end(), tail.begin(), tail.end());
    return terms;
}

// Conflict-free case: group by greatest atom, recurse per group, then share
// a single invented atom across all groups. Balancedness makes the merged
// remainder vanish outright.
std::vector<CogTerm> conflict_free_case(World& w, const VectorFS& v, int depth) {
    size_t d = v.orbit.dim();
    if (d == 0) {
        Duo empty;
        empty.orbit = v.orbit;
        return {CogTerm{v.entries.begin()->second, empty}};
    }
    size_t j = d - 1;  // greatest position; tuples are increasing
    std::map<AtomId, VectorFS> groups;
    for (const auto& [t, c] : v.entries) {
        auto [it, fresh] = groups.try_emplace(t[j], vec_zero(v.field, v.coeff_len, v.orbit));
        it->second.add_entry(t, c);
    }
    assert(groups.size() != 1);

    std::vector<AtomId> group_atoms;
    for (const auto& [a, g] : groups) group_atoms.push_back(a);
    group_atoms = sorted_atoms(w, std::move(group_atoms));

    std::vector<std::vector<CogTerm>> per_group;
    for (AtomId a : group_atoms)
        per_group.push_back(decompose_rec(w, pinned_subvector(groups.at(a), j, a), depth + 1));

    // One shared fresh atom covering every group; its demands toward any duo
    // atom at position p follow the orbit type between p and j.
    FreshRequest req;
    req.unary = v.orbit.unary[j];
    std::map<AtomId, std::pair<uint32_t, uint32_t>> demand;  // atom -> (fwd(z,x), bwd(x,z))
    for (size_t m = 0; m < per_group.size(); ++m) {
        for (const auto& term : per_group[m])
            for (const Tuple* side : {&term.duo.a, &term.duo.b})
                for (size_t p = 0; p < side->size(); ++p) {
                    const RelationProfile& q = v.orbit.pairs[p < j ? p : p + 1][j];
                    AtomId x = (*side)[p];
                    auto want = std::make_pair(q.bwd, q.fwd);  // (R(z,x), R(x,z))
                    auto [it, inserted] = demand.emplace(x, want);
                    if (!inserted && it->second != want)
                        throw std::logic_error("conflicting fresh-atom demands");
                }
        req.above.push_back(group_atoms[m]);
    }
    for (auto& [x, masks] : demand) {
        for (size_t s = 0; s < w.vocab().binary.size(); ++s) {
            if (masks.first & (1u << s)) req.facts_fwd.push_back({static_cast<int>(s), x});
            if ((masks.second & (1u << s)) && !(w.vocab().symmetric[s] && (masks.first & (1u << s))))
                req.facts_bwd.push_back({static_cast<int>(s), x});
        }
    }
    for (size_t s = 0; s < v.orbit.support.size(); ++s) {
        const RelationProfile& q = v.orbit.vs_support[j][s];
        for (size_t b = 0; b < w.vocab().binary.size(); ++b) {
            if (q.fwd & (1u << b)) req.facts_fwd.push_back({static_cast<int>(b), v.orbit.support[s]});
            if ((q.bwd & (1u << b)) && !(w.vocab().symmetric[b] && (q.fwd & (1u << b))))
                req.facts_bwd.push_back({static_cast<int>(b), v.orbit.support[s]});
        }
        if (q.ord == Ord::Less) req.below.push_back(v.orbit.support[s]);
        else if (q.ord == Ord::Greater) req.above.push_back(v.orbit.support[s]);
    }
    AtomId z = w.realize(req);  // free amalgamation: cannot fail here

    std::vector<CogTerm> terms;
    std::vector<Tuple> closure;
    for (const auto& [t, c] : v.entries) closure.push_back(t);
    for (size_t m = 0; m < per_group.size(); ++m)
        for (const auto& term : per_group[m]) {
            Duo d2;
            d2.a = insert_at(term.duo.a, j, group_atoms[m]);
            d2.b = insert_at(term.duo.b, j, z);
            d2.orbit = v.orbit;
            validate_duo(w, d2);
            closure.push_back(d2.a);
            closure.push_back(d2.b);
            terms.push_back({term.coeff, d2});
        }
    // The conflict-free chain invariant: the vector together with all its
    // duos stays conflict-free.
    if (!find_conflicts(w, v.orbit, closure).empty())
        throw std::logic_error("conflict-free case produced a conflicting duo set");
    return terms;
}

std::vector<CogTerm> decompose_rec(World& w, const VectorFS& v, int depth) {
    if (depth > 512) throw std::logic_error("decompose: runaway recursion");
    if (v.is_zero()) return {};
    ConflictReport rep = find_conflicts(w, v);
    std::vector<CogTerm> terms;
    if (rep.has_equational()) {
        PickedLocation p = pick_location(rep, true);
        terms = resolve_location(w, v, p.pos, p.atom, {}, depth);
    } else if (!rep.empty()) {
        PickedLocation p = pick_location(rep, false);
        terms = resolve_location(w, v, p.pos, p.atom, p.conflicting, depth);
    } else {
        terms = conflict_free_case(w, v, depth);
    }
    assert(vec_equal(expand(v.field, v.coeff_len, v.orbit, terms), v));
    return terms;
}

}  // namespace

std::vector<CogTerm> decompose(World& w, const VectorFS& v,
                               const std::optional<CoeffSpace>& space) {
    if (!v.orbit.ordered)
        throw err_unsupported_world("cog decompositions run in the ordered expansion");
    if (auto defect = balance_defect(v))
        throw err_not_balanced("projection drops to nonzero at position " + defect->str());
    if (space) {
        if (space->n != v.coeff_len)
            throw err_coeff_outside("coefficient length mismatch");
        for (const auto& [t, c] : v.entries)
            if (!space->contains(c))
                throw err_coeff_outside("entry coefficient outside the declared space");
    }
    std::vector<CogTerm> terms = decompose_rec(w, v, 0);
    VectorFS check = expand(v.field, v.coeff_len, v.orbit, terms);
    if (!vec_equal(check, v)) throw std::logic_error("decompose: expansion mismatch");
    return terms;
}

std::pair<VectorFS, Duo> extract_cog(World& w, const VectorFS& v) {
    if (v.is_zero()) throw err_zero_vector("extract_cog: zero vector");
    if (v.coeff_len != 1) throw err_format("extract_cog: scalar coefficients only");
    const Tuple a = v.entries.begin()->first;
    const Scalar va = v.entries.begin()->second[0];

    // S* = S plus every atom of the vector except those of a.
    std::set<AtomId> star(v.orbit.support.begin(), v.orbit.support.end());
    for (const auto& [t, c] : v.entries)
        for (AtomId x : t) star.insert(x);
    for (AtomId x : a) star.erase(x);
    std::vector<AtomId> star_list(star.begin(), star.end());

    OrbitDescriptor inner = descriptor_of(w, a, star_list);
    Duo duo = make_duo(w, a, inner);

    VectorFS cur = v;
    for (size_t i = 0; i < a.size(); ++i) {
        // pi_i: a_i -> b_i, fixing everything else in sight.
        std::map<AtomId, AtomId> m{{a[i], duo.b[i]}};
        std::vector<AtomId> fixed = star_list;
        for (const auto& [t, c] : cur.entries)
            for (AtomId x : t)
                if (x != a[i]) fixed.push_back(x);
        PartialAutomorphism pi = w.apply_renaming(m, fixed);
        VectorFS moved = vec_zero(v.field, 1, v.orbit);
        for (const auto& [t, c] : cur.entries) moved.add_entry(pi.apply(t), c);
        cur = vec_sub(cur, moved);
    }
    VectorFS scaled = vec_scale(cur, v.field.inv(va));
    Duo full{duo.a, duo.b, v.orbit};
    validate_duo(w, full);
    if (!vec_equal(scaled, cog(v.field, full))) throw std::logic_error("extract_cog: not a cog");
    return {scaled, full};
}

}  // namespace orbitlin
