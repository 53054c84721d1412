#include "orbitlin/eqspace.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace orbitlin {

const OrbitDescriptor& AmbientSpace::orbit_of(const std::string& tag) const {
    int i = index_of(tag);
    if (i < 0) throw err_class_mismatch("unknown ambient tag '" + tag + "'");
    return orbits[i].second;
}

int AmbientSpace::index_of(const std::string& tag) const {
    for (size_t i = 0; i < orbits.size(); ++i)
        if (orbits[i].first == tag) return static_cast<int>(i);
    return -1;
}

bool SumVector::is_zero() const {
    for (const auto& [tag, v] : parts)
        if (!v.is_zero()) return false;
    return true;
}

void SumVector::add_part_entry(const AmbientSpace& amb, const std::string& tag, const Tuple& t,
                               const Coeff& c) {
    auto it = parts.find(tag);
    if (it == parts.end())
        it = parts.emplace(tag, vec_zero(field, coeff_len, amb.orbit_of(tag))).first;
    it->second.add_entry(t, c);
}

SumVector sum_zero(const Field& f, size_t m) {
    SumVector v;
    v.field = f;
    v.coeff_len = m;
    return v;
}

SumVector sum_add(const SumVector& a, const SumVector& b) {
    SumVector r = a;
    for (const auto& [tag, v] : b.parts) {
        auto it = r.parts.find(tag);
        if (it == r.parts.end()) r.parts.emplace(tag, v);
        else it->second = vec_add(it->second, v);
    }
    return r;
}

SumVector sum_sub(const SumVector& a, const SumVector& b) {
    SumVector nb = b;
    for (auto& [tag, v] : nb.parts) v = vec_neg(v);
    return sum_add(a, nb);
}

SumVector sum_scale(const SumVector& a, const Scalar& s) {
    SumVector r = a;
    for (auto& [tag, v] : r.parts) v = vec_scale(v, s);
    return r;
}

bool sum_equal(const SumVector& a, const SumVector& b) {
    for (const auto& [tag, v] : a.parts) {
        auto it = b.parts.find(tag);
        if (it == b.parts.end() ? !v.is_zero() : !vec_equal(v, it->second)) return false;
    }
    for (const auto& [tag, v] : b.parts)
        if (a.parts.find(tag) == a.parts.end() && !v.is_zero()) return false;
    return true;
}

SumVector from_single(const std::string& tag, const VectorFS& v) {
    SumVector r = sum_zero(v.field, v.coeff_len);
    r.parts.emplace(tag, v);
    return r;
}

namespace {

OrbitDescriptor canonical_positions(OrbitDescriptor o) {
    o.positions.clear();
    for (size_t i = 0; i < o.unary.size(); ++i)
        o.positions.push_back(Rational(static_cast<long long>(i) + 1));
    return o;
}

}  // namespace

std::vector<GroupedClass> grouped_classes(const AmbientSpace& amb) {
    struct Item {
        size_t orbit;
        IndexSet J;
        OrbitDescriptor proj;
    };
    std::vector<Item> items;
    for (size_t oi = 0; oi < amb.orbits.size(); ++oi) {
        const OrbitDescriptor& o = amb.orbits[oi].second;
        size_t d = o.dim();
        for (size_t mask = 0; mask < (size_t(1) << d); ++mask) {
            IndexSet J;
            for (size_t i = 0; i < d; ++i)
                if (mask & (size_t(1) << i)) J.push_back(o.positions[i]);
            items.push_back({oi, J, project_descriptor(o, J)});
        }
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.J.size() != b.J.size()) return a.J.size() > b.J.size();
        if (a.orbit != b.orbit) return a.orbit < b.orbit;
        return std::lexicographical_compare(a.J.begin(), a.J.end(), b.J.begin(), b.J.end());
    });
    std::vector<GroupedClass> classes;
    for (auto& it : items) {
        bool placed = false;
        for (auto& c : classes)
            if (reindex_equal(c.rep, it.proj)) {
                c.members.push_back({it.orbit, it.J});
                placed = true;
                break;
            }
        if (!placed) classes.push_back(GroupedClass{canonical_positions(it.proj), {{it.orbit, it.J}}});
    }
    return classes;
}

VectorFS restrict_to_class(const SumVector& v, const AmbientSpace& amb, const GroupedClass& cls) {
    if (v.coeff_len != 1) throw err_class_mismatch("restriction expects scalar coefficients");
    VectorFS out = vec_zero(v.field, cls.n(), cls.rep);

    // Candidate representative tuples: projections of present tuples.
    std::set<Tuple> cands;
    for (size_t k = 0; k < cls.members.size(); ++k) {
        auto [oi, J] = cls.members[k];
        const std::string& tag = amb.orbits[oi].first;
        auto it = v.parts.find(tag);
        if (it == v.parts.end()) continue;
        const OrbitDescriptor& o = amb.orbits[oi].second;
        std::vector<size_t> idx;
        for (const auto& p : J)
            idx.push_back(static_cast<size_t>(
                std::find(o.positions.begin(), o.positions.end(), p) - o.positions.begin()));
        for (const auto& [t, c] : it->second.entries) {
            Tuple proj(idx.size());
            for (size_t x = 0; x < idx.size(); ++x) proj[x] = t[idx[x]];
            cands.insert(proj);
        }
    }
    for (const Tuple& b : cands) {
        Coeff value(cls.n(), v.field.zero());
        for (size_t k = 0; k < cls.members.size(); ++k) {
            auto [oi, J] = cls.members[k];
            const std::string& tag = amb.orbits[oi].first;
            auto it = v.parts.find(tag);
            if (it == v.parts.end()) continue;
            const OrbitDescriptor& o = amb.orbits[oi].second;
            std::vector<size_t> idx;
            for (const auto& p : J)
                idx.push_back(static_cast<size_t>(
                    std::find(o.positions.begin(), o.positions.end(), p) - o.positions.begin()));
            Scalar sum = v.field.zero();
            for (const auto& [t, c] : it->second.entries) {
                bool hit = true;
                for (size_t x = 0; x < idx.size() && hit; ++x) hit = t[idx[x]] == b[x];
                if (hit) sum = v.field.add(sum, c[0]);
            }
            value[k] = sum;
        }
        out.add_entry(b, value);
    }
    return out;
}

size_t EqSubspace::total_dim() const {
    size_t s = 0;
    for (const auto& e : E) s += e.dim();
    return s;
}

bool operator==(const EqSubspace& a, const EqSubspace& b) {
    if (a.classes.size() != b.classes.size()) return false;
    for (size_t i = 0; i < a.E.size(); ++i)
        if (a.E[i] != b.E[i]) return false;
    return true;
}

EqSubspace subspace_empty(const Field& f, const AmbientSpace& amb) {
    EqSubspace s;
    s.field = f;
    s.ambient = amb;
    s.classes = grouped_classes(amb);
    for (const auto& c : s.classes) s.E.push_back(make_row_space(f, c.n()));
    return s;
}

EqSubspace subspace_from_generators(const Field& f, const AmbientSpace& amb,
                                    const std::vector<SumVector>& gens) {
    EqSubspace s = subspace_empty(f, amb);
    for (size_t i = 0; i < s.classes.size(); ++i)
        for (const SumVector& g : gens) {
            VectorFS vals = restrict_to_class(g, amb, s.classes[i]);
            for (const auto& [t, value] : vals.entries) s.E[i].insert(value);
        }
    return s;
}

namespace {

void require_exact_scope(const World& w) {
    if (w.kind() != UniverseKind::DenseOrder && w.kind() != UniverseKind::OrderedForb)
        throw err_unsupported_world(
            "coefficient-space membership is exact only over ordered free-amalgamation worlds");
}

}  // namespace

MemberResult member(const World& w, const SumVector& v, const EqSubspace& W) {
    require_exact_scope(w);
    for (size_t i = 0; i < W.classes.size(); ++i) {
        VectorFS vals = restrict_to_class(v, W.ambient, W.classes[i]);
        for (const auto& [t, value] : vals.entries)
            if (!W.E[i].contains(value))
                return MemberResult{false, MemberCertificate{i, t, value}};
    }
    return MemberResult{true, std::nullopt};
}

MemberResult solve(const World& w, const std::vector<SumVector>& column_templates,
                   const SumVector& b, const AmbientSpace& amb) {
    EqSubspace span = subspace_from_generators(b.field, amb, column_templates);
    return member(w, b, span);
}

SubspaceChain build_chain(World& w, const Field& f, const OrbitDescriptor& orbit) {
    AmbientSpace amb;
    amb.support = orbit.support;
    amb.orbits = {{"O", orbit}};

    Tuple a = realize_tuple(w, orbit);
    Duo duo = orbit.dim() == 0 ? Duo{{}, {}, orbit} : make_duo(w, a, orbit);

    // v_J = prod_{j in J} (1 - pi_j) a: the partial cog mixing only inside J.
    auto make_vJ = [&](const IndexSet& J) {
        std::vector<size_t> idx;
        for (const auto& p : J)
            idx.push_back(static_cast<size_t>(
                std::find(orbit.positions.begin(), orbit.positions.end(), p) -
                orbit.positions.begin()));
        VectorFS v = vec_zero(f, 1, orbit);
        for (size_t mask = 0; mask < (size_t(1) << idx.size()); ++mask) {
            Tuple t = a;
            size_t bits = 0;
            for (size_t k = 0; k < idx.size(); ++k)
                if (mask & (size_t(1) << k)) {
                    t[idx[k]] = duo.b[idx[k]];
                    ++bits;
                }
            v.add_entry(t, Coeff{bits % 2 == 0 ? f.one() : f.neg(f.one())});
        }
        return v;
    };

    SubspaceChain chain;
    chain.steps.push_back(subspace_empty(f, amb));
    std::vector<SumVector> gens;
    for (const GroupedClass& cls : grouped_classes(amb))
        for (const auto& [oi, J] : cls.members) {
            gens.push_back(from_single("O", make_vJ(J)));
            EqSubspace next = subspace_from_generators(f, amb, gens);
            if (next.total_dim() != chain.steps.back().total_dim() + 1)
                throw std::logic_error("build_chain: step did not grow by exactly one");
            chain.steps.push_back(std::move(next));
        }
    return chain;
}

size_t length_upper_bound(const AmbientSpace& amb) {
    size_t total = 0;
    for (const auto& c : grouped_classes(amb)) total += c.n();
    return total;
}

PowerAmbient power_ambient(const World& w, size_t d) {
    PowerAmbient pa;
    std::vector<AmbientOrbit> orbs = enumerate_ambient(w, d);
    for (size_t i = 0; i < orbs.size(); ++i) {
        pa.space.orbits.push_back({"orb" + std::to_string(i), orbs[i].desc});
        pa.slot_of.push_back(orbs[i].slot_of);
    }
    return pa;
}

std::pair<std::string, Tuple> route_tuple(const World& w, const PowerAmbient& amb, const Tuple& t) {
    Normalized n = normalize(w, t, {});
    std::vector<size_t> slots(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        assert(n.position_map[i].kind == PosRef::Position);
        slots[i] = n.position_map[i].position;
    }
    for (size_t i = 0; i < amb.space.orbits.size(); ++i)
        if (amb.slot_of[i] == slots && amb.space.orbits[i].second == n.orbit)
            return {amb.space.orbits[i].first, n.tuple};
    throw err_class_mismatch("tuple does not match any ambient orbit");
}

namespace {

// All type-preserving injections of `atoms` into `window` fixing `support`.
void injections(const World& w, const std::vector<AtomId>& atoms,
                const std::vector<AtomId>& window, const std::vector<AtomId>& support,
                std::vector<std::map<AtomId, AtomId>>& out) {
    std::map<AtomId, AtomId> cur;
    std::set<AtomId> used;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == atoms.size()) {
            try {
                w.apply_renaming(cur, support);
                out.push_back(cur);
            } catch (const Error&) {
            }
            return;
        }
        for (AtomId img : window) {
            if (used.count(img)) continue;
            // Cheap local filter before the full validation at the leaf.
            bool ok = true;
            for (const auto& [x, y] : cur)
                if (!(w.relate(atoms[i], x) == w.relate(img, y))) { ok = false; break; }
            for (AtomId s : support)
                if (ok && !(w.relate(atoms[i], s) == w.relate(img, s))) ok = false;
            if (!ok) continue;
            used.insert(img);
            cur[atoms[i]] = img;
            rec(i + 1);
            cur.erase(atoms[i]);
            used.erase(img);
        }
    };
    rec(0);
}

std::vector<AtomId> sum_atoms(const SumVector& v) {
    std::set<AtomId> s;
    for (const auto& [tag, part] : v.parts)
        for (const auto& [t, c] : part.entries)
            for (AtomId a : t) s.insert(a);
    return {s.begin(), s.end()};
}

SumVector rename_sum(const AmbientSpace& amb, const SumVector& v,
                     const PartialAutomorphism& pi) {
    SumVector r = sum_zero(v.field, v.coeff_len);
    for (const auto& [tag, part] : v.parts)
        for (const auto& [t, c] : part.entries) r.add_part_entry(amb, tag, pi.apply(t), c);
    return r;
}

}  // namespace

std::optional<FoundCombination> window_search(World& w, const AmbientSpace& amb,
                                              const std::vector<SumVector>& gens,
                                              const SumVector& v,
                                              std::vector<AtomId> window_atoms,
                                              int widenings) {
    // Gaps and adjacency targets follow the original window so the widening
    // stays linear per round.
    const std::vector<AtomId> original = sorted_atoms(w, window_atoms);
    for (int round = 0; round <= widenings; ++round) {
        // Collect distinct images of every generator under every valid
        // injection into the window.
        std::vector<SumVector> images;
        std::set<std::string> seen;
        auto image_key = [&](const SumVector& s) {
            std::string k;
            for (const auto& [tag, part] : s.parts)
                for (const auto& [t, c] : part.entries) {
                    k += tag + ":";
                    for (AtomId a : t) k += std::to_string(a) + ",";
                    k += "=" + v.field.str(c[0]) + ";";
                }
            return k;
        };
        for (const SumVector& g : gens) {
            std::vector<AtomId> atoms = sum_atoms(g);
            std::vector<AtomId> movable;
            for (AtomId a : atoms)
                if (std::find(amb.support.begin(), amb.support.end(), a) == amb.support.end())
                    movable.push_back(a);
            std::vector<std::map<AtomId, AtomId>> maps;
            injections(w, movable, window_atoms, amb.support, maps);
            for (const auto& m : maps) {
                PartialAutomorphism pi;
                pi.map = m;
                SumVector img = rename_sum(amb, g, pi);
                if (seen.insert(image_key(img)).second) images.push_back(std::move(img));
            }
        }
        // Flatten over the union of present basis elements; reduce the
        // augmented system incrementally and stop once the target drops in.
        std::map<std::pair<std::string, Tuple>, size_t> index;
        auto index_of = [&](const SumVector& s) {
            for (const auto& [tag, part] : s.parts)
                for (const auto& [t, c] : part.entries)
                    index.emplace(std::make_pair(tag, t), index.size());
        };
        for (const auto& im : images) index_of(im);
        index_of(v);
        auto flatten = [&](const SumVector& s, size_t extra, size_t which) {
            std::vector<Scalar> row(index.size() + extra, v.field.zero());
            for (const auto& [tag, part] : s.parts)
                for (const auto& [t, c] : part.entries)
                    row[index.at({tag, t})] = c[0];
            if (extra) row[index.size() + which] = v.field.one();
            return row;
        };
        size_t m = images.size();
        ScalarRowSpace space = make_row_space(v.field, index.size() + m);
        std::vector<Scalar> target = flatten(v, m, 0);
        target[index.size()] = v.field.zero();
        auto try_solve = [&]() -> std::optional<FoundCombination> {
            auto r = space.reduce(target);
            for (size_t j = 0; j < index.size(); ++j)
                if (!v.field.is_zero(r[j])) return std::nullopt;
            FoundCombination fc;
            for (size_t i = 0; i < m; ++i) {
                Scalar c = v.field.neg(r[index.size() + i]);
                if (!v.field.is_zero(c)) fc.terms.push_back({c, images[i]});
            }
            return fc;
        };
        for (size_t i = 0; i < m; ++i) {
            space.insert(flatten(images[i], m, i));
            if (auto fc = try_solve()) return fc;
        }
        if (m == 0)
            if (auto fc = try_solve()) return fc;
        if (round == widenings) break;
        // Widen: one generically placed fresh atom per original order gap,
        // plus one related to each original window atom where the vocabulary
        // has a relation.
        std::vector<AtomId> added;
        if (w.ordered()) {
            for (size_t g = 0; g < original.size(); ++g) {
                FreshRequest req;
                req.above.push_back(original[g]);
                if (g + 1 < original.size()) req.below.push_back(original[g + 1]);
                added.push_back(w.realize(req));
            }
            if (!w.vocab().binary.empty())
                for (AtomId t : original) {
                    FreshRequest req;
                    req.above.push_back(original.back());
                    req.facts_fwd.push_back({0, t});
                    try {
                        added.push_back(w.realize(req));
                    } catch (const Error&) {
                    }
                }
        } else {
            added.push_back(w.realize(FreshRequest{}));
        }
        window_atoms.insert(window_atoms.end(), added.begin(), added.end());
    }
    return std::nullopt;
}

}  // namespace orbitlin
