#include "orbitlin/orbits.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <sstream>

namespace orbitlin {

namespace {

void profile_str(std::ostringstream& os, const RelationProfile& p) {
    os << (p.equal ? 'e' : '.')
       << (p.ord == Ord::Less ? '<' : p.ord == Ord::Greater ? '>' : '.') << p.fwd << ','
       << p.bwd << ',' << p.unary_a << ',' << p.unary_b << ';';
}

}  // namespace

bool operator==(const TypeKey& a, const TypeKey& b) {
    return a.d == b.d && a.unary == b.unary &&
           std::equal(a.pairs.begin(), a.pairs.end(), b.pairs.begin(), b.pairs.end()) &&
           a.pairs.size() == b.pairs.size() && a.vs_support.size() == b.vs_support.size() &&
           std::equal(a.vs_support.begin(), a.vs_support.end(), b.vs_support.begin(),
                      b.vs_support.end());
}

std::string TypeKey::str() const {
    std::ostringstream os;
    os << d << '|';
    for (auto u : unary) os << u << ',';
    os << '|';
    for (const auto& p : pairs) profile_str(os, p);
    os << '|';
    for (const auto& p : vs_support) profile_str(os, p);
    return os.str();
}

TypeKey qf_type(const World& w, const Tuple& t, const std::vector<AtomId>& support) {
    TypeKey k;
    k.d = t.size();
    for (AtomId a : t) k.unary.push_back(w.unary_mask(a));
    for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = i + 1; j < t.size(); ++j) k.pairs.push_back(w.relate(t[i], t[j]));
    for (size_t i = 0; i < t.size(); ++i)
        for (AtomId s : support) k.vs_support.push_back(w.relate(t[i], s));
    return k;
}

bool is_index_subset(const IndexSet& a, const IndexSet& b) {
    size_t j = 0;
    for (const auto& x : a) {
        while (j < b.size() && b[j] < x) ++j;
        if (j == b.size() || !(b[j] == x)) return false;
        ++j;
    }
    return true;
}

std::string OrbitDescriptor::key() const {
    std::ostringstream os;
    os << (ordered ? "o" : "u") << dim() << "|S:";
    for (AtomId s : support) os << s << ',';
    os << "|P:";
    for (const auto& p : positions) os << p.str() << ',';
    os << "|U:";
    for (auto u : unary) os << u << ',';
    os << "|R:";
    for (size_t i = 0; i < dim(); ++i)
        for (size_t j = i + 1; j < dim(); ++j) profile_str(os, pairs[i][j]);
    os << "|V:";
    for (size_t i = 0; i < dim(); ++i)
        for (const auto& p : vs_support[i]) profile_str(os, p);
    return os.str();
}

bool operator==(const OrbitDescriptor& a, const OrbitDescriptor& b) {
    return a.support == b.support && a.positions == b.positions && a.ordered == b.ordered &&
           a.key() == b.key();
}

bool reindex_equal(const OrbitDescriptor& a, const OrbitDescriptor& b) {
    if (a.dim() != b.dim() || a.support != b.support || a.ordered != b.ordered) return false;
    OrbitDescriptor c = a;
    c.positions = b.positions;
    return c.key() == b.key();
}

OrbitDescriptor descriptor_of(const World& w, const Tuple& t, std::vector<AtomId> support) {
    std::sort(support.begin(), support.end());
    size_t d = t.size();
    std::set<AtomId> seen;
    for (size_t i = 0; i < d; ++i) {
        if (!seen.insert(t[i]).second) throw err_format("descriptor_of: repeated entry");
        if (std::binary_search(support.begin(), support.end(), t[i]))
            throw err_format("descriptor_of: entry lies in the support");
        if (w.ordered() && i + 1 < d && !(w.order_key(t[i]) < w.order_key(t[i + 1])))
            throw err_format("descriptor_of: tuple not increasing");
    }
    OrbitDescriptor o;
    o.support = std::move(support);
    o.ordered = w.ordered();
    for (size_t i = 0; i < d; ++i) o.positions.push_back(Rational(static_cast<long long>(i) + 1));
    o.unary.resize(d);
    o.pairs.assign(d, std::vector<RelationProfile>(d));
    o.vs_support.assign(d, std::vector<RelationProfile>(o.support.size()));
    for (size_t i = 0; i < d; ++i) {
        o.unary[i] = w.unary_mask(t[i]);
        for (size_t j = i + 1; j < d; ++j) o.pairs[i][j] = w.relate(t[i], t[j]);
        for (size_t s = 0; s < o.support.size(); ++s)
            o.vs_support[i][s] = w.relate(t[i], o.support[s]);
    }
    return o;
}

Normalized normalize(const World& w, const Tuple& t, std::vector<AtomId> support) {
    std::sort(support.begin(), support.end());
    for (AtomId a : t)
        if (!w.registered(a)) throw err_unknown_atom("normalize: atom #" + std::to_string(a));

    // Remove support hits and duplicates, keeping first occurrences.
    std::vector<AtomId> kept;
    std::vector<PosRef> refs(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        if (std::binary_search(support.begin(), support.end(), t[i])) {
            refs[i] = PosRef{PosRef::Support, 0, t[i]};
            continue;
        }
        auto it = std::find(kept.begin(), kept.end(), t[i]);
        if (it == kept.end()) {
            kept.push_back(t[i]);
            it = std::prev(kept.end());
        }
        refs[i] = PosRef{PosRef::Position, static_cast<size_t>(it - kept.begin()), -1};
    }
    // Reorder increasing on ordered worlds; first occurrence order otherwise.
    std::vector<size_t> perm(kept.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    if (w.ordered())
        std::sort(perm.begin(), perm.end(), [&](size_t x, size_t y) {
            return w.order_key(kept[x]) < w.order_key(kept[y]);
        });
    std::vector<size_t> where(kept.size());
    Tuple norm(kept.size());
    for (size_t k = 0; k < perm.size(); ++k) {
        norm[k] = kept[perm[k]];
        where[perm[k]] = k;
    }
    for (auto& r : refs)
        if (r.kind == PosRef::Position) r.position = where[r.position];

    Normalized res;
    res.tuple = norm;
    res.orbit = descriptor_of(w, norm, std::move(support));
    res.position_map = std::move(refs);
    return res;
}

bool tuple_matches(const World& w, const OrbitDescriptor& o, const Tuple& t) {
    if (t.size() != o.dim()) return false;
    try {
        OrbitDescriptor got = descriptor_of(w, t, o.support);
        got.positions = o.positions;
        return got.key() == o.key();
    } catch (const Error&) {
        return false;
    }
}

OrbitDescriptor project_descriptor(const OrbitDescriptor& o, const IndexSet& J) {
    if (!is_index_subset(J, o.positions)) throw err_bad_index_set("J is not a subset of I");
    std::vector<size_t> idx;
    for (const auto& p : J)
        idx.push_back(static_cast<size_t>(
            std::find(o.positions.begin(), o.positions.end(), p) - o.positions.begin()));
    OrbitDescriptor r;
    r.support = o.support;
    r.positions = J;
    r.ordered = o.ordered;
    size_t d = idx.size();
    r.unary.resize(d);
    r.pairs.assign(d, std::vector<RelationProfile>(d));
    r.vs_support.assign(d, std::vector<RelationProfile>(o.support.size()));
    for (size_t i = 0; i < d; ++i) {
        r.unary[i] = o.unary[idx[i]];
        for (size_t j = i + 1; j < d; ++j) r.pairs[i][j] = o.pairs[idx[i]][idx[j]];
        r.vs_support[i] = o.vs_support[idx[i]];
    }
    return r;
}

OrbitDescriptor fix_position(const OrbitDescriptor& o, size_t pos_index, AtomId a) {
    assert(pos_index < o.dim());
    std::vector<AtomId> support = o.support;
    auto at = std::lower_bound(support.begin(), support.end(), a);
    size_t a_idx = static_cast<size_t>(at - support.begin());
    support.insert(at, a);

    OrbitDescriptor r;
    r.support = std::move(support);
    r.ordered = o.ordered;
    size_t d = o.dim();
    for (size_t i = 0; i < d; ++i)
        if (i != pos_index) r.positions.push_back(o.positions[i]);
    size_t nd = d - 1;
    r.unary.resize(nd);
    r.pairs.assign(nd, std::vector<RelationProfile>(nd));
    r.vs_support.assign(nd, std::vector<RelationProfile>(r.support.size()));
    auto old_of = [&](size_t i) { return i < pos_index ? i : i + 1; };
    for (size_t i = 0; i < nd; ++i) {
        size_t oi = old_of(i);
        r.unary[i] = o.unary[oi];
        for (size_t j = i + 1; j < nd; ++j) r.pairs[i][j] = o.pairs[oi][old_of(j)];
        for (size_t s = 0; s < r.support.size(); ++s) {
            if (s == a_idx) {
                // Demands toward the fixed atom come from the orbit itself.
                RelationProfile p;
                if (oi < pos_index) {
                    p = o.pairs[oi][pos_index];
                } else {
                    const RelationProfile& q = o.pairs[pos_index][oi];
                    p.ord = q.ord == Ord::Less ? Ord::Greater
                            : q.ord == Ord::Greater ? Ord::Less
                                                    : Ord::None;
                    p.fwd = q.bwd;
                    p.bwd = q.fwd;
                    p.unary_a = q.unary_b;
                    p.unary_b = q.unary_a;
                }
                r.vs_support[i][s] = p;
            } else {
                size_t os = s < a_idx ? s : s - 1;
                r.vs_support[i][s] = o.vs_support[oi][os];
            }
        }
    }
    return r;
}

std::vector<RestrictionClass> projected_classes(const OrbitDescriptor& o) {
    size_t d = o.dim();
    std::vector<std::pair<IndexSet, OrbitDescriptor>> projected;
    for (size_t mask = 0; mask < (size_t(1) << d); ++mask) {
        IndexSet J;
        for (size_t i = 0; i < d; ++i)
            if (mask & (size_t(1) << i)) J.push_back(o.positions[i]);
        projected.push_back({J, project_descriptor(o, J)});
    }
    // Largest subsets first; ties resolved by the position list.
    std::stable_sort(projected.begin(), projected.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
        return std::lexicographical_compare(a.first.begin(), a.first.end(), b.first.begin(),
                                            b.first.end());
    });
    std::vector<RestrictionClass> classes;
    for (auto& [J, desc] : projected) {
        bool placed = false;
        for (auto& c : classes)
            if (reindex_equal(c.rep, desc)) {
                c.members.push_back(J);
                placed = true;
                break;
            }
        if (!placed) classes.push_back(RestrictionClass{desc, {J}});
    }
    return classes;
}

Tuple realize_tuple(World& w, const OrbitDescriptor& o) {
    Tuple t;
    for (size_t i = 0; i < o.dim(); ++i) {
        FreshRequest req;
        req.unary = o.unary[i];
        for (size_t j = 0; j < i; ++j) {
            const RelationProfile& p = o.pairs[j][i];  // (earlier, this)
            for (size_t s = 0; s < w.vocab().binary.size(); ++s) {
                if (p.fwd & (1u << s)) req.facts_bwd.push_back({static_cast<int>(s), t[j]});
                if ((p.bwd & (1u << s)) && !(w.vocab().symmetric[s] && (p.fwd & (1u << s))))
                    req.facts_fwd.push_back({static_cast<int>(s), t[j]});
            }
            if (o.ordered) req.above.push_back(t[j]);
        }
        for (size_t s = 0; s < o.support.size(); ++s) {
            const RelationProfile& p = o.vs_support[i][s];  // (this, support)
            for (size_t b = 0; b < w.vocab().binary.size(); ++b) {
                if (p.fwd & (1u << b)) req.facts_fwd.push_back({static_cast<int>(b), o.support[s]});
                if ((p.bwd & (1u << b)) && !(w.vocab().symmetric[b] && (p.fwd & (1u << b))))
                    req.facts_bwd.push_back({static_cast<int>(b), o.support[s]});
            }
            if (o.ordered) {
                if (p.ord == Ord::Less) req.below.push_back(o.support[s]);
                else if (p.ord == Ord::Greater) req.above.push_back(o.support[s]);
            }
        }
        t.push_back(w.realize(req));
    }
    if (!tuple_matches(w, o, t))
        throw err_format("realize_tuple: realized tuple misses the descriptor");
    return t;
}

std::vector<Tuple> enumerate_orbit_reps(World& w, const OrbitDescriptor& o, size_t n) {
    if (n < 1) throw err_format("enumerate_orbit_reps: n must be positive");
    std::vector<Tuple> reps;
    for (size_t k = 0; k < n; ++k) reps.push_back(realize_tuple(w, o));
    std::set<Tuple> distinct(reps.begin(), reps.end());
    assert(o.dim() == 0 || distinct.size() == reps.size());
    return reps;
}

size_t qf_type_census(World& w, size_t d, size_t window) {
    std::vector<AtomId> atoms = w.window(window);
    std::set<std::string> types;
    std::vector<size_t> idx(d, 0);
    bool done = d == 0;
    if (d == 0) return 1;
    while (!done) {
        Tuple t;
        for (size_t i = 0; i < d; ++i) t.push_back(atoms[idx[i]]);
        types.insert(qf_type(w, t, {}).str());
        size_t i = 0;
        while (i < d && ++idx[i] == atoms.size()) idx[i++] = 0;
        done = i == d;
    }
    return types.size();
}

namespace {

// All sigma_0 relation patterns between two distinct slots u < v, as
// (fwd, bwd) masks. Symmetric symbols hold in both directions or neither.
std::vector<std::pair<uint32_t, uint32_t>> slot_pair_options(const Vocabulary& voc) {
    std::vector<std::pair<uint32_t, uint32_t>> opts{{0, 0}};
    for (size_t s = 0; s < voc.binary.size(); ++s) {
        std::vector<std::pair<uint32_t, uint32_t>> next;
        std::vector<std::pair<uint32_t, uint32_t>> choices;
        if (voc.symmetric[s])
            choices = {{0, 0}, {1u << s, 1u << s}};
        else
            choices = {{0, 0}, {1u << s, 0}, {0, 1u << s}, {1u << s, 1u << s}};
        for (auto& base : opts)
            for (auto& c : choices)
                next.push_back({base.first | c.first, base.second | c.second});
        opts = std::move(next);
    }
    return opts;
}

// Checks that the slot structure avoids the forbidden family by trying to
// build it in a scratch world.
bool slots_realizable(const World& w, size_t k, const std::vector<uint32_t>& unary,
                      const std::vector<std::vector<std::pair<uint32_t, uint32_t>>>& rel) {
    if (w.kind() != UniverseKind::OrderedForb) return true;
    World scratch = World::ordered_forb(w.vocab(), w.forbidden());
    std::vector<AtomId> ids;
    for (size_t i = 0; i < k; ++i) ids.push_back(scratch.add_atom(std::nullopt, unary[i]));
    try {
        for (size_t i = 0; i < k; ++i)
            for (size_t j = i + 1; j < k; ++j)
                for (size_t s = 0; s < w.vocab().binary.size(); ++s) {
                    if (rel[i][j].first & (1u << s))
                        scratch.add_fact(static_cast<int>(s), ids[i], ids[j]);
                    if ((rel[i][j].second & (1u << s)) && !w.vocab().symmetric[s])
                        scratch.add_fact(static_cast<int>(s), ids[j], ids[i]);
                }
    } catch (const Error&) {
        return false;
    }
    return true;
}

void enumerate_slot_maps(const World& w, size_t d, std::vector<std::vector<size_t>>& out) {
    // Ordered world: all surjections d -> k. Unordered: restricted growth
    // strings (set partitions by first occurrence).
    for (size_t k = 1; k <= d; ++k) {
        std::vector<size_t> f(d, 0);
        std::function<void(size_t)> rec = [&](size_t i) {
            if (i == d) {
                std::set<size_t> used(f.begin(), f.end());
                if (used.size() == k) out.push_back(f);
                return;
            }
            size_t limit = w.ordered() ? k : 0;
            if (!w.ordered()) {
                for (size_t j = 0; j < i; ++j) limit = std::max(limit, f[j] + 1);
                limit = std::min(limit + 1, k);
            }
            for (size_t v = 0; v < limit; ++v) {
                f[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
    }
    if (d == 0) out.push_back({});
}

}  // namespace

std::vector<AmbientOrbit> enumerate_ambient(const World& w, size_t d) {
    std::vector<AmbientOrbit> res;
    if (d == 0) return res;
    std::vector<std::vector<size_t>> maps;
    enumerate_slot_maps(w, d, maps);
    auto pair_opts = slot_pair_options(w.vocab());
    size_t n_unary = w.vocab().unary.size();

    for (const auto& f : maps) {
        size_t k = *std::max_element(f.begin(), f.end()) + 1;
        // Enumerate unary masks per slot, then relation patterns per pair.
        std::vector<uint32_t> unary(k, 0);
        std::function<void(size_t)> enum_unary = [&](size_t slot) {
            if (slot == k) {
                std::vector<std::vector<std::pair<uint32_t, uint32_t>>> rel(
                    k, std::vector<std::pair<uint32_t, uint32_t>>(k, {0, 0}));
                std::vector<std::pair<size_t, size_t>> cells;
                for (size_t i = 0; i < k; ++i)
                    for (size_t j = i + 1; j < k; ++j) cells.push_back({i, j});
                std::function<void(size_t)> enum_rel = [&](size_t c) {
                    if (c == cells.size()) {
                        if (!slots_realizable(w, k, unary, rel)) return;
                        AmbientOrbit orb;
                        orb.slot_of = f;
                        OrbitDescriptor& o = orb.desc;
                        o.ordered = w.ordered();
                        for (size_t i = 0; i < k; ++i)
                            o.positions.push_back(Rational(static_cast<long long>(i) + 1));
                        o.unary = unary;
                        o.pairs.assign(k, std::vector<RelationProfile>(k));
                        o.vs_support.assign(k, {});
                        for (auto [i, j] : cells) {
                            RelationProfile p;
                            if (o.ordered) p.ord = Ord::Less;
                            p.fwd = rel[i][j].first;
                            p.bwd = rel[i][j].second;
                            p.unary_a = unary[i];
                            p.unary_b = unary[j];
                            o.pairs[i][j] = p;
                        }
                        res.push_back(std::move(orb));
                        return;
                    }
                    for (const auto& opt : pair_opts) {
                        rel[cells[c].first][cells[c].second] = opt;
                        enum_rel(c + 1);
                    }
                };
                enum_rel(0);
                return;
            }
            for (uint32_t m = 0; m < (1u << n_unary); ++m) {
                unary[slot] = m;
                enum_unary(slot + 1);
            }
        };
        enum_unary(0);
    }
    return res;
}

}  // namespace orbitlin
