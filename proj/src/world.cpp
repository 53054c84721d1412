#include "orbitlin/world.hpp"

#include <algorithm>
#include <cassert>

namespace orbitlin {

int Vocabulary::unary_index(const std::string& s) const {
    for (size_t i = 0; i < unary.size(); ++i)
        if (unary[i] == s) return static_cast<int>(i);
    return -1;
}

int Vocabulary::binary_index(const std::string& s) const {
    for (size_t i = 0; i < binary.size(); ++i)
        if (binary[i] == s) return static_cast<int>(i);
    return -1;
}

void Vocabulary::validate() const {
    if (symmetric.size() != binary.size())
        throw err_format("vocabulary: symmetric flags must match binary symbols");
    if (binary.size() > 30) throw err_format("vocabulary: too many binary symbols");
    std::set<std::string> seen;
    for (const auto& s : unary)
        if (!seen.insert(s).second) throw err_format("vocabulary: duplicate symbol " + s);
    for (const auto& s : binary) {
        if (s == "<") throw err_format("vocabulary: '<' is built in");
        if (!seen.insert(s).second) throw err_format("vocabulary: duplicate symbol " + s);
    }
}

bool FiniteStructure::has_edge(int sym, int a, int b) const {
    const auto& v = binary[sym];
    return std::find(v.begin(), v.end(), std::make_pair(a, b)) != v.end();
}

void FiniteStructure::validate(const Vocabulary& voc) const {
    if (static_cast<size_t>(size) != unary.size())
        throw err_format("structure: unary mask count mismatch");
    if (binary.size() != voc.binary.size())
        throw err_format("structure: binary relation count mismatch");
    for (const auto& rel : binary)
        for (auto [a, b] : rel) {
            if (a == b) throw err_format("structure: binary facts must be irreflexive");
            if (a < 0 || a >= size || b < 0 || b >= size)
                throw err_format("structure: fact element out of range");
        }
    if (order) {
        if (order->size() != static_cast<size_t>(size))
            throw err_format("structure: order must list every element once");
        std::set<int> s(order->begin(), order->end());
        if (s.size() != order->size()) throw err_format("structure: order not strict");
    }
}

ForbiddenFamily ForbiddenFamily::make(const Vocabulary& voc, std::vector<FiniteStructure> fs) {
    for (const auto& f : fs) {
        f.validate(voc);
        for (int x = 0; x < f.size; ++x)
            for (int y = x + 1; y < f.size; ++y) {
                bool related = false;
                for (size_t s = 0; s < f.binary.size() && !related; ++s)
                    related = f.has_edge(static_cast<int>(s), x, y) ||
                              f.has_edge(static_cast<int>(s), y, x);
                if (!related)
                    throw err_format(
                        "forbidden family: unrelated element pair breaks free amalgamation");
            }
    }
    ForbiddenFamily fam;
    fam.structures = std::move(fs);
    return fam;
}

FreshRequest FreshRequest::lemma(AtomId z, std::vector<AtomId> X, std::vector<AtomId> Y) {
    FreshRequest r;
    r.anchor = z;
    r.fixed = std::move(X);
    r.avoid = std::move(Y);
    return r;
}

World World::equality() {
    World w;
    w.kind_ = UniverseKind::Equality;
    return w;
}

World World::dense_order() {
    World w;
    w.kind_ = UniverseKind::DenseOrder;
    w.vocab_.has_order = true;
    return w;
}

World World::rado_bit() {
    World w;
    w.kind_ = UniverseKind::RadoBIT;
    w.vocab_.binary = {"E"};
    w.vocab_.symmetric = {true};
    return w;
}

World World::ordered_forb(Vocabulary voc, ForbiddenFamily forb) {
    voc.has_order = true;
    voc.validate();
    World w;
    w.kind_ = UniverseKind::OrderedForb;
    w.vocab_ = std::move(voc);
    w.forbidden_ = std::move(forb);
    w.facts_.resize(w.vocab_.binary.size());
    return w;
}

namespace {

Vocabulary graph_vocab() {
    Vocabulary v;
    v.binary = {"E"};
    v.symmetric = {true};
    return v;
}

FiniteStructure clique(const Vocabulary& voc, int n) {
    FiniteStructure k;
    k.size = n;
    k.unary.assign(n, 0);
    k.binary.resize(voc.binary.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) k.binary[0].push_back({a, b});
    return k;
}

}  // namespace

World World::preset(const std::string& name) {
    if (name == "equality") return equality();
    if (name == "order") return dense_order();
    if (name == "rado-bit") return rado_bit();
    if (name == "ordered-rado")
        return ordered_forb(graph_vocab(), ForbiddenFamily{});
    if (name == "ordered-henson-k3") {
        Vocabulary v = graph_vocab();
        return ordered_forb(v, ForbiddenFamily::make(v, {clique(v, 3)}));
    }
    if (name == "ordered-digraph") {
        // Generic digraph: irreflexive E with two-cycles forbidden.
        Vocabulary v;
        v.binary = {"E"};
        v.symmetric = {false};
        FiniteStructure two_cycle;
        two_cycle.size = 2;
        two_cycle.unary = {0, 0};
        two_cycle.binary = {{{0, 1}, {1, 0}}};
        return ordered_forb(v, ForbiddenFamily::make(v, {two_cycle}));
    }
    throw err_format("unknown world preset '" + name + "'");
}

const std::vector<std::string>& World::preset_names() {
    static const std::vector<std::string> names = {"equality",       "order",
                                                   "rado-bit",       "ordered-rado",
                                                   "ordered-henson-k3", "ordered-digraph"};
    return names;
}

std::vector<AtomId> World::atom_ids() const {
    std::vector<AtomId> ids;
    ids.reserve(atoms_.size());
    for (const auto& [id, rec] : atoms_) ids.push_back(id);
    return ids;
}

const Rational& World::order_key(AtomId a) const {
    check_known(a);
    const auto& rec = atoms_.at(a);
    if (!rec.has_key) throw err_order("atom has no order key in an unordered universe");
    return rec.key;
}

uint32_t World::unary_mask(AtomId a) const {
    check_known(a);
    return atoms_.at(a).unary;
}

void World::name_constant(AtomId a) {
    check_known(a);
    if (std::find(constants_.begin(), constants_.end(), a) == constants_.end())
        constants_.push_back(a);
}

void World::check_known(AtomId a) const {
    if (!registered(a)) throw err_unknown_atom("atom #" + std::to_string(a) + " not registered");
}

bool World::key_taken(const Rational& k) const {
    for (const auto& [id, rec] : atoms_)
        if (rec.has_key && rec.key == k) return true;
    return false;
}

Rational World::key_between(const Rational& lo, const Rational& hi) const {
    // Split above the gap's current top occupant: one extra bit per atom.
    Rational top = lo;
    for (const auto& [id, rec] : atoms_)
        if (rec.has_key && lo < rec.key && rec.key < hi && rec.key > top) top = rec.key;
    Rational k = (top + hi) / Rational(2);
    while (key_taken(k)) k = (k + hi) / Rational(2);
    return k;
}

Rational World::key_above_all() const {
    Rational best(0);
    bool any = false;
    for (const auto& [id, rec] : atoms_)
        if (rec.has_key && (!any || rec.key > best)) { best = rec.key; any = true; }
    Rational k = any ? best + Rational(1) : Rational(0);
    while (key_taken(k)) k = k + Rational(1);
    return k;
}

Rational World::place_key(const std::vector<AtomId>& above, const std::vector<AtomId>& below) const {
    std::optional<Rational> lo, hi;
    for (AtomId a : above) {
        const Rational& k = order_key(a);
        if (!lo || k > *lo) lo = k;
    }
    for (AtomId a : below) {
        const Rational& k = order_key(a);
        if (!hi || k < *hi) hi = k;
    }
    if (lo && hi) {
        if (!(*lo < *hi)) throw err_order("contradictory order demands");
        return key_between(*lo, *hi);
    }
    if (lo) {
        Rational k = *lo + Rational(1);
        while (key_taken(k)) k = key_between(*lo, k);
        return k;
    }
    if (hi) {
        Rational k = *hi - Rational(1);
        while (key_taken(k)) k = key_between(k, *hi);
        return k;
    }
    return key_above_all();
}

AtomId World::add_atom(std::optional<Rational> key, uint32_t unary) {
    AtomRec rec;
    rec.unary = unary;
    if (ordered()) {
        rec.has_key = true;
        rec.key = key ? *key : key_above_all();
        if (key_taken(rec.key)) throw err_order("duplicate order key");
    } else if (key) {
        throw err_order("order key given for an unordered universe");
    }
    AtomId id = next_id_++;
    atoms_[id] = rec;
    return id;
}

AtomId World::add_rado_natural(long long n) {
    if (kind_ != UniverseKind::RadoBIT) throw err_format("add_rado_natural: not a RadoBIT world");
    if (n < 0) throw err_format("RadoBIT atoms are naturals");
    AtomId id = static_cast<AtomId>(n);
    if (!atoms_.count(id)) atoms_[id] = AtomRec{};
    if (next_id_ <= id) next_id_ = id + 1;
    return id;
}

void World::add_fact(int sym, AtomId a, AtomId b) {
    if (kind_ != UniverseKind::OrderedForb) throw err_format("facts are explicit only on OrderedForb worlds");
    check_known(a);
    check_known(b);
    if (sym < 0 || static_cast<size_t>(sym) >= vocab_.binary.size())
        throw err_format("unknown binary symbol index");
    if (a == b) throw err_format("binary facts are irreflexive");
    bool fwd = facts_[sym].insert({a, b}).second;
    bool bwd = vocab_.symmetric[sym] && facts_[sym].insert({b, a}).second;
    if (creates_forbidden(a)) {
        if (fwd) facts_[sym].erase({a, b});
        if (bwd) facts_[sym].erase({b, a});
        throw err_forbidden("fact introduces a forbidden substructure");
    }
}

bool World::fact(int sym, AtomId a, AtomId b) const {
    if (kind_ == UniverseKind::RadoBIT) {
        if (sym != 0 || a == b) return false;
        long long lo = std::min(a, b), hi = std::max(a, b);
        return lo < 63 && ((static_cast<unsigned long long>(hi) >> lo) & 1ULL) != 0;
    }
    if (facts_.empty()) return false;
    return facts_[sym].count({a, b}) != 0;
}

RelationProfile World::relate(AtomId a, AtomId b) const {
    check_known(a);
    check_known(b);
    RelationProfile p;
    p.unary_a = atoms_.at(a).unary;
    p.unary_b = atoms_.at(b).unary;
    if (a == b) {
        p.equal = true;
        return p;
    }
    if (ordered()) p.ord = order_key(a) < order_key(b) ? Ord::Less : Ord::Greater;
    for (size_t s = 0; s < vocab_.binary.size(); ++s) {
        if (fact(static_cast<int>(s), a, b)) p.fwd |= 1u << s;
        if (fact(static_cast<int>(s), b, a)) p.bwd |= 1u << s;
    }
    return p;
}

bool World::creates_forbidden(AtomId through) const {
    for (const auto& f : forbidden_.structures) {
        // Every two elements of f are related, so an embedding through an
        // atom stays inside that atom's closed sigma_0 neighbourhood.
        std::vector<AtomId> cand{through};
        for (const auto& [id, rec] : atoms_)
            if (id != through && sigma0_related(id, through)) cand.push_back(id);
        if (cand.size() < static_cast<size_t>(f.size)) continue;
        std::vector<AtomId> img(f.size, -1);
        std::vector<bool> used(cand.size(), false);
        bool uses_through = false;
        auto consistent = [&](int e, AtomId atom) {
            if (atoms_.at(atom).unary != f.unary[e]) return false;
            for (int e2 = 0; e2 < f.size; ++e2) {
                if (img[e2] < 0) continue;
                for (size_t s = 0; s < vocab_.binary.size(); ++s) {
                    if (f.has_edge(static_cast<int>(s), e, e2) !=
                        fact(static_cast<int>(s), atom, img[e2]))
                        return false;
                    if (f.has_edge(static_cast<int>(s), e2, e) !=
                        fact(static_cast<int>(s), img[e2], atom))
                        return false;
                }
            }
            return true;
        };
        std::function<bool(int)> rec = [&](int e) -> bool {
            if (e == f.size) return uses_through;
            for (size_t c = 0; c < cand.size(); ++c) {
                if (used[c] || !consistent(e, cand[c])) continue;
                used[c] = true;
                img[e] = cand[c];
                bool was = uses_through;
                if (cand[c] == through) uses_through = true;
                if (rec(e + 1)) return true;
                uses_through = was;
                img[e] = -1;
                used[c] = false;
            }
            return false;
        };
        if (rec(0)) return true;
    }
    return false;
}

bool World::verify_no_forbidden() const {
    for (const auto& [id, rec] : atoms_)
        if (creates_forbidden(id)) return false;
    return true;
}

AtomId World::realize(const FreshRequest& req) {
    ++fresh_count_;
    if (req.anchor) {
        // Lemma free-fresh mode: clone z's relations toward X, stay unrelated
        // to Y and z, land just above z (below everything else).
        AtomId z = *req.anchor;
        check_known(z);
        for (AtomId x : req.fixed) check_known(x);
        for (AtomId y : req.avoid) check_known(y);
        uint32_t un = atoms_.at(z).unary;
        if (kind_ == UniverseKind::RadoBIT) {
            std::vector<AtomId> adj;
            for (AtomId x : req.fixed)
                if (fact(0, z, x)) adj.push_back(x);
            FreshRequest g;
            for (AtomId a : adj) g.facts_fwd.push_back({0, a});
            return realize(g);
        }
        std::optional<Rational> key;
        if (ordered()) {
            // Immediately above z: midpoint to the next registered key.
            const Rational& kz = order_key(z);
            std::optional<Rational> next;
            for (const auto& [id, rec] : atoms_)
                if (rec.has_key && rec.key > kz && (!next || rec.key < *next)) next = rec.key;
            key = next ? key_between(kz, *next) : kz + Rational(1);
        }
        AtomId fresh = add_atom(key, un);
        if (kind_ == UniverseKind::OrderedForb) {
            for (AtomId x : req.fixed) {
                if (x == z || x == fresh) continue;
                for (size_t s = 0; s < vocab_.binary.size(); ++s) {
                    if (fact(static_cast<int>(s), z, x)) facts_[s].insert({fresh, x});
                    if (fact(static_cast<int>(s), x, z)) facts_[s].insert({x, fresh});
                }
            }
            // Free amalgamation guarantees this cannot fail.
            assert(!creates_forbidden(fresh));
        }
        return fresh;
    }

    // General mode.
    for (auto& [s, a] : req.facts_fwd) check_known(a);
    for (auto& [s, a] : req.facts_bwd) check_known(a);
    for (AtomId a : req.above) check_known(a);
    for (AtomId a : req.below) check_known(a);

    if (kind_ == UniverseKind::RadoBIT) {
        if (!req.above.empty() || !req.below.empty())
            throw err_order("RadoBIT is unordered");
        // Closed-form witness: high bit + requested neighbourhood bits. The
        // high bit only has to clear every small id (those act as bit
        // positions toward larger atoms); ids beyond 62 never address bits.
        std::set<long long> adj;
        for (auto& [s, a] : req.facts_fwd) adj.insert(a);
        for (auto& [s, a] : req.facts_bwd) adj.insert(a);
        long long H = 3;
        for (const auto& [id, rec] : atoms_)
            if (id <= 62) H = std::max(H, static_cast<long long>(id) + 1);
        if (!adj.empty()) {
            if (*adj.rbegin() > 61) throw err_too_large("RadoBIT adjacency bit beyond 62");
            H = std::max(H, *adj.rbegin() + 1);
        }
        long long m;
        do {
            if (H >= 62) throw err_too_large("RadoBIT witness exceeds 62 bits");
            m = 1LL << H;
            for (long long a : adj) m += 1LL << a;
            ++H;
        } while (atoms_.count(static_cast<AtomId>(m)));
        return add_rado_natural(m);
    }

    std::optional<Rational> key;
    if (ordered()) key = place_key(req.above, req.below);
    else if (!req.above.empty() || !req.below.empty())
        throw err_order("order demands on an unordered universe");

    if (kind_ == UniverseKind::Equality || kind_ == UniverseKind::DenseOrder) {
        if (!req.facts_fwd.empty() || !req.facts_bwd.empty() || req.unary != 0)
            throw err_format("relation facts requested on a relation-free universe");
        return add_atom(key);
    }

    AtomId fresh = add_atom(key, req.unary);
    for (auto& [s, a] : req.facts_fwd) {
        facts_[s].insert({fresh, a});
        if (vocab_.symmetric[s]) facts_[s].insert({a, fresh});
    }
    for (auto& [s, a] : req.facts_bwd) {
        facts_[s].insert({a, fresh});
        if (vocab_.symmetric[s]) facts_[s].insert({fresh, a});
    }
    if (creates_forbidden(fresh)) {
        // Roll back the registration before reporting.
        for (auto& rel : facts_) {
            for (auto it = rel.begin(); it != rel.end();)
                it = (it->first == fresh || it->second == fresh) ? rel.erase(it) : std::next(it);
        }
        atoms_.erase(fresh);
        throw err_forbidden("requested extension embeds a forbidden structure");
    }
    return fresh;
}

PartialAutomorphism World::apply_renaming(const std::map<AtomId, AtomId>& map,
                                          const std::vector<AtomId>& check_support) const {
    std::set<AtomId> values;
    for (auto& [a, b] : map) {
        check_known(a);
        check_known(b);
        if (!values.insert(b).second) throw err_not_injective("renaming not injective");
    }
    PartialAutomorphism pa;
    pa.map = map;
    for (AtomId s : check_support) {
        check_known(s);
        if (pa.apply(s) != s)
            throw err_not_type_preserving("renaming moves support atom #" + std::to_string(s));
    }
    std::vector<AtomId> domain;
    for (auto& [a, b] : map) domain.push_back(a);
    for (AtomId s : check_support)
        if (map.find(s) == map.end()) domain.push_back(s);
    for (size_t i = 0; i < domain.size(); ++i)
        for (size_t j = i + 1; j < domain.size(); ++j) {
            RelationProfile before = relate(domain[i], domain[j]);
            RelationProfile after = relate(pa.apply(domain[i]), pa.apply(domain[j]));
            if (!(before == after))
                throw err_not_type_preserving("witness pair (#" + std::to_string(domain[i]) +
                                              ", #" + std::to_string(domain[j]) + ")");
        }
    return pa;
}

std::vector<AtomId> World::window(size_t n) {
    if (kind_ == UniverseKind::RadoBIT)
        for (size_t i = 0; i < n; ++i) add_rado_natural(static_cast<long long>(i));
    while (atom_count() < n) add_atom();
    std::vector<AtomId> ids = atom_ids();
    ids = sorted_atoms(*this, std::move(ids));
    ids.resize(n);
    return ids;
}

std::vector<AtomId> sorted_atoms(const World& w, std::vector<AtomId> atoms) {
    if (w.ordered())
        std::sort(atoms.begin(), atoms.end(),
                  [&](AtomId a, AtomId b) { return w.order_key(a) < w.order_key(b); });
    else
        std::sort(atoms.begin(), atoms.end());
    return atoms;
}

}  // namespace orbitlin
