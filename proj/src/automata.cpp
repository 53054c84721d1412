#include "orbitlin/automata.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>

namespace orbitlin {

AmbientSpace WeightedAutomaton::state_ambient() const {
    AmbientSpace amb;
    amb.support = support;
    amb.orbits = states;
    return amb;
}

const OrbitDescriptor& WeightedAutomaton::state_orbit(const std::string& tag) const {
    for (const auto& [t, o] : states)
        if (t == tag) return o;
    throw err_format("unknown state orbit '" + tag + "'");
}

std::string WeightedAutomaton::letter_tag_of(const World& w, const Tuple& letter) const {
    for (const auto& [t, o] : letters)
        if (tuple_matches(w, o, letter)) return t;
    throw err_letter("letter does not inhabit any alphabet orbit");
}

namespace {

Tuple concat(const Tuple& a, const Tuple& b) {
    Tuple r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

const WeightedAutomaton::Transition& find_transition(const World& w, const WeightedAutomaton& A,
                                                     const std::string& state_tag,
                                                     const Tuple& state_tuple,
                                                     const Tuple& letter) {
    std::string ltag = A.letter_tag_of(w, letter);
    std::string key = qf_type(w, concat(state_tuple, letter), A.support).str();
    for (const auto& tr : A.delta)
        if (tr.state_tag == state_tag && tr.letter_tag == ltag && tr.joint_key == key) return tr;
    throw err_format("no transition for joint orbit of (" + state_tag + ", " + ltag + ")");
}

}  // namespace

SumVector step(const World& w, const WeightedAutomaton& A, const SumVector& config,
               const Tuple& letter) {
    AmbientSpace amb = A.state_ambient();
    SumVector out = sum_zero(config.field, 1);
    for (const auto& [tag, part] : config.parts)
        for (const auto& [t, c] : part.entries) {
            const auto& tr = find_transition(w, A, tag, t, letter);
            std::map<AtomId, AtomId> m;
            Tuple from = concat(tr.rep_state, tr.rep_letter);
            Tuple to = concat(t, letter);
            for (size_t i = 0; i < from.size(); ++i) {
                auto [it, fresh] = m.emplace(from[i], to[i]);
                if (!fresh && it->second != to[i])
                    throw err_format("transition representative does not map injectively");
            }
            PartialAutomorphism pi = w.apply_renaming(m, A.support);
            for (const auto& [coeff, target_tag, target_tuple] : tr.templ)
                out.add_part_entry(amb, target_tag, pi.apply(target_tuple),
                                   coeff_scale(config.field, c[0], coeff));
        }
    return out;
}

Scalar output_of(const WeightedAutomaton& A, const SumVector& config) {
    Scalar acc = A.field.zero();
    for (const auto& [tag, part] : config.parts) {
        auto it = A.output.find(tag);
        Scalar o = it == A.output.end() ? A.field.zero() : it->second;
        for (const auto& [t, c] : part.entries) acc = A.field.add(acc, A.field.mul(c[0], o));
    }
    return acc;
}

Scalar run(const World& w, const WeightedAutomaton& A, const Word& word) {
    SumVector config = A.initial;
    for (const Tuple& letter : word) config = step(w, A, config, letter);
    return output_of(A, config);
}

SumVector left_derivative(const World& w, const WeightedAutomaton& A, const Word& word) {
    SumVector config = A.initial;
    for (const Tuple& letter : word) config = step(w, A, config, letter);
    return config;
}

std::vector<Tuple> letter_extensions(World& w, const WeightedAutomaton& A,
                                     std::vector<AtomId> T) {
    for (AtomId s : A.support)
        if (std::find(T.begin(), T.end(), s) == T.end()) T.push_back(s);
    T = sorted_atoms(w, std::move(T));
    std::vector<AtomId> free;  // atoms the letter orbit says nothing about
    for (AtomId a : T)
        if (std::find(A.support.begin(), A.support.end(), a) == A.support.end()) free.push_back(a);
    if (free.size() > 12) throw err_too_large("letter_extensions: configuration support too large");

    std::vector<Tuple> out;
    for (const auto& [ltag, ldesc] : A.letters) {
        if (ldesc.dim() != 1)
            throw err_unsupported_world("letter extension enumeration needs 1-dimensional letters");
        // Letters equal to an existing atom outside the support.
        for (AtomId a : free)
            if (tuple_matches(w, ldesc, {a})) out.push_back({a});
        // Fresh letters: every relation pattern toward the free atoms, every
        // order gap; demands toward the support come from the descriptor.
        size_t nsym = w.vocab().binary.size();
        std::vector<std::vector<std::pair<uint32_t, uint32_t>>> patterns(free.size());
        {
            std::vector<std::pair<uint32_t, uint32_t>> opts{{0, 0}};
            for (size_t s = 0; s < nsym; ++s) {
                std::vector<std::pair<uint32_t, uint32_t>> next;
                std::vector<std::pair<uint32_t, uint32_t>> choices;
                if (w.vocab().symmetric[s]) choices = {{0, 0}, {1u << s, 1u << s}};
                else choices = {{0, 0}, {1u << s, 0}, {0, 1u << s}, {1u << s, 1u << s}};
                for (auto& b : opts)
                    for (auto& c : choices)
                        next.push_back({b.first | c.first, b.second | c.second});
                opts = std::move(next);
            }
            for (size_t i = 0; i < free.size(); ++i) patterns[i] = opts;
        }
        std::vector<size_t> choice(free.size(), 0);
        size_t gaps = w.ordered() ? T.size() + 1 : 1;
        bool more = true;
        while (more) {
            for (size_t gap = 0; gap < gaps; ++gap) {
                FreshRequest req;
                req.unary = ldesc.unary[0];
                for (size_t s = 0; s < ldesc.support.size(); ++s) {
                    const RelationProfile& p = ldesc.vs_support[0][s];
                    for (size_t b = 0; b < nsym; ++b) {
                        if (p.fwd & (1u << b))
                            req.facts_fwd.push_back({static_cast<int>(b), ldesc.support[s]});
                        if ((p.bwd & (1u << b)) && !(w.vocab().symmetric[b] && (p.fwd & (1u << b))))
                            req.facts_bwd.push_back({static_cast<int>(b), ldesc.support[s]});
                    }
                    if (p.ord == Ord::Less) req.below.push_back(ldesc.support[s]);
                    else if (p.ord == Ord::Greater) req.above.push_back(ldesc.support[s]);
                }
                for (size_t i = 0; i < free.size(); ++i) {
                    auto [fwd, bwd] = patterns[i][choice[i]];
                    for (size_t b = 0; b < nsym; ++b) {
                        if (fwd & (1u << b)) req.facts_fwd.push_back({static_cast<int>(b), free[i]});
                        if ((bwd & (1u << b)) && !(w.vocab().symmetric[b] && (fwd & (1u << b))))
                            req.facts_bwd.push_back({static_cast<int>(b), free[i]});
                    }
                }
                if (w.ordered()) {
                    if (gap > 0) req.above.push_back(T[gap - 1]);
                    if (gap < T.size()) req.below.push_back(T[gap]);
                }
                try {
                    AtomId a = w.realize(req);
                    if (tuple_matches(w, ldesc, {a})) out.push_back({a});
                } catch (const Error&) {
                    // inconsistent or forbidden pattern: no such letter exists
                }
            }
            size_t i = 0;
            while (i < free.size() && ++choice[i] == patterns[i].size()) choice[i++] = 0;
            more = i < free.size() && !free.empty();
            if (free.empty()) more = false;
        }
    }
    return out;
}

void validate_total(World& w, const WeightedAutomaton& A) {
    for (const auto& [tag, o] : A.states) {
        Tuple rep = realize_tuple(w, o);
        std::vector<AtomId> T = A.support;
        T.insert(T.end(), rep.begin(), rep.end());
        for (const Tuple& letter : letter_extensions(w, A, T)) {
            find_transition(w, A, tag, rep, letter);  // throws when missing
        }
    }
}

namespace {

std::vector<AtomId> config_atoms(const SumVector& v) {
    std::set<AtomId> s;
    for (const auto& [tag, part] : v.parts)
        for (const auto& [t, c] : part.entries)
            for (AtomId a : t) s.insert(a);
    return {s.begin(), s.end()};
}

// Disjoint-sum automaton with output F1 on the left copy and -F2 on the
// right; the pair is equivalent iff this automaton is the zero function.
WeightedAutomaton difference_automaton(const WeightedAutomaton& A, const WeightedAutomaton& B) {
    if (A.field != B.field) throw err_format("equivalence: field mismatch");
    if (A.support != B.support) throw err_format("equivalence: support mismatch");
    if (A.letters.size() != B.letters.size()) throw err_format("equivalence: alphabet mismatch");
    for (size_t i = 0; i < A.letters.size(); ++i)
        if (A.letters[i].first != B.letters[i].first ||
            A.letters[i].second.key() != B.letters[i].second.key())
            throw err_format("equivalence: alphabet mismatch");

    WeightedAutomaton D;
    D.field = A.field;
    D.support = A.support;
    D.letters = A.letters;
    D.initial = sum_zero(A.field, 1);
    AmbientSpace damb;
    auto add_side = [&](const WeightedAutomaton& M, const std::string& prefix, bool negate) {
        for (const auto& [tag, o] : M.states) D.states.push_back({prefix + tag, o});
        damb = D.state_ambient();
        for (const auto& [tag, s] : M.output)
            D.output[prefix + tag] = negate ? M.field.neg(s) : s;
        for (const auto& tr : M.delta) {
            WeightedAutomaton::Transition t2 = tr;
            t2.state_tag = prefix + tr.state_tag;
            t2.templ.clear();
            for (const auto& [c, target, tup] : tr.templ)
                t2.templ.push_back({c, prefix + target, tup});
            D.delta.push_back(std::move(t2));
        }
        for (const auto& [tag, part] : M.initial.parts)
            for (const auto& [t, c] : part.entries) D.initial.add_part_entry(damb, prefix + tag, t, c);
    };
    add_side(A, "l.", false);
    add_side(B, "r.", true);
    return D;
}

}  // namespace

EquivalenceResult equivalent(World& w, const WeightedAutomaton& A, const WeightedAutomaton& B) {
    if (w.kind() != UniverseKind::DenseOrder && w.kind() != UniverseKind::OrderedForb)
        throw err_unsupported_world(
            "saturation equivalence runs over ordered free-amalgamation worlds; "
            "use the bounded enumeration fallback");
    WeightedAutomaton D = difference_automaton(A, B);
    AmbientSpace amb = D.state_ambient();
    size_t bound = length_upper_bound(amb);

    struct Item {
        SumVector config;
        int parent;
        Tuple letter;
    };
    std::deque<Item> queue;
    queue.push_back({D.initial, -1, {}});
    std::vector<Item> gens;
    EqSubspace W = subspace_empty(D.field, amb);

    while (!queue.empty()) {
        Item it = std::move(queue.front());
        queue.pop_front();
        if (member(w, it.config, W).member) continue;
        std::vector<SumVector> gvecs;
        gens.push_back(it);
        for (const auto& g : gens) gvecs.push_back(g.config);
        EqSubspace next = subspace_from_generators(D.field, amb, gvecs);
        if (next.total_dim() <= W.total_dim() || gens.size() > bound)
            throw std::logic_error("saturation exceeded the coefficient-space bound");
        W = std::move(next);
        int idx = static_cast<int>(gens.size()) - 1;
        std::vector<AtomId> T = config_atoms(it.config);
        for (const Tuple& letter : letter_extensions(w, D, T))
            queue.push_back({step(w, D, it.config, letter), idx, letter});
    }

    EquivalenceResult res;
    res.generators = gens.size();
    for (size_t i = 0; i < gens.size(); ++i) {
        if (D.field.is_zero(output_of(D, gens[i].config))) continue;
        Word word;
        for (int at = static_cast<int>(i); at > 0; at = gens[at].parent)
            word.push_back(gens[at].letter);
        std::reverse(word.begin(), word.end());
        res.equivalent = false;
        res.witness = std::move(word);
        return res;
    }
    res.equivalent = true;
    return res;
}

EquivalenceResult enumeration_equivalent(const World& w, const WeightedAutomaton& A,
                                         const WeightedAutomaton& B,
                                         const std::vector<Tuple>& window_letters,
                                         size_t max_len) {
    EquivalenceResult res;
    std::vector<Word> frontier{{}};
    for (size_t len = 0; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const Word& word : frontier) {
            Scalar x = run(w, A, word);
            Scalar y = run(w, B, word);
            if (!(x == y)) {
                res.equivalent = false;
                res.witness = word;
                return res;
            }
            if (len < max_len)
                for (const Tuple& l : window_letters) {
                    Word w2 = word;
                    w2.push_back(l);
                    next.push_back(std::move(w2));
                }
        }
        frontier = std::move(next);
    }
    res.equivalent = true;
    return res;
}

size_t derivative_orbit_census(World& w, const WeightedAutomaton& A,
                               const std::vector<Tuple>& window_letters, size_t max_len) {
    std::vector<SumVector> classes;
    auto same_class = [&](const SumVector& a, const SumVector& b) {
        std::vector<AtomId> aa = config_atoms(a), bb = config_atoms(b);
        if (aa.size() != bb.size()) return false;
        // Try every type-preserving bijection between the atom sets.
        std::sort(aa.begin(), aa.end());
        std::vector<AtomId> perm = bb;
        std::sort(perm.begin(), perm.end());
        do {
            std::map<AtomId, AtomId> m;
            for (size_t i = 0; i < aa.size(); ++i) m[aa[i]] = perm[i];
            try {
                PartialAutomorphism pi = w.apply_renaming(m, A.support);
                SumVector moved = sum_zero(a.field, 1);
                AmbientSpace amb = A.state_ambient();
                for (const auto& [tag, part] : a.parts)
                    for (const auto& [t, c] : part.entries)
                        moved.add_part_entry(amb, tag, pi.apply(t), c);
                if (sum_equal(moved, b)) return true;
            } catch (const Error&) {
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    };
    std::function<void(const SumVector&, size_t)> visit = [&](const SumVector& cfg, size_t depth) {
        bool found = false;
        for (const auto& c : classes)
            if (same_class(cfg, c)) { found = true; break; }
        if (!found) classes.push_back(cfg);
        if (depth == max_len) return;
        for (const Tuple& l : window_letters) visit(step(w, A, cfg, l), depth + 1);
    };
    visit(A.initial, 0);
    return classes.size();
}

WeightedAutomaton first_letter_adjacent_automaton(World& w, const Field& f) {
    if (w.kind() != UniverseKind::RadoBIT)
        throw err_unsupported_world("the first-letter automaton lives over rado-bit");
    std::vector<AtomId> win = w.window(3);  // naturals 0, 1, 2
    WeightedAutomaton A;
    A.field = f;
    OrbitDescriptor zero_dim = descriptor_of(w, {}, {});
    OrbitDescriptor one_dim = descriptor_of(w, {win[0]}, {});
    A.states = {{"dead", zero_dim}, {"init", zero_dim}, {"track", one_dim}};
    A.letters = {{"a", one_dim}};
    A.initial = sum_zero(f, 1);
    A.initial.add_part_entry(A.state_ambient(), "init", {}, Coeff{f.one()});
    A.output["init"] = f.zero();
    A.output["track"] = f.one();
    A.output["dead"] = f.zero();

    auto add = [&](const std::string& st, const Tuple& rs, const Tuple& rl,
                   std::vector<std::tuple<Coeff, std::string, Tuple>> tpl) {
        WeightedAutomaton::Transition tr;
        tr.state_tag = st;
        tr.letter_tag = "a";
        tr.rep_state = rs;
        tr.rep_letter = rl;
        tr.joint_key = qf_type(w, concat(rs, rl), A.support).str();
        tr.templ = std::move(tpl);
        A.delta.push_back(std::move(tr));
    };
    // Adjacent pair (1, 2): bit 1 of 2 is set. Non-adjacent pair (0, 2).
    AtomId n0 = win[0], n1 = win[1], n2 = win[2];
    add("init", {}, {n0}, {{Coeff{f.one()}, "track", {n0}}});
    add("dead", {}, {n0}, {{Coeff{f.one()}, "dead", {}}});
    add("track", {n0}, {n0}, {{Coeff{f.one()}, "dead", {}}});         // letter equals the head
    add("track", {n1}, {n2}, {{Coeff{f.one()}, "track", {n1}}});      // adjacent: keep tracking
    add("track", {n0}, {n2}, {{Coeff{f.one()}, "dead", {}}});         // non-adjacent: die
    return A;
}

Scalar first_letter_adjacent_eval(const World& w, const Field& f, const Word& word) {
    if (word.empty()) return f.zero();
    AtomId head = word[0][0];
    for (size_t i = 1; i < word.size(); ++i)
        if (!w.fact(0, head, word[i][0])) return f.zero();
    return f.one();
}

std::vector<size_t> right_derivative_rank(World& w, const Field& f, size_t max_size,
                                          size_t window, bool auto_widen) {
    if (w.kind() != UniverseKind::RadoBIT)
        throw err_unsupported_world("right-derivative ranks are demonstrated over rado-bit");
    std::vector<AtomId> win = w.window(window);
    // All nonempty S subseteq window with |S| <= max_size.
    std::vector<std::vector<AtomId>> sets;
    std::function<void(size_t, std::vector<AtomId>&)> gen = [&](size_t i, std::vector<AtomId>& cur) {
        if (cur.size() >= 1 && cur.size() <= max_size) sets.push_back(cur);
        if (i == win.size() || cur.size() == max_size) return;
        for (size_t j = i; j < win.size(); ++j) {
            cur.push_back(win[j]);
            gen(j + 1, cur);
            cur.pop_back();
        }
    };
    std::vector<AtomId> cur;
    gen(0, cur);

    // Witnesses adjacent to exactly S inside the window, in closed form.
    std::vector<AtomId> points = win;
    for (const auto& S : sets) {
        FreshRequest req;
        for (AtomId s : S) req.facts_fwd.push_back({0, s});
        if (!auto_widen) throw err_window("witness atoms lie outside the window");
        points.push_back(w.realize(req));
    }

    std::vector<size_t> ranks;
    for (size_t s = 1; s <= max_size; ++s) {
        ScalarRowSpace space = make_row_space(f, points.size());
        for (const auto& S : sets) {
            if (S.size() > s) continue;
            std::vector<Scalar> row(points.size(), f.zero());
            for (size_t c = 0; c < points.size(); ++c) {
                bool all = true;
                for (AtomId x : S)
                    if (!w.fact(0, x, points[c])) { all = false; break; }
                row[c] = all ? f.one() : f.zero();
            }
            space.insert(std::move(row));
        }
        ranks.push_back(space.dim());
    }
    return ranks;
}

}  // namespace orbitlin
