// orbitlin: exact computation with finitely supported vectors over
// oligomorphic atom universes.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "orbitlin/approx.hpp"
#include "orbitlin/automata.hpp"
#include "orbitlin/eqspace.hpp"
#include "orbitlin/extended_example.hpp"
#include "orbitlin/io.hpp"

using namespace orbitlin;

namespace {

struct Report {
    std::ostringstream body;
    std::string out_path;

    template <class T>
    Report& operator<<(const T& x) {
        body << x;
        return *this;
    }
    ~Report() {
        std::string s = body.str();
        std::cout << s;
        if (!out_path.empty()) {
            try {
                write_file(out_path, s);
            } catch (...) {
            }
        }
    }
};

std::string tuple_names(const LoadedWorld& lw, const Tuple& t) { return tuple_str(lw, t); }

int run_decompose(const std::string& world, const std::string& path, const std::string& field,
                  long long seed, const std::string& out) {
    Report rep;
    rep.out_path = out;
    VectorFile vf = load_vector_file(read_file(path));
    if (!world.empty() && World::preset(world).kind() != vf.lw.world.kind())
        throw err_format("world flag disagrees with the vector file");
    if (!field.empty()) vf.field = Field::parse_spec(field);
    VectorFS v = to_single_orbit(vf, 0);
    rep << "verb decompose\nseed " << seed << "\nfield " << vf.field.spec() << "\nentries "
        << v.entries.size() << "\n";
    std::vector<AtomId> named = vf.lw.world.atom_ids();
    long long before = vf.lw.world.fresh_count();
    auto terms = decompose(vf.lw.world, v, std::nullopt);
    rep << "cogs " << terms.size() << "\n";
    for (const auto& t : terms)
        rep << "cog " << coeff_str(vf.field, t.coeff) << " a=" << tuple_names(vf.lw, t.duo.a)
            << " b=" << tuple_names(vf.lw, t.duo.b) << "\n";
    rep << "fresh-atoms " << (vf.lw.world.fresh_count() - before) << "\n";
    // Spell out the fresh part of the presentation so the expansion proof is
    // checkable without re-running.
    const World& w = vf.lw.world;
    for (AtomId a : w.atom_ids()) {
        if (std::find(named.begin(), named.end(), a) != named.end()) continue;
        rep << "fresh-atom " << vf.lw.name(a);
        if (w.ordered()) rep << " key " << w.order_key(a).str();
        for (size_t s = 0; s < w.vocab().binary.size(); ++s) {
            rep << " " << w.vocab().binary[s] << "=[";
            bool first = true;
            for (AtomId b : w.atom_ids())
                if (w.fact(static_cast<int>(s), a, b)) {
                    rep << (first ? "" : ",") << vf.lw.name(b);
                    first = false;
                }
            rep << "]";
        }
        rep << "\n";
    }
    VectorFS back = expand(vf.field, 1, v.orbit, terms);
    rep << "expansion-check " << (vec_equal(back, v) ? "ok" : "MISMATCH") << "\n";
    if (!vec_equal(back, v)) return 1;
    return 0;
}

int run_member(const std::string& path, bool as_solver, const std::string& field, long long seed,
               const std::string& out, const std::string& subspace_in,
               const std::string& subspace_out) {
    Report rep;
    rep.out_path = out;
    VectorFile vf = load_vector_file(read_file(path));
    if (!field.empty()) vf.field = Field::parse_spec(field);
    size_t d = vf.vectors.back().at(0).first.size();
    PowerAmbient pa = power_ambient(vf.lw.world, d);
    SumVector probe = to_power_vector(vf, pa, vf.vectors.size() - 1);
    rep << "verb " << (as_solver ? "solve" : "member") << "\nseed " << seed << "\nfield "
        << vf.field.spec() << "\n";
    EqSubspace W;
    if (!subspace_in.empty()) {
        W = subspace_from_json(read_file(subspace_in), vf.field);
        rep << "subspace-file " << subspace_in << "\n";
    } else {
        if (vf.vectors.size() < 2) throw err_format("file needs generator vectors plus a probe");
        std::vector<SumVector> gens;
        for (size_t i = 0; i + 1 < vf.vectors.size(); ++i)
            gens.push_back(to_power_vector(vf, pa, i));
        rep << "generators " << gens.size() << "\n";
        W = subspace_from_generators(vf.field, pa.space, gens);
    }
    if (!subspace_out.empty()) write_file(subspace_out, subspace_to_json(W));
    for (size_t i = 0; i < W.classes.size(); ++i)
        rep << "class " << i << " dim " << W.classes[i].rep.dim() << " n " << W.classes[i].n()
            << " E-dim " << W.E[i].dim() << "\n";
    MemberResult r = member(vf.lw.world, probe, W);
    rep << (as_solver ? "solvable " : "member ") << (r.member ? "true" : "false") << "\n";
    if (!r.member && r.certificate) {
        rep << "certificate class " << r.certificate->class_index << " tuple "
            << tuple_names(vf.lw, r.certificate->tuple) << " value "
            << coeff_str(vf.field, r.certificate->value) << "\n";
        // machine-checkable: the echelon residual of the value is nonzero
        auto residual = W.E[r.certificate->class_index].reduce(r.certificate->value);
        rep << "certificate-residual " << coeff_str(vf.field, residual) << "\n";
    }
    return 0;
}

int run_chain(const std::string& world, size_t dim, const std::string& pattern,
              const std::string& field, const std::string& out) {
    Report rep;
    rep.out_path = out;
    World w = World::preset(world);
    Field f = field.empty() ? Field::rationals() : Field::parse_spec(field);
    std::vector<AtomId> base;
    for (size_t i = 0; i < dim; ++i) base.push_back(w.add_atom());
    if (pattern == "edge" && dim >= 2) {
        if (w.vocab().binary.empty()) throw err_format("world has no edge relation");
        for (size_t i = 0; i + 1 < dim; ++i) w.add_fact(0, base[i], base[i + 1]);
    } else if (pattern != "none") {
        throw err_format("pattern must be 'none' or 'edge'");
    }
    OrbitDescriptor o = descriptor_of(w, base, {});
    SubspaceChain chain = build_chain(w, f, o);
    rep << "verb chain\nworld " << world << "\ndim " << dim << "\nlength " << chain.length()
        << "\n";
    for (size_t i = 0; i < chain.steps.size(); ++i)
        rep << "step " << i << " total-dim " << chain.steps[i].total_dim() << "\n";
    AmbientSpace amb;
    amb.support = o.support;
    amb.orbits = {{"O", o}};
    rep << "upper-bound " << length_upper_bound(amb) << "\n";
    return 0;
}

int run_orbits(const std::string& world, size_t d, size_t window, const std::string& out) {
    Report rep;
    rep.out_path = out;
    World w = World::preset(world);
    size_t census = qf_type_census(w, d, window);
    rep << "verb orbits\nworld " << world << "\nd " << d << "\nwindow " << window << "\norbits "
        << census << "\n";
    // Exact count by pattern enumeration; windows can under-realize types on
    // worlds with relations.
    World w2 = World::preset(world);
    rep << "ambient-orbits " << enumerate_ambient(w2, d).size() << "\n";
    return 0;
}

int run_endo_dim(const std::string& path, size_t d, const std::string& field,
                 const std::string& out) {
    Report rep;
    rep.out_path = out;
    Vocabulary voc;
    FiniteStructure b = parse_structure(read_file(path), voc);
    Field f = field.empty() ? Field::rationals() : Field::parse_spec(field);
    long long dim = endo_dim(b, voc, d, f);
    rep << "verb approx.endo-dim\nd " << d << "\nfield " << f.spec() << "\nendo-dim " << dim
        << "\norbit-count-2d " << orbit_count(b, voc, 2 * d) << "\n";
    return 0;
}

int run_embed(const std::string& path, size_t n_opt, const std::string& out) {
    Report rep;
    rep.out_path = out;
    Vocabulary voc;
    FiniteStructure g = parse_structure(read_file(path), voc);
    size_t n = n_opt ? n_opt : (static_cast<size_t>(g.size) + 1) / 2;
    std::vector<GFVec> img = embed_graph(g, n);
    rep << "verb symplectic.embed\nvertices " << g.size << "\nn " << n << "\n";
    for (size_t i = 0; i < img.size(); ++i) {
        rep << "vertex " << (g.names.empty() ? std::to_string(i) : g.names[i]) << " -> (";
        for (size_t j = 0; j < img[i].size(); ++j) rep << (j ? "," : "") << int(img[i][j]);
        rep << ")\n";
    }
    rep << "induced-check ok\n";
    return 0;
}

int run_counts(size_t d, unsigned q, const std::string& out) {
    Report rep;
    rep.out_path = out;
    rep << "verb symplectic.counts\nd " << d << "\nq " << q << "\nvector-orbits "
        << vector_orbit_count(static_cast<long long>(d), q) << "\nsymplectic-orbits "
        << symplectic_orbit_count(static_cast<long long>(d), q) << "\n";
    return 0;
}

int run_wofa_run(const std::string& path, const std::string& word_arg, const std::string& out) {
    Report rep;
    rep.out_path = out;
    LoadedWorld lw;
    WeightedAutomaton A = load_automaton(read_file(path), lw);
    validate_total(lw.world, A);
    Word word;
    std::istringstream ss(word_arg);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) word.push_back({lw.atom(item)});
    rep << "verb wofa.run\nword-length " << word.size() << "\nvalue "
        << A.field.str(run(lw.world, A, word)) << "\n";
    return 0;
}

int run_wofa_equiv(const std::string& p1, const std::string& p2, const std::string& out) {
    Report rep;
    rep.out_path = out;
    LoadedWorld lw;
    WeightedAutomaton A = load_automaton(read_file(p1), lw);
    // both automata must share one presentation; load B into the same world
    LoadedWorld lw2 = lw;
    WeightedAutomaton B = load_automaton(read_file(p2), lw2);
    EquivalenceResult r = equivalent(lw2.world, A, B);
    rep << "verb wofa.equiv\nequivalent " << (r.equivalent ? "true" : "false") << "\ngenerators "
        << r.generators << "\n";
    if (!r.equivalent) {
        rep << "witness";
        for (const Tuple& t : r.witness) rep << " " << tuple_names(lw2, t);
        rep << "\n";
    }
    return 0;
}

int run_rank_growth(size_t k, size_t window, const std::string& field, const std::string& out) {
    Report rep;
    rep.out_path = out;
    World w = World::rado_bit();
    Field f = field.empty() ? Field::rationals() : Field::parse_spec(field);
    std::vector<size_t> ranks = right_derivative_rank(w, f, k, window);
    rep << "verb wofa.rank-growth\nk " << k << "\nwindow " << window << "\n";
    for (size_t i = 0; i < ranks.size(); ++i)
        rep << "rank size<=" << (i + 1) << " " << ranks[i] << "\n";
    bool strict = true;
    for (size_t i = 1; i < ranks.size(); ++i) strict = strict && ranks[i] > ranks[i - 1];
    rep << "strictly-increasing " << (strict ? "true" : "false") << "\n";
    return strict ? 0 : 1;
}

int run_selftest(const std::string& suite, const std::string& out) {
    Report rep;
    rep.out_path = out;
    if (suite != "extended-example") throw err_format("unknown selftest suite '" + suite + "'");
    ExtendedExample ex = make_extended_example(Field::rationals());
    rep << "verb selftest.extended-example\nbalanced " << (is_balanced(ex.v) ? "true" : "false")
        << "\n";
    long long before = ex.world.fresh_count();
    auto terms = decompose(ex.world, ex.v);
    bool ok = vec_equal(expand(ex.v.field, 1, ex.orbit, terms), ex.v);
    rep << "cogs " << terms.size() << "\nfresh-atoms " << (ex.world.fresh_count() - before)
        << "\nexpansion-check " << (ok ? "ok" : "MISMATCH") << "\n";
    auto witness = extended_example_witness(ex);
    bool wok = vec_equal(expand(ex.v.field, 1, ex.orbit, witness), ex.v);
    rep << "witness-cogs " << witness.size() << "\nwitness-check " << (wok ? "ok" : "MISMATCH")
        << "\n";
    rep << "no-forbidden " << (ex.world.verify_no_forbidden() ? "ok" : "VIOLATED") << "\n";
    return ok && wok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact equivariant linear algebra over oligomorphic atoms"};
    app.require_subcommand(1);
    std::string world, field, out, path, path2, word_arg, pattern = "none", suite;
    std::string subspace_in, subspace_out;
    long long seed = 0;
    size_t dim = 1, d = 1, window = 6, k = 3, n = 0;
    unsigned q = 2;

    auto* dec = app.add_subcommand("decompose", "write a balanced vector as a sum of cogs");
    dec->add_option("world", world)->required();
    dec->add_option("vector-file", path)->required();
    dec->add_option("--field", field);
    dec->add_option("--seed", seed);
    dec->add_option("--out", out);

    auto* mem = app.add_subcommand("member", "decide equivariant-subspace membership");
    mem->add_option("world", world)->required();
    mem->add_option("file", path)->required();
    mem->add_option("--field", field);
    mem->add_option("--seed", seed);
    mem->add_option("--out", out);
    mem->add_option("--subspace", subspace_in);
    mem->add_option("--dump-subspace", subspace_out);

    auto* sol = app.add_subcommand("solve", "decide solvability of an orbit-finite system");
    sol->add_option("world", world)->required();
    sol->add_option("file", path)->required();
    sol->add_option("--field", field);
    sol->add_option("--seed", seed);
    sol->add_option("--out", out);
    sol->add_option("--dump-subspace", subspace_out);

    auto* chn = app.add_subcommand("chain", "build the maximal subspace chain of an orbit");
    chn->add_option("world", world)->required();
    chn->add_option("--dim", dim)->required();
    chn->add_option("--pattern", pattern);
    chn->add_option("--field", field);
    chn->add_option("--out", out);

    auto* orb = app.add_subcommand("orbits", "count quantifier-free types over a window");
    orb->add_option("--world", world)->required();
    orb->add_option("--d", d)->required();
    orb->add_option("--window", window);
    orb->add_option("--out", out);

    auto* apx = app.add_subcommand("approx", "finite-approximation computations");
    auto* endo = apx->add_subcommand("endo-dim", "equivariant endomorphism dimension");
    endo->add_option("structure-file", path)->required();
    endo->add_option("--d", d)->required();
    endo->add_option("--field", field);
    endo->add_option("--out", out);

    auto* sym = app.add_subcommand("symplectic", "symplectic spaces over small fields");
    auto* emb = sym->add_subcommand("embed", "embed a graph into a symplectic graph");
    emb->add_option("graph-file", path)->required();
    emb->add_option("--n", n);
    emb->add_option("--out", out);
    auto* cnt = sym->add_subcommand("counts", "orbit-count formulas");
    cnt->add_option("--d", d)->required();
    cnt->add_option("--q", q)->required();
    cnt->add_option("--out", out);

    auto* wofa = app.add_subcommand("wofa", "weighted orbit-finite automata");
    auto* wrun = wofa->add_subcommand("run", "run an automaton on a word");
    wrun->add_option("automaton-file", path)->required();
    wrun->add_option("--word", word_arg);
    wrun->add_option("--out", out);
    auto* weq = wofa->add_subcommand("equiv", "decide equivalence by saturation");
    weq->add_option("automaton-file-1", path)->required();
    weq->add_option("automaton-file-2", path2)->required();
    weq->add_option("--out", out);
    auto* wrg = wofa->add_subcommand("rank-growth", "right-derivative rank growth over rado-bit");
    wrg->add_option("--k", k);
    wrg->add_option("--window", window);
    wrg->add_option("--field", field);
    wrg->add_option("--out", out);

    auto* self = app.add_subcommand("selftest", "reproduce a shipped worked example");
    self->add_option("--suite", suite)->required();
    self->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (dec->parsed()) return run_decompose(world, path, field, seed, out);
        if (mem->parsed()) return run_member(path, false, field, seed, out, subspace_in, subspace_out);
        if (sol->parsed()) return run_member(path, true, field, seed, out, "", subspace_out);
        if (chn->parsed()) return run_chain(world, dim, pattern, field, out);
        if (orb->parsed()) return run_orbits(world, d, window, out);
        if (apx->parsed() && endo->parsed()) return run_endo_dim(path, d, field, out);
        if (sym->parsed() && emb->parsed()) return run_embed(path, n, out);
        if (sym->parsed() && cnt->parsed()) return run_counts(d, q, out);
        if (wofa->parsed() && wrun->parsed()) return run_wofa_run(path, word_arg, out);
        if (wofa->parsed() && weq->parsed()) return run_wofa_equiv(path, path2, out);
        if (wofa->parsed() && wrg->parsed()) return run_rank_growth(k, window, field, out);
        if (self->parsed()) return run_selftest(suite, out);
        std::cerr << "missing subcommand\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error " << e.kind() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error BadArgument: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
