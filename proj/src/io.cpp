#include "orbitlin/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace orbitlin {

using nlohmann::json;

std::string LoadedWorld::name(AtomId a) const {
    auto it = name_of.find(a);
    return it == name_of.end() ? "#" + std::to_string(a) : it->second;
}

AtomId LoadedWorld::atom(const std::string& n) const {
    auto it = atom_of.find(n);
    if (it == atom_of.end()) throw err_unknown_atom("no element named '" + n + "'");
    return it->second;
}

namespace {

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw err_format("invalid JSON");
    return j;
}

void register_presentation(LoadedWorld& lw, const json& pres) {
    World& w = lw.world;
    if (!pres.contains("elements")) return;
    if (w.kind() == UniverseKind::RadoBIT) {
        for (const auto& e : pres.at("elements")) {
            long long n = e.is_number() ? e.get<long long>() : std::stoll(e.get<std::string>());
            AtomId id = w.add_rado_natural(n);
            lw.atom_of[std::to_string(n)] = id;
            lw.name_of[id] = std::to_string(n);
        }
        if (pres.contains("binary_facts") && !pres.at("binary_facts").empty())
            throw err_format("rado-bit facts are implicit in the BIT presentation");
        return;
    }
    std::vector<std::string> names;
    for (const auto& e : pres.at("elements")) names.push_back(e.get<std::string>());
    std::vector<std::string> order = names;
    if (pres.contains("order"))
        order = pres.at("order").get<std::vector<std::string>>();
    std::map<std::string, uint32_t> unary;
    if (pres.contains("unary_facts"))
        for (auto& [sym, arr] : pres.at("unary_facts").items()) {
            int s = w.vocab().unary_index(sym);
            if (s < 0) throw err_format("unknown unary symbol " + sym);
            for (const auto& e : arr) unary[e.get<std::string>()] |= 1u << s;
        }
    // Elements registered in listed order; ordered worlds take keys from it.
    for (const auto& n : order) {
        AtomId id = w.ordered() ? w.add_atom(std::nullopt, unary.count(n) ? unary[n] : 0)
                                : w.add_atom(std::nullopt, unary.count(n) ? unary[n] : 0);
        lw.atom_of[n] = id;
        lw.name_of[id] = n;
    }
    if (pres.contains("binary_facts"))
        for (auto& [sym, arr] : pres.at("binary_facts").items()) {
            int s = w.vocab().binary_index(sym);
            if (s < 0) throw err_format("unknown binary symbol " + sym);
            for (const auto& pair : arr)
                w.add_fact(s, lw.atom(pair.at(0).get<std::string>()),
                           lw.atom(pair.at(1).get<std::string>()));
        }
}

Tuple parse_tuple(const LoadedWorld& lw, const json& arr) {
    Tuple t;
    for (const auto& e : arr)
        t.push_back(e.is_number() ? static_cast<AtomId>(e.get<long long>())
                                  : lw.atom(e.get<std::string>()));
    return t;
}

}  // namespace

LoadedWorld load_world(const std::string& preset, const std::string& presentation_json) {
    LoadedWorld lw;
    lw.world = World::preset(preset);
    if (!presentation_json.empty()) register_presentation(lw, parse(presentation_json));
    return lw;
}

VectorFile load_vector_file(const std::string& text) {
    json j = parse(text);
    VectorFile vf;
    vf.field = Field::parse_spec(j.value("field", "q"));
    vf.lw.world = World::preset(j.at("world").get<std::string>());
    if (j.contains("presentation")) register_presentation(vf.lw, j.at("presentation"));
    if (j.contains("constants"))
        for (const auto& s : j.at("constants")) {
            AtomId a = vf.lw.atom(s.get<std::string>());
            vf.lw.world.name_constant(a);
            vf.support.push_back(a);
        }
    if (j.contains("support"))
        for (const auto& s : j.at("support")) vf.support.push_back(vf.lw.atom(s.get<std::string>()));
    std::sort(vf.support.begin(), vf.support.end());
    vf.support.erase(std::unique(vf.support.begin(), vf.support.end()), vf.support.end());
    auto parse_entries = [&](const json& arr) {
        std::vector<std::pair<Tuple, Rational>> entries;
        for (const auto& e : arr)
            entries.push_back({parse_tuple(vf.lw, e.at(0)),
                               Rational::parse(e.at(1).is_string()
                                                   ? e.at(1).get<std::string>()
                                                   : std::to_string(e.at(1).get<long long>()))});
        return entries;
    };
    if (j.contains("entries")) vf.vectors.push_back(parse_entries(j.at("entries")));
    if (j.contains("vectors"))
        for (const auto& v : j.at("vectors")) vf.vectors.push_back(parse_entries(v.at("entries")));
    if (vf.vectors.empty()) throw err_format("vector file has no entries");
    return vf;
}

VectorFS to_single_orbit(const VectorFile& vf, size_t index) {
    const auto& raw = vf.vectors.at(index);
    std::optional<VectorFS> out;
    for (const auto& [t, coeff] : raw) {
        Normalized n = normalize(vf.lw.world, t, vf.support);
        if (n.tuple.size() != t.size())
            throw err_format("vector entry repeats atoms or hits the support");
        if (!out) out = vec_zero(vf.field, 1, n.orbit);
        else if (!(out->orbit == n.orbit))
            throw err_format("vector entries span more than one orbit");
        out->add_entry(n.tuple, Coeff{vf.field.from_rational(coeff)});
    }
    return *out;
}

SumVector to_power_vector(const VectorFile& vf, const PowerAmbient& amb, size_t index) {
    SumVector v = sum_zero(vf.field, 1);
    for (const auto& [t, coeff] : vf.vectors.at(index)) {
        auto [tag, norm] = route_tuple(vf.lw.world, amb, t);
        v.add_part_entry(amb.space, tag, norm, Coeff{vf.field.from_rational(coeff)});
    }
    return v;
}

FiniteStructure parse_structure(const std::string& text, Vocabulary& voc) {
    json j = parse(text);
    voc = Vocabulary{};
    if (j.contains("vocabulary")) {
        const json& v = j.at("vocabulary");
        if (v.contains("unary")) voc.unary = v.at("unary").get<std::vector<std::string>>();
        if (v.contains("binary")) voc.binary = v.at("binary").get<std::vector<std::string>>();
        voc.symmetric.assign(voc.binary.size(), false);
        if (v.contains("symmetric"))
            for (const auto& s : v.at("symmetric")) {
                int i = voc.binary_index(s.get<std::string>());
                if (i < 0) throw err_format("symmetric flag on unknown symbol");
                voc.symmetric[i] = true;
            }
        voc.has_order = v.value("has_order", false);
    }
    voc.validate();
    FiniteStructure b;
    std::map<std::string, int> at;
    for (const auto& e : j.at("elements")) {
        at[e.get<std::string>()] = b.size++;
        b.names.push_back(e.get<std::string>());
    }
    b.unary.assign(b.size, 0);
    if (j.contains("unary_facts"))
        for (auto& [sym, arr] : j.at("unary_facts").items()) {
            int s = voc.unary_index(sym);
            if (s < 0) throw err_format("unknown unary symbol " + sym);
            for (const auto& e : arr) b.unary[at.at(e.get<std::string>())] |= 1u << s;
        }
    b.binary.resize(voc.binary.size());
    if (j.contains("binary_facts"))
        for (auto& [sym, arr] : j.at("binary_facts").items()) {
            int s = voc.binary_index(sym);
            if (s < 0) throw err_format("unknown binary symbol " + sym);
            for (const auto& pair : arr) {
                int x = at.at(pair.at(0).get<std::string>());
                int y = at.at(pair.at(1).get<std::string>());
                b.binary[s].push_back({x, y});
                if (voc.symmetric[s] && x != y) b.binary[s].push_back({y, x});
            }
        }
    if (j.contains("order")) {
        std::vector<int> ord;
        for (const auto& e : j.at("order")) ord.push_back(at.at(e.get<std::string>()));
        b.order = ord;
    }
    b.validate(voc);
    return b;
}

namespace {

json profile_json(const RelationProfile& p) {
    return json{{"eq", p.equal},
                {"ord", p.ord == Ord::Less ? "<" : p.ord == Ord::Greater ? ">" : "-"},
                {"fwd", p.fwd},
                {"bwd", p.bwd},
                {"ua", p.unary_a},
                {"ub", p.unary_b}};
}

RelationProfile profile_from(const json& j) {
    RelationProfile p;
    p.equal = j.at("eq").get<bool>();
    std::string o = j.at("ord").get<std::string>();
    p.ord = o == "<" ? Ord::Less : o == ">" ? Ord::Greater : Ord::None;
    p.fwd = j.at("fwd").get<uint32_t>();
    p.bwd = j.at("bwd").get<uint32_t>();
    p.unary_a = j.at("ua").get<uint32_t>();
    p.unary_b = j.at("ub").get<uint32_t>();
    return p;
}

json descriptor_json(const OrbitDescriptor& o) {
    json d;
    d["support"] = o.support;
    d["ordered"] = o.ordered;
    json pos = json::array();
    for (const auto& p : o.positions) pos.push_back(p.str());
    d["positions"] = pos;
    d["unary"] = o.unary;
    json pairs = json::array();
    for (size_t i = 0; i < o.dim(); ++i)
        for (size_t j2 = i + 1; j2 < o.dim(); ++j2)
            pairs.push_back(json{{"i", i}, {"j", j2}, {"rel", profile_json(o.pairs[i][j2])}});
    d["pairs"] = pairs;
    json vs = json::array();
    for (size_t i = 0; i < o.dim(); ++i)
        for (size_t s = 0; s < o.support.size(); ++s)
            vs.push_back(json{{"i", i}, {"s", s}, {"rel", profile_json(o.vs_support[i][s])}});
    d["vs_support"] = vs;
    return d;
}

OrbitDescriptor descriptor_from(const json& d) {
    OrbitDescriptor o;
    o.support = d.at("support").get<std::vector<AtomId>>();
    o.ordered = d.at("ordered").get<bool>();
    for (const auto& p : d.at("positions")) o.positions.push_back(Rational::parse(p.get<std::string>()));
    o.unary = d.at("unary").get<std::vector<uint32_t>>();
    size_t n = o.dim();
    o.pairs.assign(n, std::vector<RelationProfile>(n));
    o.vs_support.assign(n, std::vector<RelationProfile>(o.support.size()));
    for (const auto& e : d.at("pairs"))
        o.pairs[e.at("i").get<size_t>()][e.at("j").get<size_t>()] = profile_from(e.at("rel"));
    for (const auto& e : d.at("vs_support"))
        o.vs_support[e.at("i").get<size_t>()][e.at("s").get<size_t>()] = profile_from(e.at("rel"));
    return o;
}

}  // namespace

std::string subspace_to_json(const EqSubspace& W) {
    json j;
    j["field"] = W.field.spec();
    j["support"] = W.ambient.support;
    json orbits = json::array();
    for (const auto& [tag, o] : W.ambient.orbits)
        orbits.push_back(json{{"tag", tag}, {"orbit", descriptor_json(o)}});
    j["ambient"] = orbits;
    json classes = json::array();
    for (size_t i = 0; i < W.classes.size(); ++i) {
        json rows = json::array();
        for (const auto& row : W.E[i].rows()) {
            json r = json::array();
            for (const auto& s : row) r.push_back(W.field.str(s));
            rows.push_back(r);
        }
        classes.push_back(json{{"dim", W.classes[i].rep.dim()},
                               {"n", W.classes[i].n()},
                               {"basis", rows}});
    }
    j["classes"] = classes;
    return j.dump(2) + "\n";
}

EqSubspace subspace_from_json(const std::string& text, const Field& f) {
    json j = parse(text);
    AmbientSpace amb;
    amb.support = j.at("support").get<std::vector<AtomId>>();
    for (const auto& e : j.at("ambient"))
        amb.orbits.push_back({e.at("tag").get<std::string>(), descriptor_from(e.at("orbit"))});
    EqSubspace W = subspace_empty(f, amb);
    const json& classes = j.at("classes");
    if (classes.size() != W.classes.size())
        throw err_format("subspace file class count mismatch");
    for (size_t i = 0; i < W.classes.size(); ++i) {
        if (classes[i].at("n").get<size_t>() != W.classes[i].n())
            throw err_format("subspace file class width mismatch");
        for (const auto& row : classes[i].at("basis")) {
            Coeff v;
            for (const auto& s : row) v.push_back(f.parse(s.get<std::string>()));
            W.E[i].insert(v);
        }
    }
    return W;
}

WeightedAutomaton load_automaton(const std::string& text, LoadedWorld& lw) {
    json j = parse(text);
    lw.world = World::preset(j.at("world").get<std::string>());
    if (j.contains("presentation")) register_presentation(lw, j.at("presentation"));
    WeightedAutomaton A;
    A.field = Field::parse_spec(j.value("field", "q"));
    if (j.contains("support"))
        for (const auto& s : j.at("support")) A.support.push_back(lw.atom(s.get<std::string>()));
    std::sort(A.support.begin(), A.support.end());
    for (const auto& st : j.at("states")) {
        Tuple rep = parse_tuple(lw, st.at("rep"));
        A.states.push_back(
            {st.at("name").get<std::string>(), descriptor_of(lw.world, rep, A.support)});
    }
    for (const auto& lt : j.at("letters")) {
        Tuple rep = parse_tuple(lw, lt.at("rep"));
        A.letters.push_back(
            {lt.at("name").get<std::string>(), descriptor_of(lw.world, rep, A.support)});
    }
    A.initial = sum_zero(A.field, 1);
    AmbientSpace amb = A.state_ambient();
    for (const auto& e : j.at("initial"))
        A.initial.add_part_entry(amb, e.at(0).get<std::string>(), parse_tuple(lw, e.at(1)),
                                 Coeff{A.field.parse(e.at(2).get<std::string>())});
    for (auto& [tag, val] : j.at("output").items())
        A.output[tag] = A.field.parse(val.get<std::string>());
    for (const auto& d : j.at("delta")) {
        WeightedAutomaton::Transition tr;
        tr.state_tag = d.at("state").get<std::string>();
        tr.letter_tag = d.at("letter").get<std::string>();
        tr.rep_state = parse_tuple(lw, d.at("rep_state"));
        tr.rep_letter = parse_tuple(lw, d.at("rep_letter"));
        Tuple joint = tr.rep_state;
        joint.insert(joint.end(), tr.rep_letter.begin(), tr.rep_letter.end());
        tr.joint_key = qf_type(lw.world, joint, A.support).str();
        for (const auto& t : d.at("to"))
            tr.templ.push_back({Coeff{A.field.parse(t.at(0).get<std::string>())},
                                t.at(1).get<std::string>(), parse_tuple(lw, t.at(2))});
        A.delta.push_back(std::move(tr));
    }
    return A;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw err_format("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw err_format("cannot write " + path);
    out << content;
}

std::string tuple_str(const LoadedWorld& lw, const Tuple& t) {
    std::string s = "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += ",";
        s += lw.name(t[i]);
    }
    return s + ")";
}

std::string coeff_str(const Field& f, const Coeff& c) {
    if (c.size() == 1) return f.str(c[0]);
    std::string s = "(";
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += f.str(c[i]);
    }
    return s + ")";
}

}  // namespace orbitlin
