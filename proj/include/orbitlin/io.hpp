#pragma once

#include <map>
#include <string>
#include <vector>

#include "orbitlin/automata.hpp"
#include "orbitlin/eqspace.hpp"
#include "orbitlin/vectors.hpp"

namespace orbitlin {

// A loaded world plus the element-name table of its presentation.
struct LoadedWorld {
    World world;
    std::map<std::string, AtomId> atom_of;
    std::map<AtomId, std::string> name_of;

    std::string name(AtomId a) const;
    AtomId atom(const std::string& n) const;
};

// Registers the presentation block (elements, facts, order) into a preset
// world. RadoBIT elements are naturals; ordered worlds list elements in
// increasing order.
LoadedWorld load_world(const std::string& preset, const std::string& presentation_json);

struct VectorFile {
    Field field;
    LoadedWorld lw;
    std::vector<AtomId> support;
    std::vector<std::vector<std::pair<Tuple, Rational>>> vectors;  // raw entries
};

VectorFile load_vector_file(const std::string& json_text);

// Single-orbit view (decompose input): all raw entries must normalize into
// one S-ordered orbit.
VectorFS to_single_orbit(const VectorFile& vf, size_t index);

// Multi-orbit view over Lin A^d (member / solve inputs).
SumVector to_power_vector(const VectorFile& vf, const PowerAmbient& amb, size_t index);

FiniteStructure parse_structure(const std::string& json_text, Vocabulary& voc_out);

// Subspace files: the ambient descriptors plus the per-class echelon bases.
std::string subspace_to_json(const EqSubspace& W);
EqSubspace subspace_from_json(const std::string& json_text, const Field& f);

WeightedAutomaton load_automaton(const std::string& json_text, LoadedWorld& lw_out);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

std::string tuple_str(const LoadedWorld& lw, const Tuple& t);
std::string coeff_str(const Field& f, const Coeff& c);

}  // namespace orbitlin
