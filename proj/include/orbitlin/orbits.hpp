#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitlin/world.hpp"

namespace orbitlin {

// Canonical quantifier-free type of a concrete tuple relative to a support
// list. Two tuples over the same world and support get equal keys iff they
// lie in the same Aut(A/S)-orbit (homogeneity).
struct TypeKey {
    size_t d = 0;
    std::vector<uint32_t> unary;              // per tuple position
    std::vector<RelationProfile> pairs;       // (i,j), i<j, row-major
    std::vector<RelationProfile> vs_support;  // (i,s) position x support index

    friend bool operator==(const TypeKey& a, const TypeKey& b);
    std::string str() const;  // canonical serialization; usable as a map key
};

TypeKey qf_type(const World& w, const Tuple& t, const std::vector<AtomId>& support);

// Strictly increasing rational index positions.
using IndexSet = std::vector<Rational>;

bool is_index_subset(const IndexSet& a, const IndexSet& b);

// An S-ordered orbit of A^I: support, positions, and the quantifier-free
// demands. Positions keep their labels under projection. For unordered
// universes the entries are only required distinct and outside S.
struct OrbitDescriptor {
    std::vector<AtomId> support;  // sorted by id
    IndexSet positions;
    bool ordered = false;
    std::vector<uint32_t> unary;                              // per position
    std::vector<std::vector<RelationProfile>> pairs;          // [i][j], i<j used
    std::vector<std::vector<RelationProfile>> vs_support;     // [i][support index]

    size_t dim() const { return positions.size(); }
    std::string key() const;  // canonical serialization

    friend bool operator==(const OrbitDescriptor& a, const OrbitDescriptor& b);
    friend bool operator!=(const OrbitDescriptor& a, const OrbitDescriptor& b) { return !(a == b); }
};

// Equality after the unique order bijection between position sets
// (position labels ignored, supports compared as-is).
bool reindex_equal(const OrbitDescriptor& a, const OrbitDescriptor& b);

// Descriptor of an already-normalized tuple: entries distinct, outside S,
// increasing when the world is ordered. Positions are labelled 1..d.
OrbitDescriptor descriptor_of(const World& w, const Tuple& t, std::vector<AtomId> support);

// Where an original tuple position went under normalization.
struct PosRef {
    enum Kind { Position, Support } kind = Position;
    size_t position = 0;  // index into the normalized tuple
    AtomId atom = -1;     // the support atom, when kind == Support
};

struct Normalized {
    OrbitDescriptor orbit;
    Tuple tuple;                   // the normalized concrete tuple
    std::vector<PosRef> position_map;
};

Normalized normalize(const World& w, const Tuple& t, std::vector<AtomId> support);

// Does the concrete tuple inhabit the orbit?
bool tuple_matches(const World& w, const OrbitDescriptor& o, const Tuple& t);

// Restriction of the descriptor to a subset of its positions.
OrbitDescriptor project_descriptor(const OrbitDescriptor& o, const IndexSet& J);

// Descriptor of O^{i:a}|^{-i}: position i dropped, its atom moved into the
// support. The relation demands toward `a` are read off the orbit itself.
OrbitDescriptor fix_position(const OrbitDescriptor& o, size_t pos_index, AtomId a);

// One projected-orbit class: subsets J of I whose projections are
// equivariantly bijective (i.e. equal after reindexing).
struct RestrictionClass {
    OrbitDescriptor rep;          // projection onto members.front()
    std::vector<IndexSet> members;
};

// Classes sorted by decreasing dimension; first is the orbit itself (J = I),
// last the empty orbit. Sum of member counts is 2^|I|.
std::vector<RestrictionClass> projected_classes(const OrbitDescriptor& o);

// Realizes one fresh tuple of the orbit (mutates the world).
Tuple realize_tuple(World& w, const OrbitDescriptor& o);

std::vector<Tuple> enumerate_orbit_reps(World& w, const OrbitDescriptor& o, size_t n);

// Number of distinct qf types of d-tuples drawn from a window of atoms.
size_t qf_type_census(World& w, size_t d, size_t window);

// All orbits of A^d over an empty support, presented as a position pattern
// (slot of each coordinate) plus the normalized descriptor of the orbit.
struct AmbientOrbit {
    std::vector<size_t> slot_of;  // length d, values 0..k-1
    OrbitDescriptor desc;         // k positions
};

std::vector<AmbientOrbit> enumerate_ambient(const World& w, size_t d);

}  // namespace orbitlin
