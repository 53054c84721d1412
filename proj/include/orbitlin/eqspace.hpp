#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitlin/vectors.hpp"

namespace orbitlin {

// A tagged direct sum of orbits sharing one support; the ambient space of a
// Lin_F decomposition.
struct AmbientSpace {
    std::vector<AtomId> support;
    std::vector<std::pair<std::string, OrbitDescriptor>> orbits;

    const OrbitDescriptor& orbit_of(const std::string& tag) const;
    int index_of(const std::string& tag) const;
};

// Vector in a tagged direct sum; each part lives on the ambient orbit with
// the same tag.
struct SumVector {
    Field field;
    size_t coeff_len = 1;
    std::map<std::string, VectorFS> parts;

    bool is_zero() const;
    void add_part_entry(const AmbientSpace& amb, const std::string& tag, const Tuple& t,
                        const Coeff& c);
};

SumVector sum_zero(const Field& f, size_t m = 1);
SumVector sum_add(const SumVector& a, const SumVector& b);
SumVector sum_sub(const SumVector& a, const SumVector& b);
SumVector sum_scale(const SumVector& a, const Scalar& s);
bool sum_equal(const SumVector& a, const SumVector& b);
SumVector from_single(const std::string& tag, const VectorFS& v);

// Grouped restriction class: all (orbit, J) pairs across the ambient whose
// projections are equivariantly bijective. The class coordinate count n_i is
// members.size().
struct GroupedClass {
    OrbitDescriptor rep;  // canonical positions 1..k
    std::vector<std::pair<size_t, IndexSet>> members;
    size_t n() const { return members.size(); }
};

std::vector<GroupedClass> grouped_classes(const AmbientSpace& amb);

// v restricted at one class: a finitely supported map from representative
// tuples to F^{n_i} value tuples, realized as a VectorFS with coeff_len n_i.
VectorFS restrict_to_class(const SumVector& v, const AmbientSpace& amb, const GroupedClass& cls);

// Equivariant subspace in coefficient-space form: one echelon space E_i per
// grouped class.
struct EqSubspace {
    Field field;
    AmbientSpace ambient;
    std::vector<GroupedClass> classes;
    std::vector<ScalarRowSpace> E;

    size_t total_dim() const;
    friend bool operator==(const EqSubspace& a, const EqSubspace& b);
};

EqSubspace subspace_empty(const Field& f, const AmbientSpace& amb);
EqSubspace subspace_from_generators(const Field& f, const AmbientSpace& amb,
                                    const std::vector<SumVector>& gens);

struct MemberCertificate {
    size_t class_index = 0;
    Tuple tuple;      // the witnessing a in Q_i
    Coeff value;      // v|_i(a), outside E_i on negative answers
};

struct MemberResult {
    bool member = false;
    std::optional<MemberCertificate> certificate;  // set on negative answers
};

// Exact for worlds in the ordered free-amalgamation scope; refuses otherwise.
MemberResult member(const World& w, const SumVector& v, const EqSubspace& W);

// Decides whether b lies in the equivariant span of the column templates.
MemberResult solve(const World& w, const std::vector<SumVector>& column_templates,
                   const SumVector& b, const AmbientSpace& amb);

struct SubspaceChain {
    std::vector<EqSubspace> steps;  // strictly increasing, starts at zero
    size_t length() const { return steps.size() - 1; }
};

// The explicit chain of length exactly 2^d inside Lin_F O.
SubspaceChain build_chain(World& w, const Field& f, const OrbitDescriptor& orbit);

size_t length_upper_bound(const AmbientSpace& amb);

// Ambient space of Lin_F A^d over an empty support, plus the pattern map
// needed to route raw tuples into components.
struct PowerAmbient {
    AmbientSpace space;
    std::vector<std::vector<size_t>> slot_of;  // per orbit
};

PowerAmbient power_ambient(const World& w, size_t d);

// Routes a raw A^d tuple into its ambient component; returns (tag, tuple).
std::pair<std::string, Tuple> route_tuple(const World& w, const PowerAmbient& amb, const Tuple& t);

// Test oracle: explicit combination of renamed generators equal to v, found
// by enumerating type-preserving injections into a window (widened up to
// `widenings` times with generically placed fresh atoms).
struct FoundCombination {
    std::vector<std::pair<Scalar, SumVector>> terms;
};

std::optional<FoundCombination> window_search(World& w, const AmbientSpace& amb,
                                              const std::vector<SumVector>& gens,
                                              const SumVector& v,
                                              std::vector<AtomId> window_atoms,
                                              int widenings = 3);

}  // namespace orbitlin
