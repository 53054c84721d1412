#pragma once

#include <map>
#include <optional>
#include <vector>

#include "orbitlin/orbits.hpp"
#include "orbitlin/scalar_space.hpp"

namespace orbitlin {

// A finitely supported vector on one orbit: a finite map from concrete
// tuples to nonzero coefficients. Coefficients are tuples in F^m (m = 1 for
// plain scalars, larger for the Lin_E variant).
struct VectorFS {
    Field field;
    size_t coeff_len = 1;
    OrbitDescriptor orbit;
    std::map<Tuple, Coeff> entries;

    bool is_zero() const { return entries.empty(); }
    Coeff at(const Tuple& t) const {
        auto it = entries.find(t);
        return it == entries.end() ? coeff_zero(field, coeff_len) : it->second;
    }
    void add_entry(const Tuple& t, const Coeff& c);
};

VectorFS vec_zero(const Field& f, size_t m, OrbitDescriptor orbit);
VectorFS vec_add(const VectorFS& a, const VectorFS& b);
VectorFS vec_sub(const VectorFS& a, const VectorFS& b);
VectorFS vec_neg(const VectorFS& a);
VectorFS vec_scale(const VectorFS& a, const Scalar& s);
bool vec_equal(const VectorFS& a, const VectorFS& b);

// Entries summed along fibers of the projection onto J.
VectorFS project(const VectorFS& v, const IndexSet& J);
VectorFS project_drop(const VectorFS& v, size_t pos_index);

// First position whose drop-projection is nonzero, if any.
std::optional<Rational> balance_defect(const VectorFS& v);
bool is_balanced(const VectorFS& v);

// Two interleaved orbit tuples with matching cross-relations; the generator
// of a cog.
struct Duo {
    Tuple a;
    Tuple b;
    OrbitDescriptor orbit;
};

void validate_duo(const World& w, const Duo& d);  // throws on violation

// Extends a to a duo a || b with freshly realized b-atoms.
Duo make_duo(World& w, const Tuple& a, const OrbitDescriptor& orbit);

// The alternating 2^|I|-term sum over mixing the duo, scaled by lambda.
VectorFS cog(const Field& f, const Duo& d, const Coeff& lambda);
inline VectorFS cog(const Field& f, const Duo& d) { return cog(f, d, Coeff{f.one()}); }

struct CogTerm {
    Coeff coeff;
    Duo duo;
};

VectorFS expand(const Field& f, size_t coeff_len, const OrbitDescriptor& orbit,
                const std::vector<CogTerm>& terms);

// Conflict report per Appendix-style location analysis: a location is a
// (position, atom) pair occurring in the tuple set.
struct Conflict {
    size_t pos1;
    AtomId atom1;
    size_t pos2;
    AtomId atom2;
    bool equational;  // equational conflicts are a special case of relational
};

struct ConflictReport {
    std::vector<Conflict> items;
    bool empty() const { return items.empty(); }
    bool has_equational() const;
};

ConflictReport find_conflicts(const World& w, const OrbitDescriptor& orbit,
                              const std::vector<Tuple>& tuples);
ConflictReport find_conflicts(const World& w, const VectorFS& v);

// Subvector with position `pos` pinned to atom a, then projected away from
// that position; lives over fix_position(orbit, pos, a).
VectorFS pinned_subvector(const VectorFS& v, size_t pos, AtomId a);

// Peels one cog off a nonzero vector: returns (1/v(a)) * prod(1 - pi_i) v,
// which equals a single cog exactly, together with its duo.
std::pair<VectorFS, Duo> extract_cog(World& w, const VectorFS& v);

// Writes a balanced vector as an exact linear combination of cogs
// (Theorem-level guarantee; the expansion is re-checked before returning).
// When a coefficient space is supplied, input coefficients must lie in it and
// output coefficients automatically do.
std::vector<CogTerm> decompose(World& w, const VectorFS& v,
                               const std::optional<CoeffSpace>& space = std::nullopt);

}  // namespace orbitlin
