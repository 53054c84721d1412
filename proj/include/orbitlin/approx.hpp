#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "orbitlin/echelon.hpp"
#include "orbitlin/scalar_space.hpp"
#include "orbitlin/world.hpp"

namespace orbitlin {

// Explicit permutation group on {0..degree-1}.
struct PermGroup {
    size_t degree = 0;
    std::vector<std::vector<int>> elements;

    size_t order() const { return elements.size(); }
    void check_closed() const;  // closure under composition and inverse
};

// All automorphisms of a finite structure, by backtracking.
PermGroup aut_group(const FiniteStructure& B, const Vocabulary& voc, size_t bound = 16);

// Orbits of B^d under Aut(B), counted via canonical minima.
long long orbit_count(const FiniteStructure& B, const Vocabulary& voc, size_t d);

// Dimension of the space of linear self-maps of Lin(B^d) commuting with the
// automorphism action, computed by exact rank of the commutation constraints.
long long endo_dim(const FiniteStructure& B, const Vocabulary& voc, size_t d, const Field& f);

// Small structure makers used by the approximation tests.
FiniteStructure pure_set(size_t n);
FiniteStructure path_graph(size_t n);
FiniteStructure graph_structure(size_t n, const std::vector<std::pair<int, int>>& edges);
Vocabulary pure_vocab();
Vocabulary graph_vocab_sym();

// ---------------------------------------------------------------------------
// Symplectic spaces over small fields.

// GF(q) for q in {2,3,4,5}; F4 is table-driven. Doubles as the field-ops
// context for the echelon machinery.
class SmallField {
public:
    using value_type = uint8_t;

    explicit SmallField(unsigned q = 2);
    unsigned q() const { return q_; }

    uint8_t zero() const { return 0; }
    uint8_t one() const { return 1; }
    bool is_zero(uint8_t a) const { return a == 0; }
    uint8_t add(uint8_t a, uint8_t b) const { return add_[a][b]; }
    uint8_t sub(uint8_t a, uint8_t b) const { return add_[a][neg_[b]]; }
    uint8_t neg(uint8_t a) const { return neg_[a]; }
    uint8_t mul(uint8_t a, uint8_t b) const { return mul_[a][b]; }
    uint8_t inv(uint8_t a) const;

private:
    unsigned q_;
    uint8_t add_[8][8] = {};
    uint8_t mul_[8][8] = {};
    uint8_t neg_[8] = {};
    uint8_t inv_[8] = {};
};

using GFVec = std::vector<uint8_t>;
using GFRowSpace = RowSpaceT<SmallField>;

// W_n over GF(q): basis e_1..e_n, f_1..f_n with the standard pairing.
struct SymplecticSpace {
    SmallField field;
    size_t n = 1;

    size_t dim() const { return 2 * n; }
    GFVec e(size_t i) const;  // 1-based
    GFVec f(size_t i) const;
    uint8_t omega(const GFVec& u, const GFVec& v) const;
    GFVec add(const GFVec& u, const GFVec& v) const;
    GFVec scale(uint8_t s, const GFVec& u) const;
    GFVec zero() const { return GFVec(dim(), 0); }
    // Enumeration index <-> vector, lexicographic most-significant-first.
    GFVec vector_at(size_t index) const;
    size_t vector_count() const;
};

// Extends a symplectic subbasis (optionally with unpaired e-vectors) to a
// full symplectic basis; input vectors stay at the front of the output.
struct SymplecticBasis {
    std::vector<GFVec> e;
    std::vector<GFVec> f;
};

SymplecticBasis complete_subbasis(const SymplecticSpace& sp, const std::vector<GFVec>& es,
                                  const std::vector<GFVec>& fs);

// Witt extension: a full form-preserving automorphism (as a dim x dim matrix,
// columns = images of unit vectors) restricting to the given partial map.
using GFMatrix = std::vector<GFVec>;

GFMatrix witt_extend(const SymplecticSpace& sp,
                     const std::vector<std::pair<GFVec, GFVec>>& pairs);

GFVec apply_matrix(const SymplecticSpace& sp, const GFMatrix& m, const GFVec& v);

// Induced-subgraph embedding of a graph on at most 2n vertices into the
// symplectic graph on W_n over F2 (vertices = vectors, edges where omega = 1).
std::vector<GFVec> embed_graph(const FiniteStructure& G, size_t n);

// Orbit-count formulas via Gaussian q-binomials.
long long gaussian_binomial(long long d, long long m, long long q);
long long vector_orbit_count(long long d, long long q);
long long symplectic_orbit_count(long long d, long long q);

// Orbit invariant of a d-tuple of vectors: pivot set, span coefficients of
// the non-pivots, and form values on pivot pairs.
struct TupleClassification {
    std::vector<size_t> pivots;                        // increasing positions
    std::map<size_t, std::vector<uint8_t>> lambdas;    // non-pivot -> coeffs over earlier pivots
    std::map<std::pair<size_t, size_t>, uint8_t> mu;   // (i > i') pivot pairs -> omega(v_i, v_i')
};

TupleClassification classify_tuple(const SymplecticSpace& sp, const std::vector<GFVec>& tuple);
std::vector<GFVec> reconstruct(const SymplecticSpace& sp, size_t d,
                               const TupleClassification& cls);

// The symplectic graph on W_n over F2 as a finite structure (vertex i is
// vector_at(i)).
FiniteStructure symplectic_graph_structure(size_t n);

}  // namespace orbitlin
