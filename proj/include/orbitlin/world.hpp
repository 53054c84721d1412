#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orbitlin/error.hpp"
#include "orbitlin/rational.hpp"

namespace orbitlin {

using AtomId = int;
using Tuple = std::vector<AtomId>;

// Relation vocabulary: unary and binary symbols only. The strict total order
// `<` is built in when the universe is ordered and is not listed here.
// Symbols flagged symmetric are maintained as symmetric fact sets (graphs).
struct Vocabulary {
    std::vector<std::string> unary;
    std::vector<std::string> binary;
    std::vector<bool> symmetric;  // parallel to binary
    bool has_order = false;

    int unary_index(const std::string& s) const;
    int binary_index(const std::string& s) const;
    void validate() const;
};

// A finite structure over the sigma_0 part of a vocabulary (no order use
// beyond an optional listing). Elements are local indices 0..n-1.
struct FiniteStructure {
    int size = 0;
    std::vector<std::string> names;                       // optional, size or empty
    std::vector<uint32_t> unary;                          // bitmask per element
    std::vector<std::vector<std::pair<int, int>>> binary; // per binary symbol: directed pairs
    std::optional<std::vector<int>> order;                // increasing listing of elements

    bool has_edge(int sym, int a, int b) const;
    void validate(const Vocabulary& voc) const;           // irreflexive, order strict/total
};

// Forb(F): in every member, every two distinct elements must be related in
// some direction -- the free-amalgamation criterion. Enforced at construction.
struct ForbiddenFamily {
    std::vector<FiniteStructure> structures;

    static ForbiddenFamily make(const Vocabulary& voc, std::vector<FiniteStructure> fs);
};

enum class Ord : uint8_t { None, Less, Greater };

// Complete quantifier-free relation data of an ordered atom pair (a, b).
struct RelationProfile {
    bool equal = false;
    Ord ord = Ord::None;     // a vs b
    uint32_t fwd = 0;        // bit s set iff R_s(a, b)
    uint32_t bwd = 0;        // bit s set iff R_s(b, a)
    uint32_t unary_a = 0;
    uint32_t unary_b = 0;

    bool sigma0_related() const { return equal || fwd != 0 || bwd != 0; }

    friend bool operator==(const RelationProfile& x, const RelationProfile& y) {
        return x.equal == y.equal && x.ord == y.ord && x.fwd == y.fwd && x.bwd == y.bwd &&
               x.unary_a == y.unary_a && x.unary_b == y.unary_b;
    }
};

enum class UniverseKind { Equality, DenseOrder, RadoBIT, OrderedForb };

// Fresh-atom request. Lemma mode clones z's relations toward X, leaves the
// new atom unrelated to Y and z, and slots it just above z. General mode
// spells out the exact facts and order demands toward named atoms; anything
// unnamed stays unrelated.
struct FreshRequest {
    // Lemma mode (set `anchor`):
    std::optional<AtomId> anchor;  // z
    std::vector<AtomId> fixed;     // X
    std::vector<AtomId> avoid;     // Y

    // General mode:
    uint32_t unary = 0;
    std::vector<std::pair<int, AtomId>> facts_fwd;  // R_s(fresh, a)
    std::vector<std::pair<int, AtomId>> facts_bwd;  // R_s(a, fresh)
    std::vector<AtomId> above;                      // fresh > a
    std::vector<AtomId> below;                      // fresh < a

    static FreshRequest lemma(AtomId z, std::vector<AtomId> X, std::vector<AtomId> Y = {});
};

// A finite injective atom map validated to preserve all relation profiles;
// stands in for an element of Aut(A/S).
struct PartialAutomorphism {
    std::map<AtomId, AtomId> map;

    AtomId apply(AtomId a) const {
        auto it = map.find(a);
        return it == map.end() ? a : it->second;
    }
    Tuple apply(const Tuple& t) const {
        Tuple r(t.size());
        for (size_t i = 0; i < t.size(); ++i) r[i] = apply(t[i]);
        return r;
    }
};

// A growing finite presentation of a homogeneous atom universe. Atoms carry
// exact rational order keys when the universe is ordered; genericity is
// realized lazily through `realize`. Single writer; everything returned is a
// plain value.
class World {
public:
    World() = default;  // an empty equality universe

    static World equality();
    static World dense_order();
    static World rado_bit();
    static World ordered_forb(Vocabulary voc, ForbiddenFamily forb);
    static World preset(const std::string& name);  // spec preset names
    static const std::vector<std::string>& preset_names();

    UniverseKind kind() const { return kind_; }
    bool ordered() const { return vocab_.has_order; }
    const Vocabulary& vocab() const { return vocab_; }
    const ForbiddenFamily& forbidden() const { return forbidden_; }

    bool registered(AtomId a) const { return atoms_.count(a) != 0; }
    std::vector<AtomId> atom_ids() const;
    size_t atom_count() const { return atoms_.size(); }
    const Rational& order_key(AtomId a) const;
    uint32_t unary_mask(AtomId a) const;

    void name_constant(AtomId a);
    const std::vector<AtomId>& named_constants() const { return constants_; }

    // Direct registration, used by presets and file loading. Facts are
    // validated (irreflexive, known atoms) and forbidden-substructure checked.
    AtomId add_atom(std::optional<Rational> key = std::nullopt, uint32_t unary = 0);
    AtomId add_rado_natural(long long n);
    void add_fact(int sym, AtomId a, AtomId b);

    RelationProfile relate(AtomId a, AtomId b) const;
    bool sigma0_related(AtomId a, AtomId b) const { return relate(a, b).sigma0_related(); }
    bool fact(int sym, AtomId a, AtomId b) const;

    AtomId realize(const FreshRequest& req);

    PartialAutomorphism apply_renaming(const std::map<AtomId, AtomId>& map,
                                       const std::vector<AtomId>& check_support) const;

    // Exhaustive search over the whole presentation; test hook.
    bool verify_no_forbidden() const;

    // Number of atoms realize has minted so far (fresh-atom accounting).
    long long fresh_count() const { return fresh_count_; }

    // first n registered atoms in key (or id) order; registers naturals 0..n-1
    // on RadoBIT worlds if absent.
    std::vector<AtomId> window(size_t n);

private:
    struct AtomRec {
        Rational key;
        bool has_key = false;
        uint32_t unary = 0;
    };

    Rational key_between(const Rational& lo, const Rational& hi) const;
    Rational key_above_all() const;
    Rational place_key(const std::vector<AtomId>& above, const std::vector<AtomId>& below) const;
    void check_known(AtomId a) const;
    // Searches embeddings of each forbidden structure that use `through`.
    bool creates_forbidden(AtomId through) const;
    bool key_taken(const Rational& k) const;

    UniverseKind kind_ = UniverseKind::Equality;
    Vocabulary vocab_;
    ForbiddenFamily forbidden_;
    std::map<AtomId, AtomRec> atoms_;
    std::vector<std::set<std::pair<AtomId, AtomId>>> facts_;  // per binary symbol
    std::vector<AtomId> constants_;
    AtomId next_id_ = 0;
    long long fresh_count_ = 0;
};

// Atoms sorted by order key when ordered, else by id.
std::vector<AtomId> sorted_atoms(const World& w, std::vector<AtomId> atoms);

}  // namespace orbitlin
