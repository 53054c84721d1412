#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "orbitlin/eqspace.hpp"

namespace orbitlin {

// Weighted orbit-finite automaton with an orbit-finite state basis. The
// transition function is given per joint orbit of (state tuple, letter) over
// the automaton support and extended equivariantly; templates only mention
// atoms of the representative and the support.
struct WeightedAutomaton {
    Field field;
    std::vector<AtomId> support;  // S0, sorted
    std::vector<std::pair<std::string, OrbitDescriptor>> states;
    std::vector<std::pair<std::string, OrbitDescriptor>> letters;
    SumVector initial;
    std::map<std::string, Scalar> output;

    struct Transition {
        std::string state_tag;
        std::string letter_tag;
        Tuple rep_state;
        Tuple rep_letter;
        std::string joint_key;  // qf_type(rep_state ++ rep_letter, support)
        std::vector<std::tuple<Coeff, std::string, Tuple>> templ;
    };
    std::vector<Transition> delta;

    AmbientSpace state_ambient() const;
    const OrbitDescriptor& state_orbit(const std::string& tag) const;
    std::string letter_tag_of(const World& w, const Tuple& letter) const;
};

using Word = std::vector<Tuple>;

// One transition application, equivariantly extended from the matching
// representative.
SumVector step(const World& w, const WeightedAutomaton& A, const SumVector& config,
               const Tuple& letter);

Scalar output_of(const WeightedAutomaton& A, const SumVector& config);

Scalar run(const World& w, const WeightedAutomaton& A, const Word& word);

// The left derivative u -> f(wu): the automaton re-rooted at the
// configuration reached by w.
SumVector left_derivative(const World& w, const WeightedAutomaton& A, const Word& word);

// Checks that every joint orbit of (state, letter) has a transition template,
// materializing representatives as needed.
void validate_total(World& w, const WeightedAutomaton& A);

// All single-letter extension types over the atom set T (which must contain
// the support): letters equal to an atom of T, and freshly realized letters
// in every consistent relation/order pattern toward T. Mutates the world.
std::vector<Tuple> letter_extensions(World& w, const WeightedAutomaton& A,
                                     std::vector<AtomId> T);

struct EquivalenceResult {
    bool equivalent = false;
    Word witness;          // distinguishing word, when inequivalent
    size_t generators = 0; // saturation steps used
};

// Equivalence via subspace saturation over the disjoint-sum automaton with
// output F1 - F2. Exact over ordered free-amalgamation worlds; refuses
// elsewhere (use enumeration_equivalent as the bounded fallback).
EquivalenceResult equivalent(World& w, const WeightedAutomaton& A, const WeightedAutomaton& B);

// Bounded word-enumeration comparison over letters drawn from a window.
EquivalenceResult enumeration_equivalent(const World& w, const WeightedAutomaton& A,
                                         const WeightedAutomaton& B,
                                         const std::vector<Tuple>& window_letters,
                                         size_t max_len);

// Number of distinct left-derivative configurations reachable by words up to
// max_len over the window letters, counted up to atom renaming.
size_t derivative_orbit_census(World& w, const WeightedAutomaton& A,
                               const std::vector<Tuple>& window_letters, size_t max_len);

// The Section-6 automaton over RadoBIT: value 1 iff the first letter is
// adjacent to every later one.
WeightedAutomaton first_letter_adjacent_automaton(World& w, const Field& f);

// Direct evaluation of the same function from the BIT presentation.
Scalar first_letter_adjacent_eval(const World& w, const Field& f, const Word& word);

// Ranks of the right-derivative family {f_S : 1 <= |S| <= s} restricted to a
// RadoBIT window, for s = 1..max_size. Witness atoms adjacent to exactly S
// are built in closed form; auto_widen registers them outside the window.
std::vector<size_t> right_derivative_rank(World& w, const Field& f, size_t max_size,
                                          size_t window, bool auto_widen = true);

}  // namespace orbitlin
