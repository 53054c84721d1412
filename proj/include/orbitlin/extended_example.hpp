#pragma once

#include <map>
#include <string>

#include "orbitlin/vectors.hpp"

namespace orbitlin {

// The nine-atom ordered triangle-free configuration and the balanced
// ten-term vector on the adjacent-pair orbit, plus everything needed to
// reproduce the hand decomposition end to end.
struct ExtendedExample {
    World world;
    std::map<std::string, AtomId> atom;  // a..i
    OrbitDescriptor orbit;               // ordered adjacent pairs, empty support
    VectorFS v;
};

ExtendedExample make_extended_example(const Field& f);

// The hand-built seven-cog witness: realizes the auxiliary atoms g', b', z
// with exactly the postulated edges and returns the seven scaled cogs.
std::vector<CogTerm> extended_example_witness(ExtendedExample& ex);

}  // namespace orbitlin
