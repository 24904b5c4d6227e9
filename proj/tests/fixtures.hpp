#pragma once

#include <random>

#include "oresync/oneway.hpp"
#include "oresync/oca.hpp"
#include "oresync/rational.hpp"

namespace fixture {

using namespace oresync;

// Over (aa)*: one b per a, versus bb on every odd a and nothing on the even ones.
NormalOneWay even_copier();
NormalOneWay pair_bb();
// Moves the first letter to the end: cu -> uc.
NormalOneWay rotation();
// Relates u to every v having u as a subsequence (empty input maps to the empty word only).
NormalOneWay subsequence();
// Output alphabet {b}: one b per a.
NormalOneWay unary_copier();
// One b per a on (aa)*, versus a machine emitting bb per a in a first phase and nothing afterwards.
NormalOneWay per_letter_b();
NormalOneWay two_phase_bb();

// Rewrites (abab)* into (abba)*: the second b is moved before the second a.
RationalResync pair_shift();
// Random letter-to-letter resynchronizer whose transitions respect a random lag table in {-1,0,1}.
RationalResync random_resync(std::mt19937& rng, const Alphabet& in, const Alphabet& out, int states,
                             double density = 0.15);

// Universal OCA with bound exactly k: a capped counter moved by the letters (ops[x] in {-1,0,+1}) that must
// end at zero, or a counter-free branch for the words where the capped counter does not end at zero.
Oca designed_oca(const Alphabet& letters, const std::vector<int>& ops, int k);

// Random real-time transducer; outputs per letter have length <= max_out.
NormalOneWay random_transducer(std::mt19937& rng, const Alphabet& in, const Alphabet& out, int states, int max_out,
                               double density = 0.45);

}  // namespace fixture
