#pragma once

#include <optional>

#include "oresync/oneway.hpp"

namespace oresync {

struct FunctionalityResult {
  bool functional = true;
  // On failure: an input with two distinct outputs, both realized by the transducer.
  Word input, output1, output2;
};

FunctionalityResult is_functional(const NormalOneWay& t, std::size_t cap = kDefaultCapacity);
// Classical containment of functional transducers; throws PreconditionError on a non-functional argument.
bool containment_functional(const NormalOneWay& t1, const NormalOneWay& t2, std::size_t cap = kDefaultCapacity);
// Number of successful runs on u, saturated at `limit`.
long long count_runs(const NormalOneWay& t, const Word& u, long long limit);
// True when no input of length <= n has more than k successful runs.
bool ambiguity_at_most(const NormalOneWay& t, int k, int n);

}  // namespace oresync
