#pragma once

#include <optional>

#include "oresync/rational.hpp"

namespace oresync {

struct SynthesisResult {
  enum class Kind { functional_product, bounded_delay };
  RationalResync resynchronizer;
  Kind kind = Kind::functional_product;
  int delay = 0;          // meaningful for bounded_delay
  bool verified = false;  // set only by an exact check
};

// For functional t1, t2: a resynchronizer R with t1 equal to R(t2) in origin semantics, or nothing when t1 is
// not classically contained in t2.
std::optional<SynthesisResult> synthesize_functional(const NormalOneWay& t1, const NormalOneWay& t2,
                                                     std::size_t cap = kDefaultCapacity);

int default_delay_bound(const NormalOneWay& t1, const NormalOneWay& t2);
// Least d <= d_max such that t1 is origin-contained in the d-delay image of t2.
std::optional<SynthesisResult> synthesize_bounded_delay(const NormalOneWay& t1, const NormalOneWay& t2, int d_max,
                                                        std::size_t cap = kDefaultCapacity);
// Exact: t1 origin-contained in r(t2); with `equivalence` also the converse.
bool verify_synthesis(const NormalOneWay& t1, const NormalOneWay& t2, const RationalResync& r,
                      bool equivalence = false, std::size_t cap = kDefaultCapacity);

}  // namespace oresync
