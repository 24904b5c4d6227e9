#pragma once

#include <optional>
#include <set>
#include <vector>

#include "oresync/errors.hpp"
#include "oresync/oneway.hpp"

namespace oresync {

// Letter-to-letter transition over the sync alphabet (input letters first, then output letters).
struct SyncEdge {
  State src;
  Symbol in;
  Symbol out;
  State dst;
  auto operator<=>(const SyncEdge&) const = default;
};

struct RationalResync {
  Alphabet input, output;  // the underlying Sigma and Gamma
  int num_states = 0;
  std::set<State> initial;
  std::vector<char> final;
  std::set<SyncEdge> edges;
  std::vector<int> lag;  // filled by validate()

  RationalResync() = default;
  RationalResync(Alphabet in, Alphabet out, int states);
  Alphabet sync() const { return disjoint_union(input, output); }
  int sigma() const { return input.size(); }
  bool is_input_letter(Symbol s) const { return s < input.size(); }
  State add_state();
  void add_edge(State src, Symbol in, Symbol out, State dst);
  bool operator==(const RationalResync&) const = default;
};

// Transition reading and writing words over the sync alphabet.
struct WordSyncEdge {
  State src;
  Word in, out;
  State dst;
};

struct WordResync {
  Alphabet input, output;
  int num_states = 0;
  std::set<State> initial;
  std::set<State> final;
  std::vector<WordSyncEdge> edges;
};

// A pair of sync words related by the resynchronizer that breaks projection preservation.
class ResyncViolation : public PreconditionError {
 public:
  ResyncViolation(const std::string& what, Word source, Word target)
      : PreconditionError(what), source(std::move(source)), target(std::move(target)) {}
  Word source, target;
};

RationalResync trim(const RationalResync& r);
std::vector<int> lag_of_states(const RationalResync& r);
// Trims, computes lags and checks projection preservation on every run over sync words.
RationalResync validate(const RationalResync& r);
RationalResync to_letter_to_letter(const WordResync& r);
RationalResync identity_resync(const Alphabet& in, const Alphabet& out);
RationalResync compose(const RationalResync& r1, const RationalResync& r2);
bool member_pair(const RationalResync& r, const Word& w, const Word& w2);
// Sync words related to w.
std::set<Word> image_of(const RationalResync& r, const Word& w);
// Image of the sync language under r.
Nfa apply_sync(const RationalResync& r, const Nfa& sync);
NormalOneWay apply(const RationalResync& r, const NormalOneWay& t);

inline constexpr int kDefaultDelayCap = 8;
// All pairs with equal projections where, before every input letter, the output counts differ by at most d.
RationalResync d_delay(int d, const Alphabet& in, const Alphabet& out, int max_d = kDefaultDelayCap);
// Image of a sync language under the d-delay resynchronizer, built on the fly.
Nfa apply_delay_sync(int d, const Alphabet& in, const Alphabet& out, const Nfa& sync,
                     std::size_t cap = kDefaultCapacity);
// max_y |#outputs with origin <= y in g1 - same in g2|, for graphs with equal projections.
int delay(const OriginGraph& g1, const OriginGraph& g2);

}  // namespace oresync
