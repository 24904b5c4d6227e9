#pragma once

#include <climits>
#include <optional>
#include <string>
#include <vector>

#include "oresync/nfa.hpp"
#include "oresync/oneway.hpp"

namespace oresync {

// One step of a one-counter automaton: enabled when the counter lies in [lo, hi] and stays non-negative after
// `add`; a resetting step then sets the counter to zero.
struct OcaEdge {
  State src;
  Symbol sym;
  int lo = 0, hi = INT_MAX;
  int add = 0;
  bool reset = false;
  State dst;
  auto operator<=>(const OcaEdge&) const = default;
};

// Accepts in a final state with an empty counter.
struct Oca {
  Alphabet alphabet;
  int num_states = 0;
  std::set<State> initial;
  std::vector<char> final;
  std::vector<OcaEdge> edges;

  Oca() = default;
  Oca(Alphabet a, int states) : alphabet(std::move(a)), num_states(states), final(states, 0) {}
  State add_state();
  void add_edge(const OcaEdge& e);
  // Convenience for the plain operations: +1, -1, 0.
  void add_step(State src, Symbol sym, int add, State dst);
  void add_zero_test(State src, Symbol sym, State dst);
  void add_reset(State src, Symbol sym, State dst);
};

// Runs whose counter stays within [0, k] after every step.
Nfa bounded_restriction(const Oca& a, int k);

struct BoundCheck {
  bool universal = true;
  std::optional<Word> witness;  // a shortest word rejected within the bound
};
BoundCheck universal_with_bound(const Oca& a, int k);
// Least k <= k_max with universal_with_bound; nothing otherwise (the question is undecidable in general).
std::optional<int> boundedness_search(const Oca& a, int k_max);

// OCA over the transitions of t1 (unary outputs): tracks the output difference against a guessed run of t2;
// malformed encodings are accepted after a reset.
Oca transducers_to_oca(const NormalOneWay& t1, const NormalOneWay& t2);
// t1 writes c per letter; t2 follows the control of `a`, writing cc on increments, nothing on decrements.
// Requires plain +1/-1/0 steps and a counter that no control path can drive below zero.
std::pair<NormalOneWay, NormalOneWay> oca_to_transducers(const Oca& a);
// True when no path of the control graph from an initial state has a negative counter prefix.
bool sign_safe(const Oca& a);

struct MinskyInstr {
  enum class Kind { inc, dec, zero_test };
  State src;
  Kind kind;
  int counter;  // 0-based
  State dst;
};

struct MinskyMachine {
  int counters = 2;
  int num_states = 1;
  State initial = 0;
  std::vector<MinskyInstr> instrs;
  // One letter per instruction, named by its index.
  Alphabet instruction_alphabet() const;
};

// OCA over instruction sequences: guesses a counter and checks the sequence against it, accepting after the
// first error of that counter or at the end of a correct sequence.
Oca minsky_to_oca(const MinskyMachine& m);

}  // namespace oresync
