#pragma once

#include <compare>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "oresync/errors.hpp"
#include "oresync/oneway.hpp"

namespace oresync {

// Endmarkers as read symbols. kEps is -1.
inline constexpr Symbol kLeftMarker = -2;
inline constexpr Symbol kRightMarker = -3;
inline constexpr int kDeskBound = 8;

struct TwoWayEdge {
  State src;
  Symbol sym;  // read symbol, kLeftMarker or kRightMarker
  State dst;
  Word out;
  auto operator<=>(const TwoWayEdge&) const = default;
};

// Two-way transducer. A right-reading state at head position i reads letter i, a left-reading one
// reads letter i-1; after a transition the head reads the letter right of the last one when the
// target is right-reading and the letter left of it otherwise. Runs start on letter 1 in an initial
// state and succeed on the right endmarker in a final state. With a non-empty guess alphabet,
// edges read pairs (letter, guess) encoded by read_letter().
struct TwoWayTransducer {
  Alphabet input, output, guess;
  int num_states = 0;
  std::vector<char> left_reading;
  std::set<State> initial, final;
  std::vector<TwoWayEdge> edges;

  TwoWayTransducer() = default;
  TwoWayTransducer(Alphabet in, Alphabet out, int states);
  State add_state(bool left);
  void add_edge(State src, Symbol sym, State dst, const Word& out = {});
  int read_size() const { return guess.size() == 0 ? input.size() : input.size() * guess.size(); }
  Symbol read_letter(Symbol a, Symbol g) const { return guess.size() == 0 ? a : a * guess.size() + g; }
  bool operator==(const TwoWayTransducer&) const = default;
};

// Checks state directions of initial, final and endmarker edges; endmarker edges must not output.
void validate(const TwoWayTransducer& t);

struct TwoWayRun {
  Word guess;               // empty without common guess
  State start = -1;
  std::vector<int> edges;   // edge indices in order
  std::vector<int> letters; // letter read by each step, 0 and |u|+1 for the endmarkers
  OriginGraph graph;
  auto operator<=>(const TwoWayRun&) const = default;
};

// Successful runs that never repeat a configuration.
std::vector<TwoWayRun> enumerate_runs_2w(const TwoWayTransducer& t, const Word& u,
                                         int max_len = kDeskBound);
// Origin graphs over all inputs of length <= n.
std::set<OriginGraph> graphs_2w(const TwoWayTransducer& t, int n);
std::set<Word> outputs_2w(const TwoWayTransducer& t, const Word& u);

// One entry per transition reading a given letter, in run order. edge == -1 marks the end of the run.
struct CrossingEntry {
  State src;
  int edge;
  auto operator<=>(const CrossingEntry&) const = default;
};
using CrossingSequence = std::vector<CrossingEntry>;

// Indexed by letter 0..|u|+1.
std::vector<CrossingSequence> crossing_sequences(const TwoWayTransducer& t, const TwoWayRun& run,
                                                 int input_length);
// Follows the sequences from the initial entry; throws FormatError when they do not chain.
std::vector<int> run_from_crossings(const TwoWayTransducer& t,
                                    const std::vector<CrossingSequence>& seqs);

std::optional<Word> ambiguous_input(const TwoWayTransducer& t, int n);
bool unambiguous_upto(const TwoWayTransducer& t, int n);

// Splits outputs longer than one letter with stationary detours through fresh states.
TwoWayTransducer normalize_outputs(const TwoWayTransducer& t);

// Inputs of length <= n with an output of t1 not produced by t2.
struct ClassicalWitness {
  Word input, output;
};
std::optional<ClassicalWitness> classical_containment_upto(const TwoWayTransducer& t1,
                                                           const TwoWayTransducer& t2, int n);

// Pairs (u, z) with z the origin of some output of t on u, z 1-based.
std::set<std::pair<Word, int>> target_set(const TwoWayTransducer& t, int n);

}  // namespace oresync
