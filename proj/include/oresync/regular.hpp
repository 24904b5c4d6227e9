#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oresync/rational.hpp"

namespace oresync {

// A relation over marked annotated inputs. Letters are (annotated letter, first mark, second mark)
// encoded as annotated * 4 + first * 2 + second.
using Relation = std::shared_ptr<const StepAutomaton>;

inline Symbol marked_symbol(Symbol annotated, bool first, bool second) {
  return annotated * 4 + (first ? 2 : 0) + (second ? 1 : 0);
}
inline Symbol unmarked(Symbol marked) { return marked / 4; }
inline bool first_mark(Symbol marked) { return (marked & 2) != 0; }
inline bool second_mark(Symbol marked) { return (marked & 1) != 0; }

// Letters of a x p written as "letter:param", ordered letter-major.
Alphabet annotated_alphabet(const Alphabet& letters, const Alphabet& params);
Alphabet marked_alphabet(const Alphabet& annotated);

// Regular resynchronizer with input and output parameters. move marks (source y, target z);
// next marks the target origins (z, z') of consecutive outputs. A null relation is empty.
struct RegularResync {
  Alphabet input, output, input_params, output_params;
  Alphabet annotated_input, annotated_output;   // input x input_params, output x output_params
  std::shared_ptr<const Alphabet> marked_input;  // annotated_input x {0,1}^2
  Nfa ipar;                                      // over annotated_input
  Nfa opar;                                      // over annotated_output
  std::function<Relation(Symbol)> move;          // keyed by annotated output letter
  std::function<Relation(Symbol, Symbol)> next;
  // When set, pairs without outputs are exactly the identity pairs on these inputs.
  std::optional<Nfa> empty_domain;

  RegularResync() = default;
  // Universal ipar and opar, empty relations.
  RegularResync(Alphabet in, Alphabet out, Alphabet in_params, Alphabet out_params);
  Symbol in_letter(Symbol a, Symbol p) const { return a * input_params.size() + p; }
  Symbol out_letter(Symbol c, Symbol g) const { return c * output_params.size() + g; }
  Relation move_of(Symbol key) const { return move ? move(key) : nullptr; }
  Relation next_of(Symbol k1, Symbol k2) const { return next ? next(k1, k2) : nullptr; }
};

Relation nfa_relation(Nfa n);
// Stores explicit relations; keys without an entry are empty.
void set_relation_tables(RegularResync& rr, std::map<Symbol, Relation> moves,
                         std::map<std::pair<Symbol, Symbol>, Relation> nexts);

struct MarkReport {
  bool ok = true;
  std::string relation;  // "move <key>" or "next <key> <key>"
  Word witness;          // marked letters of an offending accepted word
};

MarkReport validate_marks(const RegularResync& rr, std::size_t cap = kDefaultCapacity);

struct BoundReport {
  bool bounded = true;
  std::optional<Symbol> key;
  // Annotated input, the shared target and k+1 distinct sources, all 0-based.
  Word input;
  int target = -1;
  std::vector<int> sources;
};

BoundReport is_k_bounded(const RegularResync& rr, int k, std::size_t cap = kDefaultCapacity);

bool pair_member(const RegularResync& rr, const OriginGraph& source, const OriginGraph& target,
                 std::size_t cap = kDefaultCapacity);
// Targets of every source graph, kept per source.
std::map<OriginGraph, std::set<OriginGraph>> resync_images(const RegularResync& rr,
                                                           const std::set<OriginGraph>& graphs,
                                                           std::size_t cap = kDefaultCapacity);
std::set<OriginGraph> apply_graphs(const RegularResync& rr, const std::set<OriginGraph>& graphs,
                                   std::size_t cap = kDefaultCapacity);

// Least bound on output blocks over sync sources in the domain, absent when unbounded.
std::optional<int> source_block_bound(const RationalResync& r);

RegularResync from_rational(const RationalResync& r);

struct RunMatches {
  std::set<std::pair<int, int>> omatch, imatch, match;  // 1-based run positions
};
// `run` lists the transitions of a successful run in order.
RunMatches run_match_relations(const RationalResync& r, const std::vector<SyncEdge>& run);
// Successful runs of r on the sync word w.
std::vector<std::vector<SyncEdge>> runs_on(const RationalResync& r, const Word& w);

// Every output moves from the first to the last input position.
RegularResync first_to_last(const Alphabet& in, const Alphabet& out);
// move is the diagonal and next is unconstrained.
RegularResync identity_regular(const Alphabet& in, const Alphabet& out);

}  // namespace oresync
