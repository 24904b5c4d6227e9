#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "oresync/regular.hpp"
#include "oresync/twoway.hpp"

namespace oresync {

using Weight = std::vector<long>;

// Finite automaton with integer vector weights on transitions; the accepted set is {0^dim}.
class ParikhAutomaton {
 public:
  struct Edge {
    State src;
    Symbol sym;
    State dst;
    Weight weight;
    auto operator<=>(const Edge&) const = default;
  };

  ParikhAutomaton() = default;
  ParikhAutomaton(Alphabet alphabet, int dim, int states = 0);

  const Alphabet& alphabet() const { return alphabet_; }
  int dim() const { return dim_; }
  int num_states() const { return static_cast<int>(final_.size()); }
  State add_state();
  void set_initial(State s) { initial_[s] = 1; }
  void set_final(State s) { final_[s] = 1; }
  // Repeating (src, sym, dst) with a different weight is rejected.
  void add_transition(State src, Symbol sym, State dst, Weight w);

  bool is_initial(State s) const { return initial_[s]; }
  bool is_final(State s) const { return final_[s]; }
  std::vector<State> initial_states() const;
  const std::vector<Edge>& edges() const { return edges_; }
  // Edge indices leaving s.
  const std::vector<int>& out(State s) const { return out_[s]; }
  Nfa underlying() const;
  bool operator==(const ParikhAutomaton&) const = default;

 private:
  Alphabet alphabet_;
  int dim_ = 0;
  std::vector<char> initial_, final_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
};

// Raised when a word has two accepting runs.
class AmbiguityError : public PreconditionError {
 public:
  AmbiguityError(const std::string& what, Word input) : PreconditionError(what), input(std::move(input)) {}
  Word input;
};

// Raised when the target transducer produces an output the source does not.
class ContainmentViolation : public PreconditionError {
 public:
  ContainmentViolation(const std::string& what, Word input, Word output)
      : PreconditionError(what), input(std::move(input)), output(std::move(output)) {}
  Word input, output;
};

std::optional<Weight> parikh_eval(const ParikhAutomaton& a, const Word& u);
// Some accepting run sums to zero.
bool parikh_member(const ParikhAutomaton& a, const Word& u);
// Product with weight w1 - w2; dimensions must agree.
ParikhAutomaton parikh_diff(const ParikhAutomaton& a1, const ParikhAutomaton& a2,
                            std::size_t cap = kDefaultCapacity);
// Reads target symbols; each target symbol stands for the listed symbols of a.
ParikhAutomaton parikh_relabel(const ParikhAutomaton& a, const Alphabet& target,
                               const std::function<std::vector<Symbol>(Symbol)>& preimage);
ParikhAutomaton parikh_trim(const ParikhAutomaton& a);
// Zero-weight copy of an Nfa.
ParikhAutomaton parikh_from_nfa(const Nfa& n, int dim);
// The relation {w : some accepting run on w sums to zero}.
Relation parikh_relation(ParikhAutomaton a);

struct RegularityResult {
  bool witness_found = false;  // false means unknown, never a negative answer
  std::optional<Nfa> witness;
};
// Unfolds (state, partial sum) while sums stay within loop_bound * |Q| * max weight. A closed
// unfolding is an equivalent Nfa, checked again by enumeration up to length 8.
RegularityResult regularity_semicheck(const ParikhAutomaton& a, int loop_bound);

// Input letters with one mark bit, written "a" and "a'": symbol = letter * 2 + mark.
Alphabet marked_letters(const Alphabet& in);
// On <u, y>: the 1-based position of the output produced by the i-th productive transition reading y.
ParikhAutomaton decoder(const TwoWayTransducer& t, int i, std::size_t cap = kDefaultCapacity);
// Over input letters with two marks (symbol = letter * 4 + first * 2 + second): the j-th productive
// transition at the first mark is followed by the j2-th one at the second with no output between.
Nfa output_chain(const TwoWayTransducer& t, int j, int j2, std::size_t cap = kDefaultCapacity);

struct ParikhResync {
  RegularResync rr;
  int source_states = 0, target_states = 0;  // index ranges of the output annotations
  std::map<Symbol, ParikhAutomaton> moves;   // keyed by annotated output letter
};

// target is the transducer whose origins are produced, source the one whose graphs are rewritten.
// Both are checked for unambiguity and classical containment on inputs up to check_bound.
ParikhResync build_parikh_resync(const TwoWayTransducer& target, const TwoWayTransducer& source,
                                 int check_bound = 6);

// Relations rejecting words longer than n, so lazy searches over weighted relations terminate.
RegularResync length_capped(const RegularResync& rr, int n);
// Pairs (u, z) such that some annotation of u relates a source position to z, up to length n.
std::set<std::pair<Word, int>> resync_target_set(const RegularResync& rr, int n);

// Output annotations gain an index 1..k separating sources that share a target.
RegularResync one_boundedize(const RegularResync& rr, int k);
// Restricts a 1-bounded rr to targets produced by t and to one target per source and output letter.
RegularResync restrict_to_target_set(const RegularResync& rr, const TwoWayTransducer& t);
// Every move relation is injective and functional on each annotated input.
bool is_partial_bijection(const RegularResync& rr, std::size_t cap = kDefaultCapacity);

}  // namespace oresync
