#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "oresync/nfa.hpp"

namespace oresync {

inline constexpr Symbol kEps = -1;

// One-way transducer whose transitions and final states carry regular output languages.
struct OneWayTransducer {
  struct Edge {
    State src;
    Symbol sym;
    State dst;
    Nfa out;
  };
  Alphabet input, output;
  int num_states = 0;
  std::vector<State> initial;
  std::vector<Edge> edges;
  std::map<State, Nfa> finals;

  OneWayTransducer(Alphabet in, Alphabet out, int states);
  void add_edge(State src, Symbol sym, State dst, const Word& out);
  void add_edge(State src, Symbol sym, State dst, Nfa out);
  void add_final(State q, const Word& out = {});
  void add_final(State q, Nfa out);
};

struct NormalEdge {
  State src;
  Symbol in;  // kEps for the output layer
  Word out;
  State dst;
  auto operator<=>(const NormalEdge&) const = default;
};

// Transitions carry explicit output words; input kEps edges keep the current origin.
class NormalOneWay {
 public:
  NormalOneWay() = default;
  NormalOneWay(Alphabet in, Alphabet out, int states);

  const Alphabet& input() const { return input_; }
  const Alphabet& output() const { return output_; }
  int num_states() const { return static_cast<int>(final_.size()); }
  State add_state();
  void set_initial(State s) { initial_.insert(s); }
  void set_final(State s, bool v = true) { final_.at(s) = v; }
  void add_edge(State src, Symbol in, const Word& out, State dst);

  const std::set<State>& initial() const { return initial_; }
  bool is_final(State s) const { return final_[s]; }
  const std::set<NormalEdge>& edges() const { return edges_; }
  // True when no epsilon cycle on a successful run produces output, so outputs per letter are bounded.
  bool real_time() const;

  bool operator==(const NormalOneWay&) const = default;

 private:
  Alphabet input_, output_;
  std::set<State> initial_;
  std::vector<char> final_;
  std::set<NormalEdge> edges_;
};

NormalOneWay normalize(const OneWayTransducer& t);
NormalOneWay trim(const NormalOneWay& t);
// Merges epsilon cycles whose edges all output nothing.
NormalOneWay collapse_silent_cycles(const NormalOneWay& t);
// An epsilon cycle with non-empty output on a successful run, as (state on the cycle) if any.
std::optional<State> productive_cycle(const NormalOneWay& t);

// Real-time view: every transition consumes exactly one letter; epsilon paths are folded in.
struct LetterEdge {
  State src;
  Symbol in;
  Word out;
  State dst;
  auto operator<=>(const LetterEdge&) const = default;
};

struct LetterForm {
  Alphabet input, output;
  int num_states = 0;
  std::vector<State> initial;
  std::vector<LetterEdge> edges;
  std::vector<std::vector<Word>> finals;  // empty list: not final
  int max_out() const;
  std::vector<std::vector<int>> edges_from() const;  // edge indices per source state
};

LetterForm letter_form(const NormalOneWay& t);
NormalOneWay from_letter_form(const LetterForm& f);

struct OriginGraph {
  Word input;
  std::vector<std::pair<Symbol, int>> output;  // (letter, 1-based origin)
  auto operator<=>(const OriginGraph&) const = default;
  Word output_word() const;
  std::vector<int> origins() const;
};

// Sync words are over the disjoint union alphabet: input letters first, output letters shifted.
Word encode(const OriginGraph& g, int input_size);
OriginGraph decode(const Word& w, int input_size);
std::string render(const OriginGraph& g, const Alphabet& in, const Alphabet& out);

Alphabet sync_alphabet(const NormalOneWay& t);
Nfa sync_shape(const Alphabet& sync, int input_size);
Nfa sync_language(const NormalOneWay& t);
NormalOneWay from_sync_nfa(const Nfa& sync, const Alphabet& in, const Alphabet& out);
// Input words that have at least one successful run.
Nfa domain(const NormalOneWay& t);
NormalOneWay restrict_domain(const NormalOneWay& t, const Nfa& inputs);
NormalOneWay disjoint_sum(const NormalOneWay& a, const NormalOneWay& b);

struct GraphSet {
  std::set<OriginGraph> graphs;
  bool truncated = false;
};

// All origin graphs with |u| <= n. Non-real-time transducers need an output cap.
GraphSet enumerate_graphs(const NormalOneWay& t, int n, std::optional<int> output_cap = std::nullopt);

struct OriginContainment {
  bool holds = true;
  std::optional<OriginGraph> witness;
};

OriginContainment origin_containment(const NormalOneWay& t1, const NormalOneWay& t2,
                                     std::size_t cap = kDefaultCapacity);
bool origin_equivalent(const NormalOneWay& t1, const NormalOneWay& t2, std::size_t cap = kDefaultCapacity);
bool classical_member(const NormalOneWay& t, const Word& u, const Word& v);
// Every output word of t on u (real-time transducers only).
std::set<Word> outputs_of(const NormalOneWay& t, const Word& u);

}  // namespace oresync
