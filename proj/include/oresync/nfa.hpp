#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "oresync/alphabet.hpp"

namespace oresync {

inline constexpr std::size_t kDefaultCapacity = 1'000'000;

struct Transition {
  State src;
  Symbol sym;
  State dst;
  auto operator<=>(const Transition&) const = default;
};

// Epsilon-free nondeterministic automaton. States are 0..num_states()-1.
class Nfa {
 public:
  Nfa() = default;
  explicit Nfa(Alphabet alphabet, int states = 0);

  const Alphabet& alphabet() const { return alphabet_; }
  int num_states() const { return static_cast<int>(out_.size()); }

  State add_state();
  void set_initial(State s, bool v = true);
  void set_final(State s, bool v = true);
  void add_transition(State src, Symbol sym, State dst);

  bool is_initial(State s) const { return initial_[s]; }
  bool is_final(State s) const { return final_[s]; }
  std::vector<State> initial_states() const;
  std::vector<State> final_states() const;
  // Outgoing (symbol, target) pairs, sorted and deduplicated.
  const std::vector<std::pair<Symbol, State>>& out(State s) const { return out_[s]; }
  std::vector<Transition> transitions() const;
  std::size_t num_transitions() const;

  bool accepts(const Word& w) const;
  // Sorted set of states reachable from `from` by reading `sym`.
  std::vector<State> step(const std::vector<State>& from, Symbol sym) const;
  bool any_final(const std::vector<State>& set) const;

 private:
  Alphabet alphabet_;
  std::vector<char> initial_, final_;
  std::vector<std::vector<std::pair<Symbol, State>>> out_;
};

// Builder that allows epsilon moves; build() removes them.
class EpsNfaBuilder {
 public:
  explicit EpsNfaBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  State add_state();
  int num_states() const { return static_cast<int>(eps_.size()); }
  void set_initial(State s) { initial_.push_back(s); }
  void set_final(State s) { final_.push_back(s); }
  void add_transition(State src, Symbol sym, State dst) { edges_.push_back({src, sym, dst}); }
  void add_eps(State src, State dst) { eps_[src].push_back(dst); }
  Nfa build() const;

 private:
  Alphabet alphabet_;
  std::vector<std::vector<State>> eps_;
  std::vector<Transition> edges_;
  std::vector<State> initial_, final_;
};

struct ContainmentResult {
  bool holds = true;
  std::optional<Word> witness;
};

Nfa empty_language(const Alphabet& a);
Nfa universal_language(const Alphabet& a);
Nfa single_word(const Alphabet& a, const Word& w);

Nfa product(const Nfa& a, const Nfa& b);
Nfa union_of(const Nfa& a, const Nfa& b);
Nfa concat(const Nfa& a, const Nfa& b);
Nfa star(const Nfa& a);
// Complete deterministic automaton by subset construction.
Nfa determinize(const Nfa& a, std::size_t cap = kDefaultCapacity);
Nfa complement(const Nfa& a, std::size_t cap = kDefaultCapacity);
// Removes states that are not both reachable and co-reachable.
Nfa trim(const Nfa& a);
// Maps every symbol to a set of symbols of `target` (empty set drops the edge).
Nfa relabel(const Nfa& a, const Alphabet& target,
            const std::function<std::vector<Symbol>(Symbol)>& map);

bool is_empty(const Nfa& a);
// Shortest accepted word, lexicographically least among the shortest.
std::optional<Word> shortest_word(const Nfa& a);
ContainmentResult containment(const Nfa& a, const Nfa& b, std::size_t cap = kDefaultCapacity);
bool equivalent(const Nfa& a, const Nfa& b, std::size_t cap = kDefaultCapacity);
bool is_universal(const Nfa& a, std::size_t cap = kDefaultCapacity);
// All accepted words of length <= n ordered by (length, lexicographic).
std::vector<Word> enumerate(const Nfa& a, int n);
bool is_deterministic(const Nfa& a);

// Lazily explored automaton; states are small integer vectors.
class StepAutomaton {
 public:
  using Key = std::vector<int>;
  virtual ~StepAutomaton() = default;
  virtual const Alphabet& alphabet() const = 0;
  virtual std::vector<Key> initial() const = 0;
  virtual std::vector<Key> step(const Key& state, Symbol sym) const = 0;
  virtual bool accepting(const Key& state) const = 0;
};

Nfa materialize(const StepAutomaton& a, std::size_t cap = kDefaultCapacity);
bool step_accepts(const StepAutomaton& a, const Word& w);
// Shortest accepted word of a lazily explored automaton, if any.
std::optional<Word> step_shortest_word(const StepAutomaton& a, std::size_t cap = kDefaultCapacity);

// Wraps an Nfa as a StepAutomaton.
class NfaStep : public StepAutomaton {
 public:
  explicit NfaStep(Nfa n) : nfa_(std::move(n)) {}
  const Alphabet& alphabet() const override { return nfa_.alphabet(); }
  std::vector<Key> initial() const override;
  std::vector<Key> step(const Key& state, Symbol sym) const override;
  bool accepting(const Key& state) const override { return nfa_.is_final(state[0]); }

 private:
  Nfa nfa_;
};

}  // namespace oresync
