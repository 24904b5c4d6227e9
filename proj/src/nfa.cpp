#include "oresync/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "oresync/errors.hpp"
#include "oresync/hash.hpp"

namespace oresync {

using StateSet = std::vector<State>;

Nfa::Nfa(Alphabet alphabet, int states) : alphabet_(std::move(alphabet)) {
  for (int i = 0; i < states; ++i) add_state();
}

State Nfa::add_state() {
  out_.emplace_back();
  initial_.push_back(0);
  final_.push_back(0);
  return num_states() - 1;
}

void Nfa::set_initial(State s, bool v) { initial_.at(s) = v; }
void Nfa::set_final(State s, bool v) { final_.at(s) = v; }

void Nfa::add_transition(State src, Symbol sym, State dst) {
  if (sym < 0 || sym >= alphabet_.size())
    throw AlphabetError("symbol index " + std::to_string(sym) + " outside " + alphabet_.describe());
  if (dst < 0 || dst >= num_states()) throw Error("transition target out of range");
  auto& v = out_.at(src);
  std::pair<Symbol, State> e{sym, dst};
  auto it = std::lower_bound(v.begin(), v.end(), e);
  if (it == v.end() || *it != e) v.insert(it, e);
}

std::vector<State> Nfa::initial_states() const {
  std::vector<State> r;
  for (State s = 0; s < num_states(); ++s)
    if (initial_[s]) r.push_back(s);
  return r;
}

std::vector<State> Nfa::final_states() const {
  std::vector<State> r;
  for (State s = 0; s < num_states(); ++s)
    if (final_[s]) r.push_back(s);
  return r;
}

std::vector<Transition> Nfa::transitions() const {
  std::vector<Transition> r;
  for (State s = 0; s < num_states(); ++s)
    for (auto [a, t] : out_[s]) r.push_back({s, a, t});
  return r;
}

std::size_t Nfa::num_transitions() const {
  std::size_t n = 0;
  for (const auto& v : out_) n += v.size();
  return n;
}

std::vector<State> Nfa::step(const std::vector<State>& from, Symbol sym) const {
  std::vector<State> r;
  for (State s : from) {
    const auto& v = out_[s];
    auto it = std::lower_bound(v.begin(), v.end(), std::pair<Symbol, State>{sym, -1});
    for (; it != v.end() && it->first == sym; ++it) r.push_back(it->second);
  }
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

bool Nfa::any_final(const std::vector<State>& set) const {
  return std::any_of(set.begin(), set.end(), [&](State s) { return final_[s] != 0; });
}

bool Nfa::accepts(const Word& w) const {
  StateSet cur = initial_states();
  for (Symbol a : w) {
    if (cur.empty()) return false;
    cur = step(cur, a);
  }
  return any_final(cur);
}

State EpsNfaBuilder::add_state() {
  eps_.emplace_back();
  return num_states() - 1;
}

Nfa EpsNfaBuilder::build() const {
  int n = num_states();
  std::vector<std::vector<State>> closure(n);
  for (State s = 0; s < n; ++s) {
    std::vector<char> seen(n, 0);
    std::vector<State> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      State x = stack.back();
      stack.pop_back();
      closure[s].push_back(x);
      for (State y : eps_[x])
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
  }
  std::vector<std::vector<std::pair<Symbol, State>>> direct(n);
  for (const auto& e : edges_) direct[e.src].push_back({e.sym, e.dst});
  std::vector<char> fin(n, 0);
  for (State f : final_) fin[f] = 1;
  Nfa out(alphabet_, n);
  for (State s : initial_) out.set_initial(s);
  for (State s = 0; s < n; ++s)
    for (State x : closure[s]) {
      if (fin[x]) out.set_final(s);
      for (auto [a, t] : direct[x]) out.add_transition(s, a, t);
    }
  return trim(out);
}

Nfa empty_language(const Alphabet& a) { return Nfa(a, 0); }

Nfa universal_language(const Alphabet& a) {
  Nfa n(a, 1);
  n.set_initial(0);
  n.set_final(0);
  for (Symbol s = 0; s < a.size(); ++s) n.add_transition(0, s, 0);
  return n;
}

Nfa single_word(const Alphabet& a, const Word& w) {
  Nfa n(a, static_cast<int>(w.size()) + 1);
  n.set_initial(0);
  n.set_final(static_cast<State>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) n.add_transition(static_cast<State>(i), w[i], static_cast<State>(i + 1));
  return n;
}

Nfa product(const Nfa& a, const Nfa& b) {
  require_same(a.alphabet(), b.alphabet(), "product");
  Nfa out(a.alphabet());
  std::map<std::pair<State, State>, State> index;
  std::deque<std::pair<State, State>> queue;
  auto get = [&](State p, State q) {
    auto [it, fresh] = index.try_emplace({p, q}, 0);
    if (fresh) {
      it->second = out.add_state();
      if (a.is_final(p) && b.is_final(q)) out.set_final(it->second);
      queue.push_back({p, q});
    }
    return it->second;
  };
  for (State p : a.initial_states())
    for (State q : b.initial_states()) out.set_initial(get(p, q));
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    State src = index.at({p, q});
    const auto& ob = b.out(q);
    for (auto [s, p2] : a.out(p)) {
      auto it = std::lower_bound(ob.begin(), ob.end(), std::pair<Symbol, State>{s, -1});
      for (; it != ob.end() && it->first == s; ++it) out.add_transition(src, s, get(p2, it->second));
    }
  }
  return out;
}

// Copies b's states into `out` after a's, returning the offset of b.
static int append_states(Nfa& out, const Nfa& b) {
  int off = out.num_states();
  for (int i = 0; i < b.num_states(); ++i) out.add_state();
  for (const auto& t : b.transitions()) out.add_transition(t.src + off, t.sym, t.dst + off);
  return off;
}

Nfa union_of(const Nfa& a, const Nfa& b) {
  require_same(a.alphabet(), b.alphabet(), "union");
  Nfa out(a.alphabet());
  append_states(out, a);
  for (State s : a.initial_states()) out.set_initial(s);
  for (State s : a.final_states()) out.set_final(s);
  int off = append_states(out, b);
  for (State s : b.initial_states()) out.set_initial(s + off);
  for (State s : b.final_states()) out.set_final(s + off);
  return out;
}

Nfa concat(const Nfa& a, const Nfa& b) {
  require_same(a.alphabet(), b.alphabet(), "concat");
  EpsNfaBuilder bld(a.alphabet());
  for (int i = 0; i < a.num_states() + b.num_states(); ++i) bld.add_state();
  int off = a.num_states();
  for (const auto& t : a.transitions()) bld.add_transition(t.src, t.sym, t.dst);
  for (const auto& t : b.transitions()) bld.add_transition(t.src + off, t.sym, t.dst + off);
  for (State s : a.initial_states()) bld.set_initial(s);
  for (State s : b.final_states()) bld.set_final(s + off);
  for (State f : a.final_states())
    for (State i : b.initial_states()) bld.add_eps(f, i + off);
  return bld.build();
}

Nfa star(const Nfa& a) {
  EpsNfaBuilder bld(a.alphabet());
  State hub = bld.add_state();
  for (int i = 0; i < a.num_states(); ++i) bld.add_state();
  for (const auto& t : a.transitions()) bld.add_transition(t.src + 1, t.sym, t.dst + 1);
  bld.set_initial(hub);
  bld.set_final(hub);
  for (State s : a.initial_states()) bld.add_eps(hub, s + 1);
  for (State f : a.final_states()) bld.add_eps(f + 1, hub);
  return bld.build();
}

Nfa determinize(const Nfa& a, std::size_t cap) {
  Nfa out(a.alphabet());
  std::unordered_map<StateSet, State, VecHash> index;
  std::vector<StateSet> sets;
  auto get = [&](StateSet s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (sets.size() >= cap) throw CapacityError("subset construction exceeded " + std::to_string(cap) + " subsets");
    State id = out.add_state();
    if (a.any_final(s)) out.set_final(id);
    index.emplace(s, id);
    sets.push_back(std::move(s));
    return id;
  };
  out.set_initial(get(a.initial_states()));
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (Symbol s = 0; s < a.alphabet().size(); ++s) {
      State t = get(a.step(sets[i], s));
      out.add_transition(static_cast<State>(i), s, t);
    }
  return out;
}

Nfa complement(const Nfa& a, std::size_t cap) {
  Nfa d = determinize(a, cap);
  for (State s = 0; s < d.num_states(); ++s) d.set_final(s, !d.is_final(s));
  return d;
}

static std::vector<char> coreachable(const Nfa& a) {
  int n = a.num_states();
  std::vector<std::vector<State>> rev(n);
  for (const auto& t : a.transitions()) rev[t.dst].push_back(t.src);
  std::vector<char> co(n, 0);
  std::vector<State> stack = a.final_states();
  for (State s : stack) co[s] = 1;
  while (!stack.empty()) {
    State x = stack.back();
    stack.pop_back();
    for (State y : rev[x])
      if (!co[y]) {
        co[y] = 1;
        stack.push_back(y);
      }
  }
  return co;
}

Nfa trim(const Nfa& a) {
  int n = a.num_states();
  std::vector<char> reach(n, 0);
  std::vector<State> stack = a.initial_states();
  for (State s : stack) reach[s] = 1;
  while (!stack.empty()) {
    State x = stack.back();
    stack.pop_back();
    for (auto [sym, y] : a.out(x))
      if (!reach[y]) {
        reach[y] = 1;
        stack.push_back(y);
      }
  }
  auto co = coreachable(a);
  std::vector<State> rename(n, -1);
  Nfa out(a.alphabet());
  for (State s = 0; s < n; ++s)
    if (reach[s] && co[s]) {
      rename[s] = out.add_state();
      if (a.is_initial(s)) out.set_initial(rename[s]);
      if (a.is_final(s)) out.set_final(rename[s]);
    }
  for (const auto& t : a.transitions())
    if (rename[t.src] >= 0 && rename[t.dst] >= 0) out.add_transition(rename[t.src], t.sym, rename[t.dst]);
  return out;
}

Nfa relabel(const Nfa& a, const Alphabet& target, const std::function<std::vector<Symbol>(Symbol)>& map) {
  Nfa out(target, a.num_states());
  for (State s = 0; s < a.num_states(); ++s) {
    if (a.is_initial(s)) out.set_initial(s);
    if (a.is_final(s)) out.set_final(s);
  }
  std::vector<std::vector<Symbol>> images(a.alphabet().size());
  for (Symbol s = 0; s < a.alphabet().size(); ++s) images[s] = map(s);
  for (const auto& t : a.transitions())
    for (Symbol b : images[t.sym]) out.add_transition(t.src, b, t.dst);
  return out;
}

bool is_empty(const Nfa& a) { return !shortest_word(a).has_value(); }

std::optional<Word> shortest_word(const Nfa& a) {
  NfaStep s(a);
  return step_shortest_word(s);
}

ContainmentResult containment(const Nfa& a, const Nfa& b, std::size_t cap) {
  require_same(a.alphabet(), b.alphabet(), "containment");
  using Node = std::pair<StateSet, StateSet>;
  std::unordered_map<Node, int, PairVecHash> index;
  std::vector<Node> nodes;
  std::vector<std::pair<int, Symbol>> parent;
  auto add = [&](Node n, int par, Symbol sym) {
    if (index.count(n)) return;
    if (nodes.size() >= cap) throw CapacityError("containment exceeded " + std::to_string(cap) + " subset pairs");
    index.emplace(n, static_cast<int>(nodes.size()));
    nodes.push_back(std::move(n));
    parent.push_back({par, sym});
  };
  add({a.initial_states(), b.initial_states()}, -1, -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& [sa, sb] = nodes[i];
    if (a.any_final(sa) && !b.any_final(sb)) {
      Word w;
      for (int k = static_cast<int>(i); parent[k].first >= 0; k = parent[k].first) w.push_back(parent[k].second);
      std::reverse(w.begin(), w.end());
      return {false, w};
    }
    for (Symbol s = 0; s < a.alphabet().size(); ++s) {
      StateSet na = a.step(nodes[i].first, s);
      if (na.empty()) continue;
      add({std::move(na), b.step(nodes[i].second, s)}, static_cast<int>(i), s);
    }
  }
  return {true, std::nullopt};
}

bool equivalent(const Nfa& a, const Nfa& b, std::size_t cap) {
  return containment(a, b, cap).holds && containment(b, a, cap).holds;
}

bool is_universal(const Nfa& a, std::size_t cap) {
  return containment(universal_language(a.alphabet()), a, cap).holds;
}

std::vector<Word> enumerate(const Nfa& a, int n) {
  auto co = coreachable(a);
  auto alive = [&](const StateSet& s) {
    return std::any_of(s.begin(), s.end(), [&](State x) { return co[x] != 0; });
  };
  std::vector<Word> result;
  std::vector<std::pair<Word, StateSet>> layer;
  StateSet init = a.initial_states();
  if (alive(init)) layer.push_back({{}, init});
  for (int len = 0; len <= n && !layer.empty(); ++len) {
    std::vector<std::pair<Word, StateSet>> next;
    for (auto& [w, s] : layer) {
      if (a.any_final(s)) result.push_back(w);
      if (len == n) continue;
      for (Symbol x = 0; x < a.alphabet().size(); ++x) {
        StateSet t = a.step(s, x);
        if (!alive(t)) continue;
        Word w2 = w;
        w2.push_back(x);
        next.push_back({std::move(w2), std::move(t)});
      }
    }
    layer = std::move(next);
  }
  return result;
}

bool is_deterministic(const Nfa& a) {
  if (a.initial_states().size() > 1) return false;
  for (State s = 0; s < a.num_states(); ++s) {
    const auto& v = a.out(s);
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i].first == v[i - 1].first) return false;
  }
  return true;
}

std::vector<StepAutomaton::Key> NfaStep::initial() const {
  std::vector<Key> r;
  for (State s : nfa_.initial_states()) r.push_back({s});
  return r;
}

std::vector<StepAutomaton::Key> NfaStep::step(const Key& state, Symbol sym) const {
  std::vector<Key> r;
  const auto& v = nfa_.out(state[0]);
  auto it = std::lower_bound(v.begin(), v.end(), std::pair<Symbol, State>{sym, -1});
  for (; it != v.end() && it->first == sym; ++it) r.push_back({it->second});
  return r;
}

Nfa materialize(const StepAutomaton& a, std::size_t cap) {
  Nfa out(a.alphabet());
  std::unordered_map<StepAutomaton::Key, State, VecHash> index;
  std::vector<StepAutomaton::Key> keys;
  auto get = [&](const StepAutomaton::Key& k) {
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    if (keys.size() >= cap) throw CapacityError("materialization exceeded " + std::to_string(cap) + " states");
    State id = out.add_state();
    if (a.accepting(k)) out.set_final(id);
    index.emplace(k, id);
    keys.push_back(k);
    return id;
  };
  for (const auto& k : a.initial()) out.set_initial(get(k));
  for (std::size_t i = 0; i < keys.size(); ++i)
    for (Symbol s = 0; s < a.alphabet().size(); ++s)
      for (const auto& k : a.step(keys[i], s)) out.add_transition(static_cast<State>(i), s, get(k));
  return trim(out);
}

bool step_accepts(const StepAutomaton& a, const Word& w) {
  std::vector<StepAutomaton::Key> cur = a.initial();
  for (Symbol s : w) {
    std::vector<StepAutomaton::Key> next;
    for (const auto& k : cur)
      for (auto& k2 : a.step(k, s)) next.push_back(std::move(k2));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(), [&](const auto& k) { return a.accepting(k); });
}

std::optional<Word> step_shortest_word(const StepAutomaton& a, std::size_t cap) {
  std::unordered_map<StepAutomaton::Key, int, VecHash> index;
  std::vector<StepAutomaton::Key> keys;
  std::vector<std::pair<int, Symbol>> parent;
  auto add = [&](const StepAutomaton::Key& k, int par, Symbol s) {
    if (index.count(k)) return;
    if (keys.size() >= cap) throw CapacityError("search exceeded " + std::to_string(cap) + " states");
    index.emplace(k, static_cast<int>(keys.size()));
    keys.push_back(k);
    parent.push_back({par, s});
  };
  auto init = a.initial();
  std::sort(init.begin(), init.end());
  for (const auto& k : init) add(k, -1, -1);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (a.accepting(keys[i])) {
      Word w;
      for (int k = static_cast<int>(i); parent[k].first >= 0; k = parent[k].first) w.push_back(parent[k].second);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (Symbol s = 0; s < a.alphabet().size(); ++s) {
      auto succ = a.step(keys[i], s);
      std::sort(succ.begin(), succ.end());
      for (const auto& k : succ) add(k, static_cast<int>(i), s);
    }
  }
  return std::nullopt;
}

}  // namespace oresync
