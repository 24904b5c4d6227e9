#include "oresync/parikh.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <unordered_map>

#include "oresync/hash.hpp"

namespace oresync {

ParikhAutomaton::ParikhAutomaton(Alphabet alphabet, int dim, int states)
    : alphabet_(std::move(alphabet)), dim_(dim), initial_(states, 0), final_(states, 0), out_(states) {}

State ParikhAutomaton::add_state() {
  initial_.push_back(0);
  final_.push_back(0);
  out_.emplace_back();
  return num_states() - 1;
}

void ParikhAutomaton::add_transition(State src, Symbol sym, State dst, Weight w) {
  if (static_cast<int>(w.size()) != dim_) throw PreconditionError("Parikh weight has the wrong dimension");
  if (sym < 0 || sym >= alphabet_.size()) throw AlphabetError("Parikh transition symbol out of range");
  for (int i : out_.at(src)) {
    const Edge& e = edges_[i];
    if (e.sym == sym && e.dst == dst) {
      if (e.weight != w) throw PreconditionError("Parikh transition repeated with another weight");
      return;
    }
  }
  out_[src].push_back(static_cast<int>(edges_.size()));
  edges_.push_back({src, sym, dst, std::move(w)});
}

std::vector<State> ParikhAutomaton::initial_states() const {
  std::vector<State> r;
  for (State s = 0; s < num_states(); ++s)
    if (initial_[s]) r.push_back(s);
  return r;
}

Nfa ParikhAutomaton::underlying() const {
  Nfa n(alphabet_, num_states());
  for (State s = 0; s < num_states(); ++s) {
    if (initial_[s]) n.set_initial(s);
    if (final_[s]) n.set_final(s);
  }
  for (const auto& e : edges_) n.add_transition(e.src, e.sym, e.dst);
  return n;
}

std::optional<Weight> parikh_eval(const ParikhAutomaton& a, const Word& u) {
  // Per state: number of partial runs (capped at 2) and the weight when there is exactly one.
  struct Cell {
    int runs = 0;
    Weight w;
  };
  std::vector<Cell> cur(a.num_states());
  for (State s : a.initial_states()) cur[s] = {1, Weight(a.dim(), 0)};
  for (Symbol x : u) {
    std::vector<Cell> nxt(a.num_states());
    for (State s = 0; s < a.num_states(); ++s) {
      if (!cur[s].runs) continue;
      for (int i : a.out(s)) {
        const auto& e = a.edges()[i];
        if (e.sym != x) continue;
        Cell& c = nxt[e.dst];
        c.runs = std::min(2, c.runs + cur[s].runs);
        if (c.runs == 1) {
          c.w = cur[s].w;
          for (int d = 0; d < a.dim(); ++d) c.w[d] += e.weight[d];
        }
      }
    }
    cur = std::move(nxt);
  }
  std::optional<Weight> result;
  int runs = 0;
  for (State s = 0; s < a.num_states(); ++s)
    if (a.is_final(s) && cur[s].runs) {
      runs += cur[s].runs;
      result = cur[s].w;
    }
  if (runs > 1) throw AmbiguityError("Parikh automaton has two accepting runs on " + a.alphabet().render(u), u);
  return result;
}

bool parikh_member(const ParikhAutomaton& a, const Word& u) {
  std::set<std::pair<State, Weight>> cur;
  for (State s : a.initial_states()) cur.insert({s, Weight(a.dim(), 0)});
  for (Symbol x : u) {
    std::set<std::pair<State, Weight>> nxt;
    for (const auto& [s, w] : cur)
      for (int i : a.out(s)) {
        const auto& e = a.edges()[i];
        if (e.sym != x) continue;
        Weight v = w;
        for (int d = 0; d < a.dim(); ++d) v[d] += e.weight[d];
        nxt.insert({e.dst, std::move(v)});
      }
    cur = std::move(nxt);
  }
  for (const auto& [s, w] : cur)
    if (a.is_final(s) && std::all_of(w.begin(), w.end(), [](long x) { return x == 0; })) return true;
  return false;
}

ParikhAutomaton parikh_diff(const ParikhAutomaton& a1, const ParikhAutomaton& a2, std::size_t cap) {
  require_same(a1.alphabet(), a2.alphabet(), "parikh_diff");
  if (a1.dim() != a2.dim()) throw PreconditionError("parikh_diff: dimensions differ");
  ParikhAutomaton r(a1.alphabet(), a1.dim());
  std::map<std::pair<State, State>, State> id;
  std::deque<std::pair<State, State>> todo;
  auto get = [&](State p, State q) {
    auto [it, fresh] = id.try_emplace({p, q}, 0);
    if (fresh) {
      if (id.size() > cap) throw CapacityError("parikh_diff: product exceeds capacity");
      it->second = r.add_state();
      if (a1.is_final(p) && a2.is_final(q)) r.set_final(it->second);
      todo.push_back({p, q});
    }
    return it->second;
  };
  for (State p : a1.initial_states())
    for (State q : a2.initial_states()) r.set_initial(get(p, q));
  while (!todo.empty()) {
    auto [p, q] = todo.front();
    todo.pop_front();
    const State from = id.at({p, q});
    for (int i : a1.out(p))
      for (int j : a2.out(q)) {
        const auto& e1 = a1.edges()[i];
        const auto& e2 = a2.edges()[j];
        if (e1.sym != e2.sym) continue;
        Weight w(a1.dim());
        for (int d = 0; d < a1.dim(); ++d) w[d] = e1.weight[d] - e2.weight[d];
        r.add_transition(from, e1.sym, get(e1.dst, e2.dst), std::move(w));
      }
  }
  return parikh_trim(r);
}

ParikhAutomaton parikh_relabel(const ParikhAutomaton& a, const Alphabet& target,
                               const std::function<std::vector<Symbol>(Symbol)>& preimage) {
  ParikhAutomaton r(target, a.dim(), a.num_states());
  for (State s = 0; s < a.num_states(); ++s) {
    if (a.is_initial(s)) r.set_initial(s);
    if (a.is_final(s)) r.set_final(s);
  }
  std::vector<std::vector<Symbol>> images(a.alphabet().size());
  for (Symbol t = 0; t < target.size(); ++t)
    for (Symbol s : preimage(t)) images.at(s).push_back(t);
  for (const auto& e : a.edges())
    for (Symbol t : images[e.sym]) r.add_transition(e.src, t, e.dst, e.weight);
  return r;
}

ParikhAutomaton parikh_trim(const ParikhAutomaton& a) {
  const int n = a.num_states();
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::vector<State> stack = a.initial_states();
  for (State s : stack) fwd[s] = 1;
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (int i : a.out(s))
      if (!fwd[a.edges()[i].dst]) stack.push_back(a.edges()[i].dst), fwd[a.edges()[i].dst] = 1;
  }
  std::vector<std::vector<State>> rev(n);
  for (const auto& e : a.edges()) rev[e.dst].push_back(e.src);
  for (State s = 0; s < n; ++s)
    if (a.is_final(s)) stack.push_back(s), bwd[s] = 1;
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (State p : rev[s])
      if (!bwd[p]) stack.push_back(p), bwd[p] = 1;
  }
  std::vector<State> map(n, -1);
  ParikhAutomaton r(a.alphabet(), a.dim());
  for (State s = 0; s < n; ++s)
    if (fwd[s] && bwd[s]) {
      map[s] = r.add_state();
      if (a.is_initial(s)) r.set_initial(map[s]);
      if (a.is_final(s)) r.set_final(map[s]);
    }
  for (const auto& e : a.edges())
    if (map[e.src] >= 0 && map[e.dst] >= 0) r.add_transition(map[e.src], e.sym, map[e.dst], e.weight);
  return r;
}

ParikhAutomaton parikh_from_nfa(const Nfa& n, int dim) {
  ParikhAutomaton r(n.alphabet(), dim, n.num_states());
  for (State s = 0; s < n.num_states(); ++s) {
    if (n.is_initial(s)) r.set_initial(s);
    if (n.is_final(s)) r.set_final(s);
    for (auto [sym, dst] : n.out(s)) r.add_transition(s, sym, dst, Weight(dim, 0));
  }
  return r;
}

namespace {

// Key: state followed by the partial sum.
class ParikhStep : public StepAutomaton {
 public:
  explicit ParikhStep(ParikhAutomaton a) : a_(std::move(a)) {}
  const Alphabet& alphabet() const override { return a_.alphabet(); }
  std::vector<Key> initial() const override {
    std::vector<Key> r;
    for (State s : a_.initial_states()) {
      Key k(1 + a_.dim(), 0);
      k[0] = s;
      r.push_back(k);
    }
    return r;
  }
  std::vector<Key> step(const Key& k, Symbol sym) const override {
    std::vector<Key> r;
    for (int i : a_.out(k[0])) {
      const auto& e = a_.edges()[i];
      if (e.sym != sym) continue;
      Key n = k;
      n[0] = e.dst;
      for (int d = 0; d < a_.dim(); ++d) n[1 + d] += static_cast<int>(e.weight[d]);
      r.push_back(std::move(n));
    }
    return r;
  }
  bool accepting(const Key& k) const override {
    return a_.is_final(k[0]) && std::all_of(k.begin() + 1, k.end(), [](int x) { return x == 0; });
  }

 private:
  ParikhAutomaton a_;
};

}  // namespace

Relation parikh_relation(ParikhAutomaton a) { return std::make_shared<ParikhStep>(std::move(a)); }

RegularityResult regularity_semicheck(const ParikhAutomaton& input, int loop_bound) {
  const ParikhAutomaton a = parikh_trim(input);
  long wmax = 1;
  for (const auto& e : a.edges())
    for (long x : e.weight) wmax = std::max(wmax, std::labs(x));
  const long bound = static_cast<long>(std::max(loop_bound, 0)) * std::max(1, a.num_states()) * wmax;
  constexpr std::size_t kUnfoldCap = 200'000;

  Nfa out(a.alphabet());
  std::map<std::pair<State, Weight>, State> id;
  std::deque<std::pair<State, Weight>> todo;
  bool closed = true;
  auto get = [&](State s, const Weight& w) -> std::optional<State> {
    for (long x : w)
      if (std::labs(x) > bound) return std::nullopt;
    auto [it, fresh] = id.try_emplace({s, w}, 0);
    if (fresh) {
      it->second = out.add_state();
      if (a.is_final(s) && std::all_of(w.begin(), w.end(), [](long x) { return x == 0; }))
        out.set_final(it->second);
      todo.push_back({s, w});
    }
    return it->second;
  };
  for (State s : a.initial_states()) out.set_initial(*get(s, Weight(a.dim(), 0)));
  while (!todo.empty() && closed) {
    auto [s, w] = todo.front();
    todo.pop_front();
    const State from = id.at({s, w});
    for (int i : a.out(s)) {
      const auto& e = a.edges()[i];
      Weight v = w;
      for (int d = 0; d < a.dim(); ++d) v[d] += e.weight[d];
      auto to = get(e.dst, v);
      if (!to || id.size() > kUnfoldCap) {
        closed = false;
        break;
      }
      out.add_transition(from, e.sym, *to);
    }
  }
  if (!closed) return {};
  Nfa witness = trim(out);
  // Enumeration cross-check, bounded in the number of words.
  const int k = a.alphabet().size();
  int len = 0;
  for (long total = 1, layer = 1; len < 8; ++len) {
    layer *= std::max(1, k);
    if (total + layer > 200'000) break;
    total += layer;
  }
  for (const Word& w : words_upto(k, len))
    if (witness.accepts(w) != parikh_member(a, w)) return {};
  return {true, std::move(witness)};
}

}  // namespace oresync
