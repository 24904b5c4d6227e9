#include "oresync/oca.hpp"

#include <functional>
#include <map>

#include "oresync/errors.hpp"

namespace oresync {

State Oca::add_state() {
  final.push_back(0);
  return num_states++;
}

void Oca::add_edge(const OcaEdge& e) {
  if (e.src < 0 || e.src >= num_states || e.dst < 0 || e.dst >= num_states)
    throw PreconditionError("counter automaton state out of range");
  if (e.sym < 0 || e.sym >= alphabet.size()) throw AlphabetError("counter automaton letter out of range");
  if (e.lo < 0 || e.lo > e.hi) throw PreconditionError("empty counter guard");
  edges.push_back(e);
}

void Oca::add_step(State src, Symbol sym, int add, State dst) { add_edge({src, sym, 0, INT_MAX, add, false, dst}); }

void Oca::add_zero_test(State src, Symbol sym, State dst) { add_edge({src, sym, 0, 0, 0, false, dst}); }

void Oca::add_reset(State src, Symbol sym, State dst) { add_edge({src, sym, 0, INT_MAX, 0, true, dst}); }

Nfa bounded_restriction(const Oca& a, int k) {
  if (k < 0) throw PreconditionError("counter bound must be non-negative");
  Nfa out(a.alphabet, a.num_states * (k + 1));
  auto id = [&](State q, int c) { return q * (k + 1) + c; };
  for (State q : a.initial) out.set_initial(id(q, 0));
  for (State q = 0; q < a.num_states; ++q)
    if (a.final[q]) out.set_final(id(q, 0));
  for (const auto& e : a.edges)
    for (int c = std::max(0, e.lo); c <= std::min(k, e.hi); ++c) {
      int v = c + e.add;
      if (v < 0 || v > k) continue;
      out.add_transition(id(e.src, c), e.sym, id(e.dst, e.reset ? 0 : v));
    }
  return out;
}

BoundCheck universal_with_bound(const Oca& a, int k) {
  Nfa rejected = complement(bounded_restriction(a, k));
  BoundCheck r;
  r.witness = shortest_word(rejected);
  r.universal = !r.witness.has_value();
  return r;
}

std::optional<int> boundedness_search(const Oca& a, int k_max) {
  for (int k = 0; k <= k_max; ++k)
    if (universal_with_bound(a, k).universal) return k;
  return std::nullopt;
}

namespace {

// Steps that move the signed difference by `delta` while the leader bit tracks its sign.
void add_difference_steps(Oca& a, State src, Symbol sym, bool lead, int delta, const std::function<State(bool)>& dst) {
  int d = lead ? delta : -delta;
  if (d >= 0) {
    a.add_edge({src, sym, 0, INT_MAX, d, false, dst(lead)});
    return;
  }
  a.add_edge({src, sym, -d, INT_MAX, d, false, dst(lead)});
  for (int v = 0; v < -d; ++v) a.add_edge({src, sym, v, v, -d - 2 * v, false, dst(!lead)});
}

}  // namespace

Oca transducers_to_oca(const NormalOneWay& t1, const NormalOneWay& t2) {
  require_same(t1.input(), t2.input(), "transducers_to_oca input");
  require_same(t1.output(), t2.output(), "transducers_to_oca output");
  if (t1.output().size() != 1) throw PreconditionError("transducers_to_oca needs a unary output alphabet");
  if (!t1.real_time() || !t2.real_time()) throw PreconditionError("transducers_to_oca needs real-time transducers");
  LetterForm f1 = letter_form(t1), f2 = letter_form(t2);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < f1.edges.size(); ++i) names.push_back("t" + std::to_string(i));
  Oca a(Alphabet(names), 3);
  const State err = 0, end = 1, closed = 2;
  for (State s : {err, end, closed}) a.final[s] = 1;
  for (Symbol x = 0; x < a.alphabet.size(); ++x) a.add_step(err, x, 0, err);
  // (last state of the encoded run or -1 at the start, state of the guessed run, leader bit)
  std::map<std::tuple<State, State, bool>, State> index;
  std::vector<std::tuple<State, State, bool>> todo;
  auto get = [&](State p, State q, bool lead) {
    auto [it, fresh] = index.try_emplace({p, q, lead}, 0);
    if (fresh) {
      it->second = a.add_state();
      todo.push_back({p, q, lead});
    }
    return it->second;
  };
  bool empty_run = false;
  for (State p : f1.initial) empty_run = empty_run || !f1.finals[p].empty();
  for (State q : f2.initial) {
    State s = get(-1, q, true);
    a.initial.insert(s);
    a.final[s] = !empty_run || !f2.finals[q].empty();
  }
  std::set<State> init1(f1.initial.begin(), f1.initial.end());
  auto from2 = f2.edges_from();
  for (std::size_t i = 0; i < todo.size(); ++i) {
    auto [p, q, lead] = todo[i];
    State src = index.at(todo[i]);
    for (Symbol x = 0; x < static_cast<Symbol>(f1.edges.size()); ++x) {
      const LetterEdge& e = f1.edges[x];
      if (p < 0 ? !init1.count(e.src) : e.src != p) {
        a.add_reset(src, x, err);
        continue;
      }
      if (f1.finals[e.dst].empty()) a.add_reset(src, x, end);
      for (int gi : from2[q]) {
        const LetterEdge& g = f2.edges[gi];
        if (g.in != e.in) continue;
        int delta = static_cast<int>(e.out.size()) - static_cast<int>(g.out.size());
        State p2 = e.dst, q2 = g.dst;
        add_difference_steps(a, src, x, lead, delta, [&](bool l) { return get(p2, q2, l); });
        for (const Word& v1 : f1.finals[p2])
          for (const Word& v2 : f2.finals[q2]) {
            int d = delta + static_cast<int>(v1.size()) - static_cast<int>(v2.size());
            d = lead ? d : -d;
            if (d <= 0) a.add_edge({src, x, -d, -d, d, false, closed});
          }
      }
    }
  }
  return a;
}

bool sign_safe(const Oca& a) {
  const long long inf = LLONG_MAX / 4;
  std::vector<long long> dist(a.num_states, inf);
  for (State s : a.initial) dist[s] = 0;
  for (int round = 0; round <= a.num_states; ++round) {
    bool changed = false;
    for (const auto& e : a.edges)
      if (dist[e.src] < inf && dist[e.src] + e.add < dist[e.dst]) {
        dist[e.dst] = dist[e.src] + e.add;
        changed = true;
        if (dist[e.dst] < 0) return false;
      }
    if (!changed) return true;
  }
  return false;  // still relaxing: a reachable cycle lowers the counter
}

std::pair<NormalOneWay, NormalOneWay> oca_to_transducers(const Oca& a) {
  for (const auto& e : a.edges)
    if (e.lo != 0 || e.hi != INT_MAX || e.reset || e.add < -1 || e.add > 1)
      throw PreconditionError("oca_to_transducers needs plain +1/-1/0 steps");
  if (!sign_safe(a)) throw PreconditionError("oca_to_transducers needs a counter that control paths keep non-negative");
  Alphabet out({"c"});
  NormalOneWay t1(a.alphabet, out, 1);
  t1.set_initial(0);
  t1.set_final(0);
  for (Symbol x = 0; x < a.alphabet.size(); ++x) t1.add_edge(0, x, {0}, 0);
  NormalOneWay t2(a.alphabet, out, a.num_states);
  for (State s : a.initial) t2.set_initial(s);
  for (State s = 0; s < a.num_states; ++s) t2.set_final(s, a.final[s]);
  for (const auto& e : a.edges) t2.add_edge(e.src, e.sym, Word(1 + e.add, 0), e.dst);
  return {t1, trim(t2)};
}

Alphabet MinskyMachine::instruction_alphabet() const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < instrs.size(); ++i) names.push_back("i" + std::to_string(i));
  return Alphabet(names);
}

Oca minsky_to_oca(const MinskyMachine& m) {
  if (m.counters < 1 || m.num_states < 1 || m.initial < 0 || m.initial >= m.num_states)
    throw PreconditionError("malformed counter machine");
  for (const auto& ins : m.instrs)
    if (ins.src < 0 || ins.src >= m.num_states || ins.dst < 0 || ins.dst >= m.num_states || ins.counter < 0 ||
        ins.counter >= m.counters)
      throw PreconditionError("malformed counter machine instruction");
  Oca a(m.instruction_alphabet(), m.num_states * m.counters + 2);
  const State sink = m.num_states * m.counters, end = sink + 1;
  auto id = [&](State q, int j) { return j * m.num_states + q; };
  a.final.assign(a.num_states, 1);
  for (int j = 0; j < m.counters; ++j) a.initial.insert(id(m.initial, j));
  for (Symbol x = 0; x < a.alphabet.size(); ++x) a.add_step(sink, x, 0, sink);
  using Kind = MinskyInstr::Kind;
  for (int j = 0; j < m.counters; ++j)
    for (State q = 0; q < m.num_states; ++q)
      for (Symbol x = 0; x < a.alphabet.size(); ++x) {
        const MinskyInstr& ins = m.instrs[x];
        State src = id(q, j), dst = id(ins.dst, j);
        if (ins.src != q) {
          a.add_reset(src, x, sink);
          continue;
        }
        // Each correct step may also be the last one; the counter is then emptied.
        if (ins.counter != j) {
          a.add_step(src, x, 0, dst);
          a.add_reset(src, x, end);
        } else if (ins.kind == Kind::inc) {
          a.add_step(src, x, 1, dst);
          a.add_edge({src, x, 0, INT_MAX, 1, true, end});
        } else if (ins.kind == Kind::dec) {
          a.add_step(src, x, -1, dst);
          a.add_edge({src, x, 0, INT_MAX, -1, true, end});
          a.add_edge({src, x, 0, 0, 0, true, sink});
        } else {
          a.add_zero_test(src, x, dst);
          a.add_edge({src, x, 0, 0, 0, true, end});
          a.add_edge({src, x, 1, INT_MAX, 0, true, sink});
        }
      }
  return a;
}

}  // namespace oresync
