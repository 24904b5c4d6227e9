#include "oresync/rational.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

#include "oresync/hash.hpp"

namespace oresync {

RationalResync::RationalResync(Alphabet in, Alphabet out, int states)
    : input(std::move(in)), output(std::move(out)), num_states(states), final(states, 0) {}

State RationalResync::add_state() {
  final.push_back(0);
  return num_states++;
}

void RationalResync::add_edge(State src, Symbol in, Symbol out, State dst) {
  int k = input.size() + output.size();
  if (in < 0 || in >= k || out < 0 || out >= k) throw AlphabetError("resynchronizer letter out of range");
  edges.insert({src, in, out, dst});
}

RationalResync trim(const RationalResync& r) {
  int n = r.num_states;
  std::vector<std::vector<State>> fwd(n), bwd(n);
  for (const auto& e : r.edges) {
    fwd[e.src].push_back(e.dst);
    bwd[e.dst].push_back(e.src);
  }
  auto flood = [&](std::vector<State> seeds, const std::vector<std::vector<State>>& g) {
    std::vector<char> seen(n, 0);
    for (State s : seeds) seen[s] = 1;
    while (!seeds.empty()) {
      State x = seeds.back();
      seeds.pop_back();
      for (State y : g[x])
        if (!seen[y]) {
          seen[y] = 1;
          seeds.push_back(y);
        }
    }
    return seen;
  };
  auto reach = flood({r.initial.begin(), r.initial.end()}, fwd);
  std::vector<State> fin;
  for (State s = 0; s < n; ++s)
    if (r.final[s]) fin.push_back(s);
  auto co = flood(fin, bwd);
  RationalResync out(r.input, r.output, 0);
  std::vector<State> rename(n, -1);
  for (State s = 0; s < n; ++s)
    if (reach[s] && co[s]) {
      rename[s] = out.add_state();
      out.final[rename[s]] = r.final[s];
      if (r.initial.count(s)) out.initial.insert(rename[s]);
    }
  for (const auto& e : r.edges)
    if (rename[e.src] >= 0 && rename[e.dst] >= 0) out.add_edge(rename[e.src], e.in, e.out, rename[e.dst]);
  if (!r.lag.empty()) {
    out.lag.assign(out.num_states, 0);
    for (State s = 0; s < n; ++s)
      if (rename[s] >= 0) out.lag[rename[s]] = r.lag[s];
  }
  return out;
}

std::vector<int> lag_of_states(const RationalResync& raw) {
  RationalResync r = trim(raw);
  if (r.num_states != raw.num_states) throw PreconditionError("lag table needs a trimmed resynchronizer");
  std::vector<std::optional<int>> lag(r.num_states);
  std::deque<State> queue;
  for (State s : r.initial) {
    lag[s] = 0;
    queue.push_back(s);
  }
  std::vector<std::vector<const SyncEdge*>> out(r.num_states);
  for (const auto& e : r.edges) out[e.src].push_back(&e);
  while (!queue.empty()) {
    State q = queue.front();
    queue.pop_front();
    for (const SyncEdge* e : out[q]) {
      int v = *lag[q] + (r.is_input_letter(e->in) ? 1 : 0) - (r.is_input_letter(e->out) ? 1 : 0);
      if (!lag[e->dst]) {
        lag[e->dst] = v;
        queue.push_back(e->dst);
      } else if (*lag[e->dst] != v) {
        throw PreconditionError("lag conflict at state " + std::to_string(e->dst));
      }
    }
  }
  std::vector<int> result(r.num_states);
  for (State s = 0; s < r.num_states; ++s) {
    result[s] = *lag[s];
    if (r.final[s] && result[s] != 0) throw PreconditionError("lag conflict at final state " + std::to_string(s));
  }
  return result;
}

namespace {

// Pending letters of one projection: side 0 when the source is ahead, 1 when the target is ahead.
struct Pending {
  int side = 0;
  Word letters;
  auto operator<=>(const Pending&) const = default;
  // Registers letter x seen on `from`; false on mismatch.
  bool see(int from, Symbol x) {
    if (!letters.empty() && side != from) {
      if (letters.front() != x) return false;
      letters.erase(letters.begin());
      return true;
    }
    side = from;
    letters.push_back(x);
    return true;
  }
};

}  // namespace

RationalResync validate(const RationalResync& raw) {
  RationalResync r = trim(raw);
  r.lag = lag_of_states(r);
  int n = r.num_states;
  std::vector<std::vector<const SyncEdge*>> out(n), in(n);
  for (const auto& e : r.edges) {
    out[e.src].push_back(&e);
    in[e.dst].push_back(&e);
  }
  // (state, source started) pairs from which a final state is reachable on a sync source suffix.
  std::vector<std::array<char, 2>> co(n, {0, 0});
  std::vector<std::pair<State, int>> stack;
  for (State q = 0; q < n; ++q)
    if (r.final[q])
      for (int s : {0, 1}) {
        co[q][s] = 1;
        stack.push_back({q, s});
      }
  while (!stack.empty()) {
    auto [q, s] = stack.back();
    stack.pop_back();
    if (s == 0) continue;
    for (const SyncEdge* e : in[q])
      for (int s0 : {0, 1}) {
        if (s0 == 0 && !r.is_input_letter(e->in)) continue;
        if (!co[e->src][s0]) {
          co[e->src][s0] = 1;
          stack.push_back({e->src, s0});
        }
      }
  }
  auto completion = [&](State q, int s) {
    std::map<std::pair<State, int>, std::pair<std::pair<State, int>, const SyncEdge*>> via;
    std::deque<std::pair<State, int>> queue{{q, s}};
    via[{q, s}] = {{-1, -1}, nullptr};
    while (!queue.empty()) {
      auto x = queue.front();
      queue.pop_front();
      if (r.final[x.first]) {
        std::vector<const SyncEdge*> path;
        for (auto y = x; via.at(y).second; y = via.at(y).first) path.push_back(via.at(y).second);
        std::reverse(path.begin(), path.end());
        return path;
      }
      for (const SyncEdge* e : out[x.first]) {
        if (x.second == 0 && !r.is_input_letter(e->in)) continue;
        std::pair<State, int> y{e->dst, 1};
        if (via.count(y)) continue;
        via[y] = {x, e};
        queue.push_back(y);
      }
    }
    return std::vector<const SyncEdge*>{};
  };
  struct Node {
    State q;
    int in_started, out_started;
    Pending sigma, gamma;
    auto operator<=>(const Node&) const = default;
  };
  std::map<Node, int> index;
  std::vector<Node> nodes;
  std::vector<std::pair<int, const SyncEdge*>> parent;
  auto add = [&](const Node& x, int par, const SyncEdge* e) {
    if (index.count(x)) return;
    index.emplace(x, static_cast<int>(nodes.size()));
    nodes.push_back(x);
    parent.push_back({par, e});
  };
  auto fail = [&](int at, const SyncEdge* last, const std::string& why) {
    std::vector<const SyncEdge*> path;
    for (int i = at; parent[i].second; i = parent[i].first) path.push_back(parent[i].second);
    std::reverse(path.begin(), path.end());
    path.push_back(last);
    for (const SyncEdge* e : completion(last->dst, 1)) path.push_back(e);
    Word w, w2;
    for (const SyncEdge* e : path) {
      w.push_back(e->in);
      w2.push_back(e->out);
    }
    Alphabet sync = r.sync();
    throw ResyncViolation(why + ": '" + sync.render(w) + "' -> '" + sync.render(w2) + "'", w, w2);
  };
  for (State q : r.initial) add({q, 0, 0, {}, {}}, -1, nullptr);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Node cur = nodes[i];
    for (const SyncEdge* e : out[cur.q]) {
      bool c_in = r.is_input_letter(e->in), d_in = r.is_input_letter(e->out);
      if (!cur.in_started && !c_in) continue;
      if (!co[e->dst][1]) continue;
      Node nxt = cur;
      nxt.q = e->dst;
      nxt.in_started = 1;
      if (!cur.out_started && !d_in) fail(static_cast<int>(i), e, "target does not start with an input letter");
      nxt.out_started = 1;
      bool ok = (c_in ? nxt.sigma : nxt.gamma).see(0, e->in);
      ok = ok && (d_in ? nxt.sigma : nxt.gamma).see(1, e->out);
      if (!ok) fail(static_cast<int>(i), e, "projections differ");
      if (nxt.sigma.letters.empty()) nxt.sigma.side = 0;
      if (nxt.gamma.letters.empty()) nxt.gamma.side = 0;
      add(nxt, static_cast<int>(i), e);
    }
  }
  return r;
}

RationalResync to_letter_to_letter(const WordResync& w) {
  struct Micro {
    State src;
    Symbol in, out;  // -1 when absent
    State dst;
  };
  std::vector<Micro> micro;
  int n = w.num_states;
  for (const auto& e : w.edges) {
    std::size_t len = std::max<std::size_t>({e.in.size(), e.out.size(), 1});
    State cur = e.src;
    for (std::size_t i = 0; i < len; ++i) {
      State nxt = i + 1 == len ? e.dst : n++;
      micro.push_back({cur, i < e.in.size() ? e.in[i] : -1, i < e.out.size() ? e.out[i] : -1, nxt});
      cur = nxt;
    }
  }
  // Only states on successful runs count.
  std::vector<char> co(n, 0);
  for (State f : w.final) co[f] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& m : micro)
      if (co[m.dst] && !co[m.src]) co[m.src] = changed = true;
  }
  std::vector<std::vector<const Micro*>> out(n);
  for (const auto& m : micro)
    if (co[m.src] && co[m.dst]) out[m.src].push_back(&m);
  // Length lag: consumed minus produced, must be a function of the state.
  std::vector<std::optional<int>> lag(n);
  std::deque<State> queue;
  for (State s : w.initial)
    if (co[s]) {
      lag[s] = 0;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    State q = queue.front();
    queue.pop_front();
    for (const Micro* m : out[q]) {
      int v = *lag[q] + (m->in >= 0) - (m->out >= 0);
      if (!lag[m->dst]) {
        lag[m->dst] = v;
        queue.push_back(m->dst);
      } else if (*lag[m->dst] != v) {
        throw PreconditionError("not length-preserving: two runs reach state " + std::to_string(m->dst) +
                                " with different length differences");
      }
    }
  }
  int bound = 0;
  for (State s = 0; s < n; ++s)
    if (lag[s]) bound = std::max(bound, std::abs(*lag[s]));
  for (State f : w.final)
    if (lag[f] && *lag[f] != 0)
      throw PreconditionError("not length-preserving: final state " + std::to_string(f) + " has length difference " +
                              std::to_string(*lag[f]));
  // Silent closure for acceptance.
  std::vector<char> ends(n, 0);
  for (State f : w.final) ends[f] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& m : micro)
      if (m.in < 0 && m.out < 0 && ends[m.dst] && !ends[m.src]) ends[m.src] = changed = true;
  }
  int k = w.input.size() + w.output.size();
  RationalResync r(w.input, w.output, 0);
  // Letter-to-letter state: micro state, side (0 produced ahead, 1 promised ahead), queue.
  using Key = std::vector<int>;
  std::map<Key, State> index;
  std::vector<Key> keys;
  auto get = [&](const Key& key) {
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    State s = r.add_state();
    index.emplace(key, s);
    keys.push_back(key);
    if (key.size() == 2 && ends[key[0]]) r.final[s] = 1;
    return s;
  };
  auto make = [](State p, int side, const Word& q) {
    Key key{p, q.empty() ? 0 : side};
    key.insert(key.end(), q.begin(), q.end());
    return key;
  };
  for (State s : w.initial)
    if (co[s]) r.initial.insert(get(make(s, 0, {})));
  for (std::size_t i = 0; i < keys.size(); ++i) {
    Key key = keys[i];
    State p0 = key[0];
    int side0 = key[1];
    Word q0(key.begin() + 2, key.end());
    for (Symbol c = 0; c < k; ++c) {
      // Run micro steps: c must be consumed once; producing steps before and after are allowed.
      std::set<std::tuple<State, int, int, Word>> seen;
      std::set<std::tuple<State, int, Word>> done;
      std::function<void(State, int, int, Word)> run = [&](State p, int consumed, int side, Word q) {
        if (q.empty()) side = 0;
        if (static_cast<int>(q.size()) > bound + 1) return;
        if (!seen.insert({p, consumed, side, q}).second) return;
        if (consumed) done.insert({p, side, q});
        for (const Micro* m : out[p]) {
          int c2 = consumed;
          if (m->in >= 0) {
            if (consumed || m->in != c) continue;
            c2 = 1;
          }
          int side2 = side;
          Word q2 = q;
          if (m->out >= 0) {
            if (side == 1 && !q2.empty()) {
              if (q2.front() != m->out) continue;
              q2.erase(q2.begin());
            } else {
              side2 = 0;
              q2.push_back(m->out);
            }
          }
          run(m->dst, c2, side2, q2);
        }
      };
      run(p0, 0, side0, q0);
      for (const auto& [p, side, q] : done) {
        if (side == 0 && !q.empty()) {
          Word q2(q.begin() + 1, q.end());
          r.add_edge(static_cast<State>(i), c, q.front(), get(make(p, 0, q2)));
          continue;
        }
        for (Symbol d = 0; d < k; ++d) {
          Word q2 = q;
          q2.push_back(d);
          if (static_cast<int>(q2.size()) > bound) continue;
          r.add_edge(static_cast<State>(i), c, d, get(make(p, 1, q2)));
        }
      }
    }
    if (keys.size() > kDefaultCapacity) throw CapacityError("letter-to-letter conversion exceeded the state cap");
  }
  return trim(r);
}

RationalResync identity_resync(const Alphabet& in, const Alphabet& out) {
  RationalResync r(in, out, 1);
  r.initial.insert(0);
  r.final[0] = 1;
  for (Symbol c = 0; c < in.size() + out.size(); ++c) r.add_edge(0, c, c, 0);
  return r;
}

RationalResync compose(const RationalResync& r1, const RationalResync& r2) {
  require_same(r1.input, r2.input, "compose");
  require_same(r1.output, r2.output, "compose");
  RationalResync r(r1.input, r1.output, 0);
  std::map<std::pair<State, State>, State> index;
  std::deque<std::pair<State, State>> queue;
  auto get = [&](State p, State q) {
    auto [it, fresh] = index.try_emplace({p, q}, 0);
    if (fresh) {
      it->second = r.add_state();
      r.final[it->second] = r1.final[p] && r2.final[q];
      queue.push_back({p, q});
    }
    return it->second;
  };
  for (State p : r1.initial)
    for (State q : r2.initial) r.initial.insert(get(p, q));
  std::vector<std::vector<const SyncEdge*>> out2(r2.num_states);
  for (const auto& e : r2.edges) out2[e.src].push_back(&e);
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    State src = index.at({p, q});
    for (const auto& e1 : r1.edges) {
      if (e1.src != p) continue;
      for (const SyncEdge* e2 : out2[q])
        if (e2->in == e1.out) r.add_edge(src, e1.in, e2->out, get(e1.dst, e2->dst));
    }
  }
  return trim(r);
}

bool member_pair(const RationalResync& r, const Word& w, const Word& w2) {
  if (w.size() != w2.size()) return false;
  std::set<State> cur(r.initial.begin(), r.initial.end());
  for (std::size_t i = 0; i < w.size() && !cur.empty(); ++i) {
    std::set<State> nxt;
    for (const auto& e : r.edges)
      if (cur.count(e.src) && e.in == w[i] && e.out == w2[i]) nxt.insert(e.dst);
    cur = std::move(nxt);
  }
  for (State s : cur)
    if (r.final[s]) return true;
  return false;
}

std::set<Word> image_of(const RationalResync& r, const Word& w) {
  std::set<std::pair<State, Word>> cur;
  for (State s : r.initial) cur.insert({s, {}});
  for (Symbol c : w) {
    std::set<std::pair<State, Word>> nxt;
    for (const auto& [q, out] : cur)
      for (const auto& e : r.edges)
        if (e.src == q && e.in == c) {
          Word o = out;
          o.push_back(e.out);
          nxt.insert({e.dst, o});
        }
    cur = std::move(nxt);
  }
  std::set<Word> result;
  for (const auto& [q, out] : cur)
    if (r.final[q]) result.insert(out);
  return result;
}

Nfa apply_sync(const RationalResync& r, const Nfa& sync) {
  Alphabet s = r.sync();
  require_same(sync.alphabet(), s, "apply");
  Nfa out(s);
  std::map<std::pair<State, State>, State> index;
  std::deque<std::pair<State, State>> queue;
  auto get = [&](State a, State q) {
    auto [it, fresh] = index.try_emplace({a, q}, 0);
    if (fresh) {
      it->second = out.add_state();
      if (sync.is_final(a) && r.final[q]) out.set_final(it->second);
      queue.push_back({a, q});
    }
    return it->second;
  };
  for (State a : sync.initial_states())
    for (State q : r.initial) out.set_initial(get(a, q));
  std::vector<std::vector<const SyncEdge*>> from(r.num_states);
  for (const auto& e : r.edges) from[e.src].push_back(&e);
  while (!queue.empty()) {
    auto [a, q] = queue.front();
    queue.pop_front();
    State src = index.at({a, q});
    for (const SyncEdge* e : from[q])
      for (State a2 : sync.step({a}, e->in)) out.add_transition(src, e->out, get(a2, e->dst));
  }
  return trim(out);
}

NormalOneWay apply(const RationalResync& r, const NormalOneWay& t) {
  require_same(r.input, t.input(), "apply input");
  require_same(r.output, t.output(), "apply output");
  return from_sync_nfa(apply_sync(r, sync_language(t)), t.input(), t.output());
}

namespace {

// Pending input letters carry their age; a letter may not stay pending longer than d steps.
struct DelayState {
  int started = 0;
  int side = 0;  // 0: source ahead on input letters, 1: target ahead
  int gside = 0;
  std::vector<std::pair<Symbol, int>> sig;
  Word gam;
  auto operator<=>(const DelayState&) const = default;
  bool balanced() const { return sig.empty() && gam.empty(); }
};

std::optional<DelayState> delay_step(DelayState s, Symbol c, Symbol e, int sigma, int d) {
  if (!s.started && (c >= sigma || e >= sigma)) return std::nullopt;
  s.started = 1;
  bool ok = true;
  auto see = [&](int from, Symbol x) {
    if (x < sigma) {
      if (!s.sig.empty() && s.side != from) {
        if (s.sig.front().first != x) ok = false;
        s.sig.erase(s.sig.begin());
      } else {
        s.side = from;
        s.sig.push_back({x, 0});
      }
    } else if (!s.gam.empty() && s.gside != from) {
      if (s.gam.front() != x) ok = false;
      s.gam.erase(s.gam.begin());
    } else {
      s.gside = from;
      s.gam.push_back(x);
    }
  };
  see(0, c);
  if (ok) see(1, e);
  for (auto& [x, age] : s.sig)
    if (++age > d) ok = false;
  if (!ok) return std::nullopt;
  if (s.sig.empty()) s.side = 0;
  if (s.gam.empty()) s.gside = 0;
  return s;
}

void check_delay(int d, int max_d) {
  if (d < 0) throw PreconditionError("delay must be non-negative");
  if (d > max_d) throw CapacityError("delay " + std::to_string(d) + " exceeds the cap " + std::to_string(max_d));
}

}  // namespace

RationalResync d_delay(int d, const Alphabet& in, const Alphabet& out, int max_d) {
  check_delay(d, max_d);
  int sigma = in.size(), k = in.size() + out.size();
  RationalResync r(in, out, 0);
  std::map<DelayState, State> index;
  std::vector<DelayState> states;
  auto get = [&](const DelayState& s) {
    auto [it, fresh] = index.try_emplace(s, 0);
    if (fresh) {
      it->second = r.add_state();
      r.final[it->second] = s.balanced();
      states.push_back(s);
      if (states.size() > kDefaultCapacity) throw CapacityError("delay resynchronizer exceeded the state cap");
    }
    return it->second;
  };
  r.initial.insert(get(DelayState{}));
  for (std::size_t i = 0; i < states.size(); ++i)
    for (Symbol c = 0; c < k; ++c)
      for (Symbol e = 0; e < k; ++e)
        if (auto nxt = delay_step(states[i], c, e, sigma, d)) r.add_edge(static_cast<State>(i), c, e, get(*nxt));
  return trim(r);
}

Nfa apply_delay_sync(int d, const Alphabet& in, const Alphabet& out, const Nfa& sync, std::size_t cap) {
  Alphabet s = disjoint_union(in, out);
  require_same(sync.alphabet(), s, "apply");
  int sigma = in.size();
  Nfa result(s);
  std::map<std::pair<State, DelayState>, State> index;
  std::vector<std::pair<State, DelayState>> todo;
  auto get = [&](State a, const DelayState& x) {
    auto [it, fresh] = index.try_emplace({a, x}, 0);
    if (fresh) {
      it->second = result.add_state();
      if (sync.is_final(a) && x.balanced()) result.set_final(it->second);
      todo.push_back({a, x});
      if (todo.size() > cap) throw CapacityError("delayed image exceeded the state cap");
    }
    return it->second;
  };
  for (State a : sync.initial_states()) result.set_initial(get(a, DelayState{}));
  for (std::size_t i = 0; i < todo.size(); ++i) {
    auto [a, x] = todo[i];
    State src = index.at({a, x});
    for (auto [c, a2] : sync.out(a))
      for (Symbol e = 0; e < s.size(); ++e)
        if (auto nxt = delay_step(x, c, e, sigma, d)) result.add_transition(src, e, get(a2, *nxt));
  }
  return trim(result);
}

int delay(const OriginGraph& g1, const OriginGraph& g2) {
  if (g1.input != g2.input || g1.output_word() != g2.output_word())
    throw PreconditionError("delay needs graphs with equal projections");
  int worst = 0;
  for (int y = 1; y <= static_cast<int>(g1.input.size()); ++y) {
    int a = 0, b = 0;
    for (auto [g, o] : g1.output) a += o <= y;
    for (auto [g, o] : g2.output) b += o <= y;
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

}  // namespace oresync
