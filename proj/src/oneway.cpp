#include "oresync/oneway.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "oresync/errors.hpp"

namespace oresync {

OneWayTransducer::OneWayTransducer(Alphabet in, Alphabet out, int states)
    : input(std::move(in)), output(std::move(out)), num_states(states) {}

void OneWayTransducer::add_edge(State src, Symbol sym, State dst, const Word& out) {
  edges.push_back({src, sym, dst, single_word(output, out)});
}

void OneWayTransducer::add_edge(State src, Symbol sym, State dst, Nfa out) {
  edges.push_back({src, sym, dst, std::move(out)});
}

void OneWayTransducer::add_final(State q, const Word& out) { finals[q] = single_word(output, out); }
void OneWayTransducer::add_final(State q, Nfa out) { finals[q] = std::move(out); }

NormalOneWay::NormalOneWay(Alphabet in, Alphabet out, int states)
    : input_(std::move(in)), output_(std::move(out)), final_(states, 0) {}

State NormalOneWay::add_state() {
  final_.push_back(0);
  return num_states() - 1;
}

void NormalOneWay::add_edge(State src, Symbol in, const Word& out, State dst) {
  if (src < 0 || src >= num_states() || dst < 0 || dst >= num_states()) throw Error("edge endpoint out of range");
  if (in != kEps && (in < 0 || in >= input_.size())) throw AlphabetError("input symbol out of range");
  for (Symbol g : out)
    if (g < 0 || g >= output_.size()) throw AlphabetError("output symbol out of range");
  edges_.insert({src, in, out, dst});
}

bool NormalOneWay::real_time() const { return !productive_cycle(*this).has_value(); }

namespace {

std::optional<Word> as_singleton(const Nfa& lang) {
  auto words = enumerate(lang, lang.num_states());
  if (words.size() != 1) return std::nullopt;
  if (!containment(lang, single_word(lang.alphabet(), words[0])).holds) return std::nullopt;
  return words[0];
}

// Copies `lang` into t as an epsilon-input layer; returns (initial copies, final copies).
std::pair<std::vector<State>, std::vector<State>> embed_layer(NormalOneWay& t, const Nfa& lang) {
  int off = t.num_states();
  for (int i = 0; i < lang.num_states(); ++i) t.add_state();
  for (const auto& tr : lang.transitions()) t.add_edge(tr.src + off, kEps, {tr.sym}, tr.dst + off);
  std::vector<State> ini, fin;
  for (State s : lang.initial_states()) ini.push_back(s + off);
  for (State s : lang.final_states()) fin.push_back(s + off);
  return {ini, fin};
}

}  // namespace

NormalOneWay normalize(const OneWayTransducer& t) {
  auto check = [&](const Nfa& l) {
    if (!(l.alphabet() == t.output))
      throw AlphabetError("output language over " + l.alphabet().describe() + ", expected " + t.output.describe());
  };
  NormalOneWay n(t.input, t.output, t.num_states);
  for (State s : t.initial) n.set_initial(s);
  for (const auto& e : t.edges) {
    check(e.out);
    Nfa lang = trim(e.out);
    if (lang.num_states() == 0) continue;
    if (auto w = as_singleton(lang)) {
      n.add_edge(e.src, e.sym, *w, e.dst);
      continue;
    }
    auto [ini, fin] = embed_layer(n, lang);
    for (State i : ini) n.add_edge(e.src, e.sym, {}, i);
    for (State f : fin) n.add_edge(f, kEps, {}, e.dst);
  }
  std::optional<State> sink;
  for (const auto& [q, l] : t.finals) {
    check(l);
    Nfa lang = trim(l);
    if (lang.num_states() == 0) continue;
    bool initial = std::find(t.initial.begin(), t.initial.end(), q) != t.initial.end();
    if (initial && !containment(lang, single_word(t.output, {})).holds)
      throw PreconditionError("initial state " + std::to_string(q) +
                              " is final with a non-empty output: the empty input would carry output without origin");
    auto w = as_singleton(lang);
    if (w && w->empty()) {
      n.set_final(q);
      continue;
    }
    if (!sink) {
      sink = n.add_state();
      n.set_final(*sink);
    }
    if (w) {
      n.add_edge(q, kEps, *w, *sink);
      continue;
    }
    auto [ini, fin] = embed_layer(n, lang);
    for (State i : ini) n.add_edge(q, kEps, {}, i);
    for (State f : fin) n.add_edge(f, kEps, {}, *sink);
  }
  return n;
}

NormalOneWay trim(const NormalOneWay& t) {
  int n = t.num_states();
  std::vector<std::vector<State>> fwd(n), bwd(n);
  for (const auto& e : t.edges()) {
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
  auto reach = flood({t.initial().begin(), t.initial().end()}, fwd);
  std::vector<State> fin;
  for (State s = 0; s < n; ++s)
    if (t.is_final(s)) fin.push_back(s);
  auto co = flood(fin, bwd);
  std::vector<State> rename(n, -1);
  NormalOneWay out(t.input(), t.output(), 0);
  for (State s = 0; s < n; ++s)
    if (reach[s] && co[s]) {
      rename[s] = out.add_state();
      if (t.is_final(s)) out.set_final(rename[s]);
      if (t.initial().count(s)) out.set_initial(rename[s]);
    }
  for (const auto& e : t.edges())
    if (rename[e.src] >= 0 && rename[e.dst] >= 0) out.add_edge(rename[e.src], e.in, e.out, rename[e.dst]);
  return out;
}

int LetterForm::max_out() const {
  std::size_t m = 0;
  for (const auto& e : edges) m = std::max(m, e.out.size());
  for (const auto& f : finals)
    for (const auto& w : f) m = std::max(m, w.size());
  return static_cast<int>(m);
}

std::vector<std::vector<int>> LetterForm::edges_from() const {
  std::vector<std::vector<int>> r(num_states);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) r[edges[i].src].push_back(i);
  return r;
}

namespace {

// Strongly connected components of the epsilon layer.
std::vector<int> eps_components(const NormalOneWay& t) {
  int n = t.num_states();
  std::vector<std::vector<State>> g(n);
  for (const auto& e : t.edges())
    if (e.in == kEps) g[e.src].push_back(e.dst);
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on(n, 0);
  std::vector<State> stack;
  int counter = 0, ncomp = 0;
  std::function<void(State)> visit = [&](State v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = 1;
    for (State w : g[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      State w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = 0;
        comp[w] = ncomp;
      } while (w != v);
      ++ncomp;
    }
  };
  for (State s = 0; s < n; ++s)
    if (index[s] < 0) visit(s);
  return comp;
}

}  // namespace

std::optional<State> productive_cycle(const NormalOneWay& t) {
  NormalOneWay u = trim(t);
  auto comp = eps_components(u);
  for (const auto& e : u.edges())
    if (e.in == kEps && !e.out.empty() && comp[e.src] == comp[e.dst]) return e.src;
  return std::nullopt;
}

NormalOneWay collapse_silent_cycles(const NormalOneWay& t) {
  auto comp = eps_components(t);
  int n = t.num_states();
  std::vector<State> rep(n, -1), rename(n, -1);
  for (State s = 0; s < n; ++s)
    if (rep[comp[s]] < 0) rep[comp[s]] = s;
  for (const auto& e : t.edges())
    if (e.in == kEps && comp[e.src] == comp[e.dst] && !e.out.empty()) return t;
  NormalOneWay out(t.input(), t.output(), 0);
  for (State s = 0; s < n; ++s)
    if (rep[comp[s]] == s) rename[comp[s]] = out.add_state();
  for (State s = 0; s < n; ++s) {
    State r = rename[comp[s]];
    if (t.is_final(s)) out.set_final(r);
    if (t.initial().count(s)) out.set_initial(r);
  }
  for (const auto& e : t.edges()) {
    State a = rename[comp[e.src]], b = rename[comp[e.dst]];
    if (e.in == kEps && a == b) continue;
    out.add_edge(a, e.in, e.out, b);
  }
  return out;
}

LetterForm letter_form(const NormalOneWay& input) {
  if (!input.real_time()) throw PreconditionError("requires real-time: an epsilon cycle produces output");
  NormalOneWay t = collapse_silent_cycles(trim(input));
  int n = t.num_states();
  std::vector<std::vector<const NormalEdge*>> eps(n);
  std::vector<char> has_letter(n, 0);
  for (const auto& e : t.edges()) {
    if (e.in == kEps)
      eps[e.src].push_back(&e);
    else
      has_letter[e.src] = 1;
  }
  // Epsilon paths from each state: (end state, output).
  std::vector<std::set<std::pair<State, Word>>> paths(n);
  std::function<void(State, State, Word&)> walk = [&](State from, State cur, Word& acc) {
    paths[from].insert({cur, acc});
    for (const NormalEdge* e : eps[cur]) {
      std::size_t k = acc.size();
      acc.insert(acc.end(), e->out.begin(), e->out.end());
      walk(from, e->dst, acc);
      acc.resize(k);
    }
  };
  for (State s = 0; s < n; ++s) {
    Word acc;
    walk(s, s, acc);
  }
  LetterForm f{t.input(), t.output(), n, {t.initial().begin(), t.initial().end()}, {}, std::vector<std::vector<Word>>(n)};
  for (State q = 0; q < n; ++q) {
    std::set<Word> ws;
    for (const auto& [end, w] : paths[q])
      if (t.is_final(end)) ws.insert(w);
    f.finals[q] = {ws.begin(), ws.end()};
  }
  std::set<LetterEdge> edges;
  for (const auto& e : t.edges()) {
    if (e.in == kEps) continue;
    for (const auto& [end, w] : paths[e.dst]) {
      if (!has_letter[end] && f.finals[end].empty()) continue;
      Word out = e.out;
      out.insert(out.end(), w.begin(), w.end());
      edges.insert({e.src, e.in, out, end});
    }
  }
  // Keep edges on successful runs only.
  std::vector<char> reach(n, 0), co(n, 0);
  std::vector<State> stack = f.initial;
  for (State s : stack) reach[s] = 1;
  while (!stack.empty()) {
    State x = stack.back();
    stack.pop_back();
    for (const auto& e : edges)
      if (e.src == x && !reach[e.dst]) {
        reach[e.dst] = 1;
        stack.push_back(e.dst);
      }
  }
  for (State q = 0; q < n; ++q)
    if (!f.finals[q].empty()) {
      co[q] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    State x = stack.back();
    stack.pop_back();
    for (const auto& e : edges)
      if (e.dst == x && !co[e.src]) {
        co[e.src] = 1;
        stack.push_back(e.src);
      }
  }
  for (const auto& e : edges)
    if (reach[e.src] && co[e.dst]) f.edges.push_back(e);
  for (State q = 0; q < n; ++q)
    if (!reach[q]) f.finals[q].clear();
  return f;
}

NormalOneWay from_letter_form(const LetterForm& f) {
  NormalOneWay t(f.input, f.output, f.num_states);
  for (State s : f.initial) t.set_initial(s);
  for (const auto& e : f.edges) t.add_edge(e.src, e.in, e.out, e.dst);
  std::optional<State> sink;
  for (State q = 0; q < f.num_states; ++q) {
    for (const auto& w : f.finals[q]) {
      if (w.empty()) {
        t.set_final(q);
        continue;
      }
      if (!sink) {
        sink = t.add_state();
        t.set_final(*sink);
      }
      t.add_edge(q, kEps, w, *sink);
    }
  }
  return t;
}

Word OriginGraph::output_word() const {
  Word w;
  for (auto [g, o] : output) w.push_back(g);
  return w;
}

std::vector<int> OriginGraph::origins() const {
  std::vector<int> r;
  for (auto [g, o] : output) r.push_back(o);
  return r;
}

Word encode(const OriginGraph& g, int input_size) {
  int n = static_cast<int>(g.input.size());
  int prev = 1;
  for (auto [sym, o] : g.output) {
    if (o < 1 || o > n) throw PreconditionError("origin " + std::to_string(o) + " outside the input");
    if (o < prev) throw PreconditionError("not one-way realizable: origins decrease");
    prev = o;
  }
  Word w;
  std::size_t k = 0;
  for (int i = 1; i <= n; ++i) {
    w.push_back(g.input[i - 1]);
    while (k < g.output.size() && g.output[k].second == i) w.push_back(input_size + g.output[k++].first);
  }
  return w;
}

OriginGraph decode(const Word& w, int input_size) {
  OriginGraph g;
  for (Symbol s : w) {
    if (s < input_size) {
      g.input.push_back(s);
    } else {
      if (g.input.empty()) throw FormatError("synchronized word starts with an output symbol");
      g.output.push_back({s - input_size, static_cast<int>(g.input.size())});
    }
  }
  return g;
}

std::string render(const OriginGraph& g, const Alphabet& in, const Alphabet& out) {
  std::string s = "(" + in.render(g.input) + ", ";
  for (std::size_t i = 0; i < g.output.size(); ++i) {
    if (i) s += ' ';
    s += out.name(g.output[i].first) + "@" + std::to_string(g.output[i].second);
  }
  return s + ")";
}

Alphabet sync_alphabet(const NormalOneWay& t) { return disjoint_union(t.input(), t.output()); }

Nfa sync_shape(const Alphabet& sync, int input_size) {
  Nfa n(sync, 2);
  n.set_initial(0);
  n.set_final(0);
  n.set_final(1);
  for (Symbol s = 0; s < sync.size(); ++s) {
    if (s < input_size) n.add_transition(0, s, 1);
    n.add_transition(1, s, 1);
  }
  return n;
}

Nfa sync_language(const NormalOneWay& t) {
  Alphabet sync = sync_alphabet(t);
  int k = t.input().size();
  EpsNfaBuilder b(sync);
  for (int i = 0; i < t.num_states(); ++i) b.add_state();
  for (State s : t.initial()) b.set_initial(s);
  for (State s = 0; s < t.num_states(); ++s)
    if (t.is_final(s)) b.set_final(s);
  for (const auto& e : t.edges()) {
    Word w;
    if (e.in != kEps) w.push_back(e.in);
    for (Symbol g : e.out) w.push_back(k + g);
    if (w.empty()) {
      b.add_eps(e.src, e.dst);
      continue;
    }
    State cur = e.src;
    for (std::size_t i = 0; i < w.size(); ++i) {
      State nxt = i + 1 == w.size() ? e.dst : b.add_state();
      b.add_transition(cur, w[i], nxt);
      cur = nxt;
    }
  }
  return trim(product(b.build(), sync_shape(sync, k)));
}

NormalOneWay from_sync_nfa(const Nfa& sync, const Alphabet& in, const Alphabet& out) {
  Alphabet expected = disjoint_union(in, out);
  require_same(sync.alphabet(), expected, "from_sync_nfa");
  Nfa s = trim(product(sync, sync_shape(expected, in.size())));
  NormalOneWay t(in, out, s.num_states());
  for (State q : s.initial_states()) t.set_initial(q);
  for (State q : s.final_states()) t.set_final(q);
  for (const auto& tr : s.transitions()) {
    if (tr.sym < in.size())
      t.add_edge(tr.src, tr.sym, {}, tr.dst);
    else
      t.add_edge(tr.src, kEps, {tr.sym - in.size()}, tr.dst);
  }
  return t;
}

Nfa domain(const NormalOneWay& t) {
  EpsNfaBuilder b(t.input());
  for (int i = 0; i < t.num_states(); ++i) b.add_state();
  for (State s : t.initial()) b.set_initial(s);
  for (State s = 0; s < t.num_states(); ++s)
    if (t.is_final(s)) b.set_final(s);
  for (const auto& e : t.edges()) {
    if (e.in == kEps)
      b.add_eps(e.src, e.dst);
    else
      b.add_transition(e.src, e.in, e.dst);
  }
  return b.build();
}

NormalOneWay restrict_domain(const NormalOneWay& t, const Nfa& inputs) {
  require_same(t.input(), inputs.alphabet(), "restrict_domain");
  NormalOneWay out(t.input(), t.output(), 0);
  std::map<std::pair<State, State>, State> index;
  std::deque<std::pair<State, State>> queue;
  auto get = [&](State p, State q) {
    auto [it, fresh] = index.try_emplace({p, q}, 0);
    if (fresh) {
      it->second = out.add_state();
      if (t.is_final(p) && inputs.is_final(q)) out.set_final(it->second);
      queue.push_back({p, q});
    }
    return it->second;
  };
  for (State p : t.initial())
    for (State q : inputs.initial_states()) out.set_initial(get(p, q));
  std::vector<std::vector<const NormalEdge*>> from(t.num_states());
  for (const auto& e : t.edges()) from[e.src].push_back(&e);
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    State src = index.at({p, q});
    for (const NormalEdge* e : from[p]) {
      if (e->in == kEps) {
        out.add_edge(src, kEps, e->out, get(e->dst, q));
        continue;
      }
      for (State q2 : inputs.step({q}, e->in)) out.add_edge(src, e->in, e->out, get(e->dst, q2));
    }
  }
  return trim(out);
}

NormalOneWay disjoint_sum(const NormalOneWay& a, const NormalOneWay& b) {
  require_same(a.input(), b.input(), "disjoint_sum input");
  require_same(a.output(), b.output(), "disjoint_sum output");
  NormalOneWay out = a;
  int off = out.num_states();
  for (int i = 0; i < b.num_states(); ++i) out.add_state();
  for (State s : b.initial()) out.set_initial(s + off);
  for (State s = 0; s < b.num_states(); ++s)
    if (b.is_final(s)) out.set_final(s + off);
  for (const auto& e : b.edges()) out.add_edge(e.src + off, e.in, e.out, e.dst + off);
  return out;
}

GraphSet enumerate_graphs(const NormalOneWay& t, int n, std::optional<int> output_cap) {
  bool rt = t.real_time();
  if (!rt && !output_cap)
    throw PreconditionError("unbounded enumeration: non-real-time transducer needs an output cap");
  Nfa s = sync_language(t);
  int k = t.input().size();
  GraphSet result;
  std::function<void(Word&, const std::vector<State>&, int, int)> dfs = [&](Word& w, const std::vector<State>& cur,
                                                                               int ins, int outs) {
    if (s.any_final(cur)) result.graphs.insert(decode(w, k));
    for (Symbol x = 0; x < s.alphabet().size(); ++x) {
      bool is_in = x < k;
      if (is_in && ins == n) continue;
      auto nxt = s.step(cur, x);
      if (nxt.empty()) continue;
      if (!is_in && output_cap && outs == *output_cap) {
        result.truncated = true;
        continue;
      }
      w.push_back(x);
      dfs(w, nxt, ins + (is_in ? 1 : 0), outs + (is_in ? 0 : 1));
      w.pop_back();
    }
  };
  Word w;
  auto init = s.initial_states();
  if (!init.empty()) dfs(w, init, 0, 0);
  return result;
}

OriginContainment origin_containment(const NormalOneWay& t1, const NormalOneWay& t2, std::size_t cap) {
  require_same(t1.input(), t2.input(), "origin_containment input");
  require_same(t1.output(), t2.output(), "origin_containment output");
  auto r = containment(sync_language(t1), sync_language(t2), cap);
  if (r.holds) return {true, std::nullopt};
  return {false, decode(*r.witness, t1.input().size())};
}

bool origin_equivalent(const NormalOneWay& t1, const NormalOneWay& t2, std::size_t cap) {
  return origin_containment(t1, t2, cap).holds && origin_containment(t2, t1, cap).holds;
}

bool classical_member(const NormalOneWay& t, const Word& u, const Word& v) {
  std::set<std::tuple<State, std::size_t, std::size_t>> seen;
  std::deque<std::tuple<State, std::size_t, std::size_t>> queue;
  for (State s : t.initial()) {
    seen.insert({s, 0, 0});
    queue.push_back({s, 0, 0});
  }
  std::vector<std::vector<const NormalEdge*>> from(t.num_states());
  for (const auto& e : t.edges()) from[e.src].push_back(&e);
  while (!queue.empty()) {
    auto [q, i, j] = queue.front();
    queue.pop_front();
    if (i == u.size() && j == v.size() && t.is_final(q)) return true;
    for (const NormalEdge* e : from[q]) {
      std::size_t i2 = i;
      if (e->in != kEps) {
        if (i == u.size() || u[i] != e->in) continue;
        ++i2;
      }
      // Output before the first letter has no origin.
      if (!e->out.empty() && i2 == 0) continue;
      if (j + e->out.size() > v.size() || !std::equal(e->out.begin(), e->out.end(), v.begin() + j)) continue;
      std::tuple<State, std::size_t, std::size_t> nxt{e->dst, i2, j + e->out.size()};
      if (seen.insert(nxt).second) queue.push_back(nxt);
    }
  }
  return false;
}

std::set<Word> outputs_of(const NormalOneWay& t, const Word& u) {
  LetterForm f = letter_form(t);
  auto from = f.edges_from();
  std::set<std::pair<State, Word>> cur;
  for (State s : f.initial) cur.insert({s, {}});
  for (Symbol a : u) {
    std::set<std::pair<State, Word>> nxt;
    for (const auto& [q, w] : cur)
      for (int i : from[q]) {
        const auto& e = f.edges[i];
        if (e.in != a) continue;
        Word w2 = w;
        w2.insert(w2.end(), e.out.begin(), e.out.end());
        nxt.insert({e.dst, w2});
      }
    cur = std::move(nxt);
  }
  std::set<Word> result;
  for (const auto& [q, w] : cur)
    for (const auto& fw : f.finals[q]) {
      if (u.empty() && !fw.empty()) continue;
      Word w2 = w;
      w2.insert(w2.end(), fw.begin(), fw.end());
      result.insert(w2);
    }
  return result;
}

}  // namespace oresync
