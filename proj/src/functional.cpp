#include "oresync/functional.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "oresync/errors.hpp"

namespace oresync {

namespace {

struct EdgePath {
  std::vector<const NormalEdge*> edges;
};

// Shortest edge path from any state in `from` to a state satisfying `goal`.
std::optional<EdgePath> find_path(const NormalOneWay& t, const std::vector<State>& from,
                                  const std::function<bool(State)>& goal, bool eps_only = false) {
  std::vector<const NormalEdge*> via(t.num_states(), nullptr);
  std::vector<char> seen(t.num_states(), 0);
  std::deque<State> queue;
  for (State s : from) {
    seen[s] = 1;
    queue.push_back(s);
  }
  std::vector<std::vector<const NormalEdge*>> out(t.num_states());
  for (const auto& e : t.edges())
    if (!eps_only || e.in == kEps) out[e.src].push_back(&e);
  while (!queue.empty()) {
    State x = queue.front();
    queue.pop_front();
    if (goal(x)) {
      EdgePath p;
      while (via[x]) {
        p.edges.push_back(via[x]);
        x = via[x]->src;
      }
      std::reverse(p.edges.begin(), p.edges.end());
      return p;
    }
    for (const NormalEdge* e : out[x])
      if (!seen[e->dst]) {
        seen[e->dst] = 1;
        via[e->dst] = e;
        queue.push_back(e->dst);
      }
  }
  return std::nullopt;
}

void append(Word& in, Word& out, const std::vector<const NormalEdge*>& edges) {
  for (const NormalEdge* e : edges) {
    if (e->in != kEps) in.push_back(e->in);
    out.insert(out.end(), e->out.begin(), e->out.end());
  }
}

FunctionalityResult pumping_witness(const NormalOneWay& raw) {
  NormalOneWay t = trim(raw);
  State q = *productive_cycle(t);
  const NormalEdge* loud = nullptr;
  for (const auto& e : t.edges())
    if (e.in == kEps && !e.out.empty() && e.src == q) {
      auto back = find_path(t, {e.dst}, [&](State x) { return x == q; }, true);
      if (back) {
        loud = &e;
        break;
      }
    }
  auto back = find_path(t, {loud->dst}, [&](State x) { return x == q; }, true);
  auto pre = find_path(t, {t.initial().begin(), t.initial().end()}, [&](State x) { return x == q; });
  auto post = find_path(t, {q}, [&](State x) { return t.is_final(x); });
  FunctionalityResult r{false, {}, {}, {}};
  Word in1, in2;
  append(in1, r.output1, pre->edges);
  append(in2, r.output2, pre->edges);
  append(in2, r.output2, {loud});
  append(in2, r.output2, back->edges);
  append(in1, r.output1, post->edges);
  append(in2, r.output2, post->edges);
  r.input = in1;
  return r;
}

// Pairs of states that can reach a pair of final states on a common input.
std::vector<std::vector<char>> coreachable_pairs(const LetterForm& f) {
  int n = f.num_states;
  std::vector<std::vector<char>> co(n, std::vector<char>(n, 0));
  std::vector<std::pair<State, State>> stack;
  for (State p = 0; p < n; ++p)
    for (State q = 0; q < n; ++q)
      if (!f.finals[p].empty() && !f.finals[q].empty()) {
        co[p][q] = 1;
        stack.push_back({p, q});
      }
  while (!stack.empty()) {
    auto [p, q] = stack.back();
    stack.pop_back();
    for (const auto& e1 : f.edges) {
      if (e1.dst != p) continue;
      for (const auto& e2 : f.edges)
        if (e2.dst == q && e2.in == e1.in && !co[e1.src][e2.src]) {
          co[e1.src][e2.src] = 1;
          stack.push_back({e1.src, e2.src});
        }
    }
  }
  return co;
}

FunctionalityResult witness_from_input(const NormalOneWay& t, const Word& u) {
  auto outs = outputs_of(t, u);
  if (outs.size() < 2) throw Error("internal: functionality witness not confirmed");
  auto it = outs.begin();
  FunctionalityResult r{false, u, *it, *std::next(it)};
  return r;
}

}  // namespace

FunctionalityResult is_functional(const NormalOneWay& t, std::size_t cap) {
  if (!t.real_time()) return pumping_witness(t);
  LetterForm f = letter_form(t);
  auto co = coreachable_pairs(f);
  auto from = f.edges_from();
  // Node: both states, which side is ahead (0: first, 1: second) and the unmatched suffix.
  using Node = std::tuple<State, State, int, Word>;
  std::map<Node, int> index;
  std::vector<Node> nodes;
  std::vector<std::pair<int, Symbol>> parent;
  auto input_of = [&](int i) {
    Word u;
    for (; parent[i].first >= 0; i = parent[i].first) u.push_back(parent[i].second);
    std::reverse(u.begin(), u.end());
    return u;
  };
  auto add = [&](Node n, int par, Symbol a) {
    if (index.count(n)) return;
    if (nodes.size() >= cap) throw CapacityError("functionality check exceeded " + std::to_string(cap) + " nodes");
    index.emplace(n, static_cast<int>(nodes.size()));
    nodes.push_back(std::move(n));
    parent.push_back({par, a});
  };
  // Combines outputs o1 and o2 after the current delay; nullopt on mismatch.
  auto advance = [](int side, const Word& pending, const Word& o1, const Word& o2) -> std::optional<std::pair<int, Word>> {
    Word x = side == 0 ? pending : Word{}, y = side == 1 ? pending : Word{};
    x.insert(x.end(), o1.begin(), o1.end());
    y.insert(y.end(), o2.begin(), o2.end());
    std::size_t k = std::min(x.size(), y.size());
    if (!std::equal(x.begin(), x.begin() + k, y.begin())) return std::nullopt;
    if (x.size() >= y.size()) return std::make_pair(0, Word(x.begin() + k, x.end()));
    return std::make_pair(1, Word(y.begin() + k, y.end()));
  };
  for (State p : f.initial)
    for (State q : f.initial)
      if (co[p][q]) add({p, q, 0, {}}, -1, -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [p, q, side, pending] = nodes[i];
    for (const auto& w1 : f.finals[p])
      for (const auto& w2 : f.finals[q]) {
        auto r = advance(side, pending, w1, w2);
        if (!r || !r->second.empty()) return witness_from_input(t, input_of(static_cast<int>(i)));
      }
    for (int e1 : from[p])
      for (int e2 : from[q]) {
        const auto &a = f.edges[e1], &b = f.edges[e2];
        if (a.in != b.in || !co[a.dst][b.dst]) continue;
        auto r = advance(side, pending, a.out, b.out);
        if (!r) {
          Word u = input_of(static_cast<int>(i));
          u.push_back(a.in);
          // Complete u to an input accepted from both targets.
          std::vector<std::pair<State, State>> cur{{a.dst, b.dst}};
          std::map<std::pair<State, State>, std::pair<std::pair<State, State>, Symbol>> via;
          std::deque<std::pair<State, State>> queue{{a.dst, b.dst}};
          via[{a.dst, b.dst}] = {{-1, -1}, -1};
          std::pair<State, State> goal{-1, -1};
          while (!queue.empty()) {
            auto x = queue.front();
            queue.pop_front();
            if (!f.finals[x.first].empty() && !f.finals[x.second].empty()) {
              goal = x;
              break;
            }
            for (int g1 : from[x.first])
              for (int g2 : from[x.second]) {
                const auto &c = f.edges[g1], &d = f.edges[g2];
                if (c.in != d.in || via.count({c.dst, d.dst})) continue;
                via[{c.dst, d.dst}] = {x, c.in};
                queue.push_back({c.dst, d.dst});
              }
          }
          Word suffix;
          for (auto x = goal; via.at(x).second >= 0; x = via.at(x).first) suffix.push_back(via.at(x).second);
          std::reverse(suffix.begin(), suffix.end());
          u.insert(u.end(), suffix.begin(), suffix.end());
          return witness_from_input(t, u);
        }
        add({a.dst, b.dst, r->first, r->second}, static_cast<int>(i), a.in);
      }
  }
  return {};
}

bool containment_functional(const NormalOneWay& t1, const NormalOneWay& t2, std::size_t cap) {
  for (const auto* t : {&t1, &t2}) {
    auto r = is_functional(*t, cap);
    if (!r.functional)
      throw PreconditionError("not functional: input '" + t->input().render(r.input) + "' has outputs '" +
                              t->output().render(r.output1) + "' and '" + t->output().render(r.output2) + "'");
  }
  if (!containment(domain(t1), domain(t2), cap).holds) return false;
  return is_functional(disjoint_sum(t1, t2), cap).functional;
}

long long count_runs(const NormalOneWay& t, const Word& u, long long limit) {
  int n = t.num_states();
  int len = static_cast<int>(u.size());
  auto id = [&](State q, int i) { return i * n + q; };
  int total = n * (len + 1);
  std::vector<std::vector<int>> succ(total), pred(total);
  for (const auto& e : t.edges())
    for (int i = 0; i <= len; ++i) {
      if (e.in == kEps) {
        succ[id(e.src, i)].push_back(id(e.dst, i));
      } else if (i < len && u[i] == e.in) {
        succ[id(e.src, i)].push_back(id(e.dst, i + 1));
      }
    }
  for (int v = 0; v < total; ++v)
    for (int w : succ[v]) pred[w].push_back(v);
  std::vector<char> reach(total, 0), co(total, 0);
  std::vector<int> stack;
  for (State s : t.initial()) {
    reach[id(s, 0)] = 1;
    stack.push_back(id(s, 0));
  }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : succ[v])
      if (!reach[w]) {
        reach[w] = 1;
        stack.push_back(w);
      }
  }
  for (State s = 0; s < n; ++s)
    if (t.is_final(s)) {
      co[id(s, len)] = 1;
      stack.push_back(id(s, len));
    }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : pred[v])
      if (!co[w]) {
        co[w] = 1;
        stack.push_back(w);
      }
  }
  // Paths counted over useful configurations; a cycle among them means infinitely many runs.
  std::vector<int> color(total, 0);
  std::vector<long long> ways(total, -1);
  bool cyclic = false;
  std::function<long long(int)> count = [&](int v) -> long long {
    if (color[v] == 2) return ways[v];
    if (color[v] == 1) {
      cyclic = true;
      return limit;
    }
    color[v] = 1;
    long long c = (v / n == len && t.is_final(v % n)) ? 1 : 0;
    for (int w : succ[v])
      if (reach[w] && co[w]) c = std::min(limit, c + count(w));
    color[v] = 2;
    ways[v] = c;
    return c;
  };
  long long sum = 0;
  for (State s : t.initial())
    if (co[id(s, 0)]) sum = std::min(limit, sum + count(id(s, 0)));
  return cyclic ? limit : sum;
}

bool ambiguity_at_most(const NormalOneWay& t, int k, int n) {
  if (k < 1) throw PreconditionError("ambiguity bound must be at least 1");
  std::vector<Word> layer{{}};
  for (int len = 0; len <= n; ++len) {
    std::vector<Word> next;
    for (const auto& u : layer) {
      if (count_runs(t, u, k + 1) > k) return false;
      if (len < n)
        for (Symbol a = 0; a < t.input().size(); ++a) {
          Word v = u;
          v.push_back(a);
          next.push_back(v);
        }
    }
    layer = std::move(next);
  }
  return true;
}

}  // namespace oresync
