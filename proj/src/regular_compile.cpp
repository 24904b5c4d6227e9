// Rational resynchronizers as 1-bounded regular ones.
//
// The input annotation of position y is the block of the run that consumes the y-th input letter: its
// input transition followed by the transitions consuming the outputs of origin y. Long stretches of
// transitions that consume and produce outputs are cut into an explicit prefix of `margin` transitions, a
// pseudo item standing for a path of at least margin+1 transitions, and an explicit suffix of `margin`
// transitions, where margin is the largest absolute lag. Every output is annotated by the item consuming it
// and by the offset of its producer among the output-producing items since the last input production.

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <set>
#include <tuple>

#include "oresync/regular.hpp"

namespace oresync {

namespace {

using Key = StepAutomaton::Key;

struct Item {
  bool pseudo = false;
  SyncEdge edge{};  // explicit items
  State p = 0, q = 0;
  State src() const { return pseudo ? p : edge.src; }
  State dst() const { return pseudo ? q : edge.dst; }
};

struct Factor {
  std::vector<Item> items;  // items[0] consumes the input letter
  State src() const { return items.front().src(); }
  State dst() const { return items.back().dst(); }
};

enum class Kind { Explicit, Start, Mid, End, StartEnd };

struct OutParam {
  int kt = 1;   // offset of the producing item
  int sub = 0;  // position inside a pseudo producer, 0 for explicit producers
  Kind kind = Kind::Explicit;
  State p = -1, q = -1;
  bool fst = false, lst = false;
};

struct Compiled {
  RationalResync r;
  int sigma = 0;
  int margin = 0;  // largest absolute lag
  int kt_max = 0;
  std::vector<Factor> factors;
  std::vector<OutParam> params;
  // Per factor, the derived item facts used by the relations.
  struct ItemInfo {
    bool consumes_output, produces_input, produces_output;
    int lag_before, lag_after;
    Symbol consumed;  // output letter of an explicit consumer, -1 otherwise
  };
  std::vector<std::vector<ItemInfo>> info;
  std::shared_ptr<const Alphabet> marked;
  int input_params = 0, output_params = 0;

  bool in_is_input(const SyncEdge& e) const { return e.in < sigma; }
  bool out_is_input(const SyncEdge& e) const { return e.out < sigma; }
};

// ---------------------------------------------------------------------------
// Alphabet construction

std::string edge_name(const Compiled& c, const SyncEdge& e) {
  Alphabet s = c.r.sync();
  return std::to_string(e.src) + s.name(e.in) + "|" + s.name(e.out) + std::to_string(e.dst);
}

std::string factor_name(const Compiled& c, const Factor& f) {
  std::string s;
  for (const auto& it : f.items) {
    if (!s.empty()) s += ",";
    s += it.pseudo ? "[" + std::to_string(it.p) + "~" + std::to_string(it.q) + "]" : edge_name(c, it.edge);
  }
  return s;
}

std::string param_name(const OutParam& g) {
  std::string s = g.fst ? "<" : "";
  switch (g.kind) {
    case Kind::Explicit: s += "e" + std::to_string(g.kt) + "." + std::to_string(g.sub); break;
    case Kind::Start: s += "s" + std::to_string(g.kt) + "." + std::to_string(g.p); break;
    case Kind::Mid: s += "m" + std::to_string(g.kt); break;
    case Kind::End: s += "f" + std::to_string(g.kt) + "." + std::to_string(g.q); break;
    case Kind::StartEnd: s += "sf" + std::to_string(g.kt) + "." + std::to_string(g.p) + "." + std::to_string(g.q); break;
  }
  return g.lst ? s + ">" : s;
}

// States reachable from p by a path of at least n transitions that consume and produce outputs.
std::vector<std::vector<char>> long_reach(const Compiled& c, int n) {
  const int k = c.r.num_states;
  std::vector<std::vector<State>> succ(k);
  for (const auto& e : c.r.edges)
    if (!c.in_is_input(e) && !c.out_is_input(e)) succ[e.src].push_back(e.dst);
  std::vector<std::vector<char>> out(k, std::vector<char>(k, 0));
  for (State p = 0; p < k; ++p) {
    std::vector<char> cur(k, 0);
    cur[p] = 1;
    for (int i = 0; i < n; ++i) {
      std::vector<char> nx(k, 0);
      for (State s = 0; s < k; ++s)
        if (cur[s])
          for (State d : succ[s]) nx[d] = 1;
      cur = std::move(nx);
    }
    std::vector<State> stack;
    for (State s = 0; s < k; ++s)
      if (cur[s]) stack.push_back(s);
    while (!stack.empty()) {
      State s = stack.back();
      stack.pop_back();
      for (State d : succ[s])
        if (!cur[d]) {
          cur[d] = 1;
          stack.push_back(d);
        }
    }
    out[p] = std::move(cur);
  }
  return out;
}

void enumerate_factors(Compiled& c, std::optional<int> bound) {
  const int L = c.margin;
  std::vector<std::vector<const SyncEdge*>> from(c.r.num_states);
  for (const auto& e : c.r.edges) from[e.src].push_back(&e);
  auto reach = long_reach(c, L + 1);
  Factor f;

  // Bounded blocks: the input transition and at most `bound` explicit transitions.
  std::function<void(State, int)> bounded = [&](State s, int left) {
    c.factors.push_back(f);
    if (left == 0) return;
    for (const SyncEdge* e : from[s]) {
      if (c.in_is_input(*e)) continue;
      f.items.push_back({false, *e, 0, 0});
      bounded(e->dst, left - 1);
      f.items.pop_back();
    }
  };
  // Canonical stretches: at most 3L explicit transitions, or L explicit, a pseudo item and L explicit.
  // `n` counts explicit transitions in the current stretch, `after` those following its pseudo item (-1: none).
  std::function<void(State, int, int)> general = [&](State s, int n, int after) {
    if (after < 0 || after == L) c.factors.push_back(f);
    for (const SyncEdge* e : from[s]) {
      if (c.in_is_input(*e)) continue;
      f.items.push_back({false, *e, 0, 0});
      if (c.out_is_input(*e)) {
        if (after < 0 || after == L) general(e->dst, 0, -1);
      } else if (after < 0 ? n < 3 * L : after < L) {
        general(e->dst, n + 1, after < 0 ? -1 : after + 1);
      }
      f.items.pop_back();
    }
    if (after < 0 && n == L)
      for (State q = 0; q < c.r.num_states; ++q)
        if (reach[s][q]) {
          f.items.push_back({true, {}, s, q});
          general(q, n, 0);
          f.items.pop_back();
        }
  };

  for (const auto& e : c.r.edges) {
    if (!c.in_is_input(e)) continue;
    f.items = {{false, e, 0, 0}};
    if (bound)
      bounded(e.dst, *bound);
    else
      general(e.dst, 0, -1);
  }
}

// Output parameters whose producer offsets occur on some chain of factors from an initial state.
void enumerate_params(Compiled& c, bool bounded) {
  const int L = c.margin, cap = c.kt_max + 1;
  std::set<int> explicit_kt, pseudo_kt;
  std::set<std::pair<int, State>> start_kt, end_kt;
  std::set<std::tuple<int, State, State>> both_kt;
  // (state, offset) pairs at block boundaries.
  std::set<std::pair<State, int>> seen;
  std::vector<std::pair<State, int>> todo;
  for (State s : c.r.initial)
    if (seen.insert({s, 0}).second) todo.push_back({s, 0});
  while (!todo.empty()) {
    auto [s, t0] = todo.back();
    todo.pop_back();
    for (const auto& f : c.factors) {
      if (f.src() != s) continue;
      int t = t0;
      for (const auto& it : f.items) {
        const bool to_input = !it.pseudo && c.out_is_input(it.edge);
        t = to_input ? 0 : std::min(t + 1, cap);
        if (to_input || t > c.kt_max) continue;
        if (!it.pseudo) {
          explicit_kt.insert(t);
          continue;
        }
        pseudo_kt.insert(t);
        start_kt.insert({t, it.p});
        end_kt.insert({t, it.q});
        both_kt.insert({t, it.p, it.q});
      }
      if (seen.insert({f.dst(), t}).second) todo.push_back({f.dst(), t});
    }
  }
  for (int fst = 0; fst < 2; ++fst)
    for (int lst = 0; lst < 2; ++lst) {
      for (int kt : explicit_kt) c.params.push_back({kt, 0, Kind::Explicit, -1, -1, fst == 1, lst == 1});
      if (bounded) continue;
      for (int kt : pseudo_kt)
        for (int sub = 1; sub <= L; ++sub) c.params.push_back({kt, sub, Kind::Explicit, -1, -1, fst == 1, lst == 1});
      if (!lst)
        for (auto [kt, p] : start_kt) c.params.push_back({kt, 0, Kind::Start, p, -1, fst == 1, false});
      if (!fst)
        for (auto [kt, q] : end_kt) c.params.push_back({kt, 0, Kind::End, -1, q, false, lst == 1});
      if (L == 0)
        for (auto [kt, p, q] : both_kt) c.params.push_back({kt, 0, Kind::StartEnd, p, q, fst == 1, lst == 1});
      if (!fst && !lst)
        for (int kt : pseudo_kt) c.params.push_back({kt, 0, Kind::Mid, -1, -1, false, false});
    }
}

void fill_info(Compiled& c) {
  for (const auto& f : c.factors) {
    std::vector<Compiled::ItemInfo> v;
    for (std::size_t i = 0; i < f.items.size(); ++i) {
      const Item& it = f.items[i];
      Compiled::ItemInfo x{};
      x.lag_before = c.r.lag[it.src()];
      x.lag_after = c.r.lag[it.dst()];
      if (it.pseudo) {
        x.consumes_output = x.produces_output = true;
        x.produces_input = false;
        x.consumed = -1;
      } else {
        x.consumes_output = !c.in_is_input(it.edge);
        x.produces_input = c.out_is_input(it.edge);
        x.produces_output = !x.produces_input;
        x.consumed = x.consumes_output ? it.edge.in - c.sigma : -1;
      }
      v.push_back(x);
    }
    c.info.push_back(std::move(v));
  }
}

// ---------------------------------------------------------------------------
// Locating the target origin of one output.

// Fields of a core state.
enum : int { kChain, kSeenY, kSinceZ, kUntilZ, kMode, kCount, kOffset, kBefore, kFound, kCoreSize };
// kMode: 0 idle, 1 producer chosen and counting, 2 consumer chosen and counting down, 3 resolved.
using CoreState = std::array<int, kCoreSize>;
// Successor core state and whether the core chose the current item as consumer.
using Branch = std::pair<CoreState, bool>;

class Core {
 public:
  Core(const Compiled& c, const OutParam& g, Symbol letter, bool implicit_y)
      : c_(c), g_(g), letter_(letter), implicit_(implicit_y) {}

  CoreState initial() const {
    CoreState k{};
    k[kChain] = -1;
    k[kSinceZ] = -1;
    k[kUntilZ] = -1;
    return k;
  }

  // Position entry; false kills the run.
  bool enter(CoreState& s, int factor, bool ymark, bool zmark) const {
    const Factor& f = c_.factors[factor];
    if (s[kChain] >= 0 && s[kChain] != f.src()) return false;
    s[kChain] = f.dst();
    if (s[kSinceZ] >= 0) s[kSinceZ] = std::min(s[kSinceZ] + 1, c_.margin + 1);
    if (zmark) {
      if (s[kSinceZ] >= 0) return false;
      s[kSinceZ] = 0;
    }
    if (s[kUntilZ] > 0) {
      if (--s[kUntilZ] == 0) {
        if (!zmark) return false;
        s[kUntilZ] = -1;
      } else if (zmark) {
        return false;
      }
    }
    if (ymark) {
      if (implicit_ || s[kSeenY]) return false;
      s[kSeenY] = 1;
    }
    return true;
  }

  // Appends the successors after one item.
  void item(const CoreState& s0, int factor, int index, bool yblock, std::vector<Branch>& out) const {
    const Item& it = c_.factors[factor].items[index];
    const auto& x = c_.info[factor][index];
    CoreState s = s0;
    s[kOffset] = x.produces_input ? 0 : std::min(s[kOffset] + 1, c_.kt_max + 1);
    Branch mid[2];
    int n = 0;
    if (x.consumes_output) {
      if (s[kFound]) {
        if (!g_.lst) mid[n++] = {s, false};
      } else {
        mid[n] = {s, false};
        mid[n++].first[kBefore] = 1;
      }
      if (!s[kFound] && (implicit_ || yblock) && !(g_.fst && s[kBefore])) {
        CoreState pick = s;
        pick[kFound] = 1;
        if (consume(pick, it, x)) mid[n++] = {pick, true};
      }
    } else {
      mid[n++] = {s, false};
    }
    for (int i = 0; i < n; ++i) {
      if (x.produces_output)
        produce(mid[i].first, it, x, mid[i].second, out);
      else
        out.push_back(mid[i]);
    }
  }

  bool leave(const CoreState& s, bool yblock) const { return implicit_ || !yblock || s[kFound]; }

  bool accepting(const CoreState& s) const {
    return s[kFound] && s[kMode] == 3 && s[kUntilZ] == -1 && s[kSinceZ] >= 0 && (implicit_ || s[kSeenY]);
  }

 private:
  bool check_z(CoreState& s, int lag) const {
    if (lag >= 0) return s[kSinceZ] == lag;
    if (s[kSinceZ] >= 0 || s[kUntilZ] >= 0) return false;
    s[kUntilZ] = -lag;
    return true;
  }

  bool consume(CoreState& s, const Item& it, const Compiled::ItemInfo& x) const {
    if (g_.kind == Kind::Explicit) {
      if (it.pseudo || x.consumed != letter_) return false;
      const int lag = x.lag_before;
      if (s[kMode] == 1) {
        if (s[kCount] != lag) return false;
        s[kMode] = 3;
        return true;
      }
      if (s[kMode] != 0 || lag > 0) return false;
      s[kMode] = 2;
      s[kCount] = 1 - lag;
      return true;
    }
    if (!it.pseudo || s[kMode] != 0 || g_.sub != 0 || g_.kt != s[kOffset]) return false;
    if ((g_.kind == Kind::Start || g_.kind == Kind::StartEnd) && it.p != g_.p) return false;
    if ((g_.kind == Kind::End || g_.kind == Kind::StartEnd) && it.q != g_.q) return false;
    if (!check_z(s, x.lag_before)) return false;
    s[kMode] = 3;
    return true;
  }

  void produce(CoreState s, const Item& it, const Compiled::ItemInfo& x, bool chose, std::vector<Branch>& out) const {
    switch (s[kMode]) {
      case 1:
        if (it.pseudo || ++s[kCount] > c_.margin) return;
        break;
      case 2:
        if (it.pseudo) {
          if (g_.sub != s[kCount] || g_.kt != s[kOffset] || !check_z(s, x.lag_after)) return;
          s[kMode] = 3;
        } else if (--s[kCount] == 0) {
          if (g_.sub != 0 || g_.kt != s[kOffset] || !check_z(s, x.lag_after)) return;
          s[kMode] = 3;
        }
        break;
      case 0:
        // The producer may be this item, or a position inside it for pseudo items.
        if (!s[kFound] && g_.kind == Kind::Explicit && g_.kt == s[kOffset] &&
            (it.pseudo ? g_.sub >= 1 : g_.sub == 0)) {
          CoreState guess = s;
          if (check_z(guess, x.lag_after)) {
            guess[kMode] = 1;
            guess[kCount] = it.pseudo ? g_.sub : 1;
            out.push_back({guess, chose});
          }
        }
        break;
      default:
        break;
    }
    out.push_back({s, chose});
  }

  const Compiled& c_;
  OutParam g_;
  Symbol letter_;
  bool implicit_;
};

int factor_of(const Compiled& c, Symbol marked) { return unmarked(marked) % c.input_params; }

bool letter_fits(const Compiled& c, int factor, Symbol marked) {
  return c.factors[factor].items[0].edge.in == unmarked(marked) / c.input_params;
}

template <std::size_t N>
Key to_key(const std::array<int, N>& a) {
  return Key(a.begin(), a.end());
}

template <class T>
void dedup(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

class MoveRelation : public StepAutomaton {
 public:
  MoveRelation(std::shared_ptr<const Compiled> c, const OutParam& g, Symbol letter)
      : c_(std::move(c)), core_(*c_, g, letter, false) {}
  const Alphabet& alphabet() const override { return *c_->marked; }
  std::vector<Key> initial() const override { return {to_key(core_.initial())}; }
  std::vector<Key> step(const Key& s, Symbol sym) const override { return compute(s, sym); }
  bool accepting(const Key& s) const override {
    CoreState k;
    std::copy(s.begin(), s.end(), k.begin());
    return core_.accepting(k);
  }

 private:
  std::vector<Key> compute(const Key& s0, Symbol sym) const {
    const int f = factor_of(*c_, sym);
    if (!letter_fits(*c_, f, sym)) return {};
    const bool y = first_mark(sym);
    CoreState s;
    std::copy(s0.begin(), s0.end(), s.begin());
    if (!core_.enter(s, f, y, second_mark(sym))) return {};
    std::vector<CoreState> cur{s};
    std::vector<Branch> nx;
    for (int i = 0; i < static_cast<int>(c_->factors[f].items.size()); ++i) {
      nx.clear();
      for (const auto& k : cur) core_.item(k, f, i, y, nx);
      cur.clear();
      for (const auto& b : nx) cur.push_back(b.first);
      dedup(cur);
    }
    std::vector<Key> out;
    for (const auto& k : cur)
      if (core_.leave(k, y)) out.push_back(to_key(k));
    return out;
  }

  std::shared_ptr<const Compiled> c_;
  Core core_;
};

bool continues_pseudo(Kind k) { return k == Kind::Start || k == Kind::Mid; }

// Two cores locating consecutive outputs; the second consumer must directly follow the first.
class NextRelation : public StepAutomaton {
  using Pair = std::array<int, 2 * kCoreSize + 1>;  // both cores, then 0/1/2: neither, first, both chosen

 public:
  NextRelation(std::shared_ptr<const Compiled> c, const OutParam& g1, Symbol c1, const OutParam& g2, Symbol c2)
      : c_(std::move(c)), same_(continues_pseudo(g1.kind)), a_(*c_, g1, c1, true), b_(*c_, g2, c2, true) {}
  const Alphabet& alphabet() const override { return *c_->marked; }
  std::vector<Key> initial() const override { return {to_key(join(a_.initial(), b_.initial(), 0))}; }
  std::vector<Key> step(const Key& s, Symbol sym) const override { return compute(s, sym); }
  bool accepting(const Key& s) const override {
    CoreState ka, kb;
    std::copy(s.begin(), s.begin() + kCoreSize, ka.begin());
    std::copy(s.begin() + kCoreSize, s.begin() + 2 * kCoreSize, kb.begin());
    return s.back() == 2 && a_.accepting(ka) && b_.accepting(kb);
  }

 private:
  static Pair join(const CoreState& a, const CoreState& b, int flag) {
    Pair p;
    std::copy(a.begin(), a.end(), p.begin());
    std::copy(b.begin(), b.end(), p.begin() + kCoreSize);
    p.back() = flag;
    return p;
  }

  std::vector<Key> compute(const Key& s0, Symbol sym) const {
    const int f = factor_of(*c_, sym);
    if (!letter_fits(*c_, f, sym)) return {};
    CoreState ka, kb;
    std::copy(s0.begin(), s0.begin() + kCoreSize, ka.begin());
    std::copy(s0.begin() + kCoreSize, s0.begin() + 2 * kCoreSize, kb.begin());
    if (!a_.enter(ka, f, false, first_mark(sym)) || !b_.enter(kb, f, false, second_mark(sym))) return {};
    std::vector<Pair> cur{join(ka, kb, s0.back())}, nx;
    std::vector<Branch> ra, rb;
    for (int i = 0; i < static_cast<int>(c_->factors[f].items.size()); ++i) {
      const bool consuming = c_->info[f][i].consumes_output;
      nx.clear();
      for (const auto& k : cur) {
        CoreState x, y;
        std::copy(k.begin(), k.begin() + kCoreSize, x.begin());
        std::copy(k.begin() + kCoreSize, k.begin() + 2 * kCoreSize, y.begin());
        ra.clear();
        rb.clear();
        a_.item(x, f, i, true, ra);
        if (ra.empty()) continue;
        b_.item(y, f, i, true, rb);
        for (const auto& [na, pa] : ra)
          for (const auto& [nb, pb] : rb) {
            int fl = k.back();
            if (consuming) {
              if (same_) {
                if (pa != pb) continue;
                if (pa) fl = 2;
              } else if (fl == 0) {
                if (pb) continue;
                if (pa) fl = 1;
              } else if (fl == 1) {
                if (!pb) continue;
                fl = 2;
              }
            }
            nx.push_back(join(na, nb, fl));
          }
      }
      dedup(nx);
      std::swap(cur, nx);
    }
    std::vector<Key> out;
    for (const auto& k : cur) out.push_back(to_key(k));
    return out;
  }

  std::shared_ptr<const Compiled> c_;
  bool same_;
  Core a_, b_;
};

bool kinds_follow(Kind a, Kind b) {
  const bool b_continues = b == Kind::Mid || b == Kind::End;
  return continues_pseudo(a) == b_continues;
}

// ---------------------------------------------------------------------------
// Parameter automata

Nfa input_automaton(const Compiled& c, const Alphabet& annotated) {
  // State 0 before the first letter, 1 + q after a block ending in q.
  Nfa n(annotated, c.r.num_states + 1);
  n.set_initial(0);
  for (State s : c.r.initial)
    if (c.r.final[s]) n.set_final(0);
  for (State q = 0; q < c.r.num_states; ++q)
    if (c.r.final[q]) n.set_final(1 + q);
  for (int f = 0; f < static_cast<int>(c.factors.size()); ++f) {
    const Factor& fac = c.factors[f];
    const Symbol letter = fac.items[0].edge.in * c.input_params + f;
    if (c.r.initial.count(fac.src())) n.add_transition(0, letter, 1 + fac.dst());
    n.add_transition(1 + fac.src(), letter, 1 + fac.dst());
  }
  return n;
}

Nfa output_automaton(const Compiled& c, const Alphabet& annotated, int letters) {
  // 0 before the first output, 1 between items, 2 after the last output, then (state, count) inside a
  // pseudo item with count in 1..L+1.
  const int L = c.margin, k = c.r.num_states;
  auto inside = [&](State s, int cnt) { return 3 + s * (L + 1) + (std::min(cnt, L + 1) - 1); };
  Nfa n(annotated, 3 + k * (L + 1));
  n.set_initial(0);
  n.set_final(2);
  std::vector<std::vector<std::pair<Symbol, State>>> stretch(k);
  for (const auto& e : c.r.edges)
    if (!c.in_is_input(e) && !c.out_is_input(e)) stretch[e.src].push_back({e.in - c.sigma, e.dst});
  auto after = [](const OutParam& g) { return g.lst ? 2 : 1; };
  for (Symbol ch = 0; ch < letters; ++ch)
    for (int gi = 0; gi < static_cast<int>(c.params.size()); ++gi) {
      const OutParam& g = c.params[gi];
      const Symbol sym = ch * c.output_params + gi;
      const State from = g.fst ? 0 : 1;
      switch (g.kind) {
        case Kind::Explicit: n.add_transition(from, sym, after(g)); break;
        case Kind::Start:
          for (auto [d, s] : stretch[g.p])
            if (d == ch) n.add_transition(from, sym, inside(s, 1));
          break;
        case Kind::StartEnd:
          for (auto [d, s] : stretch[g.p])
            if (d == ch && s == g.q && L == 0) n.add_transition(from, sym, after(g));
          break;
        case Kind::Mid:
        case Kind::End:
          for (State s = 0; s < k; ++s)
            for (int cnt = 1; cnt <= L + 1; ++cnt)
              for (auto [d, t] : stretch[s]) {
                if (d != ch) continue;
                if (g.kind == Kind::Mid)
                  n.add_transition(inside(s, cnt), sym, inside(t, cnt + 1));
                else if (t == g.q && cnt + 1 >= L + 1)
                  n.add_transition(inside(s, cnt), sym, after(g));
              }
          break;
      }
    }
  return n;
}

Nfa empty_output_domain(const Compiled& c) {
  Nfa n(c.r.input, c.r.num_states);
  for (State s : c.r.initial) n.set_initial(s);
  for (State s = 0; s < c.r.num_states; ++s)
    if (c.r.final[s]) n.set_final(s);
  for (const auto& e : c.r.edges)
    if (c.in_is_input(e) && c.out_is_input(e)) n.add_transition(e.src, e.in, e.dst);
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<int> source_block_bound(const RationalResync& r) {
  const int k = r.num_states, sigma = r.input.size();
  // States entered by an input letter on a run whose first letter is an input letter.
  std::vector<char> seen(k, 0), entry(k, 0);
  std::vector<State> stack;
  for (State s : r.initial)
    for (const auto& e : r.edges)
      if (e.src == s && e.in < sigma && !seen[e.dst]) {
        seen[e.dst] = 1;
        stack.push_back(e.dst);
      }
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (const auto& e : r.edges)
      if (e.src == s && !seen[e.dst]) {
        seen[e.dst] = 1;
        stack.push_back(e.dst);
      }
  }
  for (const auto& e : r.edges)
    if (e.in < sigma && (seen[e.src] || r.initial.count(e.src))) entry[e.dst] = 1;
  // Longest path of output-consuming transitions from an entry state; a reachable cycle means unbounded.
  std::vector<std::vector<State>> succ(k);
  for (const auto& e : r.edges)
    if (e.in >= sigma) succ[e.src].push_back(e.dst);
  std::vector<int> color(k, 0), longest(k, 0);
  bool cyclic = false;
  std::function<void(State)> visit = [&](State s) {
    color[s] = 1;
    for (State d : succ[s]) {
      if (color[d] == 1) cyclic = true;
      if (color[d] == 0) visit(d);
      longest[s] = std::max(longest[s], longest[d] + 1);
    }
    color[s] = 2;
  };
  int best = 0;
  for (State s = 0; s < k; ++s)
    if (entry[s]) {
      if (color[s] == 0) visit(s);
      best = std::max(best, longest[s]);
    }
  if (cyclic) return std::nullopt;
  return best;
}

RegularResync from_rational(const RationalResync& raw) {
  auto c = std::make_shared<Compiled>();
  c->r = raw.lag.size() == static_cast<std::size_t>(raw.num_states) ? trim(raw) : validate(raw);
  const RationalResync& r = c->r;
  c->sigma = r.input.size();
  int lo = 0, hi = 0;
  for (int l : r.lag) {
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  c->margin = std::max(-lo, hi);
  const int L = c->margin;
  auto bound = source_block_bound(r);
  const int stretch = bound ? *bound : std::max(3 * L, 2 * L + 1);
  c->kt_max = (hi - lo + 1) * (1 + stretch);
  enumerate_factors(*c, bound);
  enumerate_params(*c, bound.has_value());
  fill_info(*c);

  std::vector<std::string> fnames, gnames;
  for (const auto& f : c->factors) fnames.push_back(factor_name(*c, f));
  for (const auto& g : c->params) gnames.push_back(param_name(g));
  if (fnames.empty()) fnames.push_back("none");
  RegularResync rr(r.input, r.output, Alphabet(fnames), Alphabet(gnames));
  c->input_params = rr.input_params.size();
  c->output_params = rr.output_params.size();
  c->marked = rr.marked_input;
  if (c->factors.empty()) {
    rr.ipar = empty_language(rr.annotated_input);
    for (State s : r.initial)
      if (r.final[s]) rr.ipar = single_word(rr.annotated_input, {});
  } else {
    rr.ipar = input_automaton(*c, rr.annotated_input);
  }
  rr.opar = output_automaton(*c, rr.annotated_output, r.output.size());
  rr.empty_domain = empty_output_domain(*c);

  std::shared_ptr<const Compiled> cc = c;
  const int np = c->output_params;
  rr.move = [cc, np](Symbol key) -> Relation {
    if (cc->factors.empty()) return nullptr;
    return std::make_shared<MoveRelation>(cc, cc->params[key % np], key / np);
  };
  rr.next = [cc, np](Symbol k1, Symbol k2) -> Relation {
    if (cc->factors.empty()) return nullptr;
    const OutParam &g1 = cc->params[k1 % np], &g2 = cc->params[k2 % np];
    if (g1.lst || g2.fst || !kinds_follow(g1.kind, g2.kind)) return nullptr;
    return std::make_shared<NextRelation>(cc, g1, k1 / np, g2, k2 / np);
  };
  return rr;
}

// ---------------------------------------------------------------------------
// Runs and their matchings

std::vector<std::vector<SyncEdge>> runs_on(const RationalResync& r, const Word& w) {
  std::vector<std::vector<const SyncEdge*>> from(r.num_states);
  for (const auto& e : r.edges) from[e.src].push_back(&e);
  std::vector<std::vector<SyncEdge>> out;
  std::vector<SyncEdge> run;
  std::function<void(State)> go = [&](State s) {
    if (run.size() == w.size()) {
      if (r.final[s]) out.push_back(run);
      return;
    }
    for (const SyncEdge* e : from[s])
      if (e->in == w[run.size()]) {
        run.push_back(*e);
        go(e->dst);
        run.pop_back();
      }
  };
  for (State s : r.initial) go(s);
  return out;
}

RunMatches run_match_relations(const RationalResync& r, const std::vector<SyncEdge>& run) {
  const int sigma = r.input.size();
  RunMatches m;
  // Producers of the k-th input and output letter, by run position.
  std::vector<int> in_prod, out_prod, in_cons;
  for (int i = 0; i < static_cast<int>(run.size()); ++i) {
    if (run[i].out < sigma)
      in_prod.push_back(i + 1);
    else
      out_prod.push_back(i + 1);
  }
  int ins = 0, outs = 0;
  std::vector<int> omatch_of(run.size() + 1, 0);
  for (int i = 0; i < static_cast<int>(run.size()); ++i) {
    if (run[i].in < sigma) {
      if (ins < static_cast<int>(in_prod.size())) m.imatch.insert({i + 1, in_prod[ins]});
      in_cons.push_back(i + 1);
      ++ins;
    } else {
      if (outs < static_cast<int>(out_prod.size())) {
        m.omatch.insert({i + 1, out_prod[outs]});
        omatch_of[i + 1] = out_prod[outs];
      }
      ++outs;
    }
  }
  // Source block start j, consumer i, producer k, last input production h <= k, its consumer l.
  int j = 0;
  for (int i = 1; i <= static_cast<int>(run.size()); ++i) {
    if (run[i - 1].in < sigma) {
      j = i;
      continue;
    }
    const int k = omatch_of[i];
    if (j == 0 || k == 0) continue;
    int h = 0, idx = -1;
    for (int t = 0; t < static_cast<int>(in_prod.size()) && in_prod[t] <= k; ++t) {
      h = in_prod[t];
      idx = t;
    }
    if (h == 0 || idx >= static_cast<int>(in_cons.size())) continue;
    m.match.insert({j, in_cons[idx]});
  }
  return m;
}

}  // namespace oresync
