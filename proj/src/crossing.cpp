// One-way simulation of an unambiguous two-way transducer by guessing, at every letter, the
// transitions that read it. Entries carry a phase: how many marked events happened before them.

#include <deque>
#include <functional>
#include <unordered_map>

#include "oresync/hash.hpp"
#include "oresync/parikh.hpp"

namespace oresync {

Alphabet marked_letters(const Alphabet& in) {
  std::vector<std::string> names;
  for (Symbol a = 0; a < in.size(); ++a) {
    names.push_back(in.name(a));
    names.push_back(in.name(a) + "'");
  }
  return Alphabet(std::move(names));
}

namespace {

using Key = std::vector<int>;

struct Entry {
  int src, edge, phase, dep;
};

struct Cross {
  bool right;
  State q;
  int phase;
  bool operator==(const Cross&) const = default;
};

// Key layout: [kind, seen, (src, edge, phase, dep)*]; kind 0 is the left endmarker, 1 an input letter.
class CrossingScan {
 public:
  enum class Mode { Decode, Chain };

  CrossingScan(const TwoWayTransducer& t, Mode mode, std::vector<int> index)
      : t_(t), mode_(mode), index_(std::move(index)), by_(t.num_states) {
    for (int i = 0; i < static_cast<int>(t.edges.size()); ++i) by_[t.edges[i].src].push_back(i);
  }

  int marks() const { return static_cast<int>(index_.size()); }

  std::vector<Key> initial() const {
    std::vector<Key> out;
    std::vector<Entry> cur;
    std::vector<char> used(t_.num_states, 0);
    std::function<void(int)> grow = [&](int phase) {
      out.push_back(encode(0, 0, cur));
      for (State q = 0; q < t_.num_states; ++q) {
        if (!t_.left_reading[q] || used[q]) continue;
        for (int e : by_[q]) {
          if (t_.edges[e].sym != kLeftMarker) continue;
          for (int ph = phase; ph <= marks(); ++ph) {
            used[q] = 1;
            cur.push_back({q, e, ph, ph});
            grow(ph);
            cur.pop_back();
            used[q] = 0;
          }
        }
      }
    };
    grow(0);
    return out;
  }

  // Successors on letter a with the given marks (bit m set when mark m sits here), with weights.
  std::vector<std::pair<Key, long>> step(const Key& k, Symbol a, int bits) const {
    std::vector<std::pair<Key, long>> out;
    const int seen = k[1];
    if (seen & bits) return out;
    const bool first = k[0] == 0;
    const auto boundary = right_boundary(k);
    std::vector<Entry> cur;
    std::vector<char> used(t_.num_states, 0);
    // pos: next boundary crossing; dir: 0 none, 1 departed right, -1 departed left.
    std::function<void(std::size_t, int, int, int, int)> grow = [&](std::size_t pos, int dir, int phase,
                                                                    int produced, int fired) {
      if (dir == 1 && pos == boundary.size() && fired == bits) {
        long w = 0;
        for (const auto& e : cur)
          if (mode_ == Mode::Decode && e.phase == 0) w += static_cast<long>(t_.edges[e.edge].out.size());
        out.push_back({encode(1, seen | bits, cur), w});
      }
      auto extend = [&](State src, int ph, std::size_t npos) {
        if (used[src] || ph < phase) return;
        for (int e : by_[src]) {
          const auto& edge = t_.edges[e];
          if (edge.sym != a) continue;
          const bool productive = !edge.out.empty();
          int count = produced + (productive ? 1 : 0), events = 0, nfired = fired;
          bool ok = true;
          for (int m = 0; m < marks(); ++m)
            if ((bits >> m & 1) && productive && count == index_[m]) {
              if (ph != m) ok = false;
              ++events;
              nfired |= 1 << m;
            }
          if (!ok || events > 1) continue;
          if (mode_ == Mode::Chain && productive && ph == 1 && events == 0) continue;
          const int dep = ph + events;
          std::size_t after = npos;
          const bool left = t_.left_reading[edge.dst];
          if (left) {
            if (after >= boundary.size() || !(boundary[after] == Cross{false, edge.dst, dep})) continue;
            ++after;
          }
          used[src] = 1;
          cur.push_back({src, e, ph, dep});
          grow(after, left ? -1 : 1, dep, count, nfired);
          cur.pop_back();
          used[src] = 0;
        }
      };
      if (cur.empty() && first) {
        for (State q : t_.initial) extend(q, 0, pos);
      } else if (dir == 1) {
        for (State q = 0; q < t_.num_states; ++q)
          if (t_.left_reading[q])
            for (int ph = phase; ph <= marks(); ++ph) extend(q, ph, pos);
      } else if (pos < boundary.size() && boundary[pos].right) {
        extend(boundary[pos].q, boundary[pos].phase, pos + 1);
      }
    };
    grow(0, 0, 0, 0, 0);
    return out;
  }

  // The sequence can be followed by a right endmarker sequence that ends the run.
  bool accepting(const Key& k) const {
    if (k[1] != (1 << marks()) - 1) return false;
    const bool first = k[0] == 0;
    const auto boundary = right_boundary(k);
    std::vector<char> used(t_.num_states, 0);
    std::function<bool(std::size_t, bool)> close = [&](std::size_t pos, bool empty) -> bool {
      State src;
      std::size_t npos = pos;
      int ph = 0;
      if (empty && first) {
        for (State q : t_.initial) {
          used[q] = 1;
          bool r = arrive(q, 0, pos, boundary, close);
          used[q] = 0;
          if (r) return true;
        }
        return false;
      }
      if (pos >= boundary.size() || !boundary[pos].right) return false;
      src = boundary[pos].q;
      ph = boundary[pos].phase;
      ++npos;
      if (used[src]) return false;
      used[src] = 1;
      bool r = arrive(src, ph, npos, boundary, close);
      used[src] = 0;
      return r;
    };
    return close(0, true);
  }

 private:
  bool arrive(State src, int ph, std::size_t pos, const std::vector<Cross>& boundary,
              const std::function<bool(std::size_t, bool)>& close) const {
    if (t_.final.count(src) && pos == boundary.size()) return true;
    for (int e : by_[src]) {
      const auto& edge = t_.edges[e];
      if (edge.sym != kRightMarker) continue;
      if (pos < boundary.size() && boundary[pos] == Cross{false, edge.dst, ph} && close(pos + 1, false))
        return true;
    }
    return false;
  }

  static Key encode(int kind, int seen, const std::vector<Entry>& es) {
    Key k{kind, seen};
    for (const auto& e : es) k.insert(k.end(), {e.src, e.edge, e.phase, e.dep});
    return k;
  }

  // Crossings of the boundary right of the letter, in run order, seen from that letter.
  std::vector<Cross> right_boundary(const Key& k) const {
    std::vector<Cross> b;
    for (std::size_t i = 2; i + 4 <= k.size(); i += 4) {
      const int src = k[i], edge = k[i + 1], phase = k[i + 2], dep = k[i + 3];
      if (t_.left_reading[src]) b.push_back({false, src, phase});
      if (edge >= 0 && !t_.left_reading[t_.edges[edge].dst]) b.push_back({true, t_.edges[edge].dst, dep});
    }
    return b;
  }

  const TwoWayTransducer& t_;
  Mode mode_;
  std::vector<int> index_;
  std::vector<std::vector<int>> by_;
};

void check_scannable(const TwoWayTransducer& t) {
  validate(t);
  if (t.guess.size() != 0) throw PreconditionError("crossing-sequence constructions need a transducer without common guess");
  for (const auto& e : t.edges)
    if (e.out.size() > 1) throw PreconditionError("crossing-sequence constructions need outputs of at most one letter");
}

// Explores the scan; symbols are decoded into (letter, mark bits).
template <class Emit>
void explore(const CrossingScan& scan, int alphabet_size, const std::function<std::pair<Symbol, int>(Symbol)>& decode,
             std::size_t cap, Emit&& emit, std::function<State()> new_state,
             const std::function<void(State, bool, bool)>& flags) {
  std::unordered_map<Key, State, VecHash> id;
  std::deque<Key> todo;
  auto get = [&](const Key& k, bool init) {
    auto it = id.find(k);
    if (it != id.end()) return it->second;
    if (id.size() >= cap) throw CapacityError("crossing-sequence automaton exceeds capacity");
    State s = new_state();
    id.emplace(k, s);
    flags(s, init, scan.accepting(k));
    todo.push_back(k);
    return s;
  };
  for (const auto& k : scan.initial()) get(k, true);
  while (!todo.empty()) {
    Key k = todo.front();
    todo.pop_front();
    const State from = id.at(k);
    for (Symbol s = 0; s < alphabet_size; ++s) {
      auto [a, bits] = decode(s);
      for (auto& [nk, w] : scan.step(k, a, bits)) emit(from, s, get(nk, false), w);
    }
  }
}

}  // namespace

ParikhAutomaton decoder(const TwoWayTransducer& t, int i, std::size_t cap) {
  check_scannable(t);
  if (i < 1) throw PreconditionError("decoder index starts at 1");
  CrossingScan scan(t, CrossingScan::Mode::Decode, {i});
  Alphabet sigma = marked_letters(t.input);
  ParikhAutomaton pa(sigma, 1);
  explore(
      scan, sigma.size(), [](Symbol s) { return std::pair<Symbol, int>{s / 2, s % 2}; }, cap,
      [&](State from, Symbol s, State to, long w) { pa.add_transition(from, s, to, {w}); },
      [&] { return pa.add_state(); },
      [&](State s, bool init, bool fin) {
        if (init) pa.set_initial(s);
        if (fin) pa.set_final(s);
      });
  return parikh_trim(pa);
}

Nfa output_chain(const TwoWayTransducer& t, int j, int j2, std::size_t cap) {
  check_scannable(t);
  if (j < 1 || j2 < 1) throw PreconditionError("chain indices start at 1");
  CrossingScan scan(t, CrossingScan::Mode::Chain, {j, j2});
  Alphabet sigma = marked_alphabet(t.input);
  Nfa n(sigma);
  explore(
      scan, sigma.size(),
      [](Symbol s) {
        return std::pair<Symbol, int>{unmarked(s), (first_mark(s) ? 1 : 0) | (second_mark(s) ? 2 : 0)};
      },
      cap, [&](State from, Symbol s, State to, long) { n.add_transition(from, s, to); },
      [&] { return n.add_state(); },
      [&](State s, bool init, bool fin) {
        if (init) n.set_initial(s);
        if (fin) n.set_final(s);
      });
  return trim(n);
}

}  // namespace oresync
