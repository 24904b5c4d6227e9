#include "oresync/regular.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "oresync/hash.hpp"

namespace oresync {

using Key = StepAutomaton::Key;

Alphabet annotated_alphabet(const Alphabet& letters, const Alphabet& params) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(letters.size()) * params.size());
  for (const auto& a : letters.names())
    for (const auto& p : params.names()) names.push_back(a + ":" + p);
  return Alphabet(std::move(names));
}

Alphabet marked_alphabet(const Alphabet& annotated) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(annotated.size()) * 4);
  for (const auto& n : annotated.names())
    for (const char* m : {"/00", "/01", "/10", "/11"}) names.push_back(n + m);
  return Alphabet(std::move(names));
}

RegularResync::RegularResync(Alphabet in, Alphabet out, Alphabet in_params, Alphabet out_params)
    : input(std::move(in)),
      output(std::move(out)),
      input_params(std::move(in_params)),
      output_params(std::move(out_params)),
      annotated_input(annotated_alphabet(input, input_params)),
      annotated_output(annotated_alphabet(output, output_params)),
      marked_input(std::make_shared<const Alphabet>(marked_alphabet(annotated_input))),
      ipar(universal_language(annotated_input)),
      opar(universal_language(annotated_output)) {}

Relation nfa_relation(Nfa n) { return std::make_shared<NfaStep>(std::move(n)); }

void set_relation_tables(RegularResync& rr, std::map<Symbol, Relation> moves,
                         std::map<std::pair<Symbol, Symbol>, Relation> nexts) {
  auto m = std::make_shared<const std::map<Symbol, Relation>>(std::move(moves));
  auto n = std::make_shared<const std::map<std::pair<Symbol, Symbol>, Relation>>(std::move(nexts));
  rr.move = [m](Symbol k) -> Relation {
    auto it = m->find(k);
    return it == m->end() ? nullptr : it->second;
  };
  rr.next = [n](Symbol a, Symbol b) -> Relation {
    auto it = n->find({a, b});
    return it == n->end() ? nullptr : it->second;
  };
}

// ---------------------------------------------------------------------------
// Mark and boundedness checks

namespace {

// Accepts the words of `inner` whose mark counts are not exactly one each.
class BadMarks : public StepAutomaton {
 public:
  explicit BadMarks(const StepAutomaton& inner) : inner_(inner) {}
  const Alphabet& alphabet() const override { return inner_.alphabet(); }
  std::vector<Key> initial() const override {
    std::vector<Key> r;
    for (auto k : inner_.initial()) {
      k.push_back(0);
      k.push_back(0);
      r.push_back(std::move(k));
    }
    return r;
  }
  std::vector<Key> step(const Key& s, Symbol sym) const override {
    Key in(s.begin(), s.end() - 2);
    int c1 = std::min(2, s[s.size() - 2] + (first_mark(sym) ? 1 : 0));
    int c2 = std::min(2, s[s.size() - 1] + (second_mark(sym) ? 1 : 0));
    std::vector<Key> r;
    for (auto k : inner_.step(in, sym)) {
      k.push_back(c1);
      k.push_back(c2);
      r.push_back(std::move(k));
    }
    return r;
  }
  bool accepting(const Key& s) const override {
    Key in(s.begin(), s.end() - 2);
    return inner_.accepting(in) && !(s[s.size() - 2] == 1 && s[s.size() - 1] == 1);
  }

 private:
  const StepAutomaton& inner_;
};

// k+1 runs of one move relation on a shared annotated input and target mark, each with its own
// source mark. Letters: (annotated, target bit, which copy marks its source here or none).
class SharedTarget : public StepAutomaton {
 public:
  SharedTarget(const StepAutomaton& rel, int copies, int annotated_size)
      : rel_(rel), copies_(copies) {
    std::vector<std::string> names;
    for (int a = 0; a < annotated_size; ++a)
      for (int z = 0; z < 2; ++z)
        for (int w = 0; w <= copies; ++w)
          names.push_back(std::to_string(a) + "/" + std::to_string(z) + "/" + std::to_string(w));
    alphabet_ = Alphabet(std::move(names));
  }
  const Alphabet& alphabet() const override { return alphabet_; }
  int width() const { return 2 * (copies_ + 1); }
  std::vector<Key> initial() const override {
    std::vector<Key> out{{}};
    for (int c = 0; c < copies_; ++c) {
      std::vector<Key> grown;
      for (const auto& base : out)
        for (const auto& k : rel_.initial()) grown.push_back(append(base, k));
      out = std::move(grown);
    }
    return out;
  }
  std::vector<Key> step(const Key& s, Symbol sym) const override {
    int a = sym / width(), z = (sym % width()) / (copies_ + 1), who = sym % (copies_ + 1);
    std::vector<Key> out{{}};
    std::size_t pos = 0;
    for (int c = 0; c < copies_; ++c) {
      Key k(s.begin() + pos + 1, s.begin() + pos + 1 + s[pos]);
      pos += 1 + s[pos];
      auto nx = rel_.step(k, marked_symbol(a, who == c + 1, z == 1));
      if (nx.empty()) return {};
      std::vector<Key> grown;
      for (const auto& base : out)
        for (const auto& n : nx) grown.push_back(append(base, n));
      out = std::move(grown);
    }
    return out;
  }
  bool accepting(const Key& s) const override {
    std::size_t pos = 0;
    for (int c = 0; c < copies_; ++c) {
      Key k(s.begin() + pos + 1, s.begin() + pos + 1 + s[pos]);
      pos += 1 + s[pos];
      if (!rel_.accepting(k)) return false;
    }
    return true;
  }

 private:
  static Key append(const Key& base, const Key& k) {
    Key r = base;
    r.push_back(static_cast<int>(k.size()));
    r.insert(r.end(), k.begin(), k.end());
    return r;
  }
  const StepAutomaton& rel_;
  int copies_;
  Alphabet alphabet_;
};

}  // namespace

MarkReport validate_marks(const RegularResync& rr, std::size_t cap) {
  auto check = [&](const Relation& rel, const std::string& name) -> std::optional<MarkReport> {
    if (!rel) return std::nullopt;
    BadMarks bad(*rel);
    if (auto w = step_shortest_word(bad, cap)) return MarkReport{false, name, *w};
    return std::nullopt;
  };
  const int n = rr.annotated_output.size();
  for (Symbol k = 0; k < n; ++k)
    if (auto r = check(rr.move_of(k), "move " + rr.annotated_output.name(k))) return *r;
  for (Symbol k1 = 0; k1 < n; ++k1)
    for (Symbol k2 = 0; k2 < n; ++k2)
      if (auto r = check(rr.next_of(k1, k2),
                         "next " + rr.annotated_output.name(k1) + " " + rr.annotated_output.name(k2)))
        return *r;
  return {};
}

BoundReport is_k_bounded(const RegularResync& rr, int k, std::size_t cap) {
  if (k < 1) throw PreconditionError("is_k_bounded needs k >= 1");
  for (Symbol key = 0; key < rr.annotated_output.size(); ++key) {
    Relation rel = rr.move_of(key);
    if (!rel) continue;
    SharedTarget prod(*rel, k + 1, rr.annotated_input.size());
    auto w = step_shortest_word(prod, cap);
    if (!w) continue;
    BoundReport rep;
    rep.bounded = false;
    rep.key = key;
    rep.sources.assign(k + 1, -1);
    for (std::size_t i = 0; i < w->size(); ++i) {
      Symbol s = (*w)[i];
      int a = s / prod.width(), z = (s % prod.width()) / (k + 2), who = s % (k + 2);
      rep.input.push_back(a);
      if (z) rep.target = static_cast<int>(i);
      if (who) rep.sources[who - 1] = static_cast<int>(i);
    }
    return rep;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Annotation search

namespace {

// Relation states numbered on first sight, with cached successors.
class Interned {
 public:
  Interned(const StepAutomaton& a, std::size_t cap) : a_(a), cap_(cap) {
    for (const auto& k : a.initial()) init_.push_back(id(k));
  }
  const std::vector<int>& initial() const { return init_; }
  const std::vector<int>& step(int s, Symbol sym) {
    const std::uint64_t key = (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint32_t>(sym);
    auto it = trans_.find(key);
    if (it != trans_.end()) return it->second;
    std::vector<int> out;
    for (const auto& k : a_.step(states_[s], sym)) out.push_back(id(k));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return trans_.emplace(key, std::move(out)).first->second;
  }
  bool accepting(int s) {
    if (accept_[s] < 0) accept_[s] = a_.accepting(states_[s]) ? 1 : 0;
    return accept_[s] == 1;
  }

 private:
  int id(const Key& k) {
    auto [it, fresh] = ids_.emplace(k, static_cast<int>(states_.size()));
    if (fresh) {
      if (states_.size() >= cap_) throw CapacityError("relation exceeded " + std::to_string(cap_) + " states");
      states_.push_back(k);
      accept_.push_back(-1);
    }
    return it->second;
  }

  const StepAutomaton& a_;
  std::size_t cap_;
  std::vector<int> init_;
  std::vector<Key> states_;
  std::vector<signed char> accept_;
  std::unordered_map<Key, int, VecHash> ids_;
  std::unordered_map<std::uint64_t, std::vector<int>> trans_;
};

struct Constraint {
  Interned* rel;
  int m1, m2;  // 0-based marked positions
};

// ipar transitions reading an annotation of input letter a.
template <class F>
void annotations_of(const RegularResync& rr, State s, Symbol a, F&& fn) {
  const int np = rr.input_params.size();
  const auto& out = rr.ipar.out(s);
  for (auto it = std::lower_bound(out.begin(), out.end(), std::pair<Symbol, State>{a * np, -1});
       it != out.end() && it->first < (a + 1) * np; ++it)
    fn(it->first, it->second);
}

// Whether one input annotation accepted by ipar satisfies every constraint simultaneously.
bool annotation_exists(const RegularResync& rr, const Word& u, const std::vector<Constraint>& cs,
                       std::size_t cap) {
  using Tuple = std::vector<int>;  // ipar state, then one relation state per constraint
  const std::size_t k = cs.size();
  auto expand = [&](State head, const std::vector<const std::vector<int>*>& choices,
                    std::unordered_set<Tuple, VecHash>& out) {
    Tuple t(k + 1);
    t[0] = head;
    std::function<void(std::size_t)> go = [&](std::size_t j) {
      if (j == k) {
        out.insert(t);
        return;
      }
      for (int v : *choices[j]) {
        t[j + 1] = v;
        go(j + 1);
      }
    };
    go(0);
    if (out.size() > cap) throw CapacityError("annotation search exceeded " + std::to_string(cap) + " tuples");
  };

  std::unordered_set<Tuple, VecHash> cur;
  {
    std::vector<const std::vector<int>*> init;
    for (const auto& c : cs) init.push_back(&c.rel->initial());
    for (State s : rr.ipar.initial_states()) expand(s, init, cur);
  }
  std::vector<const std::vector<int>*> choices(k);
  for (int i = 0; i < static_cast<int>(u.size()) && !cur.empty(); ++i) {
    std::unordered_set<Tuple, VecHash> nxt;
    for (const auto& t : cur)
      annotations_of(rr, t[0], u[i], [&](Symbol letter, State d) {
        for (std::size_t j = 0; j < k; ++j) {
          choices[j] = &cs[j].rel->step(t[j + 1], marked_symbol(letter, cs[j].m1 == i, cs[j].m2 == i));
          if (choices[j]->empty()) return;
        }
        expand(d, choices, nxt);
      });
    cur = std::move(nxt);
  }
  for (const auto& t : cur) {
    if (!rr.ipar.is_final(t[0])) continue;
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) ok = cs[j].rel->accepting(t[j + 1]);
    if (ok) return true;
  }
  return false;
}

struct ArrayHash {
  std::size_t operator()(const std::array<int, 4>& a) const {
    std::size_t h = 0;
    for (int x : a) hash_mix(h, static_cast<std::size_t>(x));
    return h;
  }
};

// Mark positions (first, second) for which some ipar-accepted annotation of u satisfies rel. A
// non-negative `first` fixes the first mark.
std::vector<std::pair<int, int>> mark_positions(const RegularResync& rr, const Word& u, Interned& rel, int first,
                                                std::size_t cap) {
  // ipar state, first mark or -1, second mark or -1, relation state
  using Tuple = std::array<int, 4>;
  std::unordered_set<Tuple, ArrayHash> cur;
  for (State s : rr.ipar.initial_states())
    for (int k : rel.initial()) cur.insert({s, -1, -1, k});
  for (int i = 0; i < static_cast<int>(u.size()) && !cur.empty(); ++i) {
    std::unordered_set<Tuple, ArrayHash> nxt;
    for (const auto& t : cur)
      annotations_of(rr, t[0], u[i], [&](Symbol letter, State d) {
        for (int m1 = 0; m1 < 2; ++m1) {
          if (first >= 0 ? m1 != (i == first) : m1 && t[1] >= 0) continue;
          for (int m2 = 0; m2 < 2; ++m2) {
            if (m2 && t[2] >= 0) continue;
            for (int n : rel.step(t[3], marked_symbol(letter, m1 == 1, m2 == 1)))
              nxt.insert({d, m1 ? i : t[1], m2 ? i : t[2], n});
          }
        }
      });
    if (nxt.size() > cap) throw CapacityError("annotation search exceeded " + std::to_string(cap) + " tuples");
    cur = std::move(nxt);
  }
  std::set<std::pair<int, int>> marks;
  for (const auto& t : cur)
    if (t[1] >= 0 && t[2] >= 0 && rr.ipar.is_final(t[0]) && rel.accepting(t[3])) marks.insert({t[1], t[2]});
  return {marks.begin(), marks.end()};
}

class Search {
 public:
  Search(const RegularResync& rr, std::size_t cap) : rr_(rr), cap_(cap) {}

  bool empty_pair(const Word& u) {
    if (rr_.empty_domain) return rr_.empty_domain->accepts(u);
    bool eps = false;
    for (State s : rr_.opar.initial_states()) eps = eps || rr_.opar.is_final(s);
    return eps && annotation_exists(rr_, u, {}, cap_);
  }

  bool move_ok(const Word& u, Symbol key, int y, int z) {
    const auto& zs = move_targets(u, key, y);
    return std::binary_search(zs.begin(), zs.end(), z);
  }

  // Target positions admitted by move_key for source y.
  const std::vector<int>& move_targets(const Word& u, Symbol key, int y) {
    auto ck = std::make_tuple(u, key, y);
    auto it = move_cache_.find(ck);
    if (it != move_cache_.end()) return it->second;
    Relation rel = move_rel(key);
    std::vector<int> zs;
    if (rel)
      for (auto [from, to] : mark_positions(rr_, u, interned(rel), y, cap_)) zs.push_back(to);
    return move_cache_.emplace(ck, std::move(zs)).first->second;
  }

  bool next_ok(const Word& u, Symbol k1, Symbol k2, int z1, int z2) {
    auto ck = std::make_tuple(u, k1, k2);
    auto it = next_cache_.find(ck);
    if (it == next_cache_.end()) {
      Relation rel = next_rel(k1, k2);
      std::vector<std::pair<int, int>> marks;
      if (rel) marks = mark_positions(rr_, u, interned(rel), -1, cap_);
      it = next_cache_.emplace(ck, std::move(marks)).first;
    }
    return std::binary_search(it->second.begin(), it->second.end(), std::pair<int, int>{z1, z2});
  }

  // Targets of `src`; with `fixed`, only that target is tried and the search stops at the first hit.
  void images(const OriginGraph& src, std::set<OriginGraph>& found, const std::vector<int>* fixed) {
    const Word& u = src.input;
    const int n = static_cast<int>(u.size()), m = static_cast<int>(src.output.size());
    if (m == 0) {
      if (empty_pair(u)) found.insert(src);
      return;
    }
    if (n == 0) return;
    auto viable = opar_viable(src);
    // Feasible (key, target) per output position.
    std::vector<std::vector<std::pair<Symbol, int>>> options(m);
    const int ng = rr_.output_params.size();
    for (int x = 0; x < m; ++x) {
      const auto [c, y1] = src.output[x];
      for (Symbol g = 0; g < ng; ++g) {
        Symbol key = rr_.out_letter(c, g);
        if (!move_rel(key)) continue;
        if (!viable[x].count(key)) continue;
        for (int z : move_targets(u, key, y1 - 1))
          if (!fixed || (*fixed)[x] == z) options[x].push_back({key, z});
      }
      if (options[x].empty()) return;
    }
    std::vector<Symbol> keys(m);
    std::vector<int> zs(m);
    std::size_t nodes = 0;
    bool stop = false;
    std::function<void(int, const std::vector<State>&)> dfs = [&](int x, const std::vector<State>& op) {
      if (stop) return;
      if (x == m) {
        if (!rr_.opar.any_final(op)) return;
        OriginGraph tgt{u, {}};
        for (int i = 0; i < m; ++i) tgt.output.push_back({src.output[i].first, zs[i] + 1});
        if (found.count(tgt)) return;
        std::vector<Constraint> cs;
        for (int i = 0; i < m; ++i) cs.push_back({&interned(move_rel(keys[i])), src.output[i].second - 1, zs[i]});
        for (int i = 0; i + 1 < m; ++i) cs.push_back({&interned(next_rel(keys[i], keys[i + 1])), zs[i], zs[i + 1]});
        if (annotation_exists(rr_, u, cs, cap_)) {
          found.insert(tgt);
          if (fixed) stop = true;
        }
        return;
      }
      for (const auto& [key, z] : options[x]) {
        if (++nodes > cap_) throw CapacityError("target enumeration exceeded " + std::to_string(cap_) + " nodes");
        auto op2 = rr_.opar.step(op, key);
        if (op2.empty()) continue;
        if (x > 0 && !next_ok(u, keys[x - 1], key, zs[x - 1], z)) continue;
        keys[x] = key;
        zs[x] = z;
        dfs(x + 1, op2);
        if (stop) return;
      }
    };
    dfs(0, rr_.opar.initial_states());
  }

 private:
  // Annotated output letters usable at each position on some opar-accepted annotation.
  std::vector<std::set<Symbol>> opar_viable(const OriginGraph& src) const {
    const Nfa& op = rr_.opar;
    const int m = static_cast<int>(src.output.size()), ng = rr_.output_params.size();
    std::vector<std::vector<char>> fwd(m + 1, std::vector<char>(op.num_states(), 0)), bwd = fwd;
    for (State s : op.initial_states()) fwd[0][s] = 1;
    auto letters = [&](State s, int x, auto&& fn) {
      const Symbol lo = src.output[x].first * ng, hi = lo + ng;
      const auto& out = op.out(s);
      for (auto it = std::lower_bound(out.begin(), out.end(), std::pair<Symbol, State>{lo, -1});
           it != out.end() && it->first < hi; ++it)
        fn(it->first, it->second);
    };
    for (int x = 0; x < m; ++x)
      for (State s = 0; s < op.num_states(); ++s)
        if (fwd[x][s]) letters(s, x, [&](Symbol, State d) { fwd[x + 1][d] = 1; });
    for (State s = 0; s < op.num_states(); ++s) bwd[m][s] = op.is_final(s);
    std::vector<std::set<Symbol>> viable(m);
    for (int x = m - 1; x >= 0; --x)
      for (State s = 0; s < op.num_states(); ++s)
        letters(s, x, [&](Symbol g, State d) {
          if (!bwd[x + 1][d]) return;
          bwd[x][s] = 1;
          if (fwd[x][s]) viable[x].insert(g);
        });
    return viable;
  }

  // Relations seen by this search stay alive in moves_ and nexts_.
  Interned& interned(const Relation& rel) {
    auto& slot = interned_[rel.get()];
    if (!slot) slot = std::make_unique<Interned>(*rel, cap_);
    return *slot;
  }

  Relation move_rel(Symbol key) {
    auto it = moves_.find(key);
    if (it != moves_.end()) return it->second;
    return moves_[key] = rr_.move_of(key);
  }
  Relation next_rel(Symbol a, Symbol b) {
    auto it = nexts_.find({a, b});
    if (it != nexts_.end()) return it->second;
    return nexts_[{a, b}] = rr_.next_of(a, b);
  }

  const RegularResync& rr_;
  std::size_t cap_;
  std::map<Symbol, Relation> moves_;
  std::map<std::pair<Symbol, Symbol>, Relation> nexts_;
  std::map<const StepAutomaton*, std::unique_ptr<Interned>> interned_;
  std::map<std::tuple<Word, Symbol, int>, std::vector<int>> move_cache_;
  std::map<std::tuple<Word, Symbol, Symbol>, std::vector<std::pair<int, int>>> next_cache_;
};

bool well_formed(const RegularResync& rr, const OriginGraph& g) {
  for (Symbol a : g.input)
    if (a < 0 || a >= rr.input.size()) return false;
  for (const auto& [c, o] : g.output)
    if (c < 0 || c >= rr.output.size() || o < 1 || o > static_cast<int>(g.input.size())) return false;
  return true;
}

}  // namespace

bool pair_member(const RegularResync& rr, const OriginGraph& source, const OriginGraph& target,
                 std::size_t cap) {
  if (source.input != target.input || source.output_word() != target.output_word()) return false;
  if (!well_formed(rr, source) || !well_formed(rr, target)) return false;
  Search s(rr, cap);
  std::vector<int> zs;
  for (int z : target.origins()) zs.push_back(z - 1);
  std::set<OriginGraph> found;
  s.images(source, found, &zs);
  return found.count(target) > 0;
}

std::map<OriginGraph, std::set<OriginGraph>> resync_images(const RegularResync& rr,
                                                           const std::set<OriginGraph>& graphs,
                                                           std::size_t cap) {
  Search s(rr, cap);
  std::map<OriginGraph, std::set<OriginGraph>> out;
  for (const auto& g : graphs) {
    if (!well_formed(rr, g)) throw PreconditionError("graph does not fit the resynchronizer alphabets");
    auto& dst = out[g];
    s.images(g, dst, nullptr);
  }
  return out;
}

std::set<OriginGraph> apply_graphs(const RegularResync& rr, const std::set<OriginGraph>& graphs,
                                   std::size_t cap) {
  std::set<OriginGraph> out;
  for (auto& [g, img] : resync_images(rr, graphs, cap)) out.insert(img.begin(), img.end());
  return out;
}

// ---------------------------------------------------------------------------
// Small hand-made resynchronizers

namespace {

RegularResync trivial_params(const Alphabet& in, const Alphabet& out) {
  return RegularResync(in, out, Alphabet({"_"}), Alphabet({"_"}));
}

// Marked words over `rr.marked_input` whose marks satisfy `pick(position, length)`; the
// automaton guesses the length-dependent positions with a small state machine.
Nfa unconstrained_marks(const RegularResync& rr) {
  // States: (first seen, second seen).
  Nfa n(*rr.marked_input, 4);
  n.set_initial(0);
  n.set_final(3);
  for (Symbol a = 0; a < rr.annotated_input.size(); ++a)
    for (int s = 0; s < 4; ++s)
      for (int f = 0; f < 2; ++f)
        for (int g = 0; g < 2; ++g) {
          if ((f && (s & 2)) || (g && (s & 1))) continue;
          n.add_transition(s, marked_symbol(a, f, g), s | (f ? 2 : 0) | (g ? 1 : 0));
        }
  return n;
}

}  // namespace

RegularResync first_to_last(const Alphabet& in, const Alphabet& out) {
  RegularResync rr = trivial_params(in, out);
  // 0 --(y)--> 1 --...--> (z) 2, or both marks on a one-letter input.
  Nfa mv(*rr.marked_input, 3);
  mv.set_initial(0);
  mv.set_final(2);
  for (Symbol a = 0; a < rr.annotated_input.size(); ++a) {
    mv.add_transition(0, marked_symbol(a, true, false), 1);
    mv.add_transition(0, marked_symbol(a, true, true), 2);
    mv.add_transition(1, marked_symbol(a, false, false), 1);
    mv.add_transition(1, marked_symbol(a, false, true), 2);
  }
  Relation m = nfa_relation(mv), nx = nfa_relation(unconstrained_marks(rr));
  std::map<Symbol, Relation> moves;
  std::map<std::pair<Symbol, Symbol>, Relation> nexts;
  for (Symbol c = 0; c < out.size(); ++c) moves[rr.out_letter(c, 0)] = m;
  for (Symbol c = 0; c < out.size(); ++c)
    for (Symbol d = 0; d < out.size(); ++d) nexts[{rr.out_letter(c, 0), rr.out_letter(d, 0)}] = nx;
  set_relation_tables(rr, std::move(moves), std::move(nexts));
  return rr;
}

RegularResync identity_regular(const Alphabet& in, const Alphabet& out) {
  RegularResync rr = trivial_params(in, out);
  Nfa diag(*rr.marked_input, 2);
  diag.set_initial(0);
  diag.set_final(1);
  for (Symbol a = 0; a < rr.annotated_input.size(); ++a) {
    diag.add_transition(0, marked_symbol(a, false, false), 0);
    diag.add_transition(0, marked_symbol(a, true, true), 1);
    diag.add_transition(1, marked_symbol(a, false, false), 1);
  }
  Relation m = nfa_relation(diag), nx = nfa_relation(unconstrained_marks(rr));
  std::map<Symbol, Relation> moves;
  std::map<std::pair<Symbol, Symbol>, Relation> nexts;
  for (Symbol c = 0; c < out.size(); ++c) moves[rr.out_letter(c, 0)] = m;
  for (Symbol c = 0; c < out.size(); ++c)
    for (Symbol d = 0; d < out.size(); ++d) nexts[{rr.out_letter(c, 0), rr.out_letter(d, 0)}] = nx;
  set_relation_tables(rr, std::move(moves), std::move(nexts));
  return rr;
}

}  // namespace oresync
