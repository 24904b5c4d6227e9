#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "oresync/parikh.hpp"

namespace oresync {

namespace {

// Explicit automaton indexed by (state, symbol), weights in one dimension.
struct Table {
  int symbols = 0;
  std::vector<State> init;
  std::vector<char> fin;
  std::vector<std::vector<std::pair<State, long>>> cells;

  const std::vector<std::pair<State, long>>& at(State s, Symbol a) const {
    return cells[static_cast<std::size_t>(s) * symbols + a];
  }
};

Table table_of(const ParikhAutomaton& a) {
  Table t;
  t.symbols = a.alphabet().size();
  t.init = a.initial_states();
  t.fin.assign(a.num_states(), 0);
  t.cells.resize(static_cast<std::size_t>(a.num_states()) * t.symbols);
  for (State s = 0; s < a.num_states(); ++s) t.fin[s] = a.is_final(s);
  for (const auto& e : a.edges())
    t.cells[static_cast<std::size_t>(e.src) * t.symbols + e.sym].push_back({e.dst, e.weight.empty() ? 0 : e.weight[0]});
  return t;
}

Table table_of(const Nfa& n) {
  Table t;
  t.symbols = n.alphabet().size();
  t.init = n.initial_states();
  t.fin.assign(n.num_states(), 0);
  t.cells.resize(static_cast<std::size_t>(n.num_states()) * t.symbols);
  for (State s = 0; s < n.num_states(); ++s) {
    t.fin[s] = n.is_final(s);
    for (auto [sym, dst] : n.out(s)) t.cells[static_cast<std::size_t>(s) * t.symbols + sym].push_back({dst, 0});
  }
  return t;
}

// Consecutive outputs annotated (i, j) and (i2, j2) at target marks (z, z2): the target transducer
// chains them, and the source positions y, y2 that move onto z, z2 are chained by the source transducer.
// Key: [target chain, source chain, D_i(y), D_j(z), D_i2(y2), D_j2(z2), y seen, y2 seen, sum1, sum2].
class NextCheck : public StepAutomaton {
 public:
  NextCheck(Alphabet marked, std::shared_ptr<const Table> target_chain, std::shared_ptr<const Table> source_chain,
            std::shared_ptr<const Table> src_i, std::shared_ptr<const Table> tgt_j,
            std::shared_ptr<const Table> src_i2, std::shared_ptr<const Table> tgt_j2, int params)
      : marked_(std::move(marked)), parts_{target_chain, source_chain, src_i, tgt_j, src_i2, tgt_j2},
        params_(params) {}

  const Alphabet& alphabet() const override { return marked_; }

  std::vector<Key> initial() const override {
    std::vector<Key> out{{}};
    for (const auto& p : parts_) {
      std::vector<Key> grown;
      for (const auto& k : out)
        for (State s : p->init) {
          Key n = k;
          n.push_back(s);
          grown.push_back(std::move(n));
        }
      out = std::move(grown);
    }
    for (auto& k : out) k.insert(k.end(), {0, 0, 0, 0});
    return out;
  }

  std::vector<Key> step(const Key& k, Symbol sym) const override {
    const Symbol a = unmarked(sym) / params_;
    const int z = first_mark(sym), z2 = second_mark(sym);
    std::vector<Key> out;
    for (int y = 0; y < 2; ++y)
      for (int y2 = 0; y2 < 2; ++y2) {
        if ((y && k[6]) || (y2 && k[7])) continue;
        const Symbol syms[6] = {a * 4 + z * 2 + z2, a * 4 + y * 2 + y2, a * 2 + y, a * 2 + z, a * 2 + y2, a * 2 + z2};
        // Weighted product of the six components.
        std::vector<Key> partial{Key{}};
        std::vector<std::pair<long, long>> sums{{k[8], k[9]}};
        for (int c = 0; c < 6 && !partial.empty(); ++c) {
          std::vector<Key> np;
          std::vector<std::pair<long, long>> ns;
          const auto& moves = parts_[c]->at(k[c], syms[c]);
          for (std::size_t i = 0; i < partial.size(); ++i)
            for (auto [dst, w] : moves) {
              Key n = partial[i];
              n.push_back(dst);
              auto s = sums[i];
              if (c == 2) s.first += w;
              if (c == 3) s.first -= w;
              if (c == 4) s.second += w;
              if (c == 5) s.second -= w;
              np.push_back(std::move(n));
              ns.push_back(s);
            }
          partial = std::move(np);
          sums = std::move(ns);
        }
        for (std::size_t i = 0; i < partial.size(); ++i) {
          Key n = std::move(partial[i]);
          n.insert(n.end(), {k[6] | y, k[7] | y2, static_cast<int>(sums[i].first), static_cast<int>(sums[i].second)});
          out.push_back(std::move(n));
        }
      }
    return out;
  }

  bool accepting(const Key& k) const override {
    for (int c = 0; c < 6; ++c)
      if (!parts_[c]->fin[k[c]]) return false;
    return k[6] && k[7] && k[8] == 0 && k[9] == 0;
  }

 private:
  Alphabet marked_;
  std::shared_ptr<const Table> parts_[6];
  int params_;
};

// Rejects words longer than the cap; the length is the last key component.
class Capped : public StepAutomaton {
 public:
  Capped(Relation inner, int cap) : inner_(std::move(inner)), cap_(cap) {}
  const Alphabet& alphabet() const override { return inner_->alphabet(); }
  std::vector<Key> initial() const override {
    auto r = inner_->initial();
    for (auto& k : r) k.push_back(0);
    return r;
  }
  std::vector<Key> step(const Key& k, Symbol sym) const override {
    if (k.back() >= cap_) return {};
    Key in(k.begin(), k.end() - 1);
    auto r = inner_->step(in, sym);
    for (auto& n : r) n.push_back(k.back() + 1);
    return r;
  }
  bool accepting(const Key& k) const override { return inner_->accepting(Key(k.begin(), k.end() - 1)); }

 private:
  Relation inner_;
  int cap_;
};

}  // namespace

ParikhResync build_parikh_resync(const TwoWayTransducer& target, const TwoWayTransducer& source, int check_bound) {
  validate(target);
  validate(source);
  require_same(target.input, source.input, "build_parikh_resync input");
  require_same(target.output, source.output, "build_parikh_resync output");
  if (target.guess.size() || source.guess.size())
    throw PreconditionError("build_parikh_resync: common guess is not supported");
  for (const auto* t : {&target, &source})
    if (auto u = ambiguous_input(*t, check_bound))
      throw AmbiguityError("two-way transducer has two successful runs on " + t->input.render(*u), *u);
  if (auto w = classical_containment_upto(target, source, check_bound))
    throw ContainmentViolation("target output " + target.output.render(w->output) + " on input " +
                                   target.input.render(w->input) + " is not produced by the source",
                               w->input, w->output);

  const TwoWayTransducer t1 = normalize_outputs(target), t2 = normalize_outputs(source);
  const int n1 = t1.num_states, n2 = t2.num_states;
  std::vector<std::string> names;
  for (int i = 1; i <= n2; ++i)
    for (int j = 1; j <= n1; ++j) names.push_back(std::to_string(i) + "." + std::to_string(j));
  ParikhResync pr;
  pr.source_states = n2;
  pr.target_states = n1;
  pr.rr = RegularResync(t1.input, t1.output, Alphabet({"-"}), Alphabet(names));
  RegularResync& rr = pr.rr;
  auto index_of = [n1](Symbol g) { return std::pair<int, int>{g / n1 + 1, g % n1 + 1}; };

  // First output annotated (1, 1).
  Nfa opar(rr.annotated_output, 2);
  opar.set_initial(0);
  opar.set_final(0);
  opar.set_final(1);
  for (Symbol c = 0; c < rr.output.size(); ++c) opar.add_transition(0, rr.out_letter(c, 0), 1);
  for (Symbol k = 0; k < rr.annotated_output.size(); ++k) opar.add_transition(1, k, 1);
  rr.opar = opar;

  std::vector<ParikhAutomaton> d1(n1 + 1), d2(n2 + 1);
  for (int j = 1; j <= n1; ++j) d1[j] = decoder(t1, j);
  for (int i = 1; i <= n2; ++i) d2[i] = decoder(t2, i);
  const Alphabet marked = *rr.marked_input;
  auto lift = [&](const ParikhAutomaton& d, bool first) {
    return parikh_relabel(d, marked, [&](Symbol s) {
      const Symbol a = unmarked(s);
      return std::vector<Symbol>{a * 2 + ((first ? first_mark(s) : second_mark(s)) ? 1 : 0)};
    });
  };
  std::map<std::pair<int, int>, Relation> move_rel;
  std::map<std::pair<int, int>, ParikhAutomaton> move_pa;
  for (Symbol key = 0; key < rr.annotated_output.size(); ++key) {
    auto ij = index_of(key % rr.output_params.size());
    auto it = move_pa.find(ij);
    if (it == move_pa.end()) {
      it = move_pa.emplace(ij, parikh_diff(lift(d2[ij.first], true), lift(d1[ij.second], false))).first;
      move_rel.emplace(ij, parikh_relation(it->second));
    }
    pr.moves.emplace(key, it->second);
  }
  rr.move = [move_rel, index_of, params = rr.output_params.size()](Symbol key) -> Relation {
    return move_rel.at(index_of(key % params));
  };

  std::vector<std::shared_ptr<const Table>> td1(n1 + 1), td2(n2 + 1);
  for (int j = 1; j <= n1; ++j) td1[j] = std::make_shared<Table>(table_of(d1[j]));
  for (int i = 1; i <= n2; ++i) td2[i] = std::make_shared<Table>(table_of(d2[i]));
  struct Cache {
    std::mutex m;
    std::map<std::tuple<int, int, int, int>, Relation> next;
    std::map<std::pair<int, int>, std::shared_ptr<const Table>> chain1, chain2;
  };
  auto cache = std::make_shared<Cache>();
  const int params = rr.input_params.size(), out_params = rr.output_params.size();
  rr.next = [cache, t1, t2, td1, td2, marked, index_of, params, out_params](Symbol k1, Symbol k2) -> Relation {
    auto [i, j] = index_of(k1 % out_params);
    auto [i2, j2] = index_of(k2 % out_params);
    std::lock_guard<std::mutex> lock(cache->m);
    auto key = std::tuple{i, j, i2, j2};
    if (auto it = cache->next.find(key); it != cache->next.end()) return it->second;
    auto chain = [](auto& store, const TwoWayTransducer& t, int a, int b) {
      auto it = store.find({a, b});
      if (it == store.end()) it = store.emplace(std::pair{a, b}, std::make_shared<Table>(table_of(output_chain(t, a, b)))).first;
      return it->second;
    };
    Relation r = std::make_shared<NextCheck>(marked, chain(cache->chain1, t1, j, j2), chain(cache->chain2, t2, i, i2),
                                             td2[i], td1[j], td2[i2], td1[j2], params);
    cache->next.emplace(key, r);
    return r;
  };
  return pr;
}

RegularResync length_capped(const RegularResync& rr, int n) {
  RegularResync r = rr;
  auto move = rr.move;
  auto next = rr.next;
  r.move = [move, n](Symbol k) -> Relation {
    Relation in = move ? move(k) : nullptr;
    return in ? std::make_shared<Capped>(in, n) : nullptr;
  };
  r.next = [next, n](Symbol k1, Symbol k2) -> Relation {
    Relation in = next ? next(k1, k2) : nullptr;
    return in ? std::make_shared<Capped>(in, n) : nullptr;
  };
  return r;
}

std::set<std::pair<Word, int>> resync_target_set(const RegularResync& rr, int n) {
  std::set<std::pair<Word, int>> out;
  const int np = rr.input_params.size();
  for (const Word& u : words_upto(rr.input.size(), n)) {
    const int len = static_cast<int>(u.size());
    std::vector<char> hit(len, 0);
    for (const Word& w : words_upto(np, len)) {
      if (static_cast<int>(w.size()) != len) continue;
      Word annotated;
      for (int p = 0; p < len; ++p) annotated.push_back(rr.in_letter(u[p], w[p]));
      if (!rr.ipar.accepts(annotated)) continue;
      for (Symbol key = 0; key < rr.annotated_output.size(); ++key) {
        Relation m = rr.move_of(key);
        if (!m) continue;
        for (int z = 0; z < len; ++z) {
          if (hit[z]) continue;
          for (int y = 0; y < len && !hit[z]; ++y) {
            Word marked;
            for (int p = 0; p < len; ++p) marked.push_back(marked_symbol(annotated[p], p == y, p == z));
            if (step_accepts(*m, marked)) hit[z] = 1;
          }
        }
      }
    }
    for (int z = 0; z < len; ++z)
      if (hit[z]) out.insert({u, z + 1});
  }
  return out;
}

}  // namespace oresync
