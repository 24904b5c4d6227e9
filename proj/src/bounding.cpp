// Turning k-bounded resynchronizers into 1-bounded ones and restricting targets. Both constructions
// run copies of a move relation side by side: chosen copies exist existentially, and a subset of all
// remaining placements must reject.

#include <algorithm>

#include "oresync/parikh.hpp"

namespace oresync {

namespace {

using Key = StepAutomaton::Key;
using KeySet = std::vector<Key>;

void normalize(KeySet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

// [header..., sections, (items, (len, key...)*)*]
Key pack(const std::vector<int>& header, const std::vector<KeySet>& sections) {
  Key k = header;
  k.push_back(static_cast<int>(sections.size()));
  for (const auto& s : sections) {
    k.push_back(static_cast<int>(s.size()));
    for (const auto& item : s) {
      k.push_back(static_cast<int>(item.size()));
      k.insert(k.end(), item.begin(), item.end());
    }
  }
  return k;
}

std::vector<KeySet> unpack(const Key& k, std::size_t header, std::vector<int>& head) {
  head.assign(k.begin(), k.begin() + header);
  std::size_t p = header;
  std::vector<KeySet> out(k[p++]);
  for (auto& s : out) {
    s.resize(k[p++]);
    for (auto& item : s) {
      const int len = k[p++];
      item.assign(k.begin() + p, k.begin() + p + len);
      p += len;
    }
  }
  return out;
}

KeySet step_all(const StepAutomaton& a, const KeySet& from, Symbol sym) {
  KeySet r;
  for (const auto& k : from)
    for (auto& n : a.step(k, sym)) r.push_back(std::move(n));
  normalize(r);
  return r;
}

bool any_accepting(const StepAutomaton& a, const KeySet& s) {
  return std::any_of(s.begin(), s.end(), [&](const Key& k) { return a.accepting(k); });
}

// Choices of one successor per item.
std::vector<KeySet> branches(const StepAutomaton& a, const KeySet& items, Symbol sym) {
  std::vector<KeySet> out{{}};
  for (const auto& it : items) {
    auto nx = a.step(it, sym);
    std::vector<KeySet> grown;
    for (const auto& base : out)
      for (const auto& n : nx) {
        KeySet b = base;
        b.push_back(n);
        grown.push_back(std::move(b));
      }
    out = std::move(grown);
    if (out.empty()) break;
  }
  return out;
}

// (y, z) in move with exactly index-1 smaller sources y' sharing z.
// Header: [y seen]; sections: main, chosen sources, prefix without a source, other sources.
class IndexedSource : public StepAutomaton {
 public:
  IndexedSource(Relation m, int index) : m_(std::move(m)), index_(index) {}
  const Alphabet& alphabet() const override { return m_->alphabet(); }
  std::vector<Key> initial() const override {
    KeySet init = m_->initial();
    normalize(init);
    std::vector<Key> out;
    for (const auto& k : init) out.push_back(pack({0}, {{k}, {}, init, {}}));
    return out;
  }
  std::vector<Key> step(const Key& k, Symbol sym) const override {
    std::vector<int> head;
    auto sec = unpack(k, 1, head);
    const Symbol a = unmarked(sym);
    const bool y = first_mark(sym), z = second_mark(sym);
    if (y && head[0]) return {};
    const Symbol plain = marked_symbol(a, false, z), placed = marked_symbol(a, true, z);
    std::vector<Key> out;
    KeySet others = step_all(*m_, sec[3], plain);
    KeySet prefix = step_all(*m_, sec[2], plain);
    auto mains = m_->step(sec[0][0], sym);
    for (const auto& chosen : branches(*m_, sec[1], plain))
      for (const auto& main : mains) {
        if (y || head[0]) {
          out.push_back(pack({1}, {{main}, chosen, prefix, others}));
          continue;
        }
        // This position is a smaller source: counted among the chosen or among the others.
        if (static_cast<int>(chosen.size()) < index_ - 1)
          for (const auto& fresh : step_all(*m_, sec[2], placed)) {
            KeySet c = chosen;
            c.push_back(fresh);
            out.push_back(pack({0}, {{main}, c, prefix, others}));
          }
        KeySet o = others;
        for (auto& n : step_all(*m_, sec[2], placed)) o.push_back(std::move(n));
        normalize(o);
        out.push_back(pack({0}, {{main}, chosen, prefix, o}));
      }
    return out;
  }
  bool accepting(const Key& k) const override {
    std::vector<int> head;
    auto sec = unpack(k, 1, head);
    if (!head[0] || static_cast<int>(sec[1].size()) != index_ - 1) return false;
    if (!m_->accepting(sec[0][0])) return false;
    for (const auto& c : sec[1])
      if (!m_->accepting(c)) return false;
    return !any_accepting(*m_, sec[3]);
  }

 private:
  Relation m_;
  int index_;
};

// Reads a relation through a symbol map.
class Mapped : public StepAutomaton {
 public:
  Mapped(Relation inner, Alphabet alphabet, std::function<Symbol(Symbol)> map)
      : inner_(std::move(inner)), alphabet_(std::move(alphabet)), map_(std::move(map)) {}
  const Alphabet& alphabet() const override { return alphabet_; }
  std::vector<Key> initial() const override { return inner_->initial(); }
  std::vector<Key> step(const Key& k, Symbol sym) const override { return inner_->step(k, map_(sym)); }
  bool accepting(const Key& k) const override { return inner_->accepting(k); }

 private:
  Relation inner_;
  Alphabet alphabet_;
  std::function<Symbol(Symbol)> map_;
};

// (y, z) in move, z carries the output letter's bit, z is an origin of the transducer, and no other
// position with the bit is a target of y. Header: [transducer state]; sections: main, prefix, others.
class RestrictedMove : public StepAutomaton {
 public:
  RestrictedMove(Relation m, std::shared_ptr<const Nfa> origins, Alphabet alphabet,
                 std::function<Symbol(Symbol)> old_annotated, std::function<bool(Symbol)> bit,
                 std::function<Symbol(Symbol)> letter)
      : m_(std::move(m)), origins_(std::move(origins)), alphabet_(std::move(alphabet)),
        old_(std::move(old_annotated)), bit_(std::move(bit)), letter_(std::move(letter)) {}
  const Alphabet& alphabet() const override { return alphabet_; }
  std::vector<Key> initial() const override {
    KeySet init = m_->initial();
    normalize(init);
    std::vector<Key> out;
    for (State o : origins_->initial_states())
      for (const auto& k : init) out.push_back(pack({o}, {{k}, init, {}}));
    return out;
  }
  std::vector<Key> step(const Key& k, Symbol sym) const override {
    std::vector<int> head;
    auto sec = unpack(k, 1, head);
    const Symbol ann = unmarked(sym);
    const bool y = first_mark(sym), z = second_mark(sym), marked_bit = bit_(ann);
    if (z && !marked_bit) return {};
    const Symbol old = old_(ann);
    const Symbol plain = marked_symbol(old, y, false);
    KeySet others = step_all(*m_, sec[2], plain);
    if (!z && marked_bit)
      for (auto& n : step_all(*m_, sec[1], marked_symbol(old, y, true))) others.push_back(std::move(n));
    normalize(others);
    KeySet prefix = step_all(*m_, sec[1], plain);
    std::vector<Key> out;
    for (State o : origins_->step({head[0]}, letter_(ann) * 2 + (z ? 1 : 0)))
      for (const auto& main : m_->step(sec[0][0], marked_symbol(old, y, z)))
        out.push_back(pack({o}, {{main}, prefix, others}));
    return out;
  }
  bool accepting(const Key& k) const override {
    std::vector<int> head;
    auto sec = unpack(k, 1, head);
    return origins_->is_final(head[0]) && m_->accepting(sec[0][0]) && !any_accepting(*m_, sec[2]);
  }

 private:
  Relation m_;
  std::shared_ptr<const Nfa> origins_;
  Alphabet alphabet_;
  std::function<Symbol(Symbol)> old_;
  std::function<bool(Symbol)> bit_;
  std::function<Symbol(Symbol)> letter_;
};

class SwappedMarks : public StepAutomaton {
 public:
  explicit SwappedMarks(Relation inner) : inner_(std::move(inner)) {}
  const Alphabet& alphabet() const override { return inner_->alphabet(); }
  std::vector<Key> initial() const override { return inner_->initial(); }
  std::vector<Key> step(const Key& k, Symbol sym) const override {
    return inner_->step(k, marked_symbol(unmarked(sym), second_mark(sym), first_mark(sym)));
  }
  bool accepting(const Key& k) const override { return inner_->accepting(k); }

 private:
  Relation inner_;
};

}  // namespace

RegularResync one_boundedize(const RegularResync& rr, int k) {
  if (k < 1) throw PreconditionError("one_boundedize needs k >= 1");
  if (!is_k_bounded(rr, k).bounded) throw PreconditionError("one_boundedize: resynchronizer is not " + std::to_string(k) + "-bounded");
  std::vector<std::string> names;
  for (Symbol g = 0; g < rr.output_params.size(); ++g)
    for (int i = 1; i <= k; ++i) names.push_back(rr.output_params.name(g) + "#" + std::to_string(i));
  RegularResync r(rr.input, rr.output, rr.input_params, Alphabet(names));
  r.ipar = rr.ipar;
  r.empty_domain = rr.empty_domain;
  // New annotated output (c, g * k + i - 1) projects to (c, g).
  r.opar = relabel(rr.opar, r.annotated_output, [k](Symbol s) {
    std::vector<Symbol> img;
    for (int i = 0; i < k; ++i) img.push_back(s * k + i);
    return img;
  });
  auto move = rr.move;
  auto next = rr.next;
  r.move = [move, k](Symbol key) -> Relation {
    Relation m = move ? move(key / k) : nullptr;
    return m ? std::make_shared<IndexedSource>(m, key % k + 1) : nullptr;
  };
  r.next = [next, k](Symbol k1, Symbol k2) -> Relation { return next ? next(k1 / k, k2 / k) : nullptr; };
  return r;
}

RegularResync restrict_to_target_set(const RegularResync& rr, const TwoWayTransducer& t) {
  if (!is_k_bounded(rr, 1).bounded) throw PreconditionError("restrict_to_target_set: resynchronizer is not 1-bounded");
  require_same(rr.input, t.input, "restrict_to_target_set input");
  const int keys = rr.annotated_output.size();
  if (keys > 12) throw CapacityError("restrict_to_target_set: too many output annotations for bit parameters");
  const int masks = 1 << keys, np = rr.input_params.size();
  std::vector<std::string> names;
  for (Symbol p = 0; p < np; ++p)
    for (int m = 0; m < masks; ++m) {
      std::string bits;
      for (int g = 0; g < keys; ++g) bits += (m >> g & 1) ? '1' : '0';
      names.push_back(rr.input_params.name(p) + "|" + bits);
    }
  RegularResync r(rr.input, rr.output, Alphabet(names), rr.output_params);
  r.opar = rr.opar;
  const int nnp = np * masks;
  // New annotated input a * nnp + p * masks + mask projects to a * np + p.
  auto old_of = [np, masks, nnp](Symbol ann) { return ann / nnp * np + ann % nnp / masks; };
  auto project = [&](Symbol old) {
    std::vector<Symbol> img;
    for (int m = 0; m < masks; ++m) img.push_back(old / np * nnp + old % np * masks + m);
    return img;
  };
  r.ipar = relabel(rr.ipar, r.annotated_input, project);
  if (rr.empty_domain) r.empty_domain = relabel(*rr.empty_domain, r.annotated_input, project);
  auto origins = std::make_shared<const Nfa>(decoder(normalize_outputs(t), 1).underlying());
  auto move = rr.move;
  auto next = rr.next;
  const Alphabet marked = *r.marked_input;
  r.move = [move, origins, marked, old_of, masks, nnp](Symbol key) -> Relation {
    Relation m = move ? move(key) : nullptr;
    if (!m) return nullptr;
    return std::make_shared<RestrictedMove>(
        m, origins, marked, old_of, [key, masks](Symbol ann) { return ((ann % masks) >> key & 1) != 0; },
        [nnp](Symbol ann) { return ann / nnp; });
  };
  r.next = [next, marked, old_of](Symbol k1, Symbol k2) -> Relation {
    Relation n = next ? next(k1, k2) : nullptr;
    if (!n) return nullptr;
    return std::make_shared<Mapped>(n, marked, [old_of](Symbol s) {
      return marked_symbol(old_of(unmarked(s)), first_mark(s), second_mark(s));
    });
  };
  return r;
}

bool is_partial_bijection(const RegularResync& rr, std::size_t cap) {
  if (!is_k_bounded(rr, 1, cap).bounded) return false;
  RegularResync swapped = rr;
  auto move = rr.move;
  swapped.move = [move](Symbol key) -> Relation {
    Relation m = move ? move(key) : nullptr;
    return m ? std::make_shared<SwappedMarks>(m) : nullptr;
  };
  return is_k_bounded(swapped, 1, cap).bounded;
}

}  // namespace oresync
