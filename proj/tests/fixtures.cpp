#include <algorithm>

#include "fixtures.hpp"

namespace fixture {

NormalOneWay even_copier() {
  OneWayTransducer t(Alphabet({"a"}), Alphabet({"b"}), 2);
  t.initial = {0};
  t.add_edge(0, 0, 1, Word{0});
  t.add_edge(1, 0, 0, Word{0});
  t.add_final(0);
  return normalize(t);
}

NormalOneWay pair_bb() {
  OneWayTransducer t(Alphabet({"a"}), Alphabet({"b"}), 2);
  t.initial = {0};
  t.add_edge(0, 0, 1, Word{0, 0});
  t.add_edge(1, 0, 0, Word{});
  t.add_final(0);
  return normalize(t);
}

NormalOneWay rotation() {
  Alphabet s({"a", "b"});
  OneWayTransducer t(s, s, 3);
  t.initial = {0};
  for (Symbol c : {0, 1}) {
    t.add_edge(0, c, 1 + c, Word{});
    for (Symbol d : {0, 1}) t.add_edge(1 + c, d, 1 + c, Word{d});
    t.add_final(1 + c, Word{c});
  }
  return normalize(t);
}

NormalOneWay subsequence() {
  Alphabet s({"a", "b"});
  OneWayTransducer t(s, s, 2);
  t.initial = {0};
  auto any = universal_language(s);
  for (Symbol c : {0, 1}) {
    auto lang = concat(any, single_word(s, {c}));
    t.add_edge(0, c, 1, lang);
    t.add_edge(1, c, 1, lang);
  }
  t.add_final(0);
  t.add_final(1, any);
  return normalize(t);
}

NormalOneWay unary_copier() {
  OneWayTransducer t(Alphabet({"a"}), Alphabet({"b"}), 1);
  t.initial = {0};
  t.add_edge(0, 0, 0, Word{0});
  t.add_final(0);
  return normalize(t);
}

NormalOneWay per_letter_b() {
  OneWayTransducer t(Alphabet({"a"}), Alphabet({"b"}), 2);
  t.initial = {0};
  t.add_edge(0, 0, 1, Word{0});
  t.add_edge(1, 0, 0, Word{0});
  t.add_final(0);
  return normalize(t);
}

NormalOneWay two_phase_bb() {
  OneWayTransducer t(Alphabet({"a"}), Alphabet({"b"}), 2);
  t.initial = {0};
  t.add_edge(0, 0, 0, Word{0, 0});
  t.add_edge(0, 0, 1, Word{});
  t.add_edge(1, 0, 1, Word{});
  t.add_final(0);
  t.add_final(1);
  return normalize(t);
}

NormalOneWay random_transducer(std::mt19937& rng, const Alphabet& in, const Alphabet& out, int states, int max_out,
                               double density) {
  std::bernoulli_distribution coin(density), fin(0.4);
  std::uniform_int_distribution<int> len(0, max_out), letter(0, out.size() - 1);
  NormalOneWay t(in, out, states);
  t.set_initial(0);
  for (State s = 0; s < states; ++s) {
    if (fin(rng)) t.set_final(s);
    for (Symbol a = 0; a < in.size(); ++a)
      for (State d = 0; d < states; ++d)
        if (coin(rng)) {
          Word w(len(rng));
          for (auto& x : w) x = letter(rng);
          t.add_edge(s, a, w, d);
        }
  }
  return t;
}

RationalResync random_resync(std::mt19937& rng, const Alphabet& in, const Alphabet& out, int states,
                             double density) {
  RationalResync r(in, out, states);
  int k = in.size() + out.size(), sigma = in.size();
  std::vector<int> lag(states, 0);
  for (State s = 1; s < states; ++s) lag[s] = std::uniform_int_distribution<int>(-1, 1)(rng);
  r.initial.insert(0);
  for (State s = 0; s < states; ++s) r.final[s] = lag[s] == 0 && std::bernoulli_distribution(0.4)(rng);
  for (State p = 0; p < states; ++p)
    for (Symbol c = 0; c < k; ++c)
      for (Symbol d = 0; d < k; ++d)
        for (State q = 0; q < states; ++q)
          if (lag[q] == lag[p] + (c < sigma) - (d < sigma) && std::bernoulli_distribution(density)(rng))
            r.add_edge(p, c, d, q);
  return r;
}


RationalResync pair_shift() {
  RationalResync r(Alphabet({"a"}), Alphabet({"b"}), 4);
  r.initial.insert(0);
  r.final[0] = 1;
  r.add_edge(0, 0, 0, 1);
  r.add_edge(1, 1, 1, 2);
  r.add_edge(2, 0, 1, 3);
  r.add_edge(3, 1, 0, 0);
  return r;
}

Oca designed_oca(const Alphabet& letters, const std::vector<int>& ops, int k) {
  // States 0..k: counting branch at value v; k+1..2k+1: counter-free branch remembering v.
  Oca a(letters, 2 * (k + 1));
  a.initial = {0, k + 1};
  a.final[0] = 1;
  for (int v = 1; v <= k; ++v) a.final[k + 1 + v] = 1;
  for (int v = 0; v <= k; ++v)
    for (Symbol x = 0; x < letters.size(); ++x) {
      int w = std::clamp(v + ops[x], 0, k);
      a.add_step(v, x, w - v, w);
      a.add_step(k + 1 + v, x, 0, k + 1 + w);
    }
  return a;
}

}  // namespace fixture
