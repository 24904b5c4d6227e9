#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "oresync/oca.hpp"
#include "oresync/synthesis.hpp"

using namespace oresync;

namespace {

// Configuration-set simulation, with the counter bounded by k.
bool accepts_within(const Oca& a, const Word& w, int k) {
  std::set<std::pair<State, int>> cur;
  for (State s : a.initial) cur.insert({s, 0});
  for (Symbol x : w) {
    std::set<std::pair<State, int>> nxt;
    for (const auto& [q, c] : cur)
      for (const auto& e : a.edges) {
        if (e.src != q || e.sym != x || c < e.lo || c > e.hi) continue;
        int v = c + e.add;
        if (v < 0 || v > k) continue;
        nxt.insert({e.dst, e.reset ? 0 : v});
      }
    cur = std::move(nxt);
  }
  for (const auto& [q, c] : cur)
    if (a.final[q] && c == 0) return true;
  return false;
}

Oca random_oca(std::mt19937& rng, int letters, int states) {
  std::vector<std::string> names;
  for (int i = 0; i < letters; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  Oca a(Alphabet(names), states);
  a.initial.insert(0);
  std::bernoulli_distribution coin(0.4);
  for (State s = 0; s < states; ++s) a.final[s] = coin(rng);
  std::uniform_int_distribution<int> op(0, 4);
  for (State p = 0; p < states; ++p)
    for (Symbol x = 0; x < letters; ++x)
      for (State q = 0; q < states; ++q) {
        if (!std::bernoulli_distribution(0.35)(rng)) continue;
        switch (op(rng)) {
          case 0: a.add_step(p, x, 1, q); break;
          case 1: a.add_step(p, x, -1, q); break;
          case 2: a.add_step(p, x, 0, q); break;
          case 3: a.add_zero_test(p, x, q); break;
          default: a.add_reset(p, x, q); break;
        }
      }
  return a;
}

// Words over the transition letters that spell a successful run of the letter form.
bool well_formed(const LetterForm& f, const Word& w) {
  if (w.empty()) {
    for (State p : f.initial)
      if (!f.finals[p].empty()) return true;
    return false;
  }
  if (std::find(f.initial.begin(), f.initial.end(), f.edges[w[0]].src) == f.initial.end()) return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (f.edges[w[i]].src != f.edges[w[i - 1]].dst) return false;
  return !f.finals[f.edges[w.back()].dst].empty();
}

std::vector<Oca> designed_family() {
  Alphabet ab({"a", "b"}), abc({"a", "b", "c"});
  return {fixture::designed_oca(ab, {1, -1}, 0),     fixture::designed_oca(ab, {1, -1}, 1),
          fixture::designed_oca(ab, {1, -1}, 2),     fixture::designed_oca(ab, {1, -1}, 3),
          fixture::designed_oca(ab, {-1, 1}, 2),     fixture::designed_oca(abc, {1, 0, -1}, 1),
          fixture::designed_oca(abc, {1, 0, -1}, 3), fixture::designed_oca(abc, {1, 1, -1}, 2),
          fixture::designed_oca(abc, {0, -1, 1}, 1), fixture::designed_oca(abc, {1, -1, -1}, 3)};
}

const std::vector<int> kDesignedBounds{0, 1, 2, 3, 2, 1, 3, 2, 1, 3};

}  // namespace

TEST_CASE("bounded restriction agrees with simulation and grows with the bound") {
  Alphabet ab({"a", "b"});
  Oca updown(ab, 2);
  updown.initial.insert(0);
  updown.final = {1, 1};
  updown.add_step(0, 0, 1, 0);
  updown.add_step(0, 1, -1, 1);
  updown.add_step(1, 1, -1, 1);
  Nfa two = bounded_restriction(updown, 2);
  for (const Word& w : oracle::all_words(2, 8)) CHECK(two.accepts(w) == accepts_within(updown, w, 2));
  CHECK(two.accepts(ab.parse("aabb")));
  CHECK_FALSE(two.accepts(ab.parse("aaabbb")));

  Oca free(ab, 1);
  free.initial.insert(0);
  free.final[0] = 1;
  for (Symbol x = 0; x < 2; ++x) free.add_step(0, x, 0, 0);
  for (int k = 0; k <= 3; ++k) CHECK(equivalent(bounded_restriction(free, k), universal_language(ab)));
  CHECK(boundedness_search(free, 3) == 0);

  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    Oca a = random_oca(rng, 2, 3);
    for (int k = 0; k < 3; ++k) {
      Nfa lo = bounded_restriction(a, k), hi = bounded_restriction(a, k + 1);
      for (const Word& w : oracle::all_words(2, 8)) {
        CHECK(lo.accepts(w) == accepts_within(a, w, k));
        if (lo.accepts(w)) CHECK(hi.accepts(w));
      }
    }
  }
}

TEST_CASE("universality within a bound") {
  Alphabet a1({"a"});
  Oca up(a1, 1);
  up.initial.insert(0);
  up.final[0] = 1;
  up.add_step(0, 0, 1, 0);
  for (int k = 0; k <= 4; ++k) {
    auto r = universal_with_bound(up, k);
    CHECK_FALSE(r.universal);
    REQUIRE(r.witness.has_value());
    CHECK(*r.witness == Word{0});
  }
  CHECK_FALSE(boundedness_search(up, 5).has_value());

  std::mt19937 rng(8);
  for (int i = 0; i < 30; ++i) {
    Oca a = random_oca(rng, 2, 3);
    for (int k = 0; k <= 2; ++k) {
      auto r = universal_with_bound(a, k);
      bool brute = true;
      for (const Word& w : oracle::all_words(2, 6)) brute = brute && accepts_within(a, w, k);
      if (r.universal) CHECK(brute);
      if (!r.universal) {
        REQUIRE(r.witness.has_value());
        CHECK_FALSE(accepts_within(a, *r.witness, k));
        for (const Word& w : oracle::all_words(2, static_cast<int>(r.witness->size()) - 1))
          CHECK(accepts_within(a, w, k));
      }
    }
  }
}

TEST_CASE("designed counter automata have their bound") {
  auto family = designed_family();
  for (std::size_t i = 0; i < family.size(); ++i) {
    CHECK(boundedness_search(family[i], 5) == kDesignedBounds[i]);
    CHECK(sign_safe(family[i]));
  }
}

TEST_CASE("transducer pairs to counter automata") {
  auto copier = fixture::unary_copier();
  CHECK(boundedness_search(transducers_to_oca(copier, copier), 3) == 0);

  auto t1 = fixture::even_copier(), t2 = fixture::pair_bb();
  Oca even_pair = transducers_to_oca(t1, t2);
  CHECK(boundedness_search(even_pair, 4) == 1);

  Oca neg = transducers_to_oca(fixture::per_letter_b(), fixture::two_phase_bb());
  CHECK_FALSE(boundedness_search(neg, 8).has_value());

  // Malformed encodings are always accepted.
  for (const auto* pair : {&even_pair, &neg}) {
    const auto& src = pair == &even_pair ? t1 : fixture::per_letter_b();
    LetterForm f = letter_form(src);
    for (const Word& w : oracle::all_words(pair->alphabet.size(), 6))
      if (!well_formed(f, w)) CHECK(accepts_within(*pair, w, 20));
  }
}

TEST_CASE("counter automata to transducer pairs") {
  auto family = designed_family();
  for (std::size_t i = 0; i < family.size(); ++i) {
    int k = kDesignedBounds[i];
    auto [t1, t2] = oca_to_transducers(family[i]);
    auto res = synthesize_bounded_delay(t1, t2, k + 1);
    REQUIRE(res.has_value());
    CHECK(res->delay == k);
    Oca back = transducers_to_oca(t1, t2);
    CHECK(universal_with_bound(back, k).universal);
    if (k > 0) CHECK_FALSE(universal_with_bound(back, k - 1).universal);
  }
  Alphabet a1({"a"});
  Oca bad(a1, 1);
  bad.initial.insert(0);
  bad.final[0] = 1;
  bad.add_step(0, 0, -1, 0);
  CHECK_THROWS_AS(oca_to_transducers(bad), PreconditionError);
}

TEST_CASE("counter machines to counter automata") {
  using Kind = MinskyInstr::Kind;
  // Two counters raised to 2 together, then lowered, forever.
  MinskyMachine m{2, 8, 0, {}};
  Kind seq[] = {Kind::inc, Kind::inc, Kind::inc, Kind::inc, Kind::dec, Kind::dec, Kind::dec, Kind::dec};
  for (int i = 0; i < 8; ++i) m.instrs.push_back({i, seq[i], i % 2, (i + 1) % 8});
  Oca a = minsky_to_oca(m);
  CHECK(boundedness_search(a, 4) == 2);

  MinskyMachine grow{2, 1, 0, {{0, Kind::inc, 0, 0}, {0, Kind::inc, 1, 0}}};
  Oca g = minsky_to_oca(grow);
  CHECK_FALSE(boundedness_search(g, 3).has_value());
  for (int k = 0; k <= 3; ++k) {
    Word run;
    for (int i = 0; i <= k; ++i) run.insert(run.end(), {0, 1});
    CHECK_FALSE(accepts_within(g, run, k));
  }

  MinskyMachine idle{2, 1, 0, {}};
  CHECK(boundedness_search(minsky_to_oca(idle), 0) == 0);

  // Zero tests: a wrong test is an error of that counter.
  MinskyMachine zt{1, 2, 0, {{0, Kind::inc, 0, 1}, {1, Kind::zero_test, 0, 0}}};
  Oca z = minsky_to_oca(zt);
  CHECK(accepts_within(z, {0, 1}, 1));
  CHECK(boundedness_search(z, 3) == 1);
}
