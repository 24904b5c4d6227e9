#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "oresync/errors.hpp"

using namespace oresync;

namespace {

Alphabet A() { return Alphabet({"a"}); }
Alphabet B() { return Alphabet({"b"}); }

std::set<OriginGraph> graphs(const NormalOneWay& t, int n) { return enumerate_graphs(t, n).graphs; }

Nfa sync_of(const std::string& pattern, const Alphabet& sync) {
  // (pattern)* over the sync alphabet.
  return star(single_word(sync, sync.parse(pattern)));
}

std::vector<NormalOneWay> pool(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<NormalOneWay> r;
  Alphabet in({"a", "b"}), out({"c"});
  for (int i = 0; i < count; ++i) r.push_back(fixture::random_transducer(rng, in, out, 3, 2, 0.35));
  return r;
}

}  // namespace

TEST_CASE("rotation normalizes without an output layer") {
  auto t = fixture::rotation();
  CHECK(t.real_time());
  int letter_edges = 0;
  for (const auto& e : t.edges()) {
    if (e.in != kEps) {
      ++letter_edges;
      CHECK(e.out.size() <= 1);
    } else {
      CHECK(e.out.size() == 1);
    }
  }
  CHECK(letter_edges == 6);
  CHECK(classical_member(t, {0, 1, 1}, {1, 1, 0}));
}

TEST_CASE("single-letter outputs normalize to the identity") {
  OneWayTransducer t(A(), B(), 1);
  t.initial = {0};
  t.add_edge(0, 0, 0, Word{0});
  t.add_final(0);
  auto n = normalize(t);
  CHECK(n.num_states() == 1);
  CHECK(n.edges().size() == 1);
  CHECK(n.is_final(0));
}

TEST_CASE("regular output languages keep their origin graphs") {
  OneWayTransducer t(Alphabet({"a", "c"}), B(), 2);
  t.initial = {0};
  t.add_edge(0, 0, 1, star(single_word(B(), {0})));
  t.add_edge(1, 1, 0, Word{0});
  t.add_edge(1, 0, 1, Word{});
  t.add_final(1, star(single_word(B(), {0})));
  auto n = normalize(t);
  CHECK_FALSE(n.real_time());
  auto got = enumerate_graphs(n, 3, 6);
  CHECK(got.truncated);
  CHECK(got.graphs == oracle::run_graphs(t, 3, 6));
  CHECK(oracle::run_graphs(n, 3, 6) == got.graphs);
}

TEST_CASE("output on the empty input is rejected") {
  OneWayTransducer t(A(), B(), 1);
  t.initial = {0};
  t.add_final(0, Word{0});
  CHECK_THROWS_AS(normalize(t), PreconditionError);
}

TEST_CASE("wrong output alphabet is rejected") {
  OneWayTransducer t(A(), B(), 1);
  t.initial = {0};
  t.add_edge(0, 0, 0, single_word(A(), {0}));
  CHECK_THROWS_AS(normalize(t), AlphabetError);
}

TEST_CASE("sync languages of the pair transducers") {
  auto t1 = fixture::even_copier(), t2 = fixture::pair_bb();
  Alphabet sync({"a", "b"});
  CHECK(sync_alphabet(t1) == sync);
  CHECK(equivalent(sync_language(t1), sync_of("abab", sync)));
  CHECK(equivalent(sync_language(t2), sync_of("abba", sync)));
  NormalOneWay none(A(), B(), 2);
  none.set_initial(0);
  none.set_final(1);
  CHECK(is_empty(sync_language(none)));
}

TEST_CASE("enumerate_graphs on T1") {
  auto g = graphs(fixture::even_copier(), 2);
  std::set<OriginGraph> expect{OriginGraph{}, OriginGraph{{0, 0}, {{0, 1}, {0, 2}}}};
  CHECK(g == expect);
  NormalOneWay none(A(), B(), 1);
  CHECK(graphs(none, 4).empty());
  CHECK_THROWS_AS(enumerate_graphs(fixture::subsequence(), 2), PreconditionError);
}

TEST_CASE("encode and decode") {
  OriginGraph g{{0, 0, 0}, {{0, 1}, {0, 2}, {0, 3}}};
  CHECK(encode(g, 1) == Word{0, 1, 0, 1, 0, 1});
  CHECK(encode(OriginGraph{}, 1).empty());
  CHECK(decode({}, 1) == OriginGraph{});
  CHECK_THROWS_AS(encode(OriginGraph{{0, 0}, {{0, 2}, {0, 1}}}, 1), PreconditionError);
  CHECK_THROWS_AS(encode(OriginGraph{{0}, {{0, 2}}}, 1), PreconditionError);
  CHECK_THROWS_AS(decode({1, 0}, 1), FormatError);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> sym(0, 3);
  for (int i = 0; i < 200; ++i) {
    Word w{static_cast<Symbol>(sym(rng) % 2)};
    int len = 1 + static_cast<int>(rng() % 10);
    while (static_cast<int>(w.size()) < len) w.push_back(sym(rng));
    CHECK(encode(decode(w, 2), 2) == w);
  }
  for (const auto& t : pool(10, 17))
    for (const auto& gr : graphs(t, 4)) CHECK(decode(encode(gr, 2), 2) == gr);
}

TEST_CASE("sync language matches run graphs") {
  for (const auto& t : pool(20, 29)) {
    auto g = graphs(t, 4);
    CHECK(g == oracle::run_graphs(t, 4, 100));
    std::set<Word> enc;
    for (const auto& x : g) enc.insert(encode(x, 2));
    for (const auto& w : enumerate(sync_language(t), 6)) {
      auto d = decode(w, 2);
      if (d.input.size() <= 4) CHECK(enc.count(w) == 1);
    }
  }
}

TEST_CASE("origin containment") {
  auto t1 = fixture::even_copier(), t2 = fixture::pair_bb();
  auto r = origin_containment(t1, t2);
  CHECK_FALSE(r.holds);
  REQUIRE(r.witness);
  CHECK(r.witness->input == Word{0, 0});
  CHECK(origin_containment(t1, t1).holds);
  auto p = pool(12, 41);
  for (const auto& a : p)
    for (const auto& b : p) {
      bool exact = origin_containment(a, b).holds;
      auto ga = graphs(a, 5), gb = graphs(b, 5);
      bool brute = std::includes(gb.begin(), gb.end(), ga.begin(), ga.end());
      if (exact) CHECK(brute);
      if (!exact) {
        auto w = origin_containment(a, b).witness;
        CHECK(ga.count(*w) + oracle::run_graphs(a, static_cast<int>(w->input.size()), 100).count(*w) >= 1);
        CHECK(oracle::run_graphs(b, static_cast<int>(w->input.size()), 100).count(*w) == 0);
      }
    }
}

TEST_CASE("origin containment is a preorder and implies classical containment") {
  auto p = pool(10, 53);
  for (const auto& a : p) {
    CHECK(origin_containment(a, a).holds);
    for (const auto& b : p) {
      if (!origin_containment(a, b).holds) continue;
      for (const auto& c : p)
        if (origin_containment(b, c).holds) CHECK(origin_containment(a, c).holds);
      for (const auto& u : oracle::all_words(2, 5))
        for (const auto& v : outputs_of(a, u)) CHECK(classical_member(b, u, v));
    }
  }
}

TEST_CASE("classical membership") {
  CHECK(classical_member(fixture::rotation(), {0, 1, 1}, {1, 1, 0}));
  CHECK_FALSE(classical_member(fixture::rotation(), {0, 1, 1}, {0, 1, 1}));
  CHECK_FALSE(classical_member(fixture::even_copier(), {}, {0}));
  for (const auto& t : pool(10, 61)) {
    auto g = graphs(t, 4);
    for (const auto& u : oracle::all_words(2, 4)) {
      auto outs = oracle::outputs(g, u);
      CHECK(outputs_of(t, u) == outs);
      for (const auto& v : oracle::all_words(1, 6)) CHECK(classical_member(t, u, v) == (outs.count(v) == 1));
    }
  }
}
