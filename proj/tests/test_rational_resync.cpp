#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "oresync/rational.hpp"

using namespace oresync;

namespace {

bool sync_shaped(const Word& w, int sigma) { return w.empty() || w.front() < sigma; }

Word project(const Word& w, int lo, int hi) {
  Word p;
  for (Symbol x : w)
    if (x >= lo && x < hi) p.push_back(x);
  return p;
}

bool same_projections(const Word& w, const Word& w2, int sigma, int k) {
  return project(w, 0, sigma) == project(w2, 0, sigma) && project(w, sigma, k) == project(w2, sigma, k);
}

// Pairs of a word resynchronizer by run exploration, both words of length <= n.
std::set<std::pair<Word, Word>> word_pairs(const WordResync& r, int n) {
  std::set<std::pair<Word, Word>> out;
  std::set<std::tuple<State, Word, Word>> seen;
  std::vector<std::tuple<State, Word, Word>> stack;
  for (State s : r.initial) stack.push_back({s, {}, {}});
  while (!stack.empty()) {
    auto cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    auto& [q, u, v] = cur;
    if (r.final.count(q)) out.insert({u, v});
    for (const auto& e : r.edges) {
      if (e.src != q) continue;
      Word u2 = u, v2 = v;
      u2.insert(u2.end(), e.in.begin(), e.in.end());
      v2.insert(v2.end(), e.out.begin(), e.out.end());
      if (static_cast<int>(u2.size()) <= n && static_cast<int>(v2.size()) <= n) stack.push_back({e.dst, u2, v2});
    }
  }
  return out;
}

std::set<std::pair<Word, Word>> letter_pairs(const RationalResync& r, int n) {
  std::set<std::pair<Word, Word>> out;
  for (const auto& w : oracle::all_words(r.sync().size(), n))
    for (const auto& w2 : image_of(r, w)) out.insert({w, w2});
  return out;
}

}  // namespace

TEST_CASE("example resynchronizer: lags and application") {
  auto r = validate(fixture::pair_shift());
  CHECK(r.lag == std::vector<int>{0, 0, 0, 1});
  auto moved = apply(r, fixture::even_copier());
  CHECK(equivalent(sync_language(moved), sync_language(fixture::pair_bb())));
  Alphabet s = r.sync();
  CHECK(member_pair(r, s.parse("abababab"), s.parse("abbaabba")));
  CHECK_FALSE(member_pair(r, s.parse("abab"), s.parse("abab")));
  CHECK(image_of(r, s.parse("abab")) == std::set<Word>{s.parse("abba")});
}

TEST_CASE("validation reports projection changes") {
  RationalResync r(Alphabet({"a"}), Alphabet({"b"}), 2);
  r.initial.insert(0);
  r.final[0] = 1;
  r.add_edge(0, 0, 0, 1);
  r.add_edge(1, 1, 0, 0);  // lag conflict: b read while a written
  CHECK_THROWS_AS(validate(r), PreconditionError);

  RationalResync swap(Alphabet({"a", "c"}), Alphabet({"b"}), 1);
  swap.initial.insert(0);
  swap.final[0] = 1;
  swap.add_edge(0, 0, 1, 0);  // a -> c changes the input projection
  try {
    validate(swap);
    FAIL("expected a violation");
  } catch (const ResyncViolation& v) {
    CHECK(member_pair(swap, v.source, v.target));
    CHECK_FALSE(same_projections(v.source, v.target, 2, 3));
  }

  RationalResync lead(Alphabet({"a"}), Alphabet({"b"}), 3);
  lead.initial.insert(0);
  lead.final[2] = 1;
  lead.add_edge(0, 0, 1, 1);  // target starts with an output letter
  lead.add_edge(1, 1, 0, 2);
  try {
    validate(lead);
    FAIL("expected a violation");
  } catch (const ResyncViolation& v) {
    CHECK(member_pair(lead, v.source, v.target));
    CHECK(sync_shaped(v.source, 1));
    CHECK_FALSE(sync_shaped(v.target, 1));
  }
}

TEST_CASE("validation agrees with bounded enumeration") {
  std::mt19937 rng(11);
  Alphabet in({"a", "c"}), out({"b"});
  int checked = 0, rejected = 0;
  for (int iter = 0; iter < 300; ++iter) {
    auto r = trim(fixture::random_resync(rng, in, out, 3));
    if (r.num_states == 0) continue;
    try {
      (void)lag_of_states(r);
    } catch (const ResyncViolation&) {
      throw;
    } catch (const PreconditionError&) {
      continue;
    }
    ++checked;
    try {
      validate(r);
      for (const auto& [w, w2] : letter_pairs(r, 5)) {
        if (!sync_shaped(w, 2)) continue;
        CHECK(sync_shaped(w2, 2));
        CHECK(same_projections(w, w2, 2, 3));
      }
    } catch (const ResyncViolation& v) {
      ++rejected;
      CHECK(member_pair(r, v.source, v.target));
      CHECK(sync_shaped(v.source, 2));
      CHECK((!sync_shaped(v.target, 2) || !same_projections(v.source, v.target, 2, 3)));
    }
  }
  CHECK(checked > 20);
  CHECK(rejected > 0);
  CHECK(rejected < checked);
}

TEST_CASE("word resynchronizers become letter-to-letter") {
  Alphabet in({"a"}), out({"b"});
  WordResync w{in, out, 2, {0}, {0}, {}};
  w.edges.push_back({0, {0, 1}, {0, 1}, 0});
  w.edges.push_back({0, {0, 1, 1}, {0}, 1});
  w.edges.push_back({1, {0}, {1, 1, 0}, 0});
  auto r = to_letter_to_letter(w);
  auto expect = word_pairs(w, 7);
  auto got = letter_pairs(r, 7);
  std::set<std::pair<Word, Word>> expect_equal_length;
  for (const auto& p : expect)
    if (p.first.size() == p.second.size()) expect_equal_length.insert(p);
  CHECK(got == expect_equal_length);
  CHECK(member_pair(r, r.sync().parse("abba"), r.sync().parse("abba")));

  WordResync bad{in, out, 1, {0}, {0}, {}};
  bad.edges.push_back({0, {0}, {0, 1}, 0});
  CHECK_THROWS_AS(to_letter_to_letter(bad), PreconditionError);
}

TEST_CASE("composition with the identity") {
  auto r = validate(fixture::pair_shift());
  auto id = identity_resync(r.input, r.output);
  CHECK(letter_pairs(compose(r, id), 8) == letter_pairs(r, 8));
  CHECK(letter_pairs(compose(id, r), 8) == letter_pairs(r, 8));
  auto twice = compose(r, r);
  Alphabet s = r.sync();
  // abba is not mapped further
  CHECK(image_of(twice, s.parse("abab")).empty());
}

TEST_CASE("bounded delay resynchronizers") {
  Alphabet in({"a"}), out({"b"});
  auto g1 = decode(Alphabet({"a", "b"}).parse("abababab"), 1);
  auto g2 = decode(Alphabet({"a", "b"}).parse("abbaabba"), 1);
  CHECK(delay(g1, g2) == 1);
  auto r0 = d_delay(0, in, out), r1 = d_delay(1, in, out);
  Alphabet s = r0.sync();
  CHECK(member_pair(r1, s.parse("abababab"), s.parse("abbaabba")));
  CHECK_FALSE(member_pair(r0, s.parse("abababab"), s.parse("abbaabba")));
  CHECK_THROWS_AS(d_delay(9, in, out), CapacityError);

  Alphabet in2({"a", "c"});
  for (int d = 0; d <= 2; ++d) {
    auto rd = validate(d_delay(d, in2, out));
    auto pairs = letter_pairs(rd, 6);
    int k = 3;
    for (const auto& w : oracle::all_words(k, 6)) {
      if (!sync_shaped(w, 2)) continue;
      for (const auto& w2 : oracle::words_of_length(k, static_cast<int>(w.size()))) {
        if (!sync_shaped(w2, 2) || !same_projections(w, w2, 2, 3)) continue;
        bool expect = delay(decode(w, 2), decode(w2, 2)) <= d;
        CHECK(pairs.count({w, w2}) == static_cast<std::size_t>(expect));
      }
    }
    if (d > 0)
      for (const auto& p : letter_pairs(d_delay(d - 1, in2, out), 6)) CHECK(pairs.count(p) == 1);
  }
}
