#include <functional>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "oresync/regular.hpp"

using namespace oresync;

namespace {

bool sync_shaped(const Word& w, int sigma) { return w.empty() || w.front() < sigma; }

// Pair sets of r restricted to sync sources of length <= n, as origin graphs.
std::map<OriginGraph, std::set<OriginGraph>> rational_graph_pairs(const RationalResync& r, int n) {
  const int sigma = r.input.size();
  std::map<OriginGraph, std::set<OriginGraph>> out;
  for (const auto& w : oracle::all_words(r.sync().size(), n)) {
    if (!sync_shaped(w, sigma)) continue;
    auto& img = out[decode(w, sigma)];
    for (const auto& w2 : image_of(r, w))
      if (sync_shaped(w2, sigma)) img.insert(decode(w2, sigma));
  }
  return out;
}

std::set<OriginGraph> keys_of(const std::map<OriginGraph, std::set<OriginGraph>>& m) {
  std::set<OriginGraph> k;
  for (const auto& [g, _] : m) k.insert(g);
  return k;
}

}  // namespace

TEST_CASE("compiled example resynchronizer has the rational pair set") {
  auto r = validate(fixture::pair_shift());
  auto rr = from_rational(r);
  auto expect = rational_graph_pairs(r, 8);
  CHECK(resync_images(rr, keys_of(expect)) == expect);
  CHECK(validate_marks(rr).ok);
  CHECK(is_k_bounded(rr, 1).bounded);
}

TEST_CASE("compiled random resynchronizers have the rational pair set") {
  std::mt19937 rng(41);
  int done = 0, tries = 0, unbounded = 0;
  while (done < 20 && ++tries < 5000) {
    Alphabet in({"a"}), out({"b"});
    auto raw = trim(fixture::random_resync(rng, in, out, 2 + done % 3, 0.35));
    if (raw.num_states == 0) continue;
    RationalResync r;
    try {
      r = validate(raw);
    } catch (const PreconditionError&) {
      continue;
    }
    auto expect = rational_graph_pairs(r, 8);
    std::size_t moved = 0;
    for (auto& [g, s] : expect) moved += s.size() - s.count(g);
    if (moved < 5) continue;
    ++done;
    if (!source_block_bound(r)) ++unbounded;
    auto rr = from_rational(r);
    CHECK(resync_images(rr, keys_of(expect)) == expect);
    CHECK(is_k_bounded(rr, 1).bounded);
  }
  CHECK(done == 20);
  CHECK(unbounded > 0);
}

TEST_CASE("compiled delay resynchronizer keeps output letters apart") {
  auto r = validate(d_delay(1, Alphabet({"a"}), Alphabet({"b", "d"})));
  auto expect = rational_graph_pairs(r, 6);
  auto rr = from_rational(r);
  CHECK(resync_images(rr, keys_of(expect)) == expect);
  CHECK(is_k_bounded(rr, 1).bounded);
}

namespace {

// Random regular resynchronizer with two parameters on each side and NFA relations.
RegularResync random_regular(std::mt19937& rng) {
  Alphabet two({"0", "1"});
  RegularResync rr(Alphabet({"a"}), Alphabet({"b"}), two, two);
  rr.ipar = oracle::random_nfa(rng, rr.annotated_input, 2, 0.6);
  rr.opar = oracle::random_nfa(rng, rr.annotated_output, 2, 0.6);
  std::map<Symbol, Relation> moves;
  std::map<std::pair<Symbol, Symbol>, Relation> nexts;
  for (Symbol k = 0; k < rr.annotated_output.size(); ++k) {
    moves[k] = nfa_relation(oracle::random_nfa(rng, *rr.marked_input, 3, 0.3));
    for (Symbol k2 = 0; k2 < rr.annotated_output.size(); ++k2)
      nexts[{k, k2}] = nfa_relation(oracle::random_nfa(rng, *rr.marked_input, 2, 0.45));
  }
  set_relation_tables(rr, std::move(moves), std::move(nexts));
  return rr;
}

Word mark(const Word& annotated, int first, int second) {
  Word w;
  for (int i = 0; i < static_cast<int>(annotated.size()); ++i)
    w.push_back(marked_symbol(annotated[i], i == first, i == second));
  return w;
}

// Pair membership by enumerating every input and output annotation.
bool brute_member(const RegularResync& rr, const OriginGraph& s, const OriginGraph& t) {
  if (s.input != t.input || s.output_word() != t.output_word()) return false;
  const int n = static_cast<int>(s.input.size()), m = static_cast<int>(s.output.size());
  const int np = rr.input_params.size(), mp = rr.output_params.size();
  for (const auto& ip : oracle::words_of_length(np, n)) {
    Word ui;
    for (int i = 0; i < n; ++i) ui.push_back(rr.in_letter(s.input[i], ip[i]));
    if (!oracle::nfa_member(rr.ipar, ui)) continue;
    for (const auto& op : oracle::words_of_length(mp, m)) {
      Word vo;
      for (int x = 0; x < m; ++x) vo.push_back(rr.out_letter(s.output[x].first, op[x]));
      if (!oracle::nfa_member(rr.opar, vo)) continue;
      bool ok = true;
      for (int x = 0; x < m && ok; ++x) {
        auto rel = rr.move_of(vo[x]);
        ok = rel && step_accepts(*rel, mark(ui, s.output[x].second - 1, t.output[x].second - 1));
      }
      for (int x = 0; x + 1 < m && ok; ++x) {
        auto rel = rr.next_of(vo[x], vo[x + 1]);
        ok = rel && step_accepts(*rel, mark(ui, t.output[x].second - 1, t.output[x + 1].second - 1));
      }
      if (ok) return true;
    }
  }
  return false;
}

OriginGraph random_graph(std::mt19937& rng, int n, int m, const Word& letters) {
  OriginGraph g;
  g.input.assign(n, 0);
  std::uniform_int_distribution<int> o(1, n), c(0, static_cast<int>(letters.size()) - 1);
  std::vector<int> origins(m);
  for (auto& x : origins) x = o(rng);
  std::sort(origins.begin(), origins.end());
  for (int x = 0; x < m; ++x) g.output.push_back({letters[c(rng)], origins[x]});
  return g;
}

// Every graph with input u and output word v, one per origin assignment.
std::set<OriginGraph> all_origins(const Word& u, const Word& v) {
  std::set<OriginGraph> out;
  const int n = static_cast<int>(u.size());
  std::vector<int> o(v.size(), 1);
  if (n == 0) {
    if (v.empty()) out.insert({u, {}});
    return out;
  }
  while (true) {
    bool sorted = std::is_sorted(o.begin(), o.end());
    if (sorted) {
      OriginGraph g{u, {}};
      for (std::size_t x = 0; x < v.size(); ++x) g.output.push_back({v[x], o[x]});
      out.insert(g);
    }
    std::size_t i = 0;
    while (i < o.size() && o[i] == n) o[i++] = 1;
    if (i == o.size()) break;
    ++o[i];
  }
  return out;
}

}  // namespace

TEST_CASE("pair membership agrees with annotation enumeration") {
  std::mt19937 rng(7);
  int positive = 0;
  for (int round = 0; round < 12; ++round) {
    auto rr = random_regular(rng);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 1 + trial % 5, m = trial % 6;
      auto s = random_graph(rng, n, m, {0});
      auto t = random_graph(rng, n, m, {0});
      const bool expect = brute_member(rr, s, t);
      positive += expect;
      CHECK(pair_member(rr, s, t) == expect);
    }
    // Full images of one source per round.
    auto s = random_graph(rng, 3, 3, {0});
    std::set<OriginGraph> expect;
    for (const auto& t : all_origins(s.input, s.output_word()))
      if (brute_member(rr, s, t)) expect.insert(t);
    CHECK(apply_graphs(rr, {s}) == expect);
  }
  CHECK(positive > 0);
}

TEST_CASE("pair membership rejects mismatched words") {
  auto rr = identity_regular(Alphabet({"a", "c"}), Alphabet({"b"}));
  OriginGraph s{{0, 1}, {{0, 1}}};
  CHECK(pair_member(rr, s, s));
  CHECK_FALSE(pair_member(rr, s, OriginGraph{{0, 0}, {{0, 1}}}));
  CHECK_FALSE(pair_member(rr, s, OriginGraph{{0, 1}, {{0, 1}, {0, 2}}}));
  CHECK_FALSE(pair_member(rr, s, OriginGraph{{0, 1}, {{0, 2}}}));
}

TEST_CASE("first-to-last example") {
  Alphabet in({"a", "c"}), out({"b"});
  auto rr = first_to_last(in, out);
  CHECK(validate_marks(rr).ok);
  CHECK(is_k_bounded(rr, 1).bounded);
  // All origins at 1 move to |u|; any other source has no image.
  for (int n = 1; n <= 8; ++n)
    for (const auto& u : oracle::words_of_length(2, n)) {
      for (int m = 0; m <= 3; ++m) {
        OriginGraph first{u, {}}, last{u, {}};
        for (int x = 0; x < m; ++x) {
          first.output.push_back({0, 1});
          last.output.push_back({0, n});
        }
        CHECK(apply_graphs(rr, {first}) == std::set<OriginGraph>{last});
        if (n > 1 && m > 0) CHECK_FALSE(pair_member(rr, first, first));
      }
      if (n > 1) CHECK(apply_graphs(rr, {OriginGraph{u, {{0, 2}}}}).empty());
    }
}

TEST_CASE("identity-style resynchronizer keeps graphs") {
  Alphabet in({"a", "c"}), out({"b", "d"});
  auto rr = identity_regular(in, out);
  CHECK(validate_marks(rr).ok);
  CHECK(is_k_bounded(rr, 1).bounded);
  std::set<OriginGraph> graphs;
  for (const auto& u : oracle::all_words(2, 3))
    for (const auto& v : oracle::all_words(2, 2))
      for (const auto& g : all_origins(u, v)) graphs.insert(g);
  CHECK(apply_graphs(rr, graphs) == graphs);
}

TEST_CASE("mark validation") {
  Alphabet in({"a"}), out({"b"});
  auto rr = first_to_last(in, out);
  // A move relation that admits two source marks.
  Nfa two(*rr.marked_input, 2);
  two.set_initial(0);
  two.set_final(1);
  two.add_transition(0, marked_symbol(0, true, false), 0);
  two.add_transition(0, marked_symbol(0, true, true), 1);
  auto bad = rr;
  set_relation_tables(bad, {{0, nfa_relation(two)}}, {});
  auto rep = validate_marks(bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.relation.rfind("move", 0) == 0);
  CHECK(step_accepts(*bad.move_of(0), rep.witness));
  int firsts = 0;
  for (Symbol s : rep.witness) firsts += first_mark(s);
  CHECK(firsts != 1);

  // Randomized relations built as (no marks)* x (marks once each) are well formed.
  std::mt19937 rng(3);
  for (int round = 0; round < 10; ++round) {
    Nfa a(*rr.marked_input, 3);
    a.set_initial(0);
    a.set_final(2);
    std::bernoulli_distribution coin(0.5);
    for (int s = 0; s < 3; ++s)
      if (coin(rng)) a.add_transition(s, marked_symbol(0, false, false), s);
    a.add_transition(0, marked_symbol(0, true, true), 2);
    a.add_transition(0, marked_symbol(0, true, false), 1);
    a.add_transition(1, marked_symbol(0, false, true), 2);
    auto ok = rr;
    set_relation_tables(ok, {{0, nfa_relation(a)}}, {{{0, 0}, nfa_relation(a)}});
    CHECK(validate_marks(ok).ok);
  }
}

TEST_CASE("k-boundedness") {
  Alphabet in({"a"}), out({"b"});
  auto rr = identity_regular(in, out);
  // Universal move: every (y, z) admitted.
  // State = first seen * 2 + second seen.
  Nfa any(*rr.marked_input, 4);
  any.set_initial(0);
  any.set_final(3);
  for (int s = 0; s < 4; ++s)
    for (int f = 0; f < 2; ++f)
      for (int g = 0; g < 2; ++g)
        if (!((s & 2) && f) && !((s & 1) && g))
          any.add_transition(s, marked_symbol(0, f, g), s | (f << 1) | g);
  set_relation_tables(rr, {{0, nfa_relation(any)}}, {});
  for (int k = 1; k <= 3; ++k) {
    auto rep = is_k_bounded(rr, k);
    CHECK_FALSE(rep.bounded);
    CHECK(static_cast<int>(rep.input.size()) == k + 1);
    std::set<int> srcs(rep.sources.begin(), rep.sources.end());
    CHECK(static_cast<int>(srcs.size()) == k + 1);
    for (int y : rep.sources) CHECK(step_accepts(NfaStep(any), mark(rep.input, y, rep.target)));
  }
  CHECK_THROWS_AS(is_k_bounded(rr, 0), PreconditionError);
}

TEST_CASE("source block bounds") {
  CHECK(source_block_bound(validate(fixture::pair_shift())) == 1);
  CHECK_FALSE(source_block_bound(validate(identity_resync(Alphabet({"a"}), Alphabet({"b"})))).has_value());
  // Identity on (abb)*.
  RationalResync r(Alphabet({"a"}), Alphabet({"b"}), 3);
  r.initial.insert(0);
  r.final[0] = 1;
  r.add_edge(0, 0, 0, 1);
  r.add_edge(1, 1, 1, 2);
  r.add_edge(2, 1, 1, 0);
  CHECK(source_block_bound(validate(r)) == 2);
}

TEST_CASE("example resynchronizer shifts the second output of each pair") {
  auto r = validate(fixture::pair_shift());
  auto rr = from_rational(r);
  CHECK(validate_marks(rr).ok);
  // abab: outputs at 1 and 2 both end up at 1.
  OriginGraph s{{0, 0}, {{0, 1}, {0, 2}}};
  CHECK(apply_graphs(rr, {s}) == std::set<OriginGraph>{OriginGraph{{0, 0}, {{0, 1}, {0, 1}}}});
  auto id = from_rational(validate(identity_resync(Alphabet({"a"}), Alphabet({"b"}))));
  std::set<OriginGraph> graphs;
  for (const auto& u : oracle::all_words(1, 4))
    for (const auto& v : oracle::all_words(1, 3))
      for (const auto& g : all_origins(u, v)) graphs.insert(g);
  CHECK(apply_graphs(id, graphs) == graphs);
}

TEST_CASE("run matchings on the worked example") {
  // A chain accepting exactly one source word and writing the target letter by letter.
  Alphabet in({"a"}), out({"b"});
  Alphabet sync = disjoint_union(in, out);
  Word w = sync.parse("aabaaabbaaabaabbba"), w2 = sync.parse("abaaabaaabbaababba");
  RationalResync r(in, out, static_cast<int>(w.size()) + 1);
  r.initial.insert(0);
  r.final[w.size()] = 1;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) r.add_edge(i, w[i], w2[i], i + 1);
  auto runs = runs_on(r, w);
  REQUIRE(runs.size() == 1);
  auto m = run_match_relations(r, runs[0]);
  CHECK(m.omatch == std::set<std::pair<int, int>>{{3, 2}, {7, 6}, {8, 10}, {12, 11}, {15, 14}, {16, 16}, {17, 17}});
  // Partial bijections.
  for (const auto* rel : {&m.omatch, &m.imatch}) {
    std::set<int> a, b;
    for (auto [x, y] : *rel) {
      CHECK(a.insert(x).second);
      CHECK(b.insert(y).second);
    }
  }
  CHECK(m.imatch.size() == 11);
  // match links the block start of each output to the consumer of its target origin letter.
  auto g = decode(w, 1), g2 = decode(w2, 1);
  std::vector<int> consumer_of;  // run position consuming the y-th input letter
  for (int i = 0; i < static_cast<int>(w.size()); ++i)
    if (w[i] == 0) consumer_of.push_back(i + 1);
  std::set<std::pair<int, int>> expect;
  for (std::size_t x = 0; x < g.output.size(); ++x)
    expect.insert({consumer_of[g.output[x].second - 1], consumer_of[g2.output[x].second - 1]});
  CHECK(m.match == expect);
}

TEST_CASE("compiled relations agree with run matchings") {
  std::mt19937 rng(5);
  int checked = 0;
  while (checked < 5) {
    auto raw = trim(fixture::random_resync(rng, Alphabet({"a"}), Alphabet({"b"}), 3, 0.35));
    if (raw.num_states == 0) continue;
    RationalResync r;
    try {
      r = validate(raw);
    } catch (const PreconditionError&) {
      continue;
    }
    ++checked;
    auto rr = from_rational(r);
    for (const auto& w : oracle::all_words(2, 7)) {
      if (!sync_shaped(w, 1)) continue;
      std::vector<int> consumer_of;
      for (int i = 0; i < static_cast<int>(w.size()); ++i)
        if (w[i] == 0) consumer_of.push_back(i + 1);
      for (const auto& run : runs_on(r, w)) {
        Word w2;
        for (const auto& e : run) w2.push_back(e.out);
        if (!sync_shaped(w2, 1)) continue;
        auto g = decode(w, 1), g2 = decode(w2, 1);
        CHECK(pair_member(rr, g, g2));
        auto m = run_match_relations(r, run);
        for (std::size_t x = 0; x < g.output.size(); ++x)
          CHECK(m.match.count({consumer_of[g.output[x].second - 1], consumer_of[g2.output[x].second - 1]}));
      }
    }
  }
}
