#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "oresync/functional.hpp"
#include "oresync/synthesis.hpp"

using namespace oresync;

namespace {

NormalOneWay random_functional(std::mt19937& rng, const Alphabet& in, const Alphabet& out) {
  for (;;) {
    auto t = fixture::random_transducer(rng, in, out, 3, 2, 0.35);
    if (is_empty(domain(t))) continue;
    if (is_functional(t).functional) return t;
  }
}

bool delay_holds(const NormalOneWay& t1, const NormalOneWay& t2, int d) {
  Nfa image = apply_delay_sync(d, t2.input(), t2.output(), sync_language(t2));
  return origin_containment(t1, from_sync_nfa(image, t2.input(), t2.output())).holds;
}

}  // namespace

TEST_CASE("product synthesis on the introductory pair") {
  auto t1 = fixture::even_copier(), t2 = fixture::pair_bb();
  auto res = synthesize_functional(t2, t1);
  REQUIRE(res.has_value());
  CHECK(res->verified);
  CHECK(res->kind == SynthesisResult::Kind::functional_product);
  Alphabet s = res->resynchronizer.sync();
  CHECK(member_pair(res->resynchronizer, s.parse("abababab"), s.parse("abbaabba")));
  CHECK(equivalent(apply_sync(res->resynchronizer, sync_language(t1)), sync_language(t2)));
  CHECK(verify_synthesis(t2, t1, res->resynchronizer, true));
}

TEST_CASE("product synthesis of a machine with itself is diagonal on its sync words") {
  auto t = fixture::rotation();
  auto res = synthesize_functional(t, t);
  REQUIRE(res.has_value());
  CHECK(res->verified);
  Nfa sync = sync_language(t);
  for (const Word& w : enumerate(sync, 7)) CHECK(image_of(res->resynchronizer, w).count(w) == 1);
}

TEST_CASE("identity verification") {
  auto t1 = fixture::even_copier(), t2 = fixture::pair_bb();
  auto id = identity_resync(t1.input(), t1.output());
  CHECK(verify_synthesis(t1, t1, id, true));
  CHECK_FALSE(verify_synthesis(t1, t2, id));
}

TEST_CASE("non-functional arguments are rejected") {
  CHECK_THROWS_AS(synthesize_functional(fixture::subsequence(), fixture::subsequence()), PreconditionError);
}

TEST_CASE("random contained pairs synthesize and verify") {
  std::mt19937 rng(5);
  Alphabet in({"a", "c"}), out({"b", "d"});
  int positive = 0, negative = 0;
  while (positive < 12 || negative < 12) {
    auto t2 = random_functional(rng, in, out);
    if (positive < 12) {
      auto t1 = restrict_domain(t2, oracle::random_nfa(rng, in, 2));
      if (is_empty(domain(t1))) continue;
      auto res = synthesize_functional(t1, t2);
      REQUIRE(res.has_value());
      CHECK(res->verified);
      ++positive;
    }
    if (negative < 12) {
      auto t1 = random_functional(rng, in, out);
      if (containment_functional(t1, t2)) continue;
      CHECK_FALSE(synthesize_functional(t1, t2).has_value());
      ++negative;
    }
  }
}

TEST_CASE("bounded delay search") {
  auto copier = fixture::unary_copier();
  auto res = synthesize_bounded_delay(copier, copier, 4);
  REQUIRE(res.has_value());
  CHECK(res->delay == 0);
  CHECK(res->kind == SynthesisResult::Kind::bounded_delay);

  auto t1 = fixture::even_copier(), t2 = fixture::pair_bb();
  int d_max = default_delay_bound(t1, t2);
  CHECK(d_max >= 1);
  res = synthesize_bounded_delay(t1, t2, d_max);
  REQUIRE(res.has_value());
  CHECK(res->delay == 1);
  CHECK(verify_synthesis(t1, t2, res->resynchronizer));
  for (int d = 1; d <= 4; ++d) CHECK(delay_holds(t1, t2, d));

  CHECK_FALSE(synthesize_bounded_delay(fixture::per_letter_b(), fixture::two_phase_bb(), 8).has_value());
  CHECK_THROWS_AS(synthesize_bounded_delay(fixture::subsequence(), copier, 2), Error);
}
