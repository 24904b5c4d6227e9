// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "oresync/functional.hpp"
#include "oresync/machine_file.hpp"
#include "oresync/synthesis.hpp"

using namespace oresync;

namespace {

// Collects failed conditions with a short description.
struct Verdict {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok && failures.size() == 5) failures.push_back("...");
  }
};

template <class T>
T load(const std::string& name) {
  std::ifstream in(std::filesystem::path(ORESYNC_MACHINES_DIR) / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return std::get<T>(parse_machine(ss.str()));
}

std::string show(const Word& w) {
  std::string s;
  for (Symbol x : w) s += std::to_string(x);
  return s;
}

bool sync_shaped(const Word& w, int sigma) { return w.empty() || w.front() < sigma; }

// Pairs of the rational resynchronizer on sync sources of length <= n, as origin graphs.
std::map<OriginGraph, std::set<OriginGraph>> rational_pairs(const RationalResync& r, int n) {
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

void compare_compiled(Verdict& v, const RationalResync& r, const std::string& name) {
  auto expect = rational_pairs(r, 8);
  std::set<OriginGraph> sources;
  for (const auto& [g, _] : expect) sources.insert(g);
  auto rr = from_rational(r);
  auto got = resync_images(rr, sources);
  int discrepancies = 0;
  for (const auto& [g, img] : expect) discrepancies += got[g] != img;
  v.expect(discrepancies == 0, name + ": " + std::to_string(discrepancies) + " sources with different images");
  v.expect(is_k_bounded(rr, 1).bounded, name + ": not 1-bounded");
}

NormalOneWay random_functional(std::mt19937& rng, const Alphabet& in, const Alphabet& out) {
  for (;;) {
    auto t = fixture::random_transducer(rng, in, out, 3, 2, 0.35);
    if (!is_empty(domain(t)) && is_functional(t).functional) return t;
  }
}

Verdict pair_synthesis() {
  Verdict v;
  auto t1 = load<NormalOneWay>("even-copier.ow"), t2 = load<NormalOneWay>("pair-bb.ow");
  auto res = synthesize_functional(t2, t1);
  v.expect(res.has_value(), "synthesis failed");
  if (!res) return v;
  const RationalResync& r = res->resynchronizer;
  Alphabet s = r.sync();
  v.expect(member_pair(r, s.parse("abababab"), s.parse("abbaabba")), "(abababab, abbaabba) not related");
  v.expect(equivalent(apply_sync(r, sync_language(t1)), sync_language(t2)), "image of sync(T1) differs from sync(T2)");
  return v;
}

Verdict compiled_pairs() {
  Verdict v;
  compare_compiled(v, validate(load<RationalResync>("pair-shift.rs")), "example");
  std::mt19937 rng(41);
  int done = 0;
  for (int tries = 0; done < 20 && tries < 5000; ++tries) {
    Alphabet in({"a"}), out({"b"});
    auto raw = trim(fixture::random_resync(rng, in, out, 2 + done % 3, 0.35));
    if (raw.num_states == 0) continue;
    RationalResync r;
    try {
      r = validate(raw);
    } catch (const PreconditionError&) {
      continue;
    }
    compare_compiled(v, r, "random #" + std::to_string(done));
    ++done;
  }
  v.expect(done == 20, "only " + std::to_string(done) + " random resynchronizers");
  return v;
}

Verdict first_to_last_example() {
  Verdict v;
  Alphabet in({"a", "c"}), out({"b"});
  auto rr = first_to_last(in, out);
  v.expect(validate_marks(rr).ok, "marks invalid");
  v.expect(is_k_bounded(rr, 1).bounded, "not 1-bounded");
  for (int n = 1; n <= 8; ++n)
    for (const auto& u : oracle::words_of_length(2, n))
      for (int m = 0; m <= 3; ++m) {
        OriginGraph first{u, {}}, last{u, {}};
        for (int x = 0; x < m; ++x) {
          first.output.push_back({0, 1});
          last.output.push_back({0, n});
        }
        v.expect(apply_graphs(rr, {first}) == std::set<OriginGraph>{last},
                 "wrong image on u=" + show(u) + " with " + std::to_string(m) + " outputs");
      }
  return v;
}

// Outputs of length <= cap per input by run exploration, independent of the decision procedure.
int max_outputs(const NormalOneWay& t, int n, int cap) {
  int most = 0;
  auto graphs = oracle::run_graphs(t, n, cap);
  for (const auto& u : oracle::all_words(t.input().size(), n))
    most = std::max(most, static_cast<int>(oracle::outputs(graphs, u).size()));
  return most;
}

Verdict functionality_suite() {
  Verdict v;
  auto rot = load<NormalOneWay>("rotation.ow");
  v.expect(is_functional(rot).functional, "rotation reported non-functional");
  v.expect(max_outputs(rot, 4, 8) <= 1, "rotation has two outputs by brute force");
  auto sub = load<NormalOneWay>("subsequence.ow");
  auto r = is_functional(sub);
  v.expect(!r.functional, "subsequence reported functional");
  v.expect(r.output1 != r.output2 && classical_member(sub, r.input, r.output1) &&
               classical_member(sub, r.input, r.output2),
           "witness not verified");
  v.expect(max_outputs(sub, 4, 5) > 1, "subsequence has one output by brute force");
  return v;
}

Verdict functional_synthesis() {
  Verdict v;
  std::mt19937 rng(5);
  Alphabet in({"a", "c"}), out({"b", "d"});
  int positive = 0, negative = 0;
  while (positive < 25 || negative < 25) {
    auto t2 = random_functional(rng, in, out);
    if (positive < 25) {
      auto t1 = restrict_domain(t2, oracle::random_nfa(rng, in, 2));
      if (!is_empty(domain(t1))) {
        auto res = synthesize_functional(t1, t2);
        v.expect(res && verify_synthesis(t1, t2, res->resynchronizer, true),
                 "positive pair #" + std::to_string(positive));
        ++positive;
      }
    }
    if (negative < 25) {
      auto t1 = random_functional(rng, in, out);
      if (!containment_functional(t1, t2)) {
        v.expect(!synthesize_functional(t1, t2).has_value(), "negative pair #" + std::to_string(negative));
        ++negative;
      }
    }
  }
  return v;
}

Verdict no_bounded_delay() {
  Verdict v;
  auto t1 = load<NormalOneWay>("per-letter-b.ow"), t2 = load<NormalOneWay>("two-phase-bb.ow");
  for (int d = 0; d <= 8; ++d)
    v.expect(!synthesize_bounded_delay(t1, t2, d).has_value(), "delay " + std::to_string(d) + " found");
  return v;
}

Verdict counter_coherence() {
  Verdict v;
  Alphabet ab({"a", "b"}), abc({"a", "b", "c"});
  struct Design {
    Alphabet letters;
    std::vector<int> ops;
    int k;
  };
  std::vector<Design> family{{ab, {1, -1}, 0},  {ab, {1, -1}, 1},      {ab, {1, -1}, 2},      {ab, {1, -1}, 3},
                             {ab, {-1, 1}, 2},  {abc, {1, 0, -1}, 1},  {abc, {1, 0, -1}, 3},  {abc, {1, 1, -1}, 2},
                             {abc, {0, -1, 1}, 1}, {abc, {1, -1, -1}, 3}};
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& d = family[i];
    std::string tag = "design #" + std::to_string(i) + " (k=" + std::to_string(d.k) + ")";
    auto [t1, t2] = oca_to_transducers(fixture::designed_oca(d.letters, d.ops, d.k));
    v.expect(synthesize_bounded_delay(t1, t2, d.k).has_value(), tag + ": no resynchronizer at d=k");
    if (d.k > 0) v.expect(!synthesize_bounded_delay(t1, t2, d.k - 1).has_value(), tag + ": resynchronizer below k");
    Oca back = transducers_to_oca(t1, t2);
    v.expect(universal_with_bound(back, d.k).universal, tag + ": not universal at k");
    if (d.k > 0) v.expect(!universal_with_bound(back, d.k - 1).universal, tag + ": universal at k-1");
  }
  return v;
}

Verdict counter_machines() {
  Verdict v;
  v.expect(boundedness_search(minsky_to_oca(load<MinskyMachine>("bounded-by-2.mm")), 4) == 2,
           "bounded machine: bound is not 2");
  v.expect(!boundedness_search(minsky_to_oca(load<MinskyMachine>("grow.mm")), 3).has_value(),
           "growing machine: bound found");
  return v;
}

Verdict twoway_resync() {
  Verdict v;
  auto copier = load<TwoWayTransducer>("copier.tw"), reverser = load<TwoWayTransducer>("reverse.tw");
  auto pr = build_parikh_resync(reverser, copier);
  const RegularResync& rr = pr.rr;
  Symbol key = rr.out_letter(0, 0);
  v.expect(pr.moves.count(key) == 1, "no move for the first output annotation");
  if (!pr.moves.count(key)) return v;
  Relation m = rr.move_of(key);
  for (int n = 1; n <= 6; ++n)
    for (int y = 1; y <= n; ++y)
      for (int z = 1; z <= n; ++z) {
        Word w;
        for (int p = 1; p <= n; ++p) w.push_back(marked_symbol(rr.in_letter(0, 0), p == y, p == z));
        v.expect(step_accepts(*m, w) == (z == n + 1 - y),
                 "move wrong at n=" + std::to_string(n) + " y=" + std::to_string(y) + " z=" + std::to_string(z));
      }
  v.expect(apply_graphs(rr, graphs_2w(copier, 5)) == graphs_2w(reverser, 5), "graphs not reproduced");
  v.expect(!regularity_semicheck(pr.moves.at(key), 2).witness_found, "move reported regular");

  Nfa control(copier.input, 2);
  control.set_initial(0);
  control.set_final(1);
  control.add_transition(0, 0, 1);
  control.add_transition(1, 0, 1);
  auto zero = regularity_semicheck(parikh_from_nfa(control, 1), 1);
  v.expect(zero.witness_found && equivalent(*zero.witness, control), "no witness on the zero-weight control");
  return v;
}

// Every annotated input in ipar, of length <= n: each move relates a source to at most one target
// and a target to at most one source.
bool brute_partial_bijection(const RegularResync& rr, int n) {
  const int letters = rr.annotated_input.size();
  for (const Word& ann : oracle::all_words(letters, n)) {
    if (!rr.ipar.accepts(ann)) continue;
    const int len = static_cast<int>(ann.size());
    for (Symbol key = 0; key < rr.annotated_output.size(); ++key) {
      Relation m = rr.move_of(key);
      if (!m) continue;
      std::vector<int> out_deg(len + 1), in_deg(len + 1);
      for (int y = 1; y <= len; ++y)
        for (int z = 1; z <= len; ++z) {
          Word w;
          for (int p = 1; p <= len; ++p) w.push_back(marked_symbol(ann[p - 1], p == y, p == z));
          if (step_accepts(*m, w) && (++out_deg[y] > 1 || ++in_deg[z] > 1)) return false;
        }
    }
  }
  return true;
}

Verdict bounded_chain() {
  Verdict v;
  auto two = load<RegularFile>("two-bounded.rr").resync();
  v.expect(!is_k_bounded(two, 1).bounded && is_k_bounded(two, 2).bounded, "sample is not exactly 2-bounded");
  auto one = one_boundedize(two, 2);
  v.expect(is_k_bounded(one, 1).bounded, "one_boundedize result is not 1-bounded");
  std::set<OriginGraph> graphs;
  for (int len = 1; len <= 6; ++len) {
    Word u(len, 0);
    for (int y = 1; y <= len; ++y) {
      graphs.insert({u, {{0, y}}});
      for (int y2 = 1; y2 <= len; ++y2) graphs.insert({u, {{0, y}, {0, y2}}});
    }
  }
  v.expect(resync_images(one, graphs) == resync_images(two, graphs), "pair sets differ");

  TwoWayTransducer every(one.input, one.output, 1);
  every.initial = {0};
  every.final = {0};
  every.add_edge(0, 0, 0, {0});
  auto restricted = restrict_to_target_set(one, every);
  v.expect(is_partial_bijection(restricted), "product check: not a partial bijection");
  v.expect(brute_partial_bijection(restricted, 4), "enumeration: not a partial bijection");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"example transducers: functional synthesis and sync image", pair_synthesis},
      {"rational to regular: pair sets and 1-boundedness", compiled_pairs},
      {"first-to-last regular resynchronizer", first_to_last_example},
      {"functionality: rotation and subsequence", functionality_suite},
      {"functional synthesis on random pairs", functional_synthesis},
      {"no bounded-delay resynchronizer up to 8", no_bounded_delay},
      {"counter automata and transducer pairs", counter_coherence},
      {"counter machines to counter automata", counter_machines},
      {"two-way copier to reverser resynchronizer", twoway_resync},
      {"one-bounded form and target-set restriction", bounded_chain},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, run] = criteria[i];
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (v.failures.empty() ? "PASS" : "FAIL") << " " << (i + 1) << " " << name << " (" << timing << ")";
    for (const auto& f : v.failures) std::cout << "; " << f;
    std::cout << "\n";
    failed += !v.failures.empty();
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
