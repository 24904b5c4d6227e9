#include "oresync/synthesis.hpp"

#include <map>

#include "oresync/functional.hpp"

namespace oresync {

namespace {

Word shifted(const Word& w, int sigma) {
  Word out;
  for (Symbol g : w) out.push_back(g + sigma);
  return out;
}

}  // namespace

std::optional<SynthesisResult> synthesize_functional(const NormalOneWay& t1, const NormalOneWay& t2,
                                                     std::size_t cap) {
  require_same(t1.input(), t2.input(), "synthesis input");
  require_same(t1.output(), t2.output(), "synthesis output");
  for (const auto* t : {&t1, &t2}) {
    auto f = is_functional(*t, cap);
    if (!f.functional)
      throw PreconditionError("synthesis needs functional transducers; input '" + t->input().render(f.input) +
                              "' has outputs '" + t->output().render(f.output1) + "' and '" +
                              t->output().render(f.output2) + "'");
  }
  if (!containment_functional(t1, t2, cap)) return std::nullopt;
  LetterForm f1 = letter_form(t1), f2 = letter_form(t2);
  int sigma = t1.input().size();
  // Product of the two runs on the same input: read the block of t2, write the block of t1.
  WordResync w{t1.input(), t1.output(), 0, {}, {}, {}};
  std::map<std::pair<State, State>, State> index;
  std::vector<std::pair<State, State>> todo;
  auto get = [&](State p, State q) {
    auto [it, fresh] = index.try_emplace({p, q}, w.num_states);
    if (fresh) {
      ++w.num_states;
      todo.push_back({p, q});
      if (todo.size() > cap) throw CapacityError("synthesis product exceeded the state cap");
    }
    return it->second;
  };
  for (State p : f1.initial)
    for (State q : f2.initial) w.initial.insert(get(p, q));
  auto from1 = f1.edges_from(), from2 = f2.edges_from();
  std::vector<WordSyncEdge> closing;  // final outputs, targeting a common sink
  for (std::size_t i = 0; i < todo.size(); ++i) {
    auto [p, q] = todo[i];
    State src = static_cast<State>(i);
    for (int a : from1[p])
      for (int b : from2[q]) {
        const LetterEdge &e1 = f1.edges[a], &e2 = f2.edges[b];
        if (e1.in != e2.in) continue;
        Word in{e2.in}, out{e1.in};
        for (Symbol g : shifted(e2.out, sigma)) in.push_back(g);
        for (Symbol g : shifted(e1.out, sigma)) out.push_back(g);
        w.edges.push_back({src, in, out, get(e1.dst, e2.dst)});
      }
    for (const Word& v1 : f1.finals[p])
      for (const Word& v2 : f2.finals[q]) closing.push_back({src, shifted(v2, sigma), shifted(v1, sigma), 0});
  }
  State sink = w.num_states++;
  w.final.insert(sink);
  for (auto& e : closing) {
    e.dst = sink;
    w.edges.push_back(e);
  }
  SynthesisResult result;
  result.resynchronizer = to_letter_to_letter(w);
  result.kind = SynthesisResult::Kind::functional_product;
  result.verified = verify_synthesis(t1, t2, result.resynchronizer, true, cap);
  return result;
}

int default_delay_bound(const NormalOneWay& t1, const NormalOneWay& t2) {
  LetterForm f1 = letter_form(t1), f2 = letter_form(t2);
  return f1.num_states * f2.num_states * (1 + f1.max_out() + f2.max_out());
}

std::optional<SynthesisResult> synthesize_bounded_delay(const NormalOneWay& t1, const NormalOneWay& t2, int d_max,
                                                        std::size_t cap) {
  require_same(t1.input(), t2.input(), "synthesis input");
  require_same(t1.output(), t2.output(), "synthesis output");
  if (!t1.real_time() || !t2.real_time()) throw PreconditionError("bounded-delay synthesis needs real-time transducers");
  Nfa sync2 = sync_language(t2);
  for (int d = 0; d <= d_max; ++d) {
    Nfa image = apply_delay_sync(d, t2.input(), t2.output(), sync2, cap);
    NormalOneWay moved = from_sync_nfa(image, t2.input(), t2.output());
    if (!origin_containment(t1, moved, cap).holds) continue;
    SynthesisResult result;
    result.kind = SynthesisResult::Kind::bounded_delay;
    result.delay = d;
    result.resynchronizer = d_delay(d, t2.input(), t2.output(), std::max(d, kDefaultDelayCap));
    result.verified = true;
    return result;
  }
  return std::nullopt;
}

bool verify_synthesis(const NormalOneWay& t1, const NormalOneWay& t2, const RationalResync& r, bool equivalence,
                      std::size_t cap) {
  NormalOneWay moved = apply(r, t2);
  if (!origin_containment(t1, moved, cap).holds) return false;
  return !equivalence || origin_containment(moved, t1, cap).holds;
}

}  // namespace oresync
