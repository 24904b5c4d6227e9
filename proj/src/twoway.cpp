#include "oresync/twoway.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace oresync {

TwoWayTransducer::TwoWayTransducer(Alphabet in, Alphabet out, int states)
    : input(std::move(in)), output(std::move(out)), num_states(states), left_reading(states, 0) {}

State TwoWayTransducer::add_state(bool left) {
  left_reading.push_back(left);
  return num_states++;
}

void TwoWayTransducer::add_edge(State src, Symbol sym, State dst, const Word& out) {
  edges.push_back({src, sym, dst, out});
}

void validate(const TwoWayTransducer& t) {
  auto bad = [](const std::string& m) { throw PreconditionError("two-way transducer: " + m); };
  if (static_cast<int>(t.left_reading.size()) != t.num_states) bad("direction table size");
  auto state_ok = [&](State q) { return q >= 0 && q < t.num_states; };
  for (State q : t.initial)
    if (!state_ok(q) || t.left_reading[q]) bad("initial state " + std::to_string(q) + " must read rightwards");
  for (State q : t.final)
    if (!state_ok(q) || t.left_reading[q]) bad("final state " + std::to_string(q) + " must read rightwards");
  for (const auto& e : t.edges) {
    if (!state_ok(e.src) || !state_ok(e.dst)) bad("edge state out of range");
    for (Symbol c : e.out)
      if (c < 0 || c >= t.output.size()) bad("output symbol out of range");
    const std::string at = " on edge " + std::to_string(e.src) + "->" + std::to_string(e.dst);
    if (e.sym == kLeftMarker) {
      if (!t.left_reading[e.src] || t.left_reading[e.dst]) bad("left endmarker must turn right" + at);
      if (!e.out.empty()) bad("endmarker output" + at);
    } else if (e.sym == kRightMarker) {
      if (t.left_reading[e.src] || !t.left_reading[e.dst]) bad("right endmarker must turn left" + at);
      if (!e.out.empty()) bad("endmarker output" + at);
    } else if (e.sym < 0 || e.sym >= t.read_size()) {
      bad("input symbol out of range" + at);
    }
  }
}

namespace {

std::vector<std::vector<int>> edges_by_source(const TwoWayTransducer& t) {
  std::vector<std::vector<int>> by(t.num_states);
  for (int i = 0; i < static_cast<int>(t.edges.size()); ++i) by[t.edges[i].src].push_back(i);
  return by;
}

void runs_with_guess(const TwoWayTransducer& t, const Word& u, const Word& guess,
                     const std::vector<std::vector<int>>& by, std::vector<TwoWayRun>& out) {
  const int n = static_cast<int>(u.size());
  auto symbol_at = [&](int p) -> Symbol {
    if (p == 0) return kLeftMarker;
    if (p == n + 1) return kRightMarker;
    return t.read_letter(u[p - 1], guess.empty() ? 0 : guess[p - 1]);
  };
  std::vector<char> on_path(static_cast<std::size_t>(t.num_states) * (n + 2), 0);
  TwoWayRun cur;
  cur.guess = guess;
  std::function<void(State, int)> dfs = [&](State q, int p) {
    const std::size_t cell = static_cast<std::size_t>(q) * (n + 2) + p;
    if (on_path[cell]) return;
    on_path[cell] = 1;
    if (p == n + 1 && t.final.count(q)) {
      TwoWayRun r = cur;
      r.graph.input = u;
      for (std::size_t k = 0; k < r.edges.size(); ++k)
        for (Symbol c : t.edges[r.edges[k]].out) r.graph.output.push_back({c, r.letters[k]});
      out.push_back(std::move(r));
    }
    const Symbol s = symbol_at(p);
    for (int e : by[q]) {
      const auto& edge = t.edges[e];
      if (edge.sym != s) continue;
      const int next = t.left_reading[edge.dst] ? p - 1 : p + 1;
      if (next < 0 || next > n + 1) continue;
      cur.edges.push_back(e);
      cur.letters.push_back(p);
      dfs(edge.dst, next);
      cur.edges.pop_back();
      cur.letters.pop_back();
    }
    on_path[cell] = 0;
  };
  for (State q0 : t.initial) {
    cur.start = q0;
    dfs(q0, 1);
  }
}

}  // namespace

std::vector<TwoWayRun> enumerate_runs_2w(const TwoWayTransducer& t, const Word& u, int max_len) {
  if (static_cast<int>(u.size()) > max_len)
    throw PreconditionError("run enumeration is limited to inputs of length " + std::to_string(max_len));
  for (Symbol a : u)
    if (a < 0 || a >= t.input.size()) throw AlphabetError("input symbol out of range");
  auto by = edges_by_source(t);
  std::vector<TwoWayRun> out;
  if (t.guess.size() == 0) {
    runs_with_guess(t, u, {}, by, out);
  } else {
    const int n = static_cast<int>(u.size());
    for (const Word& g : words_upto(t.guess.size(), n))
      if (static_cast<int>(g.size()) == n) runs_with_guess(t, u, g, by, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<OriginGraph> graphs_2w(const TwoWayTransducer& t, int n) {
  std::set<OriginGraph> out;
  for (const Word& u : words_upto(t.input.size(), n))
    for (const auto& r : enumerate_runs_2w(t, u, n)) out.insert(r.graph);
  return out;
}

std::set<Word> outputs_2w(const TwoWayTransducer& t, const Word& u) {
  std::set<Word> out;
  for (const auto& r : enumerate_runs_2w(t, u, static_cast<int>(u.size()))) out.insert(r.graph.output_word());
  return out;
}

std::vector<CrossingSequence> crossing_sequences(const TwoWayTransducer& t, const TwoWayRun& run,
                                                 int input_length) {
  std::vector<CrossingSequence> seqs(input_length + 2);
  for (std::size_t k = 0; k < run.edges.size(); ++k)
    seqs.at(run.letters[k]).push_back({t.edges[run.edges[k]].src, run.edges[k]});
  const State last = run.edges.empty() ? run.start : t.edges[run.edges.back()].dst;
  seqs.back().push_back({last, -1});
  return seqs;
}

std::vector<int> run_from_crossings(const TwoWayTransducer& t, const std::vector<CrossingSequence>& seqs) {
  if (seqs.size() < 2) throw FormatError("crossing sequences: too few positions");
  const int last = static_cast<int>(seqs.size()) - 1;
  std::vector<std::size_t> next(seqs.size(), 0);
  std::size_t total = 0;
  for (const auto& s : seqs) total += s.size();
  std::vector<int> edges;
  int p = 1;
  if (seqs[1].empty()) throw FormatError("crossing sequences: no initial entry");
  State expect = seqs[1][0].src;
  for (std::size_t steps = 0; steps < total; ++steps) {
    if (next[p] >= seqs[p].size()) throw FormatError("crossing sequences: position " + std::to_string(p) + " exhausted");
    const CrossingEntry& e = seqs[p][next[p]++];
    if (e.src != expect) throw FormatError("crossing sequences: state mismatch at position " + std::to_string(p));
    if (e.edge < 0) {
      if (p != last) throw FormatError("crossing sequences: run ends before the right endmarker");
      for (std::size_t i = 0; i < seqs.size(); ++i)
        if (next[i] != seqs[i].size()) throw FormatError("crossing sequences: unvisited entries");
      return edges;
    }
    const auto& edge = t.edges.at(e.edge);
    if (edge.src != e.src) throw FormatError("crossing sequences: edge does not leave its state");
    edges.push_back(e.edge);
    expect = edge.dst;
    p += t.left_reading[edge.dst] ? -1 : 1;
    if (p < 0 || p > last) throw FormatError("crossing sequences: head leaves the input");
  }
  throw FormatError("crossing sequences: run does not end");
}

std::optional<Word> ambiguous_input(const TwoWayTransducer& t, int n) {
  for (const Word& u : words_upto(t.input.size(), n))
    if (enumerate_runs_2w(t, u, n).size() > 1) return u;
  return std::nullopt;
}

bool unambiguous_upto(const TwoWayTransducer& t, int n) { return !ambiguous_input(t, n); }

TwoWayTransducer normalize_outputs(const TwoWayTransducer& t) {
  TwoWayTransducer r = t;
  r.edges.clear();
  for (const auto& e : t.edges) {
    if (e.out.size() <= 1) {
      r.edges.push_back(e);
      continue;
    }
    // Emit one letter, step onto the neighbouring letter and come straight back.
    const bool left = t.left_reading[e.src];
    State cur = e.src;
    for (std::size_t k = 0; k + 1 < e.out.size(); ++k) {
      State away = r.add_state(!left);
      State back = r.add_state(left);
      r.add_edge(cur, e.sym, away, {e.out[k]});
      for (Symbol s = 0; s < t.read_size(); ++s) r.add_edge(away, s, back);
      r.add_edge(away, left ? kRightMarker : kLeftMarker, back);
      cur = back;
    }
    r.add_edge(cur, e.sym, e.dst, {e.out.back()});
  }
  return r;
}

std::optional<ClassicalWitness> classical_containment_upto(const TwoWayTransducer& t1,
                                                           const TwoWayTransducer& t2, int n) {
  for (const Word& u : words_upto(t1.input.size(), n)) {
    auto o2 = outputs_2w(t2, u);
    for (const Word& v : outputs_2w(t1, u))
      if (!o2.count(v)) return ClassicalWitness{u, v};
  }
  return std::nullopt;
}

std::set<std::pair<Word, int>> target_set(const TwoWayTransducer& t, int n) {
  std::set<std::pair<Word, int>> out;
  for (const auto& g : graphs_2w(t, n))
    for (const auto& [c, z] : g.output) out.insert({g.input, z});
  return out;
}

}  // namespace oresync
