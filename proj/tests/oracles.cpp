#include "oracles.hpp"

#include <functional>

namespace oracle {

std::vector<Word> words_of_length(int k, int n) {
  std::vector<Word> out{{}};
  for (int i = 0; i < n; ++i) {
    std::vector<Word> next;
    for (const auto& w : out)
      for (int s = 0; s < k; ++s) {
        Word x = w;
        x.push_back(s);
        next.push_back(x);
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Word> all_words(int k, int n) {
  std::vector<Word> out;
  for (int len = 0; len <= n; ++len)
    for (auto& w : words_of_length(k, len)) out.push_back(std::move(w));
  return out;
}

bool nfa_member(const Nfa& a, const Word& w) {
  std::function<bool(int, std::size_t)> go = [&](int s, std::size_t i) {
    if (i == w.size()) return a.is_final(s);
    for (const auto& t : a.transitions())
      if (t.src == s && t.sym == w[i] && go(t.dst, i + 1)) return true;
    return false;
  };
  for (int s = 0; s < a.num_states(); ++s)
    if (a.is_initial(s) && go(s, 0)) return true;
  return false;
}

Nfa random_nfa(std::mt19937& rng, const Alphabet& sigma, int states, double density) {
  std::bernoulli_distribution coin(density), half(0.4);
  Nfa n(sigma, states);
  n.set_initial(0);
  for (int s = 0; s < states; ++s) {
    if (half(rng)) n.set_final(s);
    for (int a = 0; a < sigma.size(); ++a)
      for (int t = 0; t < states; ++t)
        if (coin(rng)) n.add_transition(s, a, t);
  }
  return n;
}

}  // namespace oracle

namespace oracle {

std::set<OriginGraph> run_graphs(const NormalOneWay& t, int n, int cap) {
  std::set<OriginGraph> out;
  std::set<std::tuple<int, Word, std::vector<std::pair<int, int>>>> seen;
  std::function<void(int, OriginGraph&)> go = [&](int q, OriginGraph& g) {
    if (!seen.insert({q, g.input, g.output}).second) return;
    if (t.is_final(q)) out.insert(g);
    for (const auto& e : t.edges()) {
      if (e.src != q) continue;
      if (e.in != oresync::kEps && static_cast<int>(g.input.size()) == n) continue;
      if (static_cast<int>(g.output.size() + e.out.size()) > cap) continue;
      OriginGraph h = g;
      if (e.in != oresync::kEps) h.input.push_back(e.in);
      if (!e.out.empty() && h.input.empty()) continue;
      for (int x : e.out) h.output.push_back({x, static_cast<int>(h.input.size())});
      go(e.dst, h);
    }
  };
  for (int s : t.initial()) {
    OriginGraph g;
    go(s, g);
  }
  return out;
}

std::set<OriginGraph> run_graphs(const OneWayTransducer& t, int n, int cap) {
  std::set<OriginGraph> out;
  std::function<void(int, OriginGraph&)> go = [&](int q, OriginGraph& g) {
    auto f = t.finals.find(q);
    if (f != t.finals.end())
      for (const auto& w : oresync::enumerate(f->second, cap)) {
        if (static_cast<int>(g.output.size() + w.size()) > cap || (g.input.empty() && !w.empty())) continue;
        OriginGraph h = g;
        for (int x : w) h.output.push_back({x, static_cast<int>(h.input.size())});
        out.insert(h);
      }
    if (static_cast<int>(g.input.size()) == n) return;
    for (const auto& e : t.edges) {
      if (e.src != q) continue;
      for (const auto& w : oresync::enumerate(e.out, cap)) {
        if (static_cast<int>(g.output.size() + w.size()) > cap) continue;
        OriginGraph h = g;
        h.input.push_back(e.sym);
        for (int x : w) h.output.push_back({x, static_cast<int>(h.input.size())});
        go(e.dst, h);
      }
    }
  };
  for (int s : t.initial) {
    OriginGraph g;
    go(s, g);
  }
  return out;
}

std::set<Word> outputs(const std::set<OriginGraph>& graphs, const Word& u) {
  std::set<Word> r;
  for (const auto& g : graphs)
    if (g.input == u) r.insert(g.output_word());
  return r;
}

}  // namespace oracle
