#pragma once

#include <random>
#include <vector>

#include "oresync/nfa.hpp"

namespace oracle {

using oresync::Alphabet;
using oresync::Nfa;
using oresync::Word;

// All words of length <= n in (length, lexicographic) order.
std::vector<Word> all_words(int alphabet_size, int n);
std::vector<Word> words_of_length(int alphabet_size, int n);

// Path search membership that does not share code with Nfa::accepts.
bool nfa_member(const Nfa& a, const Word& w);

Nfa random_nfa(std::mt19937& rng, const Alphabet& sigma, int states, double density = 0.35);

}  // namespace oracle

#include <set>

#include "oresync/oneway.hpp"

namespace oracle {

using oresync::NormalOneWay;
using oresync::OneWayTransducer;
using oresync::OriginGraph;

// Origin graphs by direct run exploration; outputs longer than cap are dropped.
std::set<OriginGraph> run_graphs(const NormalOneWay& t, int n, int cap);
std::set<OriginGraph> run_graphs(const OneWayTransducer& t, int n, int cap);
std::set<Word> outputs(const std::set<OriginGraph>& graphs, const Word& u);

}  // namespace oracle
