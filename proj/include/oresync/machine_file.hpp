#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "oresync/oca.hpp"
#include "oresync/parikh.hpp"

namespace oresync {

// Regular resynchronizer whose relations are explicit automata over the marked annotated input.
struct RegularFile {
  Alphabet input, output, input_params, output_params;
  Nfa ipar, opar;
  std::map<Symbol, Nfa> moves;
  std::map<std::pair<Symbol, Symbol>, Nfa> nexts;
  std::optional<Nfa> empty_domain;

  RegularResync resync() const;
};

// Materializes every non-empty relation of rr (trimmed).
RegularFile to_regular_file(const RegularResync& rr, std::size_t cap = kDefaultCapacity);

// Labelled Parikh automata, e.g. the move relations of a two-way resynchronizer.
struct ParikhFile {
  std::vector<std::pair<std::string, ParikhAutomaton>> automata;
};

enum class MachineMode { oneway, twoway, resync, regresync, oca, parikh, minsky };

using Machine = std::variant<NormalOneWay, TwoWayTransducer, RationalResync, RegularFile, Oca, ParikhFile,
                             MinskyMachine>;

std::string_view mode_name(MachineMode m);
MachineMode mode_of(const Machine& m);

// Parse errors are FormatError with a "line N:" prefix; symbol errors are AlphabetError.
Machine parse_machine(std::string_view text);
// Canonical text: numeric state ids, directives in a fixed order, transitions sorted (Minsky
// instructions keep their order, since it names the instruction letters).
std::string serialize(const Machine& m);

// Literals, concatenation, `|`, `*` and parentheses. With multi-character symbol names, literals are
// separated by spaces or operators. The empty string denotes the empty word.
Nfa parse_regex(const Alphabet& a, std::string_view text);

std::string to_dot(const Nfa& a, const std::string& name = "nfa");
std::string to_dot(const Machine& m);
std::string to_dot(const OriginGraph& g, const Alphabet& in, const Alphabet& out);

}  // namespace oresync
