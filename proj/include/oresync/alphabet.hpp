#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oresync {

using Symbol = int;
using Word = std::vector<Symbol>;
using State = int;

// Finite, ordered alphabet. Symbols are indices into the declaration order.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(Symbol s) const { return names_.at(s); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Symbol> find(std::string_view n) const;
  Symbol at(std::string_view n) const;

  // Joins names, with separators only when some name is longer than one char.
  std::string render(const Word& w) const;
  // Parses a word written as render() writes it.
  Word parse(std::string_view text) const;
  std::string describe() const;

  bool operator==(const Alphabet& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
};

// Disjoint union: names of a first, then names of b (primed when they clash with a).
Alphabet disjoint_union(const Alphabet& a, const Alphabet& b);

// Words over symbols 0..k-1 of length <= n, by length then lexicographically.
std::vector<Word> words_upto(int k, int n);

void require_same(const Alphabet& a, const Alphabet& b, const char* what);

}  // namespace oresync
