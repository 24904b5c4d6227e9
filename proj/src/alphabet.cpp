#include "oresync/alphabet.hpp"

#include <algorithm>
#include <set>

#include "oresync/errors.hpp"

namespace oresync {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw AlphabetError("empty symbol name");
    if (!seen.insert(n).second) throw AlphabetError("duplicate symbol '" + n + "'");
  }
}

std::optional<Symbol> Alphabet::find(std::string_view n) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == n) return i;
  return std::nullopt;
}

Symbol Alphabet::at(std::string_view n) const {
  auto s = find(n);
  if (!s) throw AlphabetError("symbol '" + std::string(n) + "' not in " + describe());
  return *s;
}

static bool all_single(const std::vector<std::string>& names) {
  return std::all_of(names.begin(), names.end(), [](const std::string& n) { return n.size() == 1; });
}

std::string Alphabet::render(const Word& w) const {
  std::string out;
  bool single = all_single(names_);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single && i > 0) out += ' ';
    out += names_.at(w[i]);
  }
  return out;
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  if (all_single(names_)) {
    for (char c : text) {
      if (c == ' ') continue;
      w.push_back(at(std::string_view(&c, 1)));
    }
    return w;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ') ++j;
    if (j > i) w.push_back(at(text.substr(i, j - i)));
    i = j;
  }
  return w;
}

std::string Alphabet::describe() const {
  std::string out = "{";
  for (int i = 0; i < size(); ++i) {
    if (i) out += ',';
    out += names_[i];
  }
  return out + "}";
}

Alphabet disjoint_union(const Alphabet& a, const Alphabet& b) {
  std::vector<std::string> names = a.names();
  std::set<std::string> used(names.begin(), names.end());
  used.insert(b.names().begin(), b.names().end());
  for (const auto& n : b.names()) {
    std::string m = n;
    if (a.find(n))
      while (used.count(m)) m += '\'';
    used.insert(m);
    names.push_back(m);
  }
  return Alphabet(std::move(names));
}

void require_same(const Alphabet& a, const Alphabet& b, const char* what) {
  if (!(a == b))
    throw AlphabetError(std::string(what) + ": alphabet mismatch " + a.describe() + " vs " + b.describe());
}

std::vector<Word> words_upto(int k, int n) {
  std::vector<Word> out{{}};
  std::size_t from = 0;
  for (int len = 1; len <= n && k > 0; ++len) {
    std::size_t to = out.size();
    for (std::size_t i = from; i < to; ++i)
      for (Symbol a = 0; a < k; ++a) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    from = to;
  }
  return out;
}

}  // namespace oresync
