// Line-oriented machine files. A file is a mode, alphabets, and one or more automaton sections; a
// section is `states`, `initial`, `final` and `trans` lines, opened by `relation <label>` when the mode
// holds several automata.

#include "oresync/machine_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <climits>
#include <sstream>

namespace oresync {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw FormatError("line " + std::to_string(line) + ": " + msg);
}

struct Tok {
  std::string text;
  bool quoted = false;
};

struct Directive {
  int line = 0;
  std::string name;
  std::vector<Tok> args;
};

std::vector<Tok> tokenize(std::string_view s, int line) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == '"') {
      Tok t{"", true};
      ++i;
      while (true) {
        if (i >= s.size()) fail(line, "unterminated string");
        if (s[i] == '"') break;
        if (s[i] == '\\' && i + 1 < s.size()) ++i;
        t.text += s[i++];
      }
      ++i;
      out.push_back(std::move(t));
    } else {
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r' && s[j] != '"' && s[j] != '#') ++j;
      out.push_back({std::string(s.substr(i, j - i)), false});
      i = j;
    }
  }
  return out;
}

std::string quote(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r + "\"";
}

long to_long(const Tok& t, int line) {
  long v = 0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || t.quoted) fail(line, "expected an integer, got '" + t.text + "'");
  return v;
}

int to_int(const Tok& t, int line) {
  long v = to_long(t, line);
  if (v < INT_MIN || v > INT_MAX) fail(line, "integer out of range");
  return static_cast<int>(v);
}

// One automaton: states by name, then lines referring to them.
struct Section {
  int line = 0;
  std::vector<Tok> label;
  std::vector<Directive> body;
};

struct Document {
  std::optional<std::string> mode;
  int mode_line = 0;
  std::map<std::string, std::pair<int, Alphabet>> alphabets;
  std::map<std::string, Directive> scalars;
  Section top;
  std::vector<Section> relations;

  const Alphabet* alphabet(const std::string& k) const {
    auto it = alphabets.find(k);
    return it == alphabets.end() ? nullptr : &it->second.second;
  }
  const Alphabet& need(const std::string& k) const {
    if (auto a = alphabet(k)) return *a;
    fail(mode_line, "mode " + *mode + " needs `alphabet " + k + "`");
  }
};

Document read(std::string_view text) {
  Document d;
  Section* cur = &d.top;
  int line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    auto toks = tokenize(text.substr(pos, end - pos), line);
    pos = end + 1;
    if (toks.empty()) continue;
    if (toks[0].quoted) fail(line, "directive expected");
    Directive dir{line, toks[0].text, std::vector<Tok>(toks.begin() + 1, toks.end())};
    if (dir.name == "mode") {
      if (d.mode) fail(line, "mode given twice");
      if (dir.args.size() != 1) fail(line, "mode takes one argument");
      d.mode = dir.args[0].text;
      d.mode_line = line;
    } else if (dir.name == "alphabet") {
      if (dir.args.empty()) fail(line, "alphabet needs a kind");
      const std::string kind = dir.args[0].text;
      static const std::set<std::string> kinds{"input", "output", "guess", "iparam", "oparam"};
      if (!kinds.count(kind)) fail(line, "unknown alphabet kind '" + kind + "'");
      if (d.alphabets.count(kind)) fail(line, "alphabet " + kind + " given twice");
      std::vector<std::string> names;
      for (std::size_t i = 1; i < dir.args.size(); ++i) names.push_back(dir.args[i].text);
      try {
        d.alphabets.emplace(kind, std::pair{line, Alphabet(names)});
      } catch (const AlphabetError& e) {
        fail(line, e.what());
      }
    } else if (dir.name == "dim" || dir.name == "counters") {
      if (d.scalars.count(dir.name)) fail(line, dir.name + " given twice");
      if (dir.args.size() != 1) fail(line, dir.name + " takes one argument");
      d.scalars.emplace(dir.name, dir);
    } else if (dir.name == "relation") {
      if (dir.args.empty()) fail(line, "relation needs a label");
      d.relations.push_back({line, dir.args, {}});
      cur = &d.relations.back();
    } else if (dir.name == "states" || dir.name == "initial" || dir.name == "final" || dir.name == "trans" ||
               dir.name == "left") {
      cur->body.push_back(std::move(dir));
    } else {
      fail(line, "unknown directive '" + dir.name + "'");
    }
  }
  if (!d.mode) throw FormatError("line 1: missing mode directive");
  return d;
}

// Options after `trans <src> <sym> <dst>`.
struct TransAttrs {
  std::optional<Tok> output;
  std::optional<std::vector<long>> weight;
  std::optional<std::pair<int, int>> guard;
  std::optional<int> add, counter;
  bool reset = false;
  std::vector<std::string> flags;  // inc, dec, nop, zero
};

struct Trans {
  int line;
  State src;
  Tok sym;
  State dst;
  TransAttrs attrs;
};

struct Final {
  int line;
  State q;
  std::optional<Tok> output;
};

// A section resolved against its state list.
struct Resolved {
  int states = 0;
  std::vector<std::string> names;
  std::vector<State> initial, left;
  std::vector<Final> finals;
  std::vector<Trans> trans;
};

TransAttrs trans_attrs(const Directive& d, std::size_t from) {
  TransAttrs a;
  auto& args = d.args;
  std::size_t i = from;
  auto need = [&](std::size_t k, const char* what) {
    if (i + k > args.size()) fail(d.line, std::string(what) + " is missing arguments");
  };
  while (i < args.size()) {
    const std::string key = args[i].text;
    if (args[i].quoted) fail(d.line, "unexpected string");
    ++i;
    if (key == "output") {
      need(1, "output");
      if (!args[i].quoted) fail(d.line, "output expects a quoted word");
      a.output = args[i++];
    } else if (key == "weight") {
      std::vector<long> w;
      while (i < args.size() && !args[i].quoted &&
             (std::isdigit(static_cast<unsigned char>(args[i].text[0])) || args[i].text[0] == '-' ||
              args[i].text[0] == '+'))
        w.push_back(to_long(args[i++], d.line));
      a.weight = w;
    } else if (key == "guard") {
      need(2, "guard");
      const int lo = to_int(args[i], d.line);
      const int hi = args[i + 1].text == "inf" ? INT_MAX : to_int(args[i + 1], d.line);
      a.guard = {lo, hi};
      i += 2;
    } else if (key == "add") {
      need(1, "add");
      a.add = to_int(args[i++], d.line);
    } else if (key == "counter") {
      need(1, "counter");
      a.counter = to_int(args[i++], d.line);
    } else if (key == "reset") {
      a.reset = true;
    } else if (key == "inc" || key == "dec" || key == "nop" || key == "zero") {
      a.flags.push_back(key);
    } else {
      fail(d.line, "unknown transition attribute '" + key + "'");
    }
  }
  return a;
}

Resolved resolve(const Section& s, bool allow_left = false) {
  Resolved r;
  std::map<std::string, State> id;
  auto state = [&](const Tok& t, int line) {
    auto it = id.find(t.text);
    if (t.quoted || it == id.end()) fail(line, "unknown state '" + t.text + "'");
    return it->second;
  };
  for (const auto& d : s.body) {
    if (d.name == "states") {
      for (const auto& t : d.args) {
        if (t.quoted) fail(d.line, "state ids are bare words");
        if (!id.emplace(t.text, r.states).second) fail(d.line, "state '" + t.text + "' declared twice");
        r.names.push_back(t.text);
        ++r.states;
      }
    } else if (d.name == "initial") {
      for (const auto& t : d.args) r.initial.push_back(state(t, d.line));
    } else if (d.name == "left") {
      if (!allow_left) fail(d.line, "`left` is only meaningful for two-way transducers");
      for (const auto& t : d.args) r.left.push_back(state(t, d.line));
    } else if (d.name == "final") {
      if (d.args.empty()) fail(d.line, "final needs a state");
      Final f{d.line, state(d.args[0], d.line), std::nullopt};
      if (d.args.size() == 3 && d.args[1].text == "output" && d.args[2].quoted) {
        f.output = d.args[2];
      } else if (d.args.size() != 1) {
        fail(d.line, "expected `final <id> [output \"<word>\"]`");
      }
      r.finals.push_back(std::move(f));
    } else if (d.name == "trans") {
      if (d.args.size() < 3) fail(d.line, "expected `trans <src> <symbol> <dst> ...`");
      r.trans.push_back({d.line, state(d.args[0], d.line), d.args[1], state(d.args[2], d.line), trans_attrs(d, 3)});
    }
  }
  return r;
}

void reject_attrs(const Trans& t, bool output, bool weight, bool oca, bool counter) {
  const auto& a = t.attrs;
  if (!output && a.output) fail(t.line, "output is not allowed here");
  if (!weight && a.weight) fail(t.line, "weight is not allowed here");
  if (!oca && (a.guard || a.add || a.reset || !a.flags.empty()))
    if (!(counter && !a.flags.empty())) fail(t.line, "counter operations are not allowed here");
  if (!counter && a.counter) fail(t.line, "counter is not allowed here");
}

Symbol symbol(const Alphabet& a, const Tok& t, int line) {
  if (auto s = a.find(t.text); s && !t.quoted) return *s;
  fail(line, "symbol '" + t.text + "' not in " + a.describe());
}

Word word_of(const Alphabet& a, const Tok& t, int line) {
  try {
    return a.parse(t.text);
  } catch (const AlphabetError& e) {
    fail(line, e.what());
  }
}

Nfa regex_of(const Alphabet& a, const Tok& t, int line) {
  try {
    return parse_regex(a, t.text);
  } catch (const FormatError& e) {
    fail(line, e.what());
  } catch (const AlphabetError& e) {
    fail(line, e.what());
  }
}

Nfa nfa_of(const Section& s, const Alphabet& a) {
  Resolved r = resolve(s);
  Nfa n(a, r.states);
  for (State q : r.initial) n.set_initial(q);
  for (const auto& f : r.finals) {
    if (f.output) fail(f.line, "automaton final states take no output");
    n.set_final(f.q);
  }
  for (const auto& t : r.trans) {
    reject_attrs(t, false, false, false, false);
    n.add_transition(t.src, symbol(a, t.sym, t.line), t.dst);
  }
  return n;
}

std::string label_of(const Section& s) {
  std::string l;
  for (const auto& t : s.label) l += (l.empty() ? "" : " ") + t.text;
  return l;
}

void no_relations(const Document& d) {
  if (!d.relations.empty()) fail(d.relations.front().line, "mode " + *d.mode + " has no relation sections");
}

void no_scalars(const Document& d, const std::string& allowed = "") {
  for (const auto& [k, dir] : d.scalars)
    if (k != allowed) fail(dir.line, k + " is not used by mode " + *d.mode);
}

void only_alphabets(const Document& d, std::set<std::string> allowed) {
  for (const auto& [k, v] : d.alphabets)
    if (!allowed.count(k)) fail(v.first, "alphabet " + k + " is not used by mode " + *d.mode);
}

NormalOneWay read_oneway(const Document& d) {
  no_relations(d);
  no_scalars(d);
  only_alphabets(d, {"input", "output"});
  const Alphabet& in = d.need("input");
  if (in.find("eps")) fail(d.alphabets.at("input").first, "`eps` is reserved and cannot be an input symbol");
  const Alphabet& out = d.need("output");
  Resolved r = resolve(d.top);
  OneWayTransducer t(in, out, r.states);
  t.initial = r.initial;
  for (const auto& e : r.trans) {
    reject_attrs(e, true, false, false, false);
    const Symbol s = e.sym.text == "eps" && !e.sym.quoted ? kEps : symbol(in, e.sym, e.line);
    if (e.attrs.output)
      t.add_edge(e.src, s, e.dst, regex_of(out, *e.attrs.output, e.line));
    else
      t.add_edge(e.src, s, e.dst, Word{});
  }
  for (const auto& f : r.finals) {
    if (t.finals.count(f.q)) fail(f.line, "state declared final twice");
    if (f.output)
      t.add_final(f.q, regex_of(out, *f.output, f.line));
    else
      t.add_final(f.q);
  }
  return normalize(t);
}

TwoWayTransducer read_twoway(const Document& d) {
  no_relations(d);
  no_scalars(d);
  only_alphabets(d, {"input", "output", "guess"});
  const Alphabet& in = d.need("input");
  for (const char* reserved : {"L", "R"})
    if (in.find(reserved))
      fail(d.alphabets.at("input").first,
           std::string("`") + reserved + "` marks an endmarker and cannot be an input symbol");
  const Alphabet& out = d.need("output");
  const Alphabet guess = d.alphabet("guess") ? *d.alphabet("guess") : Alphabet();
  Resolved r = resolve(d.top, true);
  TwoWayTransducer t(in, out, r.states);
  t.guess = guess;
  for (State q : r.left) t.left_reading[q] = 1;
  t.initial.insert(r.initial.begin(), r.initial.end());
  for (const auto& f : r.finals) {
    if (f.output) fail(f.line, "two-way final states take no output");
    t.final.insert(f.q);
  }
  for (const auto& e : r.trans) {
    reject_attrs(e, true, false, false, false);
    Symbol s;
    if (!e.sym.quoted && e.sym.text == "L") {
      s = kLeftMarker;
    } else if (!e.sym.quoted && e.sym.text == "R") {
      s = kRightMarker;
    } else if (guess.size()) {
      const auto slash = e.sym.text.find('/');
      if (slash == std::string::npos) fail(e.line, "expected letter/guess, got '" + e.sym.text + "'");
      s = t.read_letter(symbol(in, {e.sym.text.substr(0, slash)}, e.line),
                        symbol(guess, {e.sym.text.substr(slash + 1)}, e.line));
    } else {
      s = symbol(in, e.sym, e.line);
    }
    t.add_edge(e.src, s, e.dst, e.attrs.output ? word_of(out, *e.attrs.output, e.line) : Word{});
  }
  std::sort(t.edges.begin(), t.edges.end());
  t.edges.erase(std::unique(t.edges.begin(), t.edges.end()), t.edges.end());
  try {
    validate(t);
  } catch (const PreconditionError& e) {
    fail(d.mode_line, e.what());
  }
  return t;
}

RationalResync read_resync(const Document& d) {
  no_relations(d);
  no_scalars(d);
  only_alphabets(d, {"input", "output"});
  RationalResync r(d.need("input"), d.need("output"), 0);
  const Alphabet sync = r.sync();
  Resolved s = resolve(d.top);
  for (int i = 0; i < s.states; ++i) r.add_state();
  r.initial.insert(s.initial.begin(), s.initial.end());
  for (const auto& f : s.finals) {
    if (f.output) fail(f.line, "resynchronizer final states take no output");
    r.final[f.q] = 1;
  }
  for (const auto& e : s.trans) {
    reject_attrs(e, true, false, false, false);
    if (!e.attrs.output) fail(e.line, "letter-to-letter transitions need `output \"<symbol>\"`");
    Word w = word_of(sync, *e.attrs.output, e.line);
    if (w.size() != 1) fail(e.line, "output must be a single sync symbol");
    r.add_edge(e.src, symbol(sync, e.sym, e.line), w[0], e.dst);
  }
  return r;
}

RegularFile read_regular(const Document& d) {
  no_scalars(d);
  only_alphabets(d, {"input", "output", "iparam", "oparam"});
  if (!d.top.body.empty()) fail(d.top.body.front().line, "regular resynchronizer automata belong in relation sections");
  RegularFile f;
  f.input = d.need("input");
  f.output = d.need("output");
  f.input_params = d.need("iparam");
  f.output_params = d.need("oparam");
  const Alphabet ain = annotated_alphabet(f.input, f.input_params), aout = annotated_alphabet(f.output, f.output_params);
  const Alphabet marked = marked_alphabet(ain);
  f.ipar = universal_language(ain);
  f.opar = universal_language(aout);
  std::set<std::string> seen;
  for (const auto& s : d.relations) {
    const std::string label = label_of(s);
    if (!seen.insert(label).second) fail(s.line, "relation " + label + " given twice");
    const std::string kind = s.label[0].text;
    const std::size_t keys = s.label.size() - 1;
    if (kind == "ipar" && keys == 0) {
      f.ipar = nfa_of(s, ain);
    } else if (kind == "opar" && keys == 0) {
      f.opar = nfa_of(s, aout);
    } else if (kind == "empty-domain" && keys == 0) {
      f.empty_domain = nfa_of(s, ain);
    } else if (kind == "move" && keys == 1) {
      f.moves[symbol(aout, s.label[1], s.line)] = nfa_of(s, marked);
    } else if (kind == "next" && keys == 2) {
      f.nexts[{symbol(aout, s.label[1], s.line), symbol(aout, s.label[2], s.line)}] = nfa_of(s, marked);
    } else {
      fail(s.line, "expected `relation ipar|opar|empty-domain`, `relation move <key>` or `relation next <key> <key>`");
    }
  }
  return f;
}

Oca read_oca(const Document& d) {
  no_relations(d);
  no_scalars(d);
  only_alphabets(d, {"input"});
  const Alphabet& in = d.need("input");
  Resolved r = resolve(d.top);
  Oca a(in, r.states);
  a.initial.insert(r.initial.begin(), r.initial.end());
  for (const auto& f : r.finals) {
    if (f.output) fail(f.line, "counter automaton final states take no output");
    a.final[f.q] = 1;
  }
  for (const auto& t : r.trans) {
    reject_attrs(t, false, false, true, false);
    OcaEdge e{t.src, symbol(in, t.sym, t.line), 0, INT_MAX, 0, false, t.dst};
    const auto& at = t.attrs;
    if (at.flags.size() > 1) fail(t.line, "at most one of inc, dec, nop, zero");
    if (!at.flags.empty() && (at.guard || at.add)) fail(t.line, "shorthand operations exclude guard and add");
    if (!at.flags.empty()) {
      const auto& fl = at.flags[0];
      if (fl == "inc") e.add = 1;
      if (fl == "dec") e.add = -1;
      if (fl == "zero") e.hi = 0;
    }
    if (at.guard) std::tie(e.lo, e.hi) = *at.guard;
    if (at.add) e.add = *at.add;
    e.reset = at.reset;
    if (e.lo < 0 || e.lo > e.hi) fail(t.line, "guard must satisfy 0 <= lo <= hi");
    a.add_edge(e);
  }
  std::sort(a.edges.begin(), a.edges.end());
  a.edges.erase(std::unique(a.edges.begin(), a.edges.end()), a.edges.end());
  return a;
}

ParikhFile read_parikh(const Document& d) {
  only_alphabets(d, {"input"});
  no_scalars(d, "dim");
  auto it = d.scalars.find("dim");
  if (it == d.scalars.end()) fail(d.mode_line, "mode parikh needs `dim <k>`");
  const int dim = to_int(it->second.args[0], it->second.line);
  if (dim < 0) fail(it->second.line, "dim must be non-negative");
  const Alphabet& in = d.need("input");
  std::vector<std::pair<std::string, const Section*>> sections;
  if (!d.top.body.empty()) sections.push_back({"main", &d.top});
  for (const auto& s : d.relations) sections.push_back({label_of(s), &s});
  ParikhFile f;
  std::set<std::string> seen;
  for (const auto& [label, s] : sections) {
    if (!seen.insert(label).second) fail(s->line, "automaton " + label + " given twice");
    Resolved r = resolve(*s);
    ParikhAutomaton a(in, dim, r.states);
    for (State q : r.initial) a.set_initial(q);
    for (const auto& fi : r.finals) {
      if (fi.output) fail(fi.line, "Parikh final states take no output");
      a.set_final(fi.q);
    }
    for (const auto& t : r.trans) {
      reject_attrs(t, false, true, false, false);
      Weight w = t.attrs.weight.value_or(Weight(dim, 0));
      if (static_cast<int>(w.size()) != dim) fail(t.line, "weight needs " + std::to_string(dim) + " entries");
      try {
        a.add_transition(t.src, symbol(in, t.sym, t.line), t.dst, w);
      } catch (const PreconditionError& e) {
        fail(t.line, e.what());
      }
    }
    f.automata.push_back({label, std::move(a)});
  }
  return f;
}

MinskyMachine read_minsky(const Document& d) {
  no_relations(d);
  no_scalars(d, "counters");
  only_alphabets(d, {});
  MinskyMachine m;
  if (auto it = d.scalars.find("counters"); it != d.scalars.end()) m.counters = to_int(it->second.args[0], it->second.line);
  if (m.counters < 1) fail(d.mode_line, "counters must be positive");
  Resolved r = resolve(d.top);
  if (r.states == 0) fail(d.mode_line, "a counter machine needs states");
  m.num_states = r.states;
  if (r.initial.size() != 1) fail(d.mode_line, "a counter machine has exactly one initial state");
  m.initial = r.initial[0];
  if (!r.finals.empty()) fail(r.finals.front().line, "counter machines have no final states");
  for (const auto& t : r.trans) {
    reject_attrs(t, false, false, false, true);
    MinskyInstr ins{t.src, MinskyInstr::Kind::inc, 0, t.dst};
    if (t.sym.text == "inc") {
      ins.kind = MinskyInstr::Kind::inc;
    } else if (t.sym.text == "dec") {
      ins.kind = MinskyInstr::Kind::dec;
    } else if (t.sym.text == "zero") {
      ins.kind = MinskyInstr::Kind::zero_test;
    } else {
      fail(t.line, "counter instructions are inc, dec or zero");
    }
    if (!t.attrs.counter) fail(t.line, "instruction needs `counter <c>`");
    ins.counter = *t.attrs.counter;
    if (ins.counter < 0 || ins.counter >= m.counters) fail(t.line, "counter index out of range");
    m.instrs.push_back(ins);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Writing

class Writer {
 public:
  void line(const std::string& s) { out_ += s + "\n"; }
  void words(const std::string& head, const std::vector<std::string>& items) {
    std::string s = head;
    for (const auto& i : items) s += " " + i;
    line(s);
  }
  void states(int n) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    words("states", ids);
  }
  void state_list(const std::string& head, const std::vector<State>& qs) {
    if (qs.empty()) return;
    std::vector<std::string> ids;
    for (State q : qs) ids.push_back(std::to_string(q));
    words(head, ids);
  }
  void finals(const std::vector<State>& qs) {
    for (State q : qs) line("final " + std::to_string(q));
  }
  void nfa(const Nfa& a) {
    states(a.num_states());
    state_list("initial", a.initial_states());
    finals(a.final_states());
    auto ts = a.transitions();
    std::sort(ts.begin(), ts.end());
    for (const auto& t : ts)
      line("trans " + std::to_string(t.src) + " " + a.alphabet().name(t.sym) + " " + std::to_string(t.dst));
  }
  std::string str() const { return out_; }

 private:
  std::string out_;
};

std::vector<State> to_vec(const std::set<State>& s) { return {s.begin(), s.end()}; }

std::vector<State> flagged(const std::vector<char>& f) {
  std::vector<State> r;
  for (State q = 0; q < static_cast<State>(f.size()); ++q)
    if (f[q]) r.push_back(q);
  return r;
}

std::string write(const NormalOneWay& t) {
  Writer w;
  w.line("mode oneway");
  w.words("alphabet input", t.input().names());
  w.words("alphabet output", t.output().names());
  w.states(t.num_states());
  w.state_list("initial", to_vec(t.initial()));
  std::vector<State> fin;
  for (State q = 0; q < t.num_states(); ++q)
    if (t.is_final(q)) fin.push_back(q);
  w.finals(fin);
  for (const auto& e : t.edges()) {
    std::string s = "trans " + std::to_string(e.src) + " " + (e.in == kEps ? std::string("eps") : t.input().name(e.in)) +
                    " " + std::to_string(e.dst);
    if (!e.out.empty()) s += " output " + quote(t.output().render(e.out));
    w.line(s);
  }
  return w.str();
}

std::string write(const TwoWayTransducer& t) {
  Writer w;
  w.line("mode twoway");
  w.words("alphabet input", t.input.names());
  w.words("alphabet output", t.output.names());
  if (t.guess.size()) w.words("alphabet guess", t.guess.names());
  w.states(t.num_states);
  w.state_list("left", flagged(t.left_reading));
  w.state_list("initial", to_vec(t.initial));
  w.finals(to_vec(t.final));
  auto edges = t.edges;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& e : edges) {
    std::string sym;
    if (e.sym == kLeftMarker) {
      sym = "L";
    } else if (e.sym == kRightMarker) {
      sym = "R";
    } else if (t.guess.size()) {
      sym = t.input.name(e.sym / t.guess.size()) + "/" + t.guess.name(e.sym % t.guess.size());
    } else {
      sym = t.input.name(e.sym);
    }
    std::string s = "trans " + std::to_string(e.src) + " " + sym + " " + std::to_string(e.dst);
    if (!e.out.empty()) s += " output " + quote(t.output.render(e.out));
    w.line(s);
  }
  return w.str();
}

std::string write(const RationalResync& r) {
  Writer w;
  w.line("mode resync");
  w.words("alphabet input", r.input.names());
  w.words("alphabet output", r.output.names());
  const Alphabet sync = r.sync();
  w.states(r.num_states);
  w.state_list("initial", to_vec(r.initial));
  w.finals(flagged(r.final));
  for (const auto& e : r.edges)
    w.line("trans " + std::to_string(e.src) + " " + sync.name(e.in) + " " + std::to_string(e.dst) + " output " +
           quote(sync.name(e.out)));
  return w.str();
}

std::string write(const RegularFile& f) {
  Writer w;
  w.line("mode regresync");
  w.words("alphabet input", f.input.names());
  w.words("alphabet output", f.output.names());
  w.words("alphabet iparam", f.input_params.names());
  w.words("alphabet oparam", f.output_params.names());
  const Alphabet aout = annotated_alphabet(f.output, f.output_params);
  w.line("relation ipar");
  w.nfa(f.ipar);
  w.line("relation opar");
  w.nfa(f.opar);
  if (f.empty_domain) {
    w.line("relation empty-domain");
    w.nfa(*f.empty_domain);
  }
  for (const auto& [k, n] : f.moves) {
    w.line("relation move " + aout.name(k));
    w.nfa(n);
  }
  for (const auto& [k, n] : f.nexts) {
    w.line("relation next " + aout.name(k.first) + " " + aout.name(k.second));
    w.nfa(n);
  }
  return w.str();
}

std::string write(const Oca& a) {
  Writer w;
  w.line("mode oca");
  w.words("alphabet input", a.alphabet.names());
  w.states(a.num_states);
  w.state_list("initial", to_vec(a.initial));
  w.finals(flagged(a.final));
  auto edges = a.edges;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& e : edges) {
    std::string s = "trans " + std::to_string(e.src) + " " + a.alphabet.name(e.sym) + " " + std::to_string(e.dst);
    if (e.lo != 0 || e.hi != INT_MAX)
      s += " guard " + std::to_string(e.lo) + " " + (e.hi == INT_MAX ? std::string("inf") : std::to_string(e.hi));
    if (e.add) s += " add " + std::to_string(e.add);
    if (e.reset) s += " reset";
    w.line(s);
  }
  return w.str();
}

std::string write(const ParikhFile& f) {
  if (f.automata.empty()) throw PreconditionError("a Parikh file needs at least one automaton");
  const Alphabet& in = f.automata.front().second.alphabet();
  const int dim = f.automata.front().second.dim();
  Writer w;
  w.line("mode parikh");
  w.words("alphabet input", in.names());
  w.line("dim " + std::to_string(dim));
  for (const auto& [label, a] : f.automata) {
    if (!(a.alphabet() == in) || a.dim() != dim)
      throw PreconditionError("automata in one Parikh file share the alphabet and dimension");
    w.line("relation " + label);
    w.states(a.num_states());
    w.state_list("initial", a.initial_states());
    std::vector<State> fin;
    for (State q = 0; q < a.num_states(); ++q)
      if (a.is_final(q)) fin.push_back(q);
    w.finals(fin);
    auto edges = a.edges();
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges) {
      std::string s = "trans " + std::to_string(e.src) + " " + in.name(e.sym) + " " + std::to_string(e.dst);
      if (std::any_of(e.weight.begin(), e.weight.end(), [](long x) { return x != 0; })) {
        s += " weight";
        for (long x : e.weight) s += " " + std::to_string(x);
      }
      w.line(s);
    }
  }
  return w.str();
}

std::string write(const MinskyMachine& m) {
  Writer w;
  w.line("mode minsky");
  w.line("counters " + std::to_string(m.counters));
  w.states(m.num_states);
  w.state_list("initial", {m.initial});
  for (const auto& i : m.instrs) {
    const char* k = i.kind == MinskyInstr::Kind::inc ? "inc" : i.kind == MinskyInstr::Kind::dec ? "dec" : "zero";
    w.line("trans " + std::to_string(i.src) + " " + k + " " + std::to_string(i.dst) + " counter " +
           std::to_string(i.counter));
  }
  return w.str();
}

// ---------------------------------------------------------------------------
// Regular expressions

class RegexParser {
 public:
  RegexParser(const Alphabet& a, std::string_view text) : a_(a) { lex(text); }

  Nfa parse() {
    Nfa r = alternation();
    if (pos_ < toks_.size()) throw FormatError("unexpected '" + toks_[pos_] + "' in output expression");
    return r;
  }

 private:
  void lex(std::string_view s) {
    const bool single = std::all_of(a_.names().begin(), a_.names().end(), [](const auto& n) { return n.size() == 1; });
    std::size_t i = 0;
    while (i < s.size()) {
      const char c = s[i];
      if (c == ' ') {
        ++i;
      } else if (c == '(' || c == ')' || c == '|' || c == '*') {
        toks_.push_back(std::string(1, c));
        ++i;
      } else if (single) {
        toks_.push_back(std::string(1, c));
        ++i;
      } else {
        std::size_t j = i;
        while (j < s.size() && std::string_view("()|* ").find(s[j]) == std::string_view::npos) ++j;
        toks_.push_back(std::string(s.substr(i, j - i)));
        i = j;
      }
    }
  }
  bool at(const char* t) const { return pos_ < toks_.size() && toks_[pos_] == t; }

  Nfa alternation() {
    Nfa r = concatenation();
    while (at("|")) {
      ++pos_;
      r = union_of(r, concatenation());
    }
    return r;
  }
  Nfa concatenation() {
    Nfa r = single_word(a_, {});
    while (pos_ < toks_.size() && !at("|") && !at(")")) r = concat(r, repeat());
    return r;
  }
  Nfa repeat() {
    Nfa r = atom();
    while (at("*")) {
      ++pos_;
      r = star(r);
    }
    return r;
  }
  Nfa atom() {
    if (at("(")) {
      ++pos_;
      Nfa r = alternation();
      if (!at(")")) throw FormatError("missing ')' in output expression");
      ++pos_;
      return r;
    }
    if (at("*")) throw FormatError("'*' without operand in output expression");
    return single_word(a_, {a_.at(toks_[pos_++])});
  }

  const Alphabet& a_;
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Graph descriptions

std::string esc(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r;
}

struct DotEdge {
  State src, dst;
  std::string label;
};

std::string dot_graph(const std::string& name, int states, const std::vector<State>& initial,
                      const std::vector<State>& finals, const std::vector<DotEdge>& edges,
                      const std::vector<State>& boxed = {}) {
  std::ostringstream o;
  o << "digraph \"" << esc(name) << "\" {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (State q = 0; q < states; ++q) {
    o << "  " << q << " [";
    const bool fin = std::find(finals.begin(), finals.end(), q) != finals.end();
    const bool box = std::find(boxed.begin(), boxed.end(), q) != boxed.end();
    o << "shape=" << (box ? (fin ? "box,peripheries=2" : "box") : (fin ? "doublecircle" : "circle")) << "];\n";
  }
  for (State q : initial) o << "  init" << q << " [shape=point];\n  init" << q << " -> " << q << ";\n";
  for (const auto& e : edges) o << "  " << e.src << " -> " << e.dst << " [label=\"" << esc(e.label) << "\"];\n";
  o << "}\n";
  return o.str();
}

}  // namespace

RegularResync RegularFile::resync() const {
  RegularResync rr(input, output, input_params, output_params);
  rr.ipar = ipar;
  rr.opar = opar;
  rr.empty_domain = empty_domain;
  std::map<Symbol, Relation> m;
  std::map<std::pair<Symbol, Symbol>, Relation> n;
  for (const auto& [k, a] : moves) m[k] = nfa_relation(a);
  for (const auto& [k, a] : nexts) n[k] = nfa_relation(a);
  set_relation_tables(rr, std::move(m), std::move(n));
  return rr;
}

RegularFile to_regular_file(const RegularResync& rr, std::size_t cap) {
  RegularFile f;
  f.input = rr.input;
  f.output = rr.output;
  f.input_params = rr.input_params;
  f.output_params = rr.output_params;
  f.ipar = trim(rr.ipar);
  f.opar = trim(rr.opar);
  if (rr.empty_domain) f.empty_domain = trim(*rr.empty_domain);
  const int keys = rr.annotated_output.size();
  for (Symbol k = 0; k < keys; ++k)
    if (Relation m = rr.move_of(k)) {
      Nfa n = trim(materialize(*m, cap));
      if (n.num_states()) f.moves.emplace(k, std::move(n));
    }
  for (Symbol k1 = 0; k1 < keys; ++k1)
    for (Symbol k2 = 0; k2 < keys; ++k2)
      if (Relation m = rr.next_of(k1, k2)) {
        Nfa n = trim(materialize(*m, cap));
        if (n.num_states()) f.nexts.emplace(std::pair{k1, k2}, std::move(n));
      }
  return f;
}

std::string_view mode_name(MachineMode m) {
  switch (m) {
    case MachineMode::oneway: return "oneway";
    case MachineMode::twoway: return "twoway";
    case MachineMode::resync: return "resync";
    case MachineMode::regresync: return "regresync";
    case MachineMode::oca: return "oca";
    case MachineMode::parikh: return "parikh";
    case MachineMode::minsky: return "minsky";
  }
  return "?";
}

MachineMode mode_of(const Machine& m) { return static_cast<MachineMode>(m.index()); }

Machine parse_machine(std::string_view text) {
  Document d = read(text);
  const std::string& mode = *d.mode;
  if (mode == "oneway") return read_oneway(d);
  if (mode == "twoway") return read_twoway(d);
  if (mode == "resync") return read_resync(d);
  if (mode == "regresync") return read_regular(d);
  if (mode == "oca") return read_oca(d);
  if (mode == "parikh") return read_parikh(d);
  if (mode == "minsky") return read_minsky(d);
  fail(d.mode_line, "unknown mode '" + mode + "'");
}

std::string serialize(const Machine& m) {
  return std::visit([](const auto& x) { return write(x); }, m);
}

Nfa parse_regex(const Alphabet& a, std::string_view text) { return RegexParser(a, text).parse(); }

std::string to_dot(const Nfa& a, const std::string& name) {
  std::vector<DotEdge> edges;
  for (const auto& t : a.transitions()) edges.push_back({t.src, t.dst, a.alphabet().name(t.sym)});
  return dot_graph(name, a.num_states(), a.initial_states(), a.final_states(), edges);
}

std::string to_dot(const Machine& m) {
  struct Visitor {
    std::string operator()(const NormalOneWay& t) const {
      std::vector<DotEdge> edges;
      for (const auto& e : t.edges())
        edges.push_back({e.src, e.dst, (e.in == kEps ? std::string("eps") : t.input().name(e.in)) + " / " +
                                           t.output().render(e.out)});
      std::vector<State> fin;
      for (State q = 0; q < t.num_states(); ++q)
        if (t.is_final(q)) fin.push_back(q);
      return dot_graph("oneway", t.num_states(), to_vec(t.initial()), fin, edges);
    }
    std::string operator()(const TwoWayTransducer& t) const {
      std::vector<DotEdge> edges;
      for (const auto& e : t.edges) {
        std::string sym = e.sym == kLeftMarker    ? "L"
                          : e.sym == kRightMarker ? "R"
                          : t.guess.size()        ? t.input.name(e.sym / t.guess.size()) + "/" +
                                                 t.guess.name(e.sym % t.guess.size())
                                                  : t.input.name(e.sym);
        edges.push_back({e.src, e.dst, sym + " / " + t.output.render(e.out)});
      }
      // Left-reading states are drawn as boxes.
      return dot_graph("twoway", t.num_states, to_vec(t.initial), to_vec(t.final), edges, flagged(t.left_reading));
    }
    std::string operator()(const RationalResync& r) const {
      const Alphabet s = r.sync();
      std::vector<DotEdge> edges;
      for (const auto& e : r.edges) edges.push_back({e.src, e.dst, s.name(e.in) + " / " + s.name(e.out)});
      return dot_graph("resync", r.num_states, to_vec(r.initial), flagged(r.final), edges);
    }
    std::string operator()(const RegularFile& f) const {
      std::string out = to_dot(f.ipar, "ipar") + to_dot(f.opar, "opar");
      const Alphabet aout = annotated_alphabet(f.output, f.output_params);
      for (const auto& [k, n] : f.moves) out += to_dot(n, "move " + aout.name(k));
      for (const auto& [k, n] : f.nexts) out += to_dot(n, "next " + aout.name(k.first) + " " + aout.name(k.second));
      return out;
    }
    std::string operator()(const Oca& a) const {
      std::vector<DotEdge> edges;
      for (const auto& e : a.edges) {
        std::string l = a.alphabet.name(e.sym);
        if (e.lo != 0 || e.hi != INT_MAX)
          l += " [" + std::to_string(e.lo) + "," + (e.hi == INT_MAX ? std::string("inf") : std::to_string(e.hi)) + "]";
        if (e.add) l += (e.add > 0 ? " +" : " ") + std::to_string(e.add);
        if (e.reset) l += " reset";
        edges.push_back({e.src, e.dst, l});
      }
      return dot_graph("oca", a.num_states, to_vec(a.initial), flagged(a.final), edges);
    }
    std::string operator()(const ParikhFile& f) const {
      std::string out;
      for (const auto& [label, a] : f.automata) {
        std::vector<DotEdge> edges;
        for (const auto& e : a.edges()) {
          std::string l = a.alphabet().name(e.sym) + " (";
          for (std::size_t i = 0; i < e.weight.size(); ++i) l += (i ? "," : "") + std::to_string(e.weight[i]);
          edges.push_back({e.src, e.dst, l + ")"});
        }
        std::vector<State> fin;
        for (State q = 0; q < a.num_states(); ++q)
          if (a.is_final(q)) fin.push_back(q);
        out += dot_graph(label, a.num_states(), a.initial_states(), fin, edges);
      }
      return out;
    }
    std::string operator()(const MinskyMachine& m) const {
      std::vector<DotEdge> edges;
      for (std::size_t i = 0; i < m.instrs.size(); ++i) {
        const auto& ins = m.instrs[i];
        const char* k = ins.kind == MinskyInstr::Kind::inc ? "inc" : ins.kind == MinskyInstr::Kind::dec ? "dec" : "zero";
        edges.push_back({ins.src, ins.dst, "i" + std::to_string(i) + ": " + k + " c" + std::to_string(ins.counter)});
      }
      return dot_graph("minsky", m.num_states, {m.initial}, {}, edges);
    }
  };
  return std::visit(Visitor{}, m);
}

std::string to_dot(const OriginGraph& g, const Alphabet& in, const Alphabet& out) {
  std::ostringstream o;
  o << "digraph origins {\n  rankdir=TB;\n  node [shape=plaintext];\n";
  o << "  subgraph input { rank=same;";
  for (std::size_t i = 0; i < g.input.size(); ++i) o << " i" << i + 1 << " [label=\"" << esc(in.name(g.input[i])) << "\"];";
  o << " }\n  subgraph output { rank=same;";
  for (std::size_t i = 0; i < g.output.size(); ++i)
    o << " o" << i + 1 << " [label=\"" << esc(out.name(g.output[i].first)) << "\"];";
  o << " }\n";
  for (std::size_t i = 0; i < g.output.size(); ++i) o << "  o" << i + 1 << " -> i" << g.output[i].second << ";\n";
  o << "}\n";
  return o.str();
}

}  // namespace oresync
