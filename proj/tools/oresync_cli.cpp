// Command-line front end. Exit codes: 0 positive answer, 1 negative or absent, 2 error.

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "oresync/functional.hpp"
#include "oresync/machine_file.hpp"
#include "oresync/synthesis.hpp"

using namespace oresync;

namespace {

constexpr int kYes = 0, kNo = 1, kError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t capacity() {
  const char* env = std::getenv("ORIGIN_RESYNC_CAPACITY");
  if (!env || !*env) return kDefaultCapacity;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (*end || v == 0) throw UsageError("ORIGIN_RESYNC_CAPACITY must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string sha256(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return s.str();
}

struct Loaded {
  std::string path;
  Machine machine;
};

class Session {
 public:
  bool dot = false;
  std::string out_path;

  Loaded load(const std::string& path) {
    std::string text = read_file(path);
    hashes_.push_back({path, sha256(text)});
    try {
      return {path, parse_machine(text)};
    } catch (const Error& e) {
      throw UsageError(path + ": " + e.what());
    }
  }

  template <class T>
  const T& as(const Loaded& l, MachineMode want) {
    if (mode_of(l.machine) != want)
      throw UsageError(l.path + ": expected mode " + std::string(mode_name(want)) + ", found " +
                       std::string(mode_name(mode_of(l.machine))));
    return std::get<T>(l.machine);
  }

  // Report lines are comments so that machine output on stdout stays parseable.
  void header(const std::string& command) {
    std::cout << "# oresync " << ORESYNC_VERSION << "\n# command " << command << "\n";
    for (const auto& [p, h] : hashes_) std::cout << "# input " << p << " sha256 " << h << "\n";
  }
  void note(const std::string& s) { std::cout << "# " << s << "\n"; }

  void emit(const Machine& m, const std::string& path) {
    const std::string text = dot ? to_dot(m) : serialize(m);
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw UsageError("cannot write " + path);
    note("wrote " + path);
  }
  void emit(const Machine& m) { emit(m, out_path); }

 private:
  std::vector<std::pair<std::string, std::string>> hashes_;
};

std::string render_word(const Alphabet& a, const Word& w) { return "\"" + a.render(w) + "\""; }

// ---------------------------------------------------------------------------
// check

int check_functional(Session& s, const std::string& f) {
  auto l = s.load(f);
  const auto& t = s.as<NormalOneWay>(l, MachineMode::oneway);
  auto r = is_functional(t, capacity());
  s.header("check functional");
  if (r.functional) {
    std::cout << "YES\n";
    return kYes;
  }
  std::cout << "NO\ninput " << render_word(t.input(), r.input) << "\noutput " << render_word(t.output(), r.output1)
            << "\noutput " << render_word(t.output(), r.output2) << "\n";
  return kNo;
}

int check_contained(Session& s, const std::string& f1, const std::string& f2) {
  auto l1 = s.load(f1), l2 = s.load(f2);
  const auto& t1 = s.as<NormalOneWay>(l1, MachineMode::oneway);
  const auto& t2 = s.as<NormalOneWay>(l2, MachineMode::oneway);
  auto r = origin_containment(t1, t2, capacity());
  s.header("check origin-contained");
  if (r.holds) {
    std::cout << "YES\n";
    return kYes;
  }
  std::cout << "NO\nwitness " << render(*r.witness, t1.input(), t1.output()) << "\n";
  if (s.dot) std::cout << to_dot(*r.witness, t1.input(), t1.output());
  return kNo;
}

RegularResync regular_of(Session& s, const Loaded& l) {
  if (mode_of(l.machine) == MachineMode::resync) return from_rational(validate(std::get<RationalResync>(l.machine)));
  return s.as<RegularFile>(l, MachineMode::regresync).resync();
}

int check_bounded(Session& s, const std::string& f, int k) {
  if (k < 1) throw UsageError("k must be at least 1");
  auto l = s.load(f);
  RegularResync rr = regular_of(s, l);
  auto r = is_k_bounded(rr, k, capacity());
  s.header("check k-bounded " + std::to_string(k));
  if (r.bounded) {
    std::cout << "YES\n";
    return kYes;
  }
  std::cout << "NO\nkey " << rr.annotated_output.name(*r.key) << "\ninput " << render_word(rr.annotated_input, r.input)
            << "\ntarget " << r.target + 1 << "\nsources";
  for (int y : r.sources) std::cout << " " << y + 1;
  std::cout << "\n";
  return kNo;
}

int check_oca(Session& s, const std::string& f, int k) {
  if (k < 0) throw UsageError("k must be non-negative");
  auto l = s.load(f);
  const auto& a = s.as<Oca>(l, MachineMode::oca);
  auto r = universal_with_bound(a, k);
  s.header("check oca-bound " + std::to_string(k));
  if (r.universal) {
    std::cout << "YES\n";
    return kYes;
  }
  std::cout << "NO\nrejected " << render_word(a.alphabet, *r.witness) << "\n";
  return kNo;
}

int check_unambiguous(Session& s, const std::string& f, int n) {
  auto l = s.load(f);
  const auto& t = s.as<TwoWayTransducer>(l, MachineMode::twoway);
  auto u = ambiguous_input(t, n);
  s.header("check unambiguous " + std::to_string(n));
  if (!u) {
    std::cout << "YES\n";
    return kYes;
  }
  std::cout << "NO\ninput " << render_word(t.input, *u) << "\n";
  return kNo;
}

int check_regularity(Session& s, const std::string& f, int loop_bound) {
  auto l = s.load(f);
  const auto& pf = s.as<ParikhFile>(l, MachineMode::parikh);
  s.header("check regularity --loop-bound " + std::to_string(loop_bound));
  bool all = true;
  for (const auto& [label, a] : pf.automata) {
    auto r = regularity_semicheck(a, loop_bound);
    std::cout << label << ": " << (r.witness_found ? "REGULAR" : "UNKNOWN") << "\n";
    if (r.witness_found && s.dot) std::cout << to_dot(*r.witness, label);
    all = all && r.witness_found;
  }
  return all ? kYes : kNo;
}

// ---------------------------------------------------------------------------
// synthesize

void verification(Session& s, const NormalOneWay& t1, const NormalOneWay& t2, const RationalResync& r) {
  s.note(std::string("verified containment ") + (verify_synthesis(t1, t2, r, false, capacity()) ? "yes" : "no"));
  s.note(std::string("verified equivalence ") + (verify_synthesis(t1, t2, r, true, capacity()) ? "yes" : "no"));
}

std::string containment_reason(const NormalOneWay& t1, const NormalOneWay& t2) {
  if (!is_functional(t1, capacity()).functional || !is_functional(t2, capacity()).functional)
    return "classical containment not decided for non-functional transducers";
  return containment_functional(t1, t2, capacity()) ? "the first transducer is classically contained in the second"
                                                     : "the first transducer is not classically contained in the second";
}

int synth_functional(Session& s, const std::string& f1, const std::string& f2) {
  auto l1 = s.load(f1), l2 = s.load(f2);
  const auto& t1 = s.as<NormalOneWay>(l1, MachineMode::oneway);
  const auto& t2 = s.as<NormalOneWay>(l2, MachineMode::oneway);
  auto r = synthesize_functional(t1, t2, capacity());
  s.header("synthesize functional");
  if (!r) {
    std::cout << "NO\n";
    s.note("reason: " + containment_reason(t1, t2));
    return kNo;
  }
  s.note("kind functional-product");
  verification(s, t1, t2, r->resynchronizer);
  s.emit(r->resynchronizer);
  return kYes;
}

int synth_delay(Session& s, const std::string& f1, const std::string& f2, std::optional<int> d_max) {
  auto l1 = s.load(f1), l2 = s.load(f2);
  const auto& t1 = s.as<NormalOneWay>(l1, MachineMode::oneway);
  const auto& t2 = s.as<NormalOneWay>(l2, MachineMode::oneway);
  const int bound = d_max ? *d_max : default_delay_bound(t1, t2);
  auto r = synthesize_bounded_delay(t1, t2, bound, capacity());
  s.header("synthesize bounded-delay --d-max " + std::to_string(bound));
  if (!r) {
    std::cout << "NO\n";
    s.note("reason: no delay up to " + std::to_string(bound) + " suffices");
    s.note(containment_reason(t1, t2));
    return kNo;
  }
  s.note("kind bounded-delay");
  s.note("delay " + std::to_string(r->delay));
  verification(s, t1, t2, r->resynchronizer);
  s.emit(r->resynchronizer);
  return kYes;
}

// ---------------------------------------------------------------------------
// convert, apply, build

int convert_regular(Session& s, const std::string& f) {
  auto l = s.load(f);
  auto r = validate(s.as<RationalResync>(l, MachineMode::resync));
  auto file = to_regular_file(from_rational(r), capacity());
  s.header("convert rational-to-regular");
  s.emit(file);
  return kYes;
}

int convert_oca_to_transducers(Session& s, const std::string& f) {
  auto l = s.load(f);
  auto [t1, t2] = oca_to_transducers(s.as<Oca>(l, MachineMode::oca));
  s.header("convert oca-to-transducers");
  if (s.out_path.empty()) {
    s.note("first transducer");
    s.emit(t1);
    s.note("second transducer");
    s.emit(t2);
  } else {
    s.emit(t1, s.out_path + "-t1.ow");
    s.emit(t2, s.out_path + "-t2.ow");
  }
  return kYes;
}

int convert_transducers_to_oca(Session& s, const std::string& f1, const std::string& f2) {
  auto l1 = s.load(f1), l2 = s.load(f2);
  auto a = transducers_to_oca(s.as<NormalOneWay>(l1, MachineMode::oneway), s.as<NormalOneWay>(l2, MachineMode::oneway));
  s.header("convert transducers-to-oca");
  s.emit(a);
  return kYes;
}

int convert_minsky(Session& s, const std::string& f) {
  auto l = s.load(f);
  auto a = minsky_to_oca(s.as<MinskyMachine>(l, MachineMode::minsky));
  s.header("convert minsky-to-oca");
  s.emit(a);
  return kYes;
}

std::set<OriginGraph> graphs_of(const Loaded& l, int n, Alphabet& in, Alphabet& out) {
  if (mode_of(l.machine) == MachineMode::oneway) {
    const auto& t = std::get<NormalOneWay>(l.machine);
    in = t.input();
    out = t.output();
    auto g = enumerate_graphs(t, n, 2 * n + 8);
    return g.graphs;
  }
  if (mode_of(l.machine) == MachineMode::twoway) {
    const auto& t = std::get<TwoWayTransducer>(l.machine);
    in = t.input;
    out = t.output;
    return graphs_2w(t, n);
  }
  throw UsageError(l.path + ": expected a oneway or twoway transducer");
}

int apply_cmd(Session& s, const std::string& fr, const std::string& ft, int max_len) {
  auto lr = s.load(fr), lt = s.load(ft);
  if (mode_of(lr.machine) == MachineMode::resync && mode_of(lt.machine) == MachineMode::oneway) {
    auto t = apply(validate(std::get<RationalResync>(lr.machine)), std::get<NormalOneWay>(lt.machine));
    s.header("apply");
    s.emit(t);
    return kYes;
  }
  RegularResync rr = regular_of(s, lr);
  Alphabet in, out;
  auto graphs = graphs_of(lt, max_len, in, out);
  auto images = resync_images(rr, graphs, capacity());
  s.header("apply --max-len " + std::to_string(max_len));
  for (const auto& [g, img] : images)
    for (const auto& h : img) {
      std::cout << render(g, in, out) << " -> " << render(h, in, out) << "\n";
      if (s.dot) std::cout << to_dot(h, in, out);
    }
  return kYes;
}

int build_parikh(Session& s, const std::string& f1, const std::string& f2, int check_len) {
  auto l1 = s.load(f1), l2 = s.load(f2);
  const auto& t1 = s.as<TwoWayTransducer>(l1, MachineMode::twoway);
  const auto& t2 = s.as<TwoWayTransducer>(l2, MachineMode::twoway);
  ParikhResync pr = build_parikh_resync(t1, t2, check_len);
  s.header("build parikh-resync --check-len " + std::to_string(check_len));
  const RegularResync& rr = pr.rr;
  s.note("output parameters " + std::to_string(rr.output_params.size()));
  const bool bounded = is_k_bounded(length_capped(rr, check_len), 1, capacity()).bounded;
  const bool graphs = apply_graphs(rr, graphs_2w(t2, check_len), capacity()) == graphs_2w(t1, check_len);
  const bool targets = resync_target_set(rr, check_len) == target_set(t1, check_len);
  s.note(std::string("one-bounded up to length ") + std::to_string(check_len) + (bounded ? " yes" : " no"));
  s.note(std::string("graphs of the first reproduced up to length ") + std::to_string(check_len) + (graphs ? " yes" : " no"));
  s.note(std::string("target sets agree up to length ") + std::to_string(check_len) + (targets ? " yes" : " no"));
  ParikhFile pf;
  for (const auto& [key, pa] : pr.moves) pf.automata.push_back({"move " + rr.annotated_output.name(key), pa});
  s.emit(pf);
  return bounded && graphs && targets ? kYes : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word transducers under origin semantics"};
  app.set_version_flag("--version", std::string("oresync ") + ORESYNC_VERSION);
  app.fallthrough();
  app.require_subcommand(1);
  Session s;
  app.add_flag("--dot", s.dot, "Emit graph descriptions instead of machine files");
  app.add_option("-o,--out", s.out_path, "Write the produced machine to this file (a prefix for two machines)");
  std::function<int()> run;

  auto* check = app.add_subcommand("check", "Decision procedures")->require_subcommand(1);
  std::string f1, f2;
  int k = 1, n = 4, loop_bound = 2;
  std::optional<int> d_max;

  auto* c = check->add_subcommand("functional", "Is the one-way transducer functional?");
  c->add_option("file", f1)->required();
  c->callback([&] { run = [&] { return check_functional(s, f1); }; });
  c = check->add_subcommand("origin-contained", "Are the origin graphs of the first among those of the second?");
  c->add_option("first", f1)->required();
  c->add_option("second", f2)->required();
  c->callback([&] { run = [&] { return check_contained(s, f1, f2); }; });
  c = check->add_subcommand("k-bounded", "Does every target have at most k sources?");
  c->add_option("file", f1)->required();
  c->add_option("k", k)->required();
  c->callback([&] { run = [&] { return check_bounded(s, f1, k); }; });
  c = check->add_subcommand("oca-bound", "Does the counter automaton accept every word within bound k?");
  c->add_option("file", f1)->required();
  c->add_option("k", k)->required();
  c->callback([&] { run = [&] { return check_oca(s, f1, k); }; });
  c = check->add_subcommand("unambiguous", "At most one run per input up to length n");
  c->add_option("file", f1)->required();
  c->add_option("n", n)->required();
  c->callback([&] { run = [&] { return check_unambiguous(s, f1, n); }; });
  c = check->add_subcommand("regularity", "Look for a finite-automaton witness (UNKNOWN is not a negative answer)");
  c->add_option("file", f1)->required();
  c->add_option("--loop-bound", loop_bound, "Loop iteration threshold")->capture_default_str();
  c->callback([&] { run = [&] { return check_regularity(s, f1, loop_bound); }; });

  auto* synth = app.add_subcommand("synthesize", "Resynchronizers between one-way transducers")->require_subcommand(1);
  c = synth->add_subcommand("functional", "R with first = R(second), for functional transducers");
  c->add_option("first", f1)->required();
  c->add_option("second", f2)->required();
  c->callback([&] { run = [&] { return synth_functional(s, f1, f2); }; });
  c = synth->add_subcommand("bounded-delay", "Least d with first contained in the d-delay image of second");
  c->add_option("first", f1)->required();
  c->add_option("second", f2)->required();
  c->add_option("--d-max", d_max, "Largest delay tried");
  c->callback([&] { run = [&] { return synth_delay(s, f1, f2, d_max); }; });

  auto* conv = app.add_subcommand("convert", "Constructions between machine kinds")->require_subcommand(1);
  c = conv->add_subcommand("rational-to-regular", "Compile a rational resynchronizer into a regular one");
  c->add_option("file", f1)->required();
  c->callback([&] { run = [&] { return convert_regular(s, f1); }; });
  c = conv->add_subcommand("oca-to-transducers", "Transducer pair whose delay tracks the counter bound");
  c->add_option("file", f1)->required();
  c->callback([&] { run = [&] { return convert_oca_to_transducers(s, f1); }; });
  c = conv->add_subcommand("transducers-to-oca", "Counter automaton tracking the output difference");
  c->add_option("first", f1)->required();
  c->add_option("second", f2)->required();
  c->callback([&] { run = [&] { return convert_transducers_to_oca(s, f1, f2); }; });
  c = conv->add_subcommand("minsky-to-oca", "Counter automaton checking counter-machine computations");
  c->add_option("file", f1)->required();
  c->callback([&] { run = [&] { return convert_minsky(s, f1); }; });

  int max_len = 4;
  auto* ap = app.add_subcommand("apply", "Apply a resynchronizer to a transducer");
  ap->add_option("resync", f1)->required();
  ap->add_option("transducer", f2)->required();
  ap->add_option("--max-len", max_len, "Input length for graph-level application")->capture_default_str();
  ap->callback([&] { run = [&] { return apply_cmd(s, f1, f2, max_len); }; });

  auto* build = app.add_subcommand("build", "Resynchronizers for two-way transducers")->require_subcommand(1);
  int check_len = 4;
  c = build->add_subcommand("parikh-resync", "Resynchronizer mapping graphs of the second onto the first");
  c->add_option("first", f1)->required();
  c->add_option("second", f2)->required();
  c->add_option("--check-len", check_len, "Input length for the bounded checks")->capture_default_str();
  c->callback([&] { run = [&] { return build_parikh(s, f1, f2, check_len); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }
  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kError;
}
