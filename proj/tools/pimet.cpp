// pimet: rho queries and scenario runs from the command line.
// exit codes: 0 ok, 1 some check failed, 2 bad input, 3 class does not fit the space

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pimet/harness.hpp"
#include "pimet/io.hpp"

using namespace pimet;

namespace {

struct Incompatible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Q> parse_radii(const std::string& s) {
  std::vector<Q> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(Q::parse(item));
    } catch (const std::exception&) {
      throw InputError("bad radius '" + item + "'");
    }
    if (!(out.back() > Q(0))) throw InputError("radii must be positive");
  }
  if (out.empty()) throw InputError("empty radius list");
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InputError("bad integer '" + item + "'");
    }
  }
  return out;
}

void check_word(const Word& w, const Presentation& P, const char* which) {
  for (int x : w)
    if (std::abs(x) > P.rank)
      throw Incompatible(std::string(which) + " uses generator " + std::to_string(std::abs(x)) + " but the space has rank " +
                         std::to_string(P.rank));
}

// a word literal, or a file holding a word or a thread
Word class_arg(const std::string& arg, const InverseSystem* S) {
  auto first = arg.find_first_not_of(" \t");
  if (first != std::string::npos && arg[first] == '[') return parse_word(arg);
  json j = read_json_file(arg);
  if (j.is_array()) return word_from_json(j);
  Thread t = thread_from_json(j);
  if (!S) throw Incompatible("thread given for a single complex");
  if (int(t.words.size()) != S->depth())
    throw Incompatible("thread has " + std::to_string(t.words.size()) + " levels, system depth is " +
                       std::to_string(S->depth()));
  for (int k = 1; k <= S->depth(); ++k) {
    for (int x : t.words[k - 1])
      if (std::abs(x) > S->pres(k).rank) throw Incompatible("thread word at level " + std::to_string(k) + " out of range");
  }
  try {
    check_thread(*S, t);
  } catch (const std::invalid_argument& e) {
    throw Incompatible(e.what());
  }
  return t.words.back();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw InputError("cannot write " + out);
  f << text;
}

struct Config {
  std::string space, space2, system, a = "[]", b = "[]", radii, out, format = "json", truncations = "1,2,4,8";
  std::string radius, classes;
  int depth = 0, grid = 64, budget = 16, threads = 1, samples = 100, max_len = 0;
  std::uint64_t seed = 1;
  bool no_timestamp = false;
};

RunSettings settings(const Config& c, int default_len) {
  RunSettings s;
  s.seed = c.seed;
  s.grid = c.grid;
  s.budget = c.budget;
  s.threads = std::max(1, c.threads);
  s.samples = c.samples;
  s.max_len = c.max_len > 0 ? c.max_len : default_len;
  return s;
}

int cmd_rho(const Config& c) {
  if (c.space.empty() == c.system.empty()) throw InputError("give exactly one of --space and --system");
  std::optional<MetricComplex> X;
  std::optional<InverseSystem> S;
  RhoContext ctx;
  if (!c.space.empty()) {
    X = load_complex(c.space);
    ctx = RhoContext::of(*X, c.grid, c.budget);
  } else {
    S = load_system(c.system, c.depth);
    ctx = RhoContext::of(*S, c.grid, c.budget);
  }
  if (!c.classes.empty()) {
    json cl;
    try {
      cl = json::parse(c.classes);
    } catch (const json::parse_error&) {
      cl = read_json_file(c.classes);
    }
    if (!cl.is_array()) throw InputError("--classes expects a JSON array of words");
    std::vector<Word> ws;
    for (const auto& w : cl) {
      ws.push_back(word_from_json(w));
      check_word(ws.back(), ctx.P, "--classes");
    }
    auto m = rho_matrix(ctx, ws, std::max(1, c.threads));
    if (c.format == "csv") {
      emit(m.to_csv(), c.out);
    } else {
      json j{{"schema", "pimet-rho-matrix/1"}, {"classes", cl}, {"entries", m.to_json()},
             {"config", {{"seed", c.seed}, {"grid", c.grid}, {"budget", c.budget}, {"depth", S ? S->depth() : 0}}}};
      emit(j.dump(2) + "\n", c.out);
    }
    return 0;
  }
  Word a = class_arg(c.a, S ? &*S : nullptr), b = class_arg(c.b, S ? &*S : nullptr);
  check_word(a, ctx.P, "--a");
  check_word(b, ctx.P, "--b");
  auto i = rho(ctx, a, b);
  json j;
  j["schema"] = "pimet-rho/1";
  j["a"] = reduce(a);
  j["b"] = reduce(b);
  j["lower"] = i.lower.str();
  j["upper"] = i.upper.str();
  j["lower_decimal"] = i.lower.decimal();
  j["upper_decimal"] = i.upper.decimal();
  j["lower_witness"] = {{"level", i.lower_witness.level}, {"margin", i.lower_witness.margin.str()}, {"note", i.lower_witness.note}};
  j["upper_witness"] = {{"kind", i.upper_witness.kind},
                        {"grid_max", i.upper_witness.mu.grid_max.str()},
                        {"upper", i.upper_witness.mu.upper.str()},
                        {"N", i.upper_witness.mu.N},
                        {"alpha", loop_json(i.upper_witness.alpha)},
                        {"beta", loop_json(i.upper_witness.beta)}};
  if (!c.radius.empty()) {
    Q r = parse_radii(c.radius).at(0);
    j["radius"] = r.str();
    j["verdict"] = to_string(verdict(i, r));
  } else {
    j["verdict"] = i.upper == Q(0) ? "equal" : (i.lower > Q(0) ? "separated" : "unknown");
  }
  j["config"] = {{"seed", c.seed}, {"grid", c.grid}, {"budget", c.budget}, {"depth", S ? S->depth() : 0},
                 {"input", c.space.empty() ? c.system : c.space}};
  emit(j.dump(2) + "\n", c.out);
  return 0;
}

int cmd_scenario(const std::string& name, const Config& c) {
  ScenarioReport rep;
  if (name == "sandwich") {
    auto S = load_system(c.system.empty() ? "hawaiian.json" : c.system, c.depth);
    rep = sandwich_check(S, parse_radii(c.radii.empty() ? "1/2,1/4,1/8,1/16" : c.radii), settings(c, 6));
    rep.provenance["input"] = c.system.empty() ? "hawaiian.json" : c.system;
  } else if (name == "cylinder") {
    rep = cylinder_demo(parse_ints(c.truncations), settings(c, 6));
  } else if (name == "punctured-plane") {
    rep = punctured_plane_demo(c.depth > 0 ? c.depth : 64, settings(c, 6));
  } else if (name == "shape-injectivity") {
    auto S = load_system(c.system.empty() ? "hawaiian.json" : c.system, c.depth);
    rep = shape_injectivity_probe(S, settings(c, 10));
    rep.provenance["input"] = c.system.empty() ? "hawaiian.json" : c.system;
  } else if (name == "lemmas") {
    if (!c.system.empty()) {
      auto S = load_system(c.system, c.depth);
      rep = lemma_suite(RhoContext::of(S, c.grid, c.budget), c.system, settings(c, 6));
    } else {
      std::string f = c.space.empty() ? "wedge2.json" : c.space;
      auto X = load_complex(f);
      rep = lemma_suite(RhoContext::of(X, c.grid, c.budget), f, settings(c, 6));
    }
  } else if (name == "metric-independence") {
    std::string f1 = c.space.empty() ? "wedge2.json" : c.space, f2 = c.space2.empty() ? "wedge2_long.json" : c.space2;
    auto X1 = load_complex(f1), X2 = load_complex(f2);
    rep = metric_independence_scenario(X1, X2, parse_radii(c.radii.empty() ? "1/8,1/4,1/2,1" : c.radii), settings(c, 4));
    rep.provenance["inputs"] = {f1, f2};
  } else {
    throw InputError("unknown scenario '" + name + "'");
  }
  if (int u = rep.count(Status::Unknown)) std::cerr << "pimet: " << u << " check(s) undecided, see report\n";
  if (c.format == "csv") emit(rep.to_csv(), c.out);
  else emit(rep.to_json(!c.no_timestamp).dump(2) + "\n", c.out);
  return rep.failed() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pimet: certified bounds for the uniform-metric pseudometric on fundamental groups"};
  app.require_subcommand(1);
  Config c;
  std::string scenario;
  auto common = [&](CLI::App* s) {
    s->add_option("--space", c.space, "complex JSON");
    s->add_option("--system", c.system, "inverse system JSON");
    s->add_option("--depth", c.depth, "truncation depth J (punctured-plane: largest n)");
    s->add_option("--grid", c.grid, "samples per unit length")->check(CLI::Range(2, 1 << 16));
    s->add_option("--budget", c.budget, "translation classes tried by the upper search")->check(CLI::NonNegativeNumber);
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--out", c.out, "output file (default stdout)");
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* r = app.add_subcommand("rho", "bounds for rho(a, b)");
  common(r);
  r->add_option("--a", c.a, "word, e.g. \"[1,-2]\", or a word/thread JSON file");
  r->add_option("--b", c.b, "word, e.g. \"[]\", or a word/thread JSON file");
  r->add_option("--classes", c.classes, "JSON array of words (or a file): pairwise distance matrix instead of one pair");
  r->add_option("--radius", c.radius, "also decide membership of a b^-1 in the ball of this radius");
  auto* s = app.add_subcommand("scenario", "run a scenario and write its report");
  common(s);
  s->add_option("name", scenario, "sandwich | cylinder | punctured-plane | shape-injectivity | lemmas | metric-independence")
      ->required();
  s->add_option("--space2", c.space2, "second metric on the same complex (metric-independence)");
  s->add_option("--radii", c.radii, "comma separated, e.g. 0.5,0.25 or 1/8,1/4");
  s->add_option("--samples", c.samples, "sample size")->check(CLI::NonNegativeNumber);
  s->add_option("--max-len", c.max_len, "longest sampled word");
  s->add_option("--truncations", c.truncations, "cylinder truncations, e.g. 1,2,4,8");
  s->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp field");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (r->parsed()) return cmd_rho(c);
    return cmd_scenario(scenario, c);
  } catch (const InputError& e) {
    std::cerr << "pimet: " << e.what() << "\n";
    return 2;
  } catch (const Incompatible& e) {
    std::cerr << "pimet: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pimet: " << e.what() << "\n";
    return 2;
  }
}
