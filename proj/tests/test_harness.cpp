#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pimet/harness.hpp"
#include "pimet/io.hpp"

using namespace pimet;

namespace {

// minimal RFC 4180 reader, enough to check our own output
std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows(1);
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') field += '"', ++i;
      else if (c == '"') quoted = false;
      else field += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      rows.back().push_back(field), field.clear();
    } else if (c == '\n') {
      rows.back().push_back(field), field.clear();
      rows.emplace_back();
    } else {
      field += c;
    }
  }
  if (rows.back().empty()) rows.pop_back();
  return rows;
}

MetricComplex wedge2() { return load_complex("wedge2.json"); }

}  // namespace

TEST_CASE("lengths parse exactly") {
  CHECK(q_from_json(json("0.3")) == Q(3, 10));
  CHECK(q_from_json(json("1/3")) == Q(1, 3));
  CHECK(q_from_json(json(2)) == Q(2));
  CHECK_THROWS_AS(q_from_json(json("abc")), InputError);
  CHECK_THROWS_AS(q_from_json(json(0.5)), InputError);  // floats would lose exactness
}

TEST_CASE("complex round trip") {
  auto X = wedge2();
  CHECK(X.num_vertices() == 7);
  CHECK(X.num_edges() == 8);
  auto Y = complex_from_json(complex_json(X));
  REQUIRE(Y.num_edges() == X.num_edges());
  for (int e = 0; e < X.num_edges(); ++e) {
    CHECK(Y.edge(e).u == X.edge(e).u);
    CHECK(Y.edge(e).v == X.edge(e).v);
    CHECK(Y.edge(e).len == X.edge(e).len);
  }
  CHECK(*Y.systole() == Q(1));
  auto L = load_complex("wedge2_long.json");
  CHECK(*L.systole() == Q(1));
  CHECK(L.edge(0).len == Q(1, 2));
}

TEST_CASE("malformed complexes are input errors") {
  CHECK_THROWS_AS(complex_from_json(json::parse(R"({"edges":[]})")), InputError);
  CHECK_THROWS_AS(complex_from_json(json::parse(R"({"vertices":2,"edges":[[0,1,"-1"]]})")), InputError);
  CHECK_THROWS_AS(complex_from_json(json::parse(R"({"vertices":2,"edges":[[0,5,"1"]]})")), InputError);
  // two components
  CHECK_THROWS_AS(complex_from_json(json::parse(R"({"vertices":4,"edges":[[0,1,"1"],[2,3,"1"]]})")), InputError);
  CHECK_THROWS_AS(load_complex("no-such-file.json"), InputError);
}

TEST_CASE("points, covers, words") {
  auto X = load_complex("circle.json");
  auto p = point_from_json(X, json::parse(R"({"edge":1,"t":"1/2"})"));
  CHECK(X.distance(Point::at(0), p) == Q(3, 8));
  CHECK(point_from_json(X, point_json(p)) == p);
  CHECK_THROWS_AS(point_from_json(X, json(9)), InputError);
  CHECK_THROWS_AS(point_from_json(X, json::parse(R"({"edge":0,"t":"3/2"})")), InputError);

  auto U = cover_from_json(X, read_json_file("circle_cover.json"));
  CHECK(U.balls.size() == 4);
  CHECK(covers(U));
  auto U2 = cover_from_json(X, cover_json(U));
  CHECK(U2.balls.size() == U.balls.size());
  CHECK(U2.balls[2].radius == Q(3, 10));
  CHECK_THROWS_AS(cover_from_json(X, json::parse(R"({"balls":[]})")), InputError);

  CHECK(parse_word("[1,-2]") == Word{1, -2});
  CHECK(parse_word("[]").empty());
  CHECK_THROWS_AS(parse_word("[1,0]"), InputError);
  CHECK_THROWS_AS(parse_word("[1,"), InputError);
  CHECK_THROWS_AS(parse_word("{}"), InputError);
  CHECK(word_from_json(word_json({2, 2, -1})) == Word{2, 2, -1});
}

TEST_CASE("systems from JSON") {
  auto S = load_system("hawaiian.json");
  CHECK(S.depth() == 8);
  auto S3 = load_system("hawaiian.json", 3);
  CHECK(S3.depth() == 3);
  CHECK(presentation(S3.level(3)).rank == 3);
  // inline pieces cycle to the requested depth
  auto j = json::parse(R"({"shrinking_wedge":[{"vertices":3,"edges":[[0,1,"1/3"],[1,2,"1/3"],[2,0,"1/3"]]}, "circle.json"],"depth":5})");
  auto S5 = system_from_json(j);
  CHECK(S5.depth() == 5);
  CHECK(presentation(S5.level(5)).rank == 5);
  CHECK_THROWS_AS(system_from_json(json::parse(R"({"shrinking_wedge":[]})")), InputError);
  CHECK_THROWS_AS(system_from_json(json::parse(R"({"levels":[]})")), InputError);
}

TEST_CASE("reports sort, count and serialise") {
  ScenarioReport r;
  r.scenario = "demo";
  r.provenance["seed"] = 7;
  r.add({"zeta", Status::Pass, {{"x", "1/2"}}, {}});
  r.add({"alpha", Status::Fail, {{"note", "has \"quotes\", commas"}}, {}});
  r.add({"mid", Status::Unknown, {}, {}});
  CHECK(r.failed());
  CHECK(r.count(Status::Pass) == 1);
  auto j = r.to_json(false);
  CHECK_FALSE(j.contains("timestamp"));
  CHECK(r.to_json(true).contains("timestamp"));
  CHECK(j["schema"] == "pimet-report/1");
  REQUIRE(j["checks"].size() == 3);
  CHECK(j["checks"][0]["name"] == "alpha");
  CHECK(j["checks"][2]["name"] == "zeta");
  CHECK(j["summary"]["fail"] == 1);
  CHECK(j["summary"]["unknown"] == 1);
  CHECK(r.to_json(false).dump() == j.dump());

  auto rows = read_csv(r.to_csv());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"scenario", "check", "status", "numbers"});
  CHECK(rows[1][1] == "alpha");
  CHECK(rows[1][2] == "fail");
  CHECK(json::parse(rows[1][3])["note"] == "has \"quotes\", commas");
  CHECK(rows[3][1] == "zeta");
}

TEST_CASE("parallel_map keeps order and rethrows") {
  for (int threads : {1, 2, 5}) {
    auto v = parallel_map<int>(23, threads, [](int i) { return i * i; });
    for (int i = 0; i < 23; ++i) CHECK(v[i] == i * i);
  }
  CHECK_THROWS_AS(parallel_map<int>(6, 3,
                                    [](int i) -> int {
                                      if (i == 4) throw std::runtime_error("boom");
                                      return i;
                                    }),
                  std::runtime_error);
}

TEST_CASE("random words are reduced and seeded") {
  std::mt19937_64 a(3), b(3);
  for (int i = 0; i < 50; ++i) {
    Word w = random_reduced_word(a, 3, 6, true);
    CHECK(w == random_reduced_word(b, 3, 6, true));
    CHECK_FALSE(w.empty());
    CHECK(w.size() <= 6);
    CHECK(reduce(w) == w);
    for (int x : w) CHECK((x != 0 && std::abs(x) <= 3));
  }
}

TEST_CASE("cylinder model") {
  auto M = cylinder_model(1);
  CHECK(M.arc_length == Q(4));
  // C is a prefix of Y, Y a prefix of X
  CHECK(M.C.num_vertices() < M.Y.num_vertices());
  CHECK(M.Y.num_vertices() < M.X.num_vertices());
  for (int v = 0; v < M.Y.num_vertices(); ++v) CHECK(M.to_Y[v] == v);
  for (int v = M.Y.num_vertices(); v < M.X.num_vertices(); ++v) CHECK(M.to_Y[v] == M.to_Y[M.x1]);
  // arc is the only way from x0 to x1 inside Y
  CHECK(M.Y.vdist(M.to_Y[M.x0], M.to_Y[M.x1]) == Q(4));
  // systole of Y is one ring: a regular 12-gon of radius 1
  double ring = 24 * std::sin(std::numbers::pi / 12);
  CHECK(std::abs(M.Y.systole()->to_double() - ring) < 1e-6);
  CHECK(std::abs(M.C.systole()->to_double() - ring) < 1e-6);
  CHECK(SimplicialMap(M.X, M.Y, M.to_Y).lipschitz() <= Q(1));
  auto P = presentation(M.X);
  CHECK(P.rank >= 1);
  CHECK(is_trivial(walk_word(M.X, P, M.top_ring), P) == Tri::False);
  // more truncation, more sheet, same Y
  auto M2 = cylinder_model(2);
  CHECK(M2.X.num_vertices() > M.X.num_vertices());
  CHECK(M2.Y.num_vertices() == M.Y.num_vertices());
}

TEST_CASE("small scenarios pass") {
  RunSettings cfg;
  cfg.samples = 6;
  cfg.max_len = 4;

  auto cyl = cylinder_demo({1, 2}, cfg);
  CHECK(cyl.count(Status::Pass) == int(cyl.checks.size()));
  CHECK(cyl.tables["truncations"].size() == 2);

  auto pp = punctured_plane_demo(8, cfg);
  CHECK_FALSE(pp.failed());

  auto X1 = load_complex("wedge2.json"), X2 = load_complex("wedge2_long.json");
  auto mi = metric_independence_scenario(X1, X2, {Q(1, 4), Q(1)}, cfg);
  CHECK(mi.count(Status::Pass) == 2);

  auto S = load_system("hawaiian.json", 4);
  auto sw = sandwich_check(S, {Q(1, 2)}, cfg);
  CHECK_FALSE(sw.failed());
  CHECK(sw.checks.size() == 3);

  auto inj = shape_injectivity_probe(S, cfg);
  CHECK_FALSE(inj.failed());

  auto lem = lemma_suite(RhoContext::of(X1), "wedge2", cfg);
  CHECK(lem.count(Status::Pass) == 4);
}

TEST_CASE("reports are identical across runs and thread counts") {
  RunSettings one;
  one.samples = 8;
  one.max_len = 4;
  RunSettings many = one;
  many.threads = 3;
  auto X1 = load_complex("wedge2.json"), X2 = load_complex("wedge2_long.json");
  std::vector<Q> radii{Q(1, 8), Q(1, 2)};
  auto a = metric_independence_scenario(X1, X2, radii, one).to_json(false).dump();
  auto b = metric_independence_scenario(X1, X2, radii, one).to_json(false).dump();
  auto c = metric_independence_scenario(X1, X2, radii, many).to_json(false).dump();
  CHECK(a == b);
  CHECK(a == c);  // worker count is not part of the report

  auto l1 = lemma_suite(RhoContext::of(X1), "w", one).to_json(false).dump();
  auto l3 = lemma_suite(RhoContext::of(X1), "w", many).to_json(false).dump();
  CHECK(l1 == l3);
}

TEST_CASE("threads from JSON") {
  auto t = thread_from_json(json::parse(R"({"words":[[1],[1,2],[1,2,3]]})"));
  CHECK(t.words.size() == 3);
  CHECK(t.words[2] == Word{1, 2, 3});
  CHECK(thread_from_json(thread_json(t)).words == t.words);
  auto S = load_system("hawaiian.json", 3);
  CHECK_NOTHROW(check_thread(S, t));
  auto bad = thread_from_json(json::parse(R"({"words":[[],[1,2],[1,2,3]]})"));
  CHECK_THROWS_AS(check_thread(S, bad), std::invalid_argument);
  CHECK_THROWS_AS(thread_from_json(json::parse(R"({"words":[]})")), InputError);
  CHECK_THROWS_AS(thread_from_json(json::parse(R"([1,2])")), InputError);
}

TEST_CASE("rho matrix agrees with single queries") {
  auto X = load_complex("wedge2.json");
  auto ctx = RhoContext::of(X);
  std::vector<Word> ws{{}, {1}, {2, -1}};
  auto m = rho_matrix(ctx, ws, 2);
  for (int i = 0; i < 3; ++i) {
    CHECK(m.cell[i][i].upper == Q(0));
    for (int j = i; j < 3; ++j) {
      auto r = rho(ctx, ws[i], ws[j]);
      CHECK(m.cell[i][j].lower == r.lower);
      CHECK(m.cell[i][j].upper == r.upper);
    }
  }
  auto rows = read_csv(m.to_csv());
  CHECK(rows.size() == 1 + 6);
  CHECK(rows[2][2] == "[]");
  CHECK(rows[2][3] == "[1]");
  CHECK(Q::parse(rows[2][4]) == m.cell[0][1].lower);
  CHECK(m.to_json().size() == 6);
}
