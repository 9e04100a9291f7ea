#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "pimet/limitsys.hpp"

using namespace pimet;

namespace {

InverseSystem hawaiian(int J) {
  std::vector<MetricComplex> c;
  for (int i = 0; i < J; ++i) c.push_back(make_circle(4, Q(1)));
  return shrinking_wedge(c);
}

Point random_point(const MetricComplex& X, std::mt19937& rng) {
  int e = std::uniform_int_distribution<int>(0, X.num_edges() - 1)(rng);
  return X.point(e, Q(std::uniform_int_distribution<int>(0, 16)(rng), 16));
}

}  // namespace

TEST_CASE("tail bounds") {
  auto S = hawaiian(6);
  CHECK(tail_bound(S, 1) == Q(1, 2));
  CHECK(tail_bound(S, 4) == Q(1, 16));
  for (int k = 1; k < 6; ++k) CHECK(tail_bound(S, k + 1) * Q(2) == tail_bound(S, k));
  CHECK_THROWS(tail_bound(S, 7));
}

TEST_CASE("hawaiian levels") {
  auto S = hawaiian(6);
  CHECK(S.depth() == 6);
  for (int k = 1; k <= 6; ++k) {
    CHECK(S.pres(k).rank == k);
    CHECK(S.pres(k).free());
    CHECK(S.scale(k) == Q(1));  // diameter 1 (1/2 for one circle)
  }
  // retraction identity, vertex by vertex
  for (int j = 1; j < 6; ++j)
    for (int v = 0; v < S.level(j).num_vertices(); ++v)
      CHECK(S.bonding(j).vmap[S.section(j).vmap[v]] == v);
}

TEST_CASE("limit distance: basepoint vs antipode of circle 1") {
  auto S = hawaiian(6);
  auto d = limit_distance(S, Point::at(0), Point::at(2));
  Q sum(0);
  for (int j = 1; j <= 6; ++j) sum += Q(1, 2) / Q(std::int64_t(1) << j);
  CHECK(d.finite == sum);
  CHECK(d.finite == Q(1, 2) * (Q(1) - Q(1, 64)));
  CHECK(d.tail == Q(1, 64));
  auto z = limit_distance(S, Point::at(2), Point::at(2));
  CHECK(z.upper() == Q(0));
}

TEST_CASE("projections of generator threads") {
  auto S = hawaiian(6);
  CHECK(S.project_hom(2).apply({3}).empty());
  CHECK(S.project_hom(3).apply({3}) == Word{3});
  CHECK(S.project_hom(6).apply({1, 5, -2}) == Word{1, 5, -2});
  CHECK(S.embed_hom(2).apply({2, -1}) == Word{2, -1});
}

TEST_CASE("projection Lipschitz certificate and retraction distance") {
  auto S = hawaiian(6);
  const auto& T = S.top();
  std::mt19937 rng(3);
  LimitMetric m{S};
  for (int it = 0; it < 100; ++it) {
    Point x = random_point(T, rng), y = random_point(T, rng);
    Q dxy = limit_distance(S, x, y).finite;
    for (int k = 1; k <= 6; ++k) {
      Point a = S.project(k).apply(x), b = S.project(k).apply(y);
      CHECK(S.level(k).distance(a, b) <= Q(std::int64_t(1) << k) * dxy);
      Point back = S.embed(k).apply(S.project(k).apply(x));
      CHECK(limit_distance(S, x, back).upper() < tail_bound(S, k));
    }
    // metric axioms on stabilized points
    Point z = random_point(T, rng);
    CHECK(m.dist(x, y) == m.dist(y, x));
    CHECK(m.dist(x, z) <= m.dist(x, y) + m.dist(y, z));
    if (!(x == y)) CHECK(m.dist(x, y) > Q(0));
  }
}

TEST_CASE("weighted model dominates the finite part") {
  auto S = hawaiian(4);
  auto W = weighted_model(S);
  LimitMetric m{S};
  std::mt19937 rng(5);
  for (int it = 0; it < 60; ++it) {
    Point x = random_point(S.top(), rng), y = random_point(S.top(), rng);
    CHECK(m.dist(x, y) <= W.distance(x, y));
    CHECK(m.seg_mesh(x, y) >= m.dist(x, y));
  }
}

TEST_CASE("shrinking wedge variants") {
  auto one = shrinking_wedge({make_circle(4, Q(1))});
  CHECK(one.depth() == 1);
  CHECK(one.pres(1).rank == 1);

  MetricComplex tri(3, {{0, 1, Q(1)}, {1, 2, Q(1)}, {2, 0, Q(1)}}, {{0, 1, 2}}, 0);
  auto S = shrinking_wedge({make_circle(4, Q(1)), tri});
  // the filled triangle adds a generator and kills it again
  const auto& P = S.pres(2);
  REQUIRE(P.tietze);
  CHECK(P.tietze->complete());
  int survivors = 0;
  for (int g = 1; g <= P.rank; ++g) survivors += !P.tietze->eliminated[g];
  CHECK(survivors == 1);
  CHECK(is_trivial({2}, P) == Tri::True);
  CHECK(is_trivial({1}, P) == Tri::False);
}

TEST_CASE("threads and psi") {
  auto S = hawaiian(6);
  auto id = make_thread(S, {});
  CHECK(id.stabilization == 1);
  auto r = psi(S, id);
  CHECK(r.shape_trivial);

  auto g2 = psi(S, make_thread(S, {2}));
  CHECK(g2.first_nontrivial == 2);
  CHECK(g2.trivial[0] == Tri::True);
  for (int k = 2; k <= 6; ++k) CHECK(g2.trivial[k - 1] == Tri::False);

  for (int j = 2; j <= 6; ++j) {
    auto c = psi(S, make_thread(S, {1, j, -1, -j}));
    CHECK(c.first_nontrivial == j);
  }

  Thread bad = make_thread(S, {2});
  bad.words[0] = {1};
  CHECK_THROWS_AS(check_thread(S, bad), std::invalid_argument);
}

TEST_CASE("kernel samples project to the identity") {
  auto S = hawaiian(6);
  std::mt19937_64 rng(11);
  for (int k = 1; k <= 6; ++k)
    for (int it = 0; it < 30; ++it) {
      Word w = sample_kernel(S, k, rng, 6);
      CHECK(S.project_hom(k).apply(w).empty());
    }
}
