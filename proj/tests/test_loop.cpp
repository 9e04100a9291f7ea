#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "pimet/group.hpp"
#include "pimet/loop.hpp"

using namespace pimet;

namespace {

struct Fixture {
  MetricComplex W = wedge_sum({make_circle(4, Q(1)), make_circle(4, Q(1))});
  Presentation P = presentation(W);
};

Word random_word(std::mt19937& rng, int rank, int len) {
  std::uniform_int_distribution<int> g(1, rank), s(0, 1);
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(s(rng) ? g(rng) : -g(rng));
  return w;
}

Q grid_mu(const DiscreteLoop& a, const DiscreteLoop& b) { return uniform_distance(a, b).grid_max; }

}  // namespace

TEST_CASE("uniform distance examples") {
  Fixture f;
  auto a = word_to_loop(f.W, f.P, {1, 2}, 16);
  auto mu = uniform_distance(a, a);
  CHECK(mu.grid_max == Q(0));
  CHECK(mu.upper == Q(0));

  auto C = make_circle(4, Q(1));
  auto PC = presentation(C);
  auto loop = word_to_loop(C, PC, {1}, 8);
  auto c = constant_loop(C, Point::at(0));
  auto m = uniform_distance(c, loop);
  // farthest point of a unit circle from the base
  Q far(0);
  for (int i = 0; i <= 64; ++i) far = qmax(far, qmin(Q(i, 64), Q(1) - Q(i, 64)));
  CHECK(m.grid_max == far);
  CHECK(m.grid_max <= Q(1, 2));
  CHECK(Q(1, 2) <= m.upper);

  auto other = make_circle(3, Q(1));
  CHECK_THROWS(uniform_distance(c, constant_loop(other, Point::at(0))));
}

TEST_CASE("concatenation") {
  Fixture f;
  auto a = word_to_loop(f.W, f.P, {1}, 8), b = word_to_loop(f.W, f.P, {2}, 8);
  REQUIRE(a.N() == 8);
  REQUIRE(b.N() == 8);
  CHECK(concatenate(a, b).N() == 16);
  auto c = constant_loop(f.W, Point::at(0));
  CHECK(loop_to_word(f.W, f.P, concatenate(a, c)) == Word{1});
  CHECK(mesh(concatenate(a, b)) <= qmax(mesh(a), mesh(b)));

  std::mt19937 rng(2);
  for (int it = 0; it < 30; ++it) {
    Word u = random_word(rng, 2, 4), v = random_word(rng, 2, 4);
    auto lu = word_to_loop(f.W, f.P, u, 16), lv = word_to_loop(f.W, f.P, v, 16);
    CHECK(loop_to_word(f.W, f.P, concatenate(lu, lv)) == u * v);
  }

  DiscreteLoop off{&f.W, {Point::at(1), Point::at(1)}};
  CHECK_THROWS(concatenate(a, off));
}

TEST_CASE("concatenation max law on grids") {
  Fixture f;
  std::mt19937 rng(5);
  for (int it = 0; it < 30; ++it) {
    auto l = [&] { return word_to_loop(f.W, f.P, random_word(rng, 2, 3), 8); };
    auto a = l(), a2 = l(), b = l(), b2 = l();
    // all four on one grid so the halves line up
    int M = std::lcm(std::lcm(a.N(), a2.N()), std::lcm(b.N(), b2.N()));
    a = resample(a, M); a2 = resample(a2, M); b = resample(b, M); b2 = resample(b2, M);
    CHECK(grid_mu(concatenate(a, a2), concatenate(b, b2)) == qmax(grid_mu(a, b), grid_mu(a2, b2)));
  }
}

TEST_CASE("reverse") {
  Fixture f;
  std::mt19937 rng(6);
  auto c = constant_loop(f.W, Point::at(0));
  CHECK(reverse(c) == c);
  for (int it = 0; it < 30; ++it) {
    auto a = word_to_loop(f.W, f.P, random_word(rng, 2, 5), 16);
    auto b = word_to_loop(f.W, f.P, random_word(rng, 2, 5), 16);
    CHECK(reverse(reverse(a)) == a);
    CHECK(grid_mu(a, b) == grid_mu(reverse(a), reverse(b)));
    CHECK(loop_to_word(f.W, f.P, reverse(a)) == inverse(loop_to_word(f.W, f.P, a)));
  }
}

TEST_CASE("path conjugation") {
  Fixture f;
  auto a = word_to_loop(f.W, f.P, {1, 2}, 16);
  auto g0 = constant_loop(f.W, Point::at(0));
  auto ca = path_conjugate(g0, a);
  CHECK(ca.front() == Point::at(0));
  CHECK(loop_to_word(f.W, f.P, ca) == Word{1, 2});

  std::mt19937 rng(8);
  for (int it = 0; it < 30; ++it) {
    Word gw = random_word(rng, 2, 3);
    // a path from the base to the base: the loop of gw itself
    auto gamma = word_to_loop(f.W, f.P, gw, 16);
    auto x = word_to_loop(f.W, f.P, random_word(rng, 2, 4), 16);
    auto y = word_to_loop(f.W, f.P, random_word(rng, 2, 4), 16);
    auto [xx, yy] = align(x, y);
    CHECK(grid_mu(path_conjugate(gamma, xx), path_conjugate(gamma, yy)) == grid_mu(xx, yy));
    CHECK(loop_to_word(f.W, f.P, path_conjugate(gamma, x)) ==
          gw * loop_to_word(f.W, f.P, x) * inverse(gw));
  }

  DiscreteLoop to1{&f.W, {Point::at(0), Point::at(1)}};
  CHECK_THROWS(path_conjugate(to1, a));
}

TEST_CASE("grid metric properties") {
  Fixture f;
  std::mt19937 rng(10);
  for (int it = 0; it < 40; ++it) {
    auto a = word_to_loop(f.W, f.P, random_word(rng, 2, 4), 16);
    auto b = word_to_loop(f.W, f.P, random_word(rng, 2, 4), 16);
    auto c = word_to_loop(f.W, f.P, random_word(rng, 2, 4), 16);
    CHECK(grid_mu(a, b) == grid_mu(b, a));
    // triangle inequality on a common grid
    int M = std::lcm(std::lcm(a.N(), b.N()), c.N());
    auto A = resample(a, M), B = resample(b, M), C = resample(c, M);
    CHECK(grid_mu(A, C) <= grid_mu(A, B) + grid_mu(B, C));
    // refining never widens the certified interval
    auto coarse = uniform_distance(a, b);
    auto fine = uniform_distance(resample(a, 2 * coarse.N), resample(b, 2 * coarse.N));
    CHECK(fine.upper - fine.grid_max <= coarse.upper - coarse.grid_max);
    CHECK(coarse.grid_max <= fine.grid_max);
  }
}

TEST_CASE("pruning stops early with a lower bound") {
  Fixture f;
  auto a = word_to_loop(f.W, f.P, {1}, 16), c = constant_loop(f.W, Point::at(0));
  auto m = uniform_distance(a, c, PlainMetric<MetricComplex>{f.W}, std::optional<Q>(Q(1, 8)));
  CHECK(m.pruned);
  CHECK(Q(1, 8) <= m.grid_max);
}

TEST_CASE("analytic loops") {
  auto Y = AnalyticSpace::punctured_plane();
  AnalyticLoop a{&Y, {}};
  for (int i = 0; i <= 64; ++i) {
    double th = 2 * M_PI * i / 64;
    a.s.push_back({std::cos(th), std::sin(th)});
  }
  a.s.back() = a.s.front();
  auto c = constant_loop(Y, Y.base);
  auto m = uniform_distance(c, a);
  CHECK(m.grid_max == doctest::Approx(2.0));
  CHECK(m.upper >= 2.0);
  CHECK(reverse(reverse(a)) == a);
}
