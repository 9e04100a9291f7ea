#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pimet/group.hpp"

using namespace pimet;

namespace {

// naive reduction: rescan from the start after every cancellation
Word naive_reduce(Word w) {
  for (bool again = true; again;) {
    again = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i] == -w[i + 1]) {
        w.erase(w.begin() + i, w.begin() + i + 2);
        again = true;
        break;
      }
  }
  return w;
}

Word random_word(std::mt19937& rng, int rank, int len) {
  std::uniform_int_distribution<int> g(1, rank), s(0, 1);
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(s(rng) ? g(rng) : -g(rng));
  return w;
}

MetricComplex wedge(int n) {
  std::vector<MetricComplex> c;
  for (int i = 0; i < n; ++i) c.push_back(make_circle(4, Q(1)));
  return wedge_sum(c);
}

// collapse circle 2 of a wedge of two 4-edge circles to the basepoint
SimplicialMap collapse_second(const MetricComplex& W) {
  std::vector<int> vm(W.num_vertices());
  for (int v = 0; v < W.num_vertices(); ++v) vm[v] = v <= 3 ? v : 0;
  return SimplicialMap(W, W, vm);
}

}  // namespace

TEST_CASE("reduce") {
  CHECK(reduce({1, -1}).empty());
  CHECK(reduce({2, 1, -1, 2}) == Word{2, 2});
  std::mt19937 rng(1);
  for (int it = 0; it < 200; ++it) {
    Word w = random_word(rng, 3, 50);
    Word r = reduce(w);
    CHECK(r == naive_reduce(w));
    CHECK(reduce(r) == r);
    CHECK(r.size() <= w.size());
    CHECK((w * inverse(w)).empty());
  }
}

TEST_CASE("cyclic core") {
  Word p;
  CHECK(cyclic_core({1, 2, 3, -1}, &p) == Word{2, 3});
  CHECK(p == Word{1});
  CHECK(cyclic_core({}).empty());
}

TEST_CASE("presentations of small complexes") {
  MetricComplex tree(3, {{0, 1, Q(1)}, {1, 2, Q(1)}}, {}, 0);
  auto Pt = presentation(tree);
  CHECK(Pt.rank == 0);
  CHECK(Pt.free());

  auto W = wedge(2);
  auto Pw = presentation(W);
  CHECK(Pw.rank == 2);
  CHECK(Pw.free());

  MetricComplex tri(3, {{0, 1, Q(1)}, {1, 2, Q(1)}, {2, 0, Q(1)}}, {{0, 1, 2}}, 0);
  auto P = presentation(tri);
  CHECK(P.rank == 1);
  REQUIRE(P.relators.size() == 1);
  CHECK(P.relators[0].size() == 1);
  CHECK(is_trivial({1}, P) == Tri::True);

  // disconnected input never gets as far as a presentation
  CHECK_THROWS(MetricComplex(4, {{0, 1, Q(1)}, {2, 3, Q(1)}}, {}, 0));
}

TEST_CASE("is_trivial") {
  auto W = wedge(2);
  auto P = presentation(W);
  CHECK(is_trivial({}, P) == Tri::True);
  CHECK(is_trivial({1, 2, -1, -2}, P) == Tri::False);
  CHECK(is_trivial({1, 2, -2, -1}, P) == Tri::True);

  // <a,b | a>: the commutator dies
  auto st = std::make_shared<TietzeState>(tietze_simplify(2, {{1}}));
  CHECK(st->complete());
  CHECK(st->rewrite({1, 2, -1, -2}).empty());
  CHECK(st->rewrite({1, 2, 1}) == Word{2});
}

TEST_CASE("Tietze on a torus-like relator stays undecided") {
  auto st = tietze_simplify(2, {{1, 2, -1, -2}});
  CHECK_FALSE(st.complete());
  CHECK(st.remaining.size() == 1);
}

TEST_CASE("induced homomorphisms") {
  auto W = wedge(2);
  auto P = presentation(W);
  std::vector<int> id(W.num_vertices());
  for (int v = 0; v < W.num_vertices(); ++v) id[v] = v;
  auto h = induced_hom(SimplicialMap(W, W, id), P, P);
  CHECK(h.images[1] == Word{1});
  CHECK(h.images[2] == Word{2});

  auto r = induced_hom(collapse_second(W), P, P);
  CHECK(r.images[1] == Word{1});
  CHECK(r.images[2].empty());

  // 8-edge circle wrapped twice around a 4-edge circle: hand-traced g -> g^2
  auto C8 = make_circle(8, Q(2));
  auto C4 = make_circle(4, Q(1));
  std::vector<int> wrap(8);
  for (int v = 0; v < 8; ++v) wrap[v] = v % 4;
  auto P8 = presentation(C8), P4 = presentation(C4);
  auto d = induced_hom(SimplicialMap(C8, C4, wrap), P8, P4);
  REQUIRE(P8.rank == 1);
  CHECK(reduce(d.images[1]) == Word{1, 1});

  // not simplicial: adjacent vertices sent to non-adjacent ones
  std::vector<int> bad(8, 0);
  bad[1] = 2;
  CHECK_THROWS(SimplicialMap(C8, C4, bad));
}

TEST_CASE("functoriality on random maps of circles") {
  std::mt19937 rng(7);
  auto C6 = make_circle(6, Q(1)), C4 = make_circle(4, Q(1)), C3 = make_circle(3, Q(1));
  auto P6 = presentation(C6), P4 = presentation(C4), P3 = presentation(C3);
  // random simplicial maps: walk the codomain cycle, each step -1, 0 or +1
  auto random_map = [&](const MetricComplex& D, int n_cod) {
    int n = D.num_vertices();
    for (;;) {
      std::vector<int> vm(n, 0);
      int pos = 0;
      for (int v = 1; v < n; ++v) {
        pos += std::uniform_int_distribution<int>(-1, 1)(rng);
        vm[v] = ((pos % n_cod) + n_cod) % n_cod;
      }
      int last = vm[n - 1];
      int step = ((0 - last) % n_cod + n_cod) % n_cod;
      if (step == 0 || step == 1 || step == n_cod - 1) return vm;
    }
  };
  for (int it = 0; it < 50; ++it) {
    SimplicialMap f(C6, C4, random_map(C6, 4));
    SimplicialMap g(C4, C3, random_map(C4, 3));
    auto hf = induced_hom(f, P6, P4), hg = induced_hom(g, P4, P3);
    auto hgf = induced_hom(compose(g, f), P6, P3);
    auto both = compose(hg, hf);
    for (int k = 1; k <= P6.rank; ++k) CHECK(reduce(hgf.images[k]) == reduce(both.images[k]));
  }
}

TEST_CASE("word <-> loop round trip") {
  auto W = wedge(2);
  auto P = presentation(W);
  auto c = constant_loop(W, Point::at(W.basepoint()));
  CHECK(loop_to_word(W, P, c).empty());
  auto e = word_to_loop(W, P, {}, 64);
  CHECK(e.N() == 1);
  CHECK(e.front() == Point::at(W.basepoint()));

  auto g1 = word_to_loop(W, P, {1}, 4);
  CHECK(g1.N() == 4);
  CHECK(loop_to_word(W, P, g1) == Word{1});
  CHECK(loop_to_word(W, P, word_to_loop(W, P, {1, 2}, 16)) == Word{1, 2});
  CHECK(loop_to_word(W, P, word_to_loop(W, P, {1, -1}, 16)).empty());

  // unit circle, 8 samples, equally spaced
  auto C = make_circle(4, Q(1));
  auto PC = presentation(C);
  auto l = word_to_loop(C, PC, {1}, 8);
  REQUIRE(l.N() == 8);
  for (int i = 0; i < 8; ++i) CHECK(C.distance(l.s[i], l.s[i + 1]) == Q(1, 8));
}

TEST_CASE("round trip on random words over wedges of up to 4 circles") {
  std::mt19937 rng(9);
  for (int n = 1; n <= 4; ++n) {
    std::vector<MetricComplex> c;
    for (int i = 0; i < n; ++i) c.push_back(make_circle(3 + i, Q(1) + Q(i, 4)));
    auto W = wedge_sum(c);
    auto P = presentation(W);
    REQUIRE(P.rank == n);
    for (int it = 0; it < 25; ++it) {
      int len = std::uniform_int_distribution<int>(0, 12)(rng);
      Word w = random_word(rng, n, len);
      CHECK(loop_to_word(W, P, word_to_loop(W, P, w, 64)) == reduce(w));
    }
  }
}

TEST_CASE("coarse loops are refused") {
  auto C = make_circle(4, Q(1));
  auto P = presentation(C);
  DiscreteLoop a{&C, {Point::at(0), Point::at(2), Point::at(0)}};
  CHECK_THROWS_AS(loop_to_word(C, P, a), MarginViolation);
}

TEST_CASE("uniformly close loops have the same word") {
  auto W = wedge_sum({make_circle(4, Q(1)), make_circle(3, Q::parse("0.75"))});
  auto P = presentation(W);
  Q sys = *W.systole();
  std::mt19937 rng(4);
  int compared = 0;
  for (int it = 0; it < 60; ++it) {
    Word w = random_word(rng, 2, std::uniform_int_distribution<int>(0, 5)(rng));
    auto a = word_to_loop(W, P, w, 32);
    // perturb every interior sample along a short geodesic
    auto b = a;
    for (int i = 1; i < b.N(); ++i) {
      int e = std::uniform_int_distribution<int>(0, W.num_edges() - 1)(rng);
      Point q = W.point(e, Q(std::uniform_int_distribution<int>(0, 8)(rng), 8));
      if (W.distance(b.s[i], q) * Q(2) < sys) b.s[i] = W.geodesic_point(b.s[i], q, Q(1, 8));
    }
    auto mu = uniform_distance(a, b);
    if (!(mu.upper * Q(2) < sys)) continue;
    ++compared;
    try {
      CHECK(loop_to_word(W, P, b) == loop_to_word(W, P, a));
    } catch (const MarginViolation&) {
      // the perturbed loop may be too coarse to straighten; that is a refusal, not a wrong answer
    }
  }
  CHECK(compared > 10);
}
