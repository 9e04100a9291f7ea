#include "pimet/cover.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace pimet {

namespace {

// d(x_s, c) on edge e, s in [0,1] measured from e.u, is the lower envelope
// of lines a + b s with slopes +|e| or -|e|, except for a center inside e
// where the direct run |s - t_c| |e| is a V shape (listed as its two lines).
struct Line {
  Q a, b;
};

struct Envelope {
  std::vector<Line> lines;
  std::optional<Q> inside;  // t_c when the center is interior to the edge
};

Envelope envelope(const MetricComplex& X, const Point& c, int e) {
  const Edge& E = X.edge(e);
  Envelope env;
  Q du = X.distance(Point::at(E.u), c), dv = X.distance(Point::at(E.v), c);
  env.lines.push_back({du, E.len});
  env.lines.push_back({dv + E.len, -E.len});
  if (!c.is_vertex() && c.edge == e) {
    env.inside = c.t;
    env.lines.push_back({-c.t * E.len, E.len});
    env.lines.push_back({c.t * E.len, -E.len});
  }
  return env;
}

// offsets in [lo,hi] where a piecewise linear combination of the envelopes
// can have a local extremum
std::vector<Q> candidates(const std::vector<Envelope>& envs, const std::vector<Q>& shift,
                          const Q& lo, const Q& hi) {
  std::vector<Q> out{lo, hi};
  for (const auto& en : envs)
    if (en.inside && *en.inside > lo && *en.inside < hi) out.push_back(*en.inside);
  for (std::size_t i = 0; i < envs.size(); ++i)
    for (const Line& p : envs[i].lines) {
      if (!(p.b > Q(0))) continue;
      for (std::size_t j = 0; j < envs.size(); ++j)
        for (const Line& m : envs[j].lines) {
          if (!(m.b < Q(0))) continue;
          // p.a - shift_i + p.b s = m.a - shift_j + m.b s
          Q s = ((m.a - shift[j]) - (p.a - shift[i])) / (p.b - m.b);
          if (s > lo && s < hi) out.push_back(s);
        }
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// sup of d(., c) along the run [lo,hi] of edge e
Q sup_on_run(const MetricComplex& X, const Point& c, int e, Q lo, Q hi) {
  if (hi < lo) std::swap(lo, hi);
  std::vector<Envelope> envs{envelope(X, c, e)};
  Q best(0);
  for (const Q& s : candidates(envs, {Q(0)}, lo, hi)) best = qmax(best, X.distance(X.point(e, s), c));
  return best;
}

}  // namespace

bool in_ball(const MetricComplex& X, const Ball& B, const Point& p) {
  return X.distance(p, B.center) < B.radius;
}

bool edge_in_ball(const MetricComplex& X, const Ball& B, int e) {
  return sup_on_run(X, B.center, e, Q(0), Q(1)) < B.radius;
}

bool balls_meet(const MetricComplex& X, const std::vector<const Ball*>& balls) {
  if (balls.empty()) return true;
  if (balls.size() == 2)  // geodesic space: walk the midpoint
    return X.distance(balls[0]->center, balls[1]->center) < balls[0]->radius + balls[1]->radius;
  std::vector<Q> shift;
  for (auto* b : balls) shift.push_back(b->radius);
  for (int e = 0; e < X.num_edges(); ++e) {
    std::vector<Envelope> envs;
    for (auto* b : balls) envs.push_back(envelope(X, b->center, e));
    for (const Q& s : candidates(envs, shift, Q(0), Q(1))) {
      Point x = X.point(e, s);
      bool all = true;
      for (auto* b : balls)
        if (!(X.distance(x, b->center) < b->radius)) { all = false; break; }
      if (all) return true;
    }
  }
  return false;
}

bool covers(const Cover& U) {
  const MetricComplex& X = *U.X;
  std::vector<Q> shift;
  for (auto& b : U.balls) shift.push_back(b.radius);
  for (int e = 0; e < X.num_edges(); ++e) {
    std::vector<Envelope> envs;
    for (auto& b : U.balls) envs.push_back(envelope(X, b.center, e));
    // min over balls of d - r must stay negative; its maxima are among the candidates
    for (const Q& s : candidates(envs, shift, Q(0), Q(1))) {
      Point x = X.point(e, s);
      bool hit = false;
      for (auto& b : U.balls)
        if (X.distance(x, b.center) < b.radius) { hit = true; break; }
      if (!hit) return false;
    }
  }
  return true;
}

Cover ball_cover(const MetricComplex& X, const Q& radius) {
  if (!(radius > Q(0))) throw std::invalid_argument("ball_cover: radius must be positive");
  Subdivision S = subdivide(X, radius / Q(2));
  Cover U;
  U.X = &X;
  for (const Point& p : S.vertex_origin) {
    if (p.edge == -2) continue;  // face interior
    U.balls.push_back({p, radius});
  }
  U.distinguished = X.basepoint();  // original vertices keep their ids and come first
  return U;
}

MetricComplex nerve(const Cover& U) {
  int n = int(U.balls.size());
  if (n == 0) throw std::invalid_argument("nerve: empty cover");
  std::vector<Edge> edges;
  std::vector<std::vector<char>> meet(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (balls_meet(*U.X, {&U.balls[i], &U.balls[j]})) {
        meet[i][j] = meet[j][i] = 1;
        edges.push_back({i, j, Q(1)});
      }
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!meet[i][j]) continue;
      for (int k = j + 1; k < n; ++k)
        if (meet[i][k] && meet[j][k] && balls_meet(*U.X, {&U.balls[i], &U.balls[j], &U.balls[k]}))
          tris.push_back({i, j, k});
    }
  return MetricComplex(n, std::move(edges), std::move(tris), U.distinguished);
}

CanonicalMap canonical_map(const MetricComplex& X, const Cover& U, int max_depth, bool prefer_last) {
  if (!X.triangles().empty())
    throw std::invalid_argument("canonical_map: only 1-dimensional complexes are supported");
  if (U.X != &X) throw std::invalid_argument("canonical_map: cover lives on another space");
  Q rmin = U.balls.at(0).radius;
  for (auto& b : U.balls) rmin = qmin(rmin, b.radius);
  Q h = rmin / Q(2);
  auto nv = std::make_shared<const MetricComplex>(nerve(U));
  int n = int(U.balls.size());
  for (int depth = 0; depth <= max_depth; ++depth, h = h / Q(2)) {
    auto sub = std::make_shared<const Subdivision>(subdivide(X, h));
    const MetricComplex& S = sub->complex;
    std::vector<int> vm(S.num_vertices(), -1);
    bool ok = true;
    for (int v = 0; v < S.num_vertices() && ok; ++v) {
      auto star_in = [&](int i) {
        const Ball& B = U.balls[i];
        if (!in_ball(X, B, sub->vertex_origin[v])) return false;
        for (auto [y, f] : S.adj(v)) {
          const Piece& o = sub->edge_origin[f];
          if (!(sup_on_run(X, B.center, o.edge, o.from, o.to) < B.radius)) return false;
        }
        return true;
      };
      if (v == S.basepoint()) {
        if (star_in(U.distinguished)) vm[v] = U.distinguished;
      } else if (prefer_last) {
        for (int i = n - 1; i >= 0 && vm[v] < 0; --i)
          if (star_in(i)) vm[v] = i;
      } else {
        for (int i = 0; i < n && vm[v] < 0; ++i)
          if (star_in(i)) vm[v] = i;
      }
      if (vm[v] < 0) ok = false;
    }
    if (!ok) continue;
    CanonicalMap c{sub, nv, SimplicialMap(sub->complex, *nv, vm), h};
    return c;
  }
  throw std::runtime_error("canonical_map: no subdivision reached star containment");
}

Word PSharp::apply(const MetricComplex& X, const Presentation& PX, const CanonicalMap& c,
                   const Word& w) const {
  return hom.apply(refine_word(X, PX, *c.sub, dom_fine, w));
}

PSharp p_sharp(const CanonicalMap& c) {
  PSharp p;
  p.dom_fine = presentation(c.sub->complex);
  p.nerve = presentation(*c.nerve);
  p.hom = induced_hom(c.map, p.dom_fine, p.nerve);
  return p;
}

SimplicialMap refinement_map(const Cover& V, const MetricComplex& NV, const Cover& U,
                             const MetricComplex& NU) {
  if (V.X != U.X) throw std::invalid_argument("refinement_map: covers of different spaces");
  const MetricComplex& X = *U.X;
  auto inside = [&](const Ball& a, const Ball& b) {
    return X.distance(a.center, b.center) + a.radius <= b.radius;
  };
  std::vector<int> vm(V.balls.size(), -1);
  for (std::size_t j = 0; j < V.balls.size(); ++j) {
    if (int(j) == V.distinguished) {
      if (inside(V.balls[j], U.balls[U.distinguished])) vm[j] = U.distinguished;
    } else {
      for (std::size_t i = 0; i < U.balls.size() && vm[j] < 0; ++i)
        if (inside(V.balls[j], U.balls[i])) vm[j] = int(i);
    }
    if (vm[j] < 0) throw std::invalid_argument("refinement_map: cover does not refine");
  }
  return SimplicialMap(NV, NU, vm);
}

std::vector<Word> spanier_generators(const Cover& U, std::uint64_t seed, int count, int max_cycles) {
  const MetricComplex& X = *U.X;
  Presentation PX = presentation(X);
  Q rmin = U.balls.at(0).radius;
  for (auto& b : U.balls) rmin = qmin(rmin, b.radius);
  Subdivision sub = subdivide(X, rmin / Q(2));
  const MetricComplex& S = sub.complex;
  std::mt19937_64 rng(seed);
  std::vector<Word> out;
  std::uniform_int_distribution<std::size_t> pick_ball(0, U.balls.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1), ncyc(1, std::max(1, max_cycles)), steps(0, 8);
  for (int it = 0; it < count; ++it) {
    const Ball& B = U.balls[pick_ball(rng)];
    // edges of the subdivision inside the element
    std::vector<char> in(S.num_edges(), 0);
    for (int f = 0; f < S.num_edges(); ++f) {
      const Piece& o = sub.edge_origin[f];
      if (o.edge >= 0) in[f] = sup_on_run(X, B.center, o.edge, o.from, o.to) < B.radius;
    }
    // BFS forest of that subgraph; non-tree edges give the fundamental cycles
    std::vector<int> parent(S.num_vertices(), -2), root(S.num_vertices(), -1);
    std::vector<char> tree(S.num_edges(), 0);
    for (int s = 0; s < S.num_vertices(); ++s) {
      if (parent[s] != -2) continue;
      bool touches = false;
      for (auto [y, f] : S.adj(s)) touches |= bool(in[f]);
      if (!touches) continue;
      parent[s] = -1;
      root[s] = s;
      std::deque<int> q{s};
      while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (auto [y, f] : S.adj(x))
          if (in[f] && parent[y] == -2) {
            parent[y] = f;
            root[y] = s;
            tree[f] = 1;
            q.push_back(y);
          }
      }
    }
    std::vector<int> cyc;
    for (int f = 0; f < S.num_edges(); ++f)
      if (in[f] && !tree[f]) cyc.push_back(f);
    if (cyc.empty()) {
      out.push_back({});
      continue;
    }
    auto up = [&](int v) {  // v .. root along the forest
      std::vector<int> p{v};
      while (parent[v] >= 0) {
        const Edge& E = S.edge(parent[v]);
        v = E.u == v ? E.v : E.u;
        p.push_back(v);
      }
      return p;
    };
    std::uniform_int_distribution<std::size_t> pick_cyc(0, cyc.size() - 1);
    int first = cyc[pick_cyc(rng)];
    int r = root[S.edge(first).u];
    std::vector<int> loop{r};
    int k = ncyc(rng);
    for (int c = 0; c < k; ++c) {
      int f = c == 0 ? first : cyc[pick_cyc(rng)];
      if (root[S.edge(f).u] != r) continue;  // other component
      int a = S.edge(f).u, b = S.edge(f).v;
      if (coin(rng)) std::swap(a, b);
      auto pa = up(a), pb = up(b);
      loop.insert(loop.end(), pa.rbegin() + 1, pa.rend());
      loop.insert(loop.end(), pb.begin(), pb.end());
    }
    // gamma: a short random walk from the basepoint, then a shortest path to r
    std::vector<int> gamma{S.basepoint()};
    for (int st = steps(rng); st > 0; --st) {
      const auto& nb = S.adj(gamma.back());
      std::uniform_int_distribution<std::size_t> pn(0, nb.size() - 1);
      gamma.push_back(nb[pn(rng)].first);
    }
    auto rest = S.vertex_path(gamma.back(), r);
    gamma.insert(gamma.end(), rest.begin() + 1, rest.end());
    std::vector<int> walk = gamma;
    walk.insert(walk.end(), loop.begin() + 1, loop.end());
    walk.insert(walk.end(), gamma.rbegin() + 1, gamma.rend());
    out.push_back(coarsen_walk(X, PX, sub, walk));
  }
  return out;
}

}  // namespace pimet
