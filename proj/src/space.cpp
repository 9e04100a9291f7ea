#include "pimet/space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace pimet {

namespace detail {
struct ComplexCache {
  std::once_flag apsp_once, sys_once, diam_once;
  std::vector<Q> dist;     // n*n, row = source
  std::vector<int> par;    // n*n, parent edge of v in tree rooted at source
  std::optional<Q> sys;
  Q diam;
};
std::optional<Q> compute_systole(const MetricComplex& X);
}  // namespace detail

MetricComplex::MetricComplex(int nverts, std::vector<Edge> edges,
                             std::vector<std::array<int, 3>> triangles, int basepoint)
    : nv_(nverts), base_(basepoint), edges_(std::move(edges)), tris_(std::move(triangles)),
      cache_(std::make_shared<detail::ComplexCache>()) {
  if (nv_ <= 0) throw std::invalid_argument("complex: no vertices");
  if (base_ < 0 || base_ >= nv_) throw std::invalid_argument("complex: basepoint out of range");
  adj_.assign(nv_, {});
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& E = edges_[e];
    if (E.u < 0 || E.v < 0 || E.u >= nv_ || E.v >= nv_)
      throw std::invalid_argument("complex: edge endpoint out of range");
    if (E.u == E.v) throw std::invalid_argument("complex: loop edge");
    if (!(E.len > Q(0))) throw std::invalid_argument("complex: edge length must be positive");
    if (edge_between(E.u, E.v) >= 0) throw std::invalid_argument("complex: parallel edge");
    adj_[E.u].push_back({E.v, e});
    adj_[E.v].push_back({E.u, e});
    auto lt = [](auto& x, auto& y) { return x.first < y.first; };
    std::sort(adj_[E.u].begin(), adj_[E.u].end(), lt);
    std::sort(adj_[E.v].begin(), adj_[E.v].end(), lt);
  }
  for (auto& t : tris_) {
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw std::invalid_argument("complex: degenerate triangle");
    for (int i = 0; i < 3; ++i)
      if (edge_between(t[i], t[(i + 1) % 3]) < 0)
        throw std::invalid_argument("complex: triangle edge missing");
  }
  // connectivity
  std::vector<char> seen(nv_, 0);
  std::vector<int> stack{base_};
  seen[base_] = 1;
  int count = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (auto [y, e] : adj_[x])
      if (!seen[y]) { seen[y] = 1; ++count; stack.push_back(y); }
  }
  if (count != nv_) throw std::invalid_argument("complex: 1-skeleton is disconnected");
}

int MetricComplex::edge_between(int a, int b) const {
  if (a < 0 || a >= nv_) return -1;
  const auto& L = adj_[a];
  auto it = std::lower_bound(L.begin(), L.end(), b, [](auto& x, int v) { return x.first < v; });
  return (it != L.end() && it->first == b) ? it->second : -1;
}

Point MetricComplex::point(int e, const Q& t) const {
  if (e < 0 || e >= num_edges()) throw InvalidPoint("point: no such edge");
  if (t < Q(0) || t > Q(1)) throw InvalidPoint("point: offset outside [0,1]");
  if (t == Q(0)) return Point::at(edges_[e].u);
  if (t == Q(1)) return Point::at(edges_[e].v);
  return Point{e, 0, t};
}

void MetricComplex::check(const Point& p) const {
  if (p.is_vertex()) {
    if (p.vertex < 0 || p.vertex >= nv_) throw InvalidPoint("vertex out of range");
    return;
  }
  if (p.edge >= num_edges()) throw InvalidPoint("edge out of range");
  if (!(p.t > Q(0) && p.t < Q(1))) throw InvalidPoint("edge point not in canonical form");
}

void MetricComplex::ensure_apsp() const {
  std::call_once(cache_->apsp_once, [this] {
    auto& D = cache_->dist;
    auto& P = cache_->par;
    D.assign(std::size_t(nv_) * nv_, Q(-1));
    P.assign(std::size_t(nv_) * nv_, -1);
    using Item = std::pair<Q, int>;
    for (int s = 0; s < nv_; ++s) {
      Q* d = &D[std::size_t(s) * nv_];
      int* par = &P[std::size_t(s) * nv_];
      std::vector<char> done(nv_, 0);
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
      d[s] = Q(0);
      pq.push({Q(0), s});
      while (!pq.empty()) {
        auto [dx, x] = pq.top();
        pq.pop();
        if (done[x]) continue;
        done[x] = 1;
        for (auto [y, e] : adj_[x]) {
          Q nd = dx + edges_[e].len;
          if (d[y] < Q(0) || nd < d[y]) {
            d[y] = nd;
            par[y] = e;
            pq.push({nd, y});
          }
        }
      }
    }
  });
}

Q MetricComplex::vdist(int a, int b) const {
  ensure_apsp();
  return cache_->dist[std::size_t(a) * nv_ + b];
}

int MetricComplex::tree_parent_edge(int root, int v) const {
  ensure_apsp();
  return cache_->par[std::size_t(root) * nv_ + v];
}

std::vector<int> MetricComplex::vertex_path(int a, int b) const {
  ensure_apsp();
  std::vector<int> path{a};
  int x = a;
  while (x != b) {
    int e = cache_->par[std::size_t(b) * nv_ + x];
    x = edges_[e].u == x ? edges_[e].v : edges_[e].u;
    path.push_back(x);
  }
  return path;
}

std::optional<Q> offset_on(const MetricComplex& X, const Point& p, int e) {
  if (!p.is_vertex()) return p.edge == e ? std::optional<Q>(p.t) : std::nullopt;
  const Edge& E = X.edge(e);
  if (p.vertex == E.u) return Q(0);
  if (p.vertex == E.v) return Q(1);
  return std::nullopt;
}

namespace {

struct End {
  int v;
  Q cost;
};

int ends_of(const MetricComplex& X, const Point& p, End out[2]) {
  if (p.is_vertex()) {
    out[0] = {p.vertex, Q(0)};
    return 1;
  }
  const Edge& E = X.edge(p.edge);
  out[0] = {E.u, p.t * E.len};
  out[1] = {E.v, (Q(1) - p.t) * E.len};
  return 2;
}

// common closed edge of p and q, if any (at least one of them interior)
int shared_edge(const MetricComplex& X, const Point& p, const Point& q) {
  if (!p.is_vertex()) return offset_on(X, q, p.edge) ? p.edge : -1;
  if (!q.is_vertex()) return offset_on(X, p, q.edge) ? q.edge : -1;
  return -1;
}

Q absq(const Q& x) { return x < Q(0) ? -x : x; }

}  // namespace

Q MetricComplex::distance(const Point& p, const Point& q) const {
  if (p == q) return Q(0);
  if (p.is_vertex() && q.is_vertex()) return vdist(p.vertex, q.vertex);
  End a[2], b[2];
  int na = ends_of(*this, p, a), nb = ends_of(*this, q, b);
  std::optional<Q> best;
  int se = shared_edge(*this, p, q);
  if (se >= 0) best = absq(*offset_on(*this, q, se) - *offset_on(*this, p, se)) * edges_[se].len;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      Q c = a[i].cost + vdist(a[i].v, b[j].v) + b[j].cost;
      if (!best || c < *best) best = c;
    }
  return *best;
}

std::vector<Piece> MetricComplex::route(const Point& p, const Point& q) const {
  std::vector<Piece> out;
  if (p == q) return out;
  End a[2], b[2];
  int na = ends_of(*this, p, a), nb = ends_of(*this, q, b);
  std::optional<Q> best;
  int bi = -1, bj = -1;
  int se = shared_edge(*this, p, q);
  if (se >= 0) best = absq(*offset_on(*this, q, se) - *offset_on(*this, p, se)) * edges_[se].len;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      Q c = a[i].cost + vdist(a[i].v, b[j].v) + b[j].cost;
      if (!best || c < *best) { best = c; bi = i; bj = j; }
    }
  if (bi < 0) {
    out.push_back({se, *offset_on(*this, p, se), *offset_on(*this, q, se)});
    return out;
  }
  int av = a[bi].v, bv = b[bj].v;
  if (!p.is_vertex()) out.push_back({p.edge, p.t, edges_[p.edge].u == av ? Q(0) : Q(1)});
  auto vp = vertex_path(av, bv);
  for (std::size_t k = 0; k + 1 < vp.size(); ++k) {
    int e = edge_between(vp[k], vp[k + 1]);
    bool fwd = edges_[e].u == vp[k];
    out.push_back({e, fwd ? Q(0) : Q(1), fwd ? Q(1) : Q(0)});
  }
  if (!q.is_vertex()) out.push_back({q.edge, edges_[q.edge].u == bv ? Q(0) : Q(1), q.t});
  return out;
}

Point MetricComplex::point_along(const std::vector<Piece>& r, const Q& s) const {
  if (r.empty()) throw std::invalid_argument("point_along: empty route");
  Q left = s;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Piece& pc = r[i];
    Q len = absq(pc.to - pc.from) * edges_[pc.edge].len;
    if (left <= len || i + 1 == r.size()) {
      if (left > len) left = len;
      Q frac = left / edges_[pc.edge].len;
      Q off = pc.to > pc.from ? pc.from + frac : pc.from - frac;
      return point(pc.edge, off);
    }
    left -= len;
  }
  return Point{};  // unreachable
}

Point MetricComplex::geodesic_point(const Point& p, const Point& q, const Q& t) const {
  check(p);
  check(q);
  if (t < Q(0) || t > Q(1)) throw std::invalid_argument("geodesic_point: t outside [0,1]");
  if (p == q || t == Q(0)) return p;
  if (t == Q(1)) return q;
  Q d = distance(p, q);
  auto sys = systole();
  if (sys && !(d * Q(2) < *sys))
    throw AmbiguousGeodesic("geodesic_point: endpoints not within half the systole");
  return point_along(route(p, q), t * d);
}

std::optional<Q> MetricComplex::systole() const {
  std::call_once(cache_->sys_once, [this] { cache_->sys = detail::compute_systole(*this); });
  return cache_->sys;
}

Q MetricComplex::walk_length(const std::vector<int>& walk) const {
  Q s(0);
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    int e = edge_between(walk[i], walk[i + 1]);
    if (e < 0) throw std::invalid_argument("walk_length: not an edge");
    s += edges_[e].len;
  }
  return s;
}

Q MetricComplex::diameter() const {
  std::call_once(cache_->diam_once, [this] {
    Q best(0);
    for (int a = 0; a < nv_; ++a)
      for (int b = 0; b < nv_; ++b) best = qmax(best, vdist(a, b));
    int m = num_edges();
    for (int e = 0; e < m; ++e) {
      const Edge& E = edges_[e];
      best = qmax(best, qmin(E.len, (vdist(E.u, E.v) + E.len) / Q(2)));
      for (int f = 0; f < m; ++f) {
        if (f == e) continue;
        const Edge& F = edges_[f];
        // farthest point of f from p_s is (A(s)+B(s)+|f|)/2; A+B is concave in s
        auto g = [&](const Q& s) {
          Q A = qmin(s * E.len + vdist(E.u, F.u), (Q(1) - s) * E.len + vdist(E.v, F.u));
          Q B = qmin(s * E.len + vdist(E.u, F.v), (Q(1) - s) * E.len + vdist(E.v, F.v));
          return (A + B + F.len) / Q(2);
        };
        Q cands[4] = {Q(0), Q(1), (E.len + vdist(E.v, F.u) - vdist(E.u, F.u)) / (Q(2) * E.len),
                      (E.len + vdist(E.v, F.v) - vdist(E.u, F.v)) / (Q(2) * E.len)};
        for (const Q& s : cands)
          if (s >= Q(0) && s <= Q(1)) best = qmax(best, g(s));
      }
    }
    cache_->diam = best;
  });
  return cache_->diam;
}

// ---------------------------------------------------------------------------

Subdivision subdivide(const MetricComplex& X, const Q& max_len) {
  if (!(max_len > Q(0))) throw std::invalid_argument("subdivide: max length must be positive");
  int n = X.num_vertices(), m = X.num_edges();
  auto pieces_for = [&](const Q& len) {
    Q r = len / max_len;
    std::int64_t k = r.num() / r.den();
    if (Q(k) < r) ++k;
    return int(std::max<std::int64_t>(1, k));
  };
  std::vector<int> k(m);
  int kmax = 1;
  for (int e = 0; e < m; ++e) kmax = std::max(kmax, k[e] = pieces_for(X.edge(e).len));
  if (!X.triangles().empty()) std::fill(k.begin(), k.end(), kmax);

  Subdivision S;
  for (int v = 0; v < n; ++v) S.vertex_origin.push_back(Point::at(v));
  // interior vertices of old edge e, index j=1..k-1 at offset j/k from e.u
  std::vector<std::vector<int>> inner(m);
  for (int e = 0; e < m; ++e)
    for (int j = 1; j < k[e]; ++j) {
      inner[e].push_back(int(S.vertex_origin.size()));
      S.vertex_origin.push_back(X.point(e, Q(j, k[e])));
    }
  auto edge_vertex = [&](int e, int j) {  // j in 0..k
    if (j == 0) return X.edge(e).u;
    if (j == k[e]) return X.edge(e).v;
    return inner[e][j - 1];
  };
  std::vector<Edge> edges;
  std::map<std::pair<int, int>, int> seen;
  auto add_edge = [&](int a, int b, const Q& len, Piece origin) {
    auto key = std::minmax(a, b);
    if (seen.count({key.first, key.second})) return;
    seen[{key.first, key.second}] = int(edges.size());
    edges.push_back({a, b, len});
    S.edge_origin.push_back(origin);
  };
  for (int e = 0; e < m; ++e)
    for (int j = 0; j < k[e]; ++j)
      add_edge(edge_vertex(e, j), edge_vertex(e, j + 1), X.edge(e).len / Q(k[e]),
               {e, Q(j, k[e]), Q(j + 1, k[e])});

  std::vector<std::array<int, 3>> tris;
  int K = kmax;
  for (std::size_t ti = 0; ti < X.triangles().size(); ++ti) {
    auto T = X.triangles()[ti];
    // side lengths |AB|, |BC|, |AC|
    int eab = X.edge_between(T[0], T[1]), ebc = X.edge_between(T[1], T[2]),
        eac = X.edge_between(T[0], T[2]);
    // vertex at barycentric (i,j,l) with i+j+l=K, weights on A,B,C
    std::map<std::array<int, 2>, int> grid;
    auto on_side = [&](int e, int from, int steps) {
      // point at `steps`/K from vertex `from` along edge e
      return X.edge(e).u == from ? edge_vertex(e, steps) : edge_vertex(e, K - steps);
    };
    auto vid = [&](int i, int j) {
      int l = K - i - j;
      auto it = grid.find({i, j});
      if (it != grid.end()) return it->second;
      int id;
      if (i == K) id = T[0];
      else if (j == K) id = T[1];
      else if (l == K) id = T[2];
      else if (l == 0) id = on_side(eab, T[0], j);
      else if (i == 0) id = on_side(ebc, T[1], l);
      else if (j == 0) id = on_side(eac, T[0], l);
      else {
        id = int(S.vertex_origin.size());
        S.vertex_origin.push_back(Point{-2, int(ti), Q(0)});  // face interior
      }
      grid[{i, j}] = id;
      return id;
    };
    auto side_len = [&](int i1, int j1, int i2, int j2) {
      int di = i2 - i1, dj = j2 - j1;
      int e = (di != 0 && dj != 0) ? eab : (di != 0 ? eac : ebc);
      return X.edge(e).len / Q(K);
    };
    auto tri = [&](std::array<std::array<int, 2>, 3> c) {
      std::array<int, 3> ids;
      for (int s = 0; s < 3; ++s) ids[s] = vid(c[s][0], c[s][1]);
      for (int s = 0; s < 3; ++s) {
        auto& p = c[s];
        auto& q = c[(s + 1) % 3];
        add_edge(ids[s], ids[(s + 1) % 3], side_len(p[0], p[1], q[0], q[1]), Piece{-1, Q(0), Q(0)});
      }
      tris.push_back(ids);
    };
    for (int i = 0; i < K; ++i)
      for (int j = 0; i + j < K; ++j) {
        tri({{{i + 1, j}, {i, j + 1}, {i, j}}});
        if (i + j + 2 <= K) tri({{{i + 1, j}, {i + 1, j + 1}, {i, j + 1}}});
      }
  }
  S.complex = MetricComplex(int(S.vertex_origin.size()), std::move(edges), std::move(tris),
                            X.basepoint());
  return S;
}

MetricComplex make_circle(int k, const Q& circumference) {
  if (k < 3) throw std::invalid_argument("make_circle: need at least 3 edges");
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k, circumference / Q(k)});
  return MetricComplex(k, std::move(edges), {}, 0);
}

MetricComplex wedge_sum(const std::vector<MetricComplex>& pieces,
                        std::vector<std::vector<int>>* piece_maps) {
  int n = 1;
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> tris;
  std::vector<std::vector<int>> maps;
  for (const auto& P : pieces) {
    std::vector<int> vm(P.num_vertices());
    for (int v = 0; v < P.num_vertices(); ++v) vm[v] = v == P.basepoint() ? 0 : n++;
    for (const Edge& E : P.edges()) edges.push_back({vm[E.u], vm[E.v], E.len});
    for (auto t : P.triangles()) tris.push_back({vm[t[0]], vm[t[1]], vm[t[2]]});
    maps.push_back(std::move(vm));
  }
  if (piece_maps) *piece_maps = maps;
  return MetricComplex(n, std::move(edges), std::move(tris), 0);
}

// ---------------------------------------------------------------------------

AnalyticSpace AnalyticSpace::punctured_plane(APoint base) {
  AnalyticSpace s;
  s.model = Model::PuncturedPlane;
  s.base = base;
  s.check(base);
  return s;
}

AnalyticSpace AnalyticSpace::cylinder(double circumference, APoint base) {
  if (!(circumference > 0)) throw std::invalid_argument("cylinder: circumference must be > 0");
  AnalyticSpace s;
  s.model = Model::Cylinder;
  s.circumference = circumference;
  s.base = base;
  return s;
}

void AnalyticSpace::check(const APoint& p) const {
  if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw InvalidPoint("non-finite coordinates");
  if (model == Model::PuncturedPlane && p == puncture) throw InvalidPoint("point is the puncture");
}

namespace {
double arc_delta(double a, double b, double L) {
  double d = std::fmod(b - a, L);
  if (d < 0) d += L;
  return d > L / 2 ? d - L : d;  // signed shorter way
}
}  // namespace

double AnalyticSpace::distance(const APoint& p, const APoint& q) const {
  if (model == Model::PuncturedPlane) return std::hypot(p[0] - q[0], p[1] - q[1]);
  return std::hypot(q[0] - p[0], arc_delta(p[1], q[1], circumference));
}

APoint AnalyticSpace::geodesic_point(const APoint& p, const APoint& q, double t) const {
  check(p);
  check(q);
  if (model == Model::PuncturedPlane) {
    // the segment must miss the puncture
    double dx = q[0] - p[0], dy = q[1] - p[1];
    double L2 = dx * dx + dy * dy;
    if (L2 > 0) {
      double s = ((puncture[0] - p[0]) * dx + (puncture[1] - p[1]) * dy) / L2;
      s = std::clamp(s, 0.0, 1.0);
      double cx = p[0] + s * dx - puncture[0], cy = p[1] + s * dy - puncture[1];
      if (std::hypot(cx, cy) < 1e-12) throw AmbiguousGeodesic("segment hits the puncture");
    }
    return {p[0] + t * dx, p[1] + t * dy};
  }
  double da = arc_delta(p[1], q[1], circumference);
  if (std::abs(std::abs(da) - circumference / 2) < 1e-12 * circumference)
    throw AmbiguousGeodesic("antipodal points on the cylinder circle");
  double s = std::fmod(p[1] + t * da, circumference);
  if (s < 0) s += circumference;
  return {p[0] + t * (q[0] - p[0]), s};
}

}  // namespace pimet
