#include "pimet/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>

namespace pimet {

Word reduce(const Word& w) {
  Word st;
  st.reserve(w.size());
  for (int x : w) {
    if (!st.empty() && st.back() == -x) st.pop_back();
    else st.push_back(x);
  }
  return st;
}

Word inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (int& x : r) x = -x;
  return r;
}

Word operator*(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return reduce(w);
}

Word cyclic_core(const Word& w, Word* prefix) {
  Word r = reduce(w);
  std::size_t i = 0, j = r.size();
  while (j >= i + 2 && r[i] == -r[j - 1]) { ++i; --j; }
  if (prefix) prefix->assign(r.begin(), r.begin() + i);
  return Word(r.begin() + i, r.begin() + j);
}

std::string to_string(const Word& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + "]";
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    default: return "unknown";
  }
}

bool Presentation::valid(const Word& w) const {
  for (int x : w)
    if (x == 0 || std::abs(x) > rank) return false;
  return true;
}

Presentation presentation(const MetricComplex& X) {
  Presentation P;
  int n = X.num_vertices();
  P.basepoint = X.basepoint();
  P.parent_edge.assign(n, -1);
  std::vector<char> seen(n, 0);
  std::deque<int> q{P.basepoint};
  seen[P.basepoint] = 1;
  std::vector<char> tree(X.num_edges(), 0);
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (auto [y, e] : X.adj(x))
      if (!seen[y]) {
        seen[y] = 1;
        P.parent_edge[y] = e;
        tree[e] = 1;
        q.push_back(y);
      }
  }
  if (std::count(seen.begin(), seen.end(), 1) != n)
    throw std::invalid_argument("presentation: complex is disconnected");
  P.gen_of_edge.assign(X.num_edges(), 0);
  P.edge_of_gen.push_back(-1);
  for (int e = 0; e < X.num_edges(); ++e)
    if (!tree[e]) {
      P.gen_of_edge[e] = ++P.rank;
      P.edge_of_gen.push_back(e);
    }
  for (auto& t : X.triangles()) {
    Word r = cyclic_core(walk_word(X, P, {t[0], t[1], t[2], t[0]}));
    if (!r.empty()) P.relators.push_back(r);
  }
  if (!P.relators.empty())
    P.tietze = std::make_shared<const TietzeState>(tietze_simplify(P.rank, P.relators));
  return P;
}

namespace {
bool cyclic_match(const Word& a, const Word& r) {
  if (a.size() != r.size() || a.empty()) return false;
  for (std::size_t s = 0; s < r.size(); ++s)
    if (std::equal(a.begin(), a.end() - s, r.begin() + s) &&
        std::equal(a.end() - s, a.end(), r.begin()))
      return true;
  return false;
}
}  // namespace

Tri is_trivial(const Word& w, const Presentation& P) {
  Word r = reduce(w);
  if (r.empty()) return Tri::True;
  if (P.free()) return Tri::False;
  const TietzeState& T = *P.tietze;
  if (T.expansion_overflow) return Tri::Unknown;
  Word s = T.rewrite(r);
  if (s.empty()) return Tri::True;
  if (T.remaining.empty()) return Tri::False;
  Word core = cyclic_core(s);
  for (const Word& rel : T.remaining)
    if (cyclic_match(core, rel) || cyclic_match(core, inverse(rel))) return Tri::True;
  return Tri::Unknown;
}

std::vector<int> tree_walk(const Presentation& P, const MetricComplex& X, int v) {
  std::vector<int> w{v};
  while (v != P.basepoint) {
    const Edge& E = X.edge(P.parent_edge[v]);
    v = E.u == v ? E.v : E.u;
    w.push_back(v);
  }
  std::reverse(w.begin(), w.end());
  return w;
}

std::vector<int> cancel_backtracks(const std::vector<int>& walk) {
  std::vector<int> st;
  for (int x : walk) {
    if (!st.empty() && st.back() == x) continue;
    if (st.size() >= 2 && st[st.size() - 2] == x) st.pop_back();
    else st.push_back(x);
  }
  return st;
}

std::vector<int> word_walk(const MetricComplex& X, const Presentation& P, const Word& w) {
  std::vector<int> walk{P.basepoint};
  for (int x : w) {
    if (x == 0 || std::abs(x) > P.rank) throw std::out_of_range("word_walk: bad generator");
    const Edge& E = X.edge(P.edge_of_gen[std::abs(x)]);
    int a = x > 0 ? E.u : E.v, b = x > 0 ? E.v : E.u;
    auto ta = tree_walk(P, X, a), tb = tree_walk(P, X, b);
    walk.insert(walk.end(), ta.begin() + 1, ta.end());
    walk.insert(walk.end(), tb.rbegin(), tb.rend());
  }
  return cancel_backtracks(walk);
}

Word walk_word(const MetricComplex& X, const Presentation& P, const std::vector<int>& walk) {
  Word w;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    if (walk[i] == walk[i + 1]) continue;
    int e = X.edge_between(walk[i], walk[i + 1]);
    if (e < 0) throw std::invalid_argument("walk_word: consecutive vertices are not adjacent");
    int g = P.gen_of_edge[e];
    if (g) w.push_back(X.edge(e).u == walk[i] ? g : -g);
  }
  return reduce(w);
}

Word pieces_word(const MetricComplex& X, const Presentation& P, int start,
                 const std::vector<Piece>& pieces) {
  std::vector<int> walk{start};
  for (const Piece& pc : pieces) {
    const Edge& E = X.edge(pc.edge);
    int from = pc.from == Q(1) ? E.v : E.u;
    int to = pc.to == Q(1) ? E.v : E.u;
    if (from == to) continue;
    if (walk.back() != from) throw std::logic_error("pieces_word: broken chain");
    walk.push_back(to);
  }
  return walk_word(X, P, walk);
}

Word refine_word(const MetricComplex& X, const Presentation& PX, const Subdivision& S,
                 const Presentation& PS, const Word& w) {
  // vertices of X keep their ids in S; walk each X edge through its pieces
  std::vector<std::vector<int>> inner(X.num_edges());
  for (int e = 0; e < S.complex.num_edges(); ++e) {
    const Piece& o = S.edge_origin[e];
    if (o.edge >= 0 && o.from == Q(0)) {
      // chain of pieces along o.edge starting at its u end
      int cur = X.edge(o.edge).u;
      Q at(0);
      std::vector<int> chain{cur};
      while (at < Q(1)) {
        int nxt = -1;
        for (auto [y, f] : S.complex.adj(cur)) {
          const Piece& q = S.edge_origin[f];
          if (q.edge == o.edge && q.from == at) { nxt = y; at = q.to; break; }
        }
        if (nxt < 0) throw std::logic_error("refine_word: broken edge chain");
        chain.push_back(cur = nxt);
      }
      inner[o.edge] = chain;
    }
  }
  auto walk = word_walk(X, PX, w);
  std::vector<int> fine{walk.front()};
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    int e = X.edge_between(walk[i], walk[i + 1]);
    const auto& ch = inner[e];
    if (X.edge(e).u == walk[i]) fine.insert(fine.end(), ch.begin() + 1, ch.end());
    else fine.insert(fine.end(), ch.rbegin() + 1, ch.rend());
  }
  return walk_word(S.complex, PS, fine);
}

Word coarsen_walk(const MetricComplex& X, const Presentation& PX, const Subdivision& S,
                  const std::vector<int>& walk) {
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    if (walk[i] == walk[i + 1]) continue;
    int e = S.complex.edge_between(walk[i], walk[i + 1]);
    if (e < 0) throw std::invalid_argument("coarsen_walk: not a walk");
    Piece o = S.edge_origin[e];
    if (o.edge < 0) throw std::invalid_argument("coarsen_walk: walk crosses a face interior");
    if (S.complex.edge(e).u != walk[i]) std::swap(o.from, o.to);
    pieces.push_back(o);
  }
  const Point& s0 = S.vertex_origin[walk.front()];
  if (!s0.is_vertex()) throw std::invalid_argument("coarsen_walk: walk must start at a vertex");
  return pieces_word(X, PX, s0.vertex, pieces);
}

// ---------------------------------------------------------------------------

SimplicialMap::SimplicialMap(const MetricComplex& d, const MetricComplex& c, std::vector<int> vm)
    : dom(&d), cod(&c), vmap(std::move(vm)) {
  if (int(vmap.size()) != d.num_vertices())
    throw std::invalid_argument("simplicial map: wrong number of vertex images");
  for (int y : vmap)
    if (y < 0 || y >= c.num_vertices()) throw std::invalid_argument("simplicial map: image out of range");
  for (const Edge& E : d.edges()) {
    int a = vmap[E.u], b = vmap[E.v];
    if (a != b && c.edge_between(a, b) < 0)
      throw std::invalid_argument("simplicial map: edge image is not a simplex");
  }
  if (d.triangles().empty()) return;
  std::set<std::array<int, 3>> tris;
  for (auto t : c.triangles()) {
    std::sort(t.begin(), t.end());
    tris.insert(t);
  }
  for (auto t : d.triangles()) {
    std::array<int, 3> im{vmap[t[0]], vmap[t[1]], vmap[t[2]]};
    std::sort(im.begin(), im.end());
    bool distinct = im[0] != im[1] && im[1] != im[2];
    if (distinct && !tris.count(im))
      throw std::invalid_argument("simplicial map: triangle image is not a simplex");
  }
}

Point SimplicialMap::apply(const Point& p) const {
  if (p.is_vertex()) return Point::at(vmap[p.vertex]);
  const Edge& E = dom->edge(p.edge);
  int a = vmap[E.u], b = vmap[E.v];
  if (a == b) return Point::at(a);
  int e = cod->edge_between(a, b);
  return cod->point(e, cod->edge(e).u == a ? p.t : Q(1) - p.t);
}

DiscreteLoop SimplicialMap::apply(const DiscreteLoop& a) const {
  DiscreteLoop r{cod, {}};
  r.s.reserve(a.s.size());
  for (const Point& p : a.s) r.s.push_back(apply(p));
  return r;
}

Q SimplicialMap::lipschitz() const {
  Q best(0);
  for (const Edge& E : dom->edges()) {
    int a = vmap[E.u], b = vmap[E.v];
    if (a == b) continue;
    best = qmax(best, cod->edge(cod->edge_between(a, b)).len / E.len);
  }
  return best;
}

SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f) {
  if (f.cod != g.dom) throw std::invalid_argument("compose: maps do not chain");
  std::vector<int> vm(f.vmap.size());
  for (std::size_t i = 0; i < vm.size(); ++i) vm[i] = g.vmap[f.vmap[i]];
  return SimplicialMap(*f.dom, *g.cod, std::move(vm));
}

Word Homomorphism::apply(const Word& w) const {
  Word out;
  for (int x : w) {
    const Word& im = images.at(std::abs(x));
    if (x > 0) out.insert(out.end(), im.begin(), im.end());
    else { Word inv = inverse(im); out.insert(out.end(), inv.begin(), inv.end()); }
  }
  return reduce(out);
}

Homomorphism induced_hom(const SimplicialMap& f, const Presentation& dom, const Presentation& cod) {
  if (f.vmap[dom.basepoint] != cod.basepoint)
    throw std::invalid_argument("induced_hom: map does not preserve basepoints");
  Homomorphism h;
  h.images.assign(dom.rank + 1, {});
  for (int g = 1; g <= dom.rank; ++g) {
    auto walk = word_walk(*f.dom, dom, {g});
    std::vector<int> im;
    for (int v : walk) im.push_back(f.vmap[v]);
    h.images[g] = walk_word(*f.cod, cod, im);
  }
  for (const Word& r : dom.relators) {
    Tri t = is_trivial(h.apply(r), cod);
    if (t == Tri::False) throw std::logic_error("induced_hom: relator image is nontrivial");
    if (t == Tri::Unknown) ++h.unverified_relators;
  }
  return h;
}

Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
  Homomorphism h;
  h.images.assign(f.images.size(), {});
  for (std::size_t i = 1; i < f.images.size(); ++i) h.images[i] = g.apply(f.images[i]);
  h.unverified_relators = f.unverified_relators + g.unverified_relators;
  return h;
}

// ---------------------------------------------------------------------------

Word loop_to_word(const MetricComplex& X, const Presentation& P, const DiscreteLoop& a) {
  if (a.X != &X) throw std::invalid_argument("loop_to_word: loop lives on another space");
  Point base = Point::at(P.basepoint);
  if (a.s.empty() || !(a.s.front() == base) || !(a.s.back() == base))
    throw std::invalid_argument("loop_to_word: loop is not based at the basepoint");
  auto sys = X.systole();
  std::vector<Piece> pieces;
  for (int i = 0; i < a.N(); ++i) {
    if (a.s[i] == a.s[i + 1]) continue;
    if (sys && !(X.distance(a.s[i], a.s[i + 1]) * Q(2) < *sys))
      throw MarginViolation("loop_to_word: mesh is not below half the systole");
    auto r = X.route(a.s[i], a.s[i + 1]);
    pieces.insert(pieces.end(), r.begin(), r.end());
  }
  return pieces_word(X, P, P.basepoint, pieces);
}

DiscreteLoop walk_to_loop(const MetricComplex& X, const std::vector<int>& walk, int grid) {
  if (walk.empty()) throw std::invalid_argument("walk_to_loop: empty walk");
  Point start = Point::at(walk.front());
  if (walk.size() == 1) return DiscreteLoop{&X, {start, start}};
  std::vector<int> eid;
  std::vector<Q> cum{Q(0)};
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    int e = X.edge_between(walk[i], walk[i + 1]);
    if (e < 0) throw std::invalid_argument("walk_to_loop: not a walk");
    eid.push_back(e);
    cum.push_back(cum.back() + X.edge(e).len);
  }
  Q L = cum.back();
  Q target = L * Q(grid);
  std::int64_t need = (target.num() + target.den() - 1) / target.den();
  int N = 1;
  while (N < need) N *= 2;
  auto sys = X.systole();
  while (sys && !(L / Q(N) * Q(2) < *sys)) N *= 2;
  DiscreteLoop out{&X, {}};
  out.s.reserve(N + 1);
  std::size_t k = 0;
  for (int i = 0; i <= N; ++i) {
    Q s = L * Q(i, N);
    while (k + 1 < eid.size() && cum[k + 1] < s) ++k;
    const Edge& E = X.edge(eid[k]);
    Q t = (s - cum[k]) / E.len;
    out.s.push_back(X.point(eid[k], E.u == walk[k] ? t : Q(1) - t));
  }
  return out;
}

DiscreteLoop word_to_loop(const MetricComplex& X, const Presentation& P, const Word& w, int grid) {
  return walk_to_loop(X, word_walk(X, P, reduce(w)), grid);
}

}  // namespace pimet
