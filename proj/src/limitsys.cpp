#include "pimet/limitsys.hpp"

#include <algorithm>

namespace pimet {

InverseSystem::InverseSystem(std::vector<MetricComplex> levels, std::vector<std::vector<int>> bond,
                             std::vector<std::vector<int>> sect) {
  int J = int(levels.size());
  if (J < 1) throw std::invalid_argument("system: no levels");
  if (int(bond.size()) != J - 1 || int(sect.size()) != J - 1)
    throw std::invalid_argument("system: need J-1 bondings and sections");
  for (auto& X : levels) lv_.push_back(std::make_shared<const MetricComplex>(std::move(X)));
  for (int j = 0; j < J; ++j) {
    pres_.push_back(presentation(*lv_[j]));
    Q diam = lv_[j]->diameter();
    scale_.push_back(diam > Q(1) ? Q(1) / diam : Q(1));
  }
  for (int j = 0; j + 1 < J; ++j) {
    bond_.emplace_back(*lv_[j + 1], *lv_[j], std::move(bond[j]));
    sect_.emplace_back(*lv_[j], *lv_[j + 1], std::move(sect[j]));
    const auto& r = bond_.back();
    const auto& s = sect_.back();
    if (r.vmap[lv_[j + 1]->basepoint()] != lv_[j]->basepoint() ||
        s.vmap[lv_[j]->basepoint()] != lv_[j + 1]->basepoint())
      throw std::invalid_argument("system: maps do not preserve basepoints");
    for (int v = 0; v < lv_[j]->num_vertices(); ++v)
      if (r.vmap[s.vmap[v]] != v) throw std::invalid_argument("system: bonding is not a retraction");
  }
  // composites, built downwards from the top
  proj_.resize(J);
  emb_.resize(J);
  std::vector<int> id(top().num_vertices());
  for (std::size_t v = 0; v < id.size(); ++v) id[v] = int(v);
  proj_[J - 1] = SimplicialMap(top(), top(), id);
  emb_[J - 1] = proj_[J - 1];
  for (int k = J - 1; k >= 1; --k) {
    proj_[k - 1] = compose(bond_[k - 1], proj_[k]);
    emb_[k - 1] = compose(emb_[k], sect_[k - 1]);
  }
  for (int k = 1; k <= J; ++k) {
    proj_hom_.push_back(induced_hom(proj_[k - 1], pres_.back(), pres_[k - 1]));
    emb_hom_.push_back(induced_hom(emb_[k - 1], pres_[k - 1], pres_.back()));
  }
  const MetricComplex& T = top();
  weight_.assign(T.num_edges(), Q(0));
  for (int e = 0; e < T.num_edges(); ++e) {
    const Edge& E = T.edge(e);
    for (int k = 1; k <= J; ++k) {
      int a = proj_[k - 1].vmap[E.u], b = proj_[k - 1].vmap[E.v];
      if (a == b) continue;
      const MetricComplex& L = level(k);
      weight_[e] += scale_[k - 1] * L.edge(L.edge_between(a, b)).len / E.len * pow2_inv(k);
    }
  }
}

LimitDistance limit_distance(const InverseSystem& S, const Point& x, const Point& y) {
  LimitDistance d{Q(0), Q(0)};
  if (x == y) return d;
  d.finite = LimitMetric{S}.dist(x, y);
  d.tail = pow2_inv(S.depth());
  return d;
}

Q LimitMetric::dist(const Point& p, const Point& q) const {
  if (p == q) return Q(0);
  Q s(0);
  for (int k = S.depth(); k >= 1; --k) {
    Point a = S.project(k).apply(p), b = S.project(k).apply(q);
    if (a == b) break;  // projections factor through each other, so lower levels agree too
    s += S.scale(k) * S.level(k).distance(a, b) * pow2_inv(k);
  }
  return s;
}

Q LimitMetric::seg_mesh(const Point& p, const Point& q) const {
  const MetricComplex& T = S.top();
  Q s(0);
  for (const Piece& pc : T.route(p, q)) {
    Q frac = pc.to > pc.from ? pc.to - pc.from : pc.from - pc.to;
    s += frac * T.edge(pc.edge).len * S.edge_weight()[pc.edge];
  }
  return s;
}

MetricComplex weighted_model(const InverseSystem& S) {
  const MetricComplex& T = S.top();
  std::vector<Edge> edges = T.edges();
  for (int e = 0; e < T.num_edges(); ++e) edges[e].len = edges[e].len * S.edge_weight()[e];
  MetricComplex W(T.num_vertices(), std::move(edges), T.triangles(), T.basepoint());
  W.coords = T.coords;
  W.names = T.names;
  return W;
}

InverseSystem shrinking_wedge(const std::vector<MetricComplex>& pieces) {
  if (pieces.empty()) throw std::invalid_argument("shrinking_wedge: no pieces");
  std::vector<MetricComplex> levels;
  for (std::size_t k = 1; k <= pieces.size(); ++k)
    levels.push_back(wedge_sum(std::vector<MetricComplex>(pieces.begin(), pieces.begin() + k)));
  // wedge_sum numbers vertices piece by piece, so X_k is a prefix of X_{k+1}
  std::vector<std::vector<int>> bond, sect;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    int n = levels[k].num_vertices(), N = levels[k + 1].num_vertices();
    std::vector<int> r(N), s(n);
    for (int v = 0; v < N; ++v) r[v] = v < n ? v : 0;
    for (int v = 0; v < n; ++v) s[v] = v;
    bond.push_back(r);
    sect.push_back(s);
  }
  return InverseSystem(std::move(levels), std::move(bond), std::move(sect));
}

Thread make_thread(const InverseSystem& S, const Word& top_word) {
  Thread t;
  for (int k = 1; k <= S.depth(); ++k) t.words.push_back(S.project_hom(k).apply(top_word));
  // stabilization: w_j equals the section image of w_k for every j >= k
  for (int k = 1; k <= S.depth() && t.stabilization < 0; ++k) {
    bool ok = true;
    Word w = t.words[k - 1];
    for (int j = k; j < S.depth() && ok; ++j) {
      Homomorphism s = induced_hom(S.section(j), S.pres(j), S.pres(j + 1));
      w = s.apply(w);
      if (same_class(w, t.words[j], S.pres(j + 1)) != Tri::True) ok = false;
    }
    if (ok) t.stabilization = k;
  }
  return t;
}

void check_thread(const InverseSystem& S, const Thread& t) {
  if (int(t.words.size()) != S.depth()) throw std::invalid_argument("thread: wrong length");
  for (int j = 1; j < S.depth(); ++j) {
    Homomorphism r = induced_hom(S.bonding(j), S.pres(j + 1), S.pres(j));
    if (same_class(r.apply(t.words[j]), t.words[j - 1], S.pres(j)) == Tri::False)
      throw std::invalid_argument("thread: incompatible at level " + std::to_string(j));
  }
}

PsiReport psi(const InverseSystem& S, const Thread& t) {
  check_thread(S, t);
  PsiReport r;
  for (int k = 1; k <= S.depth(); ++k) {
    Tri v = is_trivial(t.words[k - 1], S.pres(k));
    r.trivial.push_back(v);
    if (v != Tri::True) r.shape_trivial = false;
    if (v == Tri::False && r.first_nontrivial < 0) r.first_nontrivial = k;
  }
  return r;
}

Word sample_kernel(const InverseSystem& S, int k, std::mt19937_64& rng, int max_len) {
  const Presentation& P = S.pres(S.depth());
  if (P.rank == 0 || max_len < 1) return {};
  std::vector<int> ker;
  for (int g = 1; g <= P.rank; ++g)
    if (S.project_hom(k).images[g].empty()) ker.push_back(g);
  std::uniform_int_distribution<int> len(1, max_len), sign(0, 1);
  Word w;
  int n = len(rng);
  if (!ker.empty() && sign(rng)) {
    std::uniform_int_distribution<std::size_t> pick(0, ker.size() - 1);
    for (int i = 0; i < n; ++i) {
      int g = ker[pick(rng)];
      w.push_back(sign(rng) ? g : -g);
    }
    return reduce(w);
  }
  // w . t_k(r_k(w))^-1 lies in the kernel for any w
  std::uniform_int_distribution<int> gen(1, P.rank);
  for (int i = 0; i < n; ++i) {
    int g = gen(rng);
    w.push_back(sign(rng) ? g : -g);
  }
  w = reduce(w);
  return w * inverse(S.embed_hom(k).apply(S.project_hom(k).apply(w)));
}

}  // namespace pimet
