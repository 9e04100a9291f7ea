#include "pimet/rho.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pimet {

RhoContext RhoContext::of(const MetricComplex& X, int grid, int budget) {
  RhoContext c;
  c.X = &X;
  c.P = presentation(X);
  c.grid = grid;
  c.budget = budget;
  return c;
}

RhoContext RhoContext::of(const InverseSystem& S, int grid, int budget) {
  RhoContext c;
  c.X = &S.top();
  c.S = &S;
  c.P = S.pres(S.depth());
  c.grid = grid;
  c.budget = budget;
  for (int k = 1; k < S.depth(); ++k) c.pushforward.push_back(compose(S.embed(k), S.project(k)));
  return c;
}

Q RhoContext::dist(const Point& p, const Point& q) const {
  if (S) return LimitMetric{*S}.dist(p, q);
  return X->distance(p, q);
}

MuInterval<Q> RhoContext::mu(const DiscreteLoop& a, const DiscreteLoop& b, std::optional<Q> prune) const {
  if (S) return uniform_distance(a, b, LimitMetric{*S}, prune);
  return uniform_distance(a, b, PlainMetric<MetricComplex>{*X}, prune);
}

DiscreteLoop RhoContext::rep(const Word& w) const { return word_to_loop(*X, P, w, grid); }

namespace {

// closed reduced walk = gamma . C . gamma^-1 with C cyclically reduced at gamma.back()
void split_core(std::vector<int> walk, std::vector<int>& gamma, std::vector<int>& core) {
  gamma.assign(1, walk.front());
  std::size_t i = 0, j = walk.size() - 1;
  while (j >= i + 2 && walk[i + 1] == walk[j - 1]) {
    ++i;
    --j;
    gamma.push_back(walk[i]);
  }
  core.assign(walk.begin() + i, walk.begin() + j + 1);
}

struct Search {
  const RhoContext& c;
  Word a, b;
  std::optional<RhoUpper> best;

  bool class_ok(const DiscreteLoop& l, const Word& w) const {
    try {
      return same_class(loop_to_word(*c.X, c.P, l), w, c.P) != Tri::False;
    } catch (const MarginViolation&) {
      return false;
    }
  }

  void consider(const DiscreteLoop& alpha, const DiscreteLoop& beta, const char* kind) {
    std::optional<Q> prune;
    if (best) prune = best->value;
    auto m = c.mu(alpha, beta, prune);
    if (m.pruned || (best && !(m.upper < best->value))) return;
    if (!class_ok(alpha, a) || !class_ok(beta, b)) return;
    best = RhoUpper{m.upper, UpperWitness{alpha, beta, m, kind}};
  }

  // pairs (alpha, beta) with alpha in d and beta trivial
  std::vector<std::pair<DiscreteLoop, DiscreteLoop>> toward_e(const Word& d) const {
    const MetricComplex& X = *c.X;
    std::vector<std::pair<DiscreteLoop, DiscreteLoop>> out;
    Point base = Point::at(X.basepoint());
    DiscreteLoop L = c.rep(d);
    out.push_back({L, constant_loop(X, base)});
    if (c.S)
      for (int k = 1; k < c.S->depth(); ++k)
        if (c.S->project_hom(k).apply(d).empty()) {
          out.push_back({L, c.pushforward[k - 1].apply(L)});
          break;  // the lowest such level has the smallest tail
        }
    // conjugated core, based at the vertices of the core closest to all of it
    auto walk = cancel_backtracks(word_walk(X, c.P, reduce(d)));
    if (walk.size() < 3) return out;
    std::vector<int> gamma, core;
    split_core(walk, gamma, core);
    std::vector<int> verts(core.begin(), core.end() - 1);
    std::vector<std::pair<Q, int>> ecc;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      Q e(0);
      for (int v : verts) e = qmax(e, c.dist(Point::at(verts[i]), Point::at(v)));
      ecc.push_back({e, int(i)});
    }
    std::stable_sort(ecc.begin(), ecc.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (int r = 0; r < std::min<int>(c.rotations, int(ecc.size())); ++r) {
      int i = ecc[r].second;
      std::vector<int> g = gamma;
      g.insert(g.end(), core.begin() + 1, core.begin() + i + 1);
      std::vector<int> rot(core.begin() + i, core.end() - 1);
      rot.insert(rot.end(), core.begin(), core.begin() + i + 1);
      auto G = walk_to_loop(X, g, c.grid);
      auto A = walk_to_loop(X, rot, c.grid);
      auto E = constant_loop(X, Point::at(verts[i]));
      out.push_back({path_conjugate(G, A), path_conjugate(G, E)});
    }
    return out;
  }
};

}  // namespace

RhoUpper rho_upper(const RhoContext& c, const Word& a0, const Word& b0) {
  Search s{c, reduce(a0), reduce(b0), std::nullopt};
  const Word &a = s.a, &b = s.b;
  if (same_class(a, b, c.P) == Tri::True) {
    auto L = c.rep(a);
    return RhoUpper{Q(0), UpperWitness{L, L, c.mu(L, L), "identical"}};
  }
  DiscreteLoop La = c.rep(a), Lb = c.rep(b);
  s.consider(La, Lb, "direct");
  s.consider(reverse(c.rep(inverse(a))), reverse(c.rep(inverse(b))), "inverse");
  if (c.S)
    for (int k = 1; k < c.S->depth(); ++k) {
      const Homomorphism& pk = c.S->project_hom(k);
      Word ta = c.S->embed_hom(k).apply(pk.apply(a)), tb = c.S->embed_hom(k).apply(pk.apply(b));
      if (same_class(ta, b, c.P) == Tri::True) s.consider(La, c.pushforward[k - 1].apply(La), "pushforward");
      if (same_class(tb, a, c.P) == Tri::True) s.consider(c.pushforward[k - 1].apply(Lb), Lb, "pushforward");
    }
  // a = d1 b and a = b d2 with (d, e) witnesses moved over
  Word d1 = a * inverse(b), d2 = inverse(b) * a;
  for (auto& [x, y] : s.toward_e(d1)) s.consider(concatenate(x, Lb), concatenate(y, Lb), "right-transport");
  for (auto& [x, y] : s.toward_e(d2)) s.consider(concatenate(Lb, x), concatenate(Lb, y), "left-transport");
  // translations by generators: (ac, bc) then c^-1 appended, and the left analogue
  int tried = 0;
  for (int g = 1; g <= c.P.rank && tried < c.budget; ++g)
    for (int sg : {g, -g}) {
      if (tried >= c.budget) break;
      ++tried;
      Word cw{sg}, ci{-sg};
      auto Ci = c.rep(ci), Cw = c.rep(cw);
      s.consider(concatenate(c.rep(a * cw), Ci), concatenate(c.rep(b * cw), Ci), "right-translate");
      s.consider(concatenate(Ci, c.rep(cw * a)), concatenate(Ci, c.rep(cw * b)), "left-translate");
    }
  if (!s.best) throw std::logic_error("rho_upper: no verified witness");
  return *s.best;
}

RhoLower rho_lower(const RhoContext& c, const Word& a0, const Word& b0) {
  Word a = reduce(a0), b = reduce(b0);
  if (!c.S) {
    Tri t = same_class(a, b, c.P);
    if (t == Tri::True) return {Q(0), {0, Q(0), "same class"}};
    if (t == Tri::Unknown) return {Q(0), {-1, Q(0), "undecided"}};
    auto sys = c.X->systole();
    if (!sys) return {Q(0), {-1, Q(0), "no essential cycle"}};
    Q m = *sys / Q(2);
    return {qmax(Q(0), m - c.slack()), {0, m, "distinct classes; straightening margin"}};
  }
  const InverseSystem& S = *c.S;
  RhoLower best{Q(0), {-1, Q(0), "not separated up to depth " + std::to_string(S.depth())}};
  for (int k = 1; k <= S.depth(); ++k) {
    const Homomorphism& pk = S.project_hom(k);
    if (same_class(pk.apply(a), pk.apply(b), S.pres(k)) != Tri::False) continue;
    auto sys = S.level(k).systole();
    if (!sys) continue;
    Q m = S.scale(k) * *sys / Q(2);
    Q v = (m - c.slack()) * pow2_inv(k);
    if (v > best.value) best = {v, {k, m, "separated by the level " + std::to_string(k) + " projection"}};
  }
  return best;
}

RhoInterval rho(const RhoContext& c, const Word& a, const Word& b) {
  auto lo = rho_lower(c, a, b);
  auto up = rho_upper(c, a, b);
  return {lo.value, up.value, lo.witness, up.witness};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::In: return "in";
    case Verdict::Out: return "out";
    default: return "unknown";
  }
}

Verdict verdict(const RhoInterval& i, const Q& r) {
  if (i.upper < r) return Verdict::In;
  if (i.lower >= r) return Verdict::Out;
  return Verdict::Unknown;
}

Verdict ball_membership(const RhoContext& c, const Word& a, const Q& r) {
  if (!(r > Q(0))) throw std::invalid_argument("ball_membership: radius must be positive");
  if (reduce(a).empty()) return Verdict::In;
  // the lower bound is cheap; skip the search when it already decides
  auto lo = rho_lower(c, a, {});
  if (lo.value >= r) return Verdict::Out;
  auto up = rho_upper(c, a, {});
  return up.value < r ? Verdict::In : Verdict::Unknown;
}

namespace {

std::string show(const Triple& t) {
  return "a=" + to_string(t.a) + " b=" + to_string(t.b) + " c=" + to_string(t.c);
}

int common_grid(std::initializer_list<const DiscreteLoop*> ls) {
  int n = 1;
  for (auto* l : ls) n = std::lcm(n, l->N());
  return n;
}

}  // namespace

LemmaReport verify_lemma_chain(const RhoContext& c, const std::vector<Triple>& sample) {
  LemmaReport rep;
  rep.worst_triangle_excess = Q(0);
  auto grid_mu = [&](const DiscreteLoop& x, const DiscreteLoop& y) { return c.mu(x, y).grid_max; };
  auto word = [&](const DiscreteLoop& l) { return loop_to_word(*c.X, c.P, l); };
  for (const Triple& t : sample) {
    ++rep.triples;
    auto ab = rho_upper(c, t.a, t.b);
    auto bc = rho_upper(c, t.b, t.c);
    const auto& W = ab.witness;
    auto G = c.rep(t.c);
    int M = common_grid({&W.alpha, &W.beta, &G});
    auto al = resample(W.alpha, M), be = resample(W.beta, M), ga = resample(G, M);
    Q base = grid_mu(al, be);

    // (i) reversal
    auto ra = reverse(al), rb = reverse(be);
    if (grid_mu(ra, rb) != base || same_class(word(ra), inverse(t.a), c.P) == Tri::False ||
        same_class(word(rb), inverse(t.b), c.P) == Tri::False) {
      ++rep.reversal;
      rep.counterexamples.push_back("reversal: " + show(t));
    }
    // (ii) translation on both sides
    auto r1 = concatenate(al, ga), r2 = concatenate(be, ga);
    auto l1 = concatenate(ga, al), l2 = concatenate(ga, be);
    if (grid_mu(r1, r2) != base || grid_mu(l1, l2) != base ||
        same_class(word(r1), t.a * t.c, c.P) == Tri::False ||
        same_class(word(r2), t.b * t.c, c.P) == Tri::False ||
        same_class(word(l1), t.c * t.a, c.P) == Tri::False ||
        same_class(word(l2), t.c * t.b, c.P) == Tri::False) {
      ++rep.translation;
      rep.counterexamples.push_back("translation: " + show(t));
    }
    // (iii) max law from the (a,e) and (b,e) witnesses
    auto ae = rho_upper(c, t.a, {}).witness, be_ = rho_upper(c, t.b, {}).witness;
    int K = common_grid({&ae.alpha, &ae.beta, &be_.alpha, &be_.beta});
    auto x1 = resample(ae.alpha, K), y1 = resample(ae.beta, K);
    auto x2 = resample(be_.alpha, K), y2 = resample(be_.beta, K);
    Q m1 = grid_mu(x1, y1), m2 = grid_mu(x2, y2);
    auto X12 = concatenate(x1, x2), Y12 = concatenate(y1, y2);
    if (grid_mu(X12, Y12) != qmax(m1, m2) || same_class(word(X12), t.a * t.b, c.P) == Tri::False ||
        is_trivial(word(Y12), c.P) == Tri::False) {
      ++rep.max_law;
      rep.counterexamples.push_back("max-law: " + show(t));
    }
    // (iv) triangle inequality between certified bounds
    Q lo = rho_lower(c, t.a, t.c).value;
    Q excess = lo - ab.value - bc.value;
    if (excess > Q(0)) {
      ++rep.triangle;
      rep.worst_triangle_excess = qmax(rep.worst_triangle_excess, excess);
      rep.counterexamples.push_back("triangle: " + show(t));
    }
  }
  return rep;
}

IndependenceReport metric_independence_check(const MetricComplex& X1, const MetricComplex& X2,
                                             const std::vector<Word>& sample,
                                             const std::vector<Q>& radii, int grid, int budget) {
  if (X1.num_vertices() != X2.num_vertices() || X1.num_edges() != X2.num_edges() ||
      X1.triangles() != X2.triangles() || X1.basepoint() != X2.basepoint())
    throw std::invalid_argument("metric_independence_check: different complexes");
  IndependenceReport rep;
  for (int e = 0; e < X1.num_edges(); ++e) {
    const Edge &E1 = X1.edge(e), &E2 = X2.edge(e);
    if (E1.u != E2.u || E1.v != E2.v) throw std::invalid_argument("metric_independence_check: edge mismatch");
    if (!(E1.len > Q(0)) || !(E2.len > Q(0)))
      throw std::invalid_argument("metric_independence_check: non-positive length");
    Q r = E2.len / E1.len;
    rep.L12 = e == 0 ? r : qmax(rep.L12, r);
    rep.L21 = e == 0 ? Q(1) / r : qmax(rep.L21, Q(1) / r);
  }
  auto c1 = RhoContext::of(X1, grid, budget), c2 = RhoContext::of(X2, grid, budget);
  for (const Word& a : sample) {
    auto i1 = rho(c1, a, {}), i2 = rho(c2, a, {});
    // the metric-1 witness read in metric 2
    DiscreteLoop al = i1.upper_witness.alpha, be = i1.upper_witness.beta;
    al.X = be.X = &X2;
    auto m2 = c2.mu(al, be);
    if (!(m2.grid_max <= rep.L12 * i1.upper_witness.mu.grid_max) || !(m2.upper <= rep.L12 * i1.upper)) {
      ++rep.transport_failures;
      rep.counterexamples.push_back("transport: a=" + to_string(a));
    }
    for (const Q& r : radii) {
      rep.queries += 4;
      // v decided in one metric, w the verdict it predicts at the scaled radius in the other
      auto check = [&](Verdict v, Verdict w, const char* what) {
        if (v == Verdict::Unknown || w == Verdict::Unknown) return;
        ++rep.decided;
        if (v != w) {
          ++rep.disagreements;
          rep.counterexamples.push_back(std::string(what) + ": a=" + to_string(a) + " r=" + r.str());
        }
      };
      // rho2 <= L12 rho1 and rho1 <= L21 rho2
      Verdict v1 = verdict(i1, r), v2 = verdict(i2, r);
      Verdict w2 = verdict(i2, rep.L12 * r), w1 = verdict(i1, rep.L21 * r);
      Verdict u2 = verdict(i2, r / rep.L21), u1 = verdict(i1, r / rep.L12);
      if (v1 == Verdict::In) check(v1, w2, "in1/at L12 r");
      if (v1 == Verdict::Out) check(v1, u2, "out1/at r/L21");
      if (v2 == Verdict::In) check(v2, w1, "in2/at L21 r");
      if (v2 == Verdict::Out) check(v2, u1, "out2/at r/L12");
    }
  }
  return rep;
}

AnalyticBound punctured_plane_upper(const AnalyticSpace& Y, int n, int circle_samples) {
  if (Y.model != AnalyticSpace::Model::PuncturedPlane) throw std::invalid_argument("not a punctured plane");
  if (n < 1 || circle_samples < 4) throw std::invalid_argument("punctured_plane_upper: bad parameters");
  double r = 1.0 / n;
  APoint p{Y.puncture[0] + r, Y.puncture[1]};
  AnalyticLoop gamma{&Y, {Y.base, p}};
  if (Y.distance(Y.base, p) == 0) gamma.s = {p, p};
  AnalyticLoop alpha{&Y, {}};
  for (int i = 0; i <= circle_samples; ++i) {
    double th = 2 * std::numbers::pi * i / circle_samples;
    alpha.s.push_back(i == circle_samples ? p : APoint{Y.puncture[0] + r * std::cos(th), Y.puncture[1] + r * std::sin(th)});
  }
  AnalyticBound out;
  out.alpha = path_conjugate(gamma, alpha);
  out.beta = path_conjugate(gamma, constant_loop(Y, p));
  out.mu = uniform_distance(out.alpha, out.beta);
  out.upper = out.mu.upper;
  out.lower = 0;  // the plane model separates nothing: all classes are within 0 of e
  return out;
}

int winding_number(const AnalyticLoop& a) {
  const AnalyticSpace& Y = *a.X;
  double total = 0;
  for (int i = 0; i < a.N(); ++i) {
    double t0 = std::atan2(a.s[i][1] - Y.puncture[1], a.s[i][0] - Y.puncture[0]);
    double t1 = std::atan2(a.s[i + 1][1] - Y.puncture[1], a.s[i + 1][0] - Y.puncture[0]);
    double d = t1 - t0;
    while (d > std::numbers::pi) d -= 2 * std::numbers::pi;
    while (d <= -std::numbers::pi) d += 2 * std::numbers::pi;
    total += d;
  }
  return int(std::lround(total / (2 * std::numbers::pi)));
}

AnalyticBound cylinder_bounds(const AnalyticSpace& Z, int circle_samples) {
  if (Z.model != AnalyticSpace::Model::Cylinder) throw std::invalid_argument("not a cylinder");
  AnalyticBound out;
  out.alpha = AnalyticLoop{&Z, {}};
  for (int i = 0; i <= circle_samples; ++i)
    out.alpha.s.push_back({Z.base[0], i == circle_samples ? Z.base[1]
                                                          : Z.base[1] + Z.circumference * i / circle_samples});
  out.beta = constant_loop(Z, Z.base);
  out.mu = uniform_distance(out.alpha, out.beta);
  out.upper = out.mu.upper;
  // the projection to the circle is 1-Lipschitz; loops of different degree
  // on a circle of length C are never uniformly closer than C/2
  out.lower = Z.circumference / 2;
  return out;
}

}  // namespace pimet
