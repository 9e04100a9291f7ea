#pragma once
// Discretized based loops (and paths) with the uniform metric.
// A loop is the piecewise-geodesic interpolant of N+1 samples on the
// uniform grid i/N of [0,1].

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pimet/space.hpp"

namespace pimet {

template <class Space, class P>
struct BasicPath {
  const Space* X = nullptr;
  std::vector<P> s;

  int N() const { return int(s.size()) - 1; }
  const P& front() const { return s.front(); }
  const P& back() const { return s.back(); }
  bool closed() const { return !s.empty() && s.front() == s.back(); }
  friend bool operator==(const BasicPath& a, const BasicPath& b) { return a.X == b.X && a.s == b.s; }
};

using DiscreteLoop = BasicPath<MetricComplex, Point>;
using DiscretePath = DiscreteLoop;  // same carrier; paths need not close up
using AnalyticLoop = BasicPath<AnalyticSpace, APoint>;

template <class Len>
struct MuInterval {
  Len grid_max{};  // max over the shared grid
  Len upper{};     // certified: true sup <= upper
  int N = 0;       // grid the comparison was made on
  bool pruned = false;  // stopped early because grid_max already exceeded a bound
};

// k-1 interior points splitting the interpolating geodesic p->q evenly
std::vector<Point> interpolate(const MetricComplex& X, const Point& p, const Point& q, int k);
std::vector<APoint> interpolate(const AnalyticSpace& X, const APoint& p, const APoint& q, int k);

template <class Space, class P>
BasicPath<Space, P> constant_loop(const Space& X, const P& p) {
  return {&X, {p, p}};
}

// same interpolant on the finer grid M (a multiple of N)
template <class Space, class P>
BasicPath<Space, P> resample(const BasicPath<Space, P>& a, int M) {
  int n = a.N();
  if (n < 1) throw std::invalid_argument("resample: empty path");
  if (M % n != 0) throw std::invalid_argument("resample: grid is not a refinement");
  if (M == n) return a;
  int k = M / n;
  BasicPath<Space, P> out{a.X, {}};
  out.s.reserve(M + 1);
  for (int i = 0; i < n; ++i) {
    out.s.push_back(a.s[i]);
    if (a.s[i] == a.s[i + 1]) {
      for (int j = 1; j < k; ++j) out.s.push_back(a.s[i]);
    } else {
      auto mid = interpolate(*a.X, a.s[i], a.s[i + 1], k);
      out.s.insert(out.s.end(), mid.begin(), mid.end());
    }
  }
  out.s.push_back(a.s[n]);
  return out;
}

template <class Space, class P>
BasicPath<Space, P> reverse(const BasicPath<Space, P>& a) {
  BasicPath<Space, P> r = a;
  std::reverse(r.s.begin(), r.s.end());
  return r;
}

// a then b, each at double speed; both first brought to a common grid
template <class Space, class P>
BasicPath<Space, P> concatenate(const BasicPath<Space, P>& a, const BasicPath<Space, P>& b) {
  if (a.X != b.X) throw std::invalid_argument("concatenate: different spaces");
  if (!(a.back() == b.front())) throw std::invalid_argument("concatenate: endpoints do not match");
  int M = std::lcm(a.N(), b.N());
  auto A = resample(a, M), B = resample(b, M);
  A.s.insert(A.s.end(), B.s.begin() + 1, B.s.end());
  return A;
}

// gamma * alpha = gamma . alpha . gamma^-1 with time shares 1/4, 1/2, 1/4
template <class Space, class P>
BasicPath<Space, P> path_conjugate(const BasicPath<Space, P>& gamma, const BasicPath<Space, P>& alpha) {
  if (gamma.X != alpha.X) throw std::invalid_argument("path_conjugate: different spaces");
  if (!(gamma.back() == alpha.front()) || !alpha.closed())
    throw std::invalid_argument("path_conjugate: endpoint mismatch");
  int n = alpha.N();
  int U = std::lcm(gamma.N(), n % 2 == 0 ? n / 2 : n);
  auto G = resample(gamma, U), A = resample(alpha, 2 * U), R = reverse(G);
  G.s.insert(G.s.end(), A.s.begin() + 1, A.s.end());
  G.s.insert(G.s.end(), R.s.begin() + 1, R.s.end());
  return G;
}

template <class Space, class P>
std::pair<BasicPath<Space, P>, BasicPath<Space, P>> align(const BasicPath<Space, P>& a,
                                                          const BasicPath<Space, P>& b) {
  int M = std::lcm(a.N(), b.N());
  return {resample(a, M), resample(b, M)};
}

// Metric adaptor for plain spaces: the interpolant between samples is the
// geodesic, so a segment's spread is just the sample distance.
template <class Space>
struct PlainMetric {
  const Space& X;
  template <class P>
  auto dist(const P& p, const P& q) const { return X.distance(p, q); }
  template <class P>
  auto seg_mesh(const P& p, const P& q) const { return X.distance(p, q); }
  template <class Len>
  Len tail() const { return Len(0); }
};

template <class Path, class Metric>
auto mesh(const Path& a, const Metric& m) {
  using Len = decltype(m.dist(a.s[0], a.s[0]));
  Len best(0);
  for (int i = 0; i < a.N(); ++i)
    if (!(a.s[i] == a.s[i + 1])) best = std::max(best, m.seg_mesh(a.s[i], a.s[i + 1]));
  return best;
}

template <class Space, class P>
auto mesh(const BasicPath<Space, P>& a) { return mesh(a, PlainMetric<Space>{*a.X}); }

// Certified interval for the sup distance of the interpolants. On segment i
// the sup is at most min(d_i, d_i+1) + spread(a_i) + spread(b_i), and 0 where
// both loops run the same segment; upper is the max of these (never above
// grid max + mesh(a) + mesh(b)) plus the metric's tail. With `prune`, stop as
// soon as the grid max reaches it (the result is then only a lower bound).
template <class Path, class Metric, class Len = decltype(std::declval<Metric>().dist(
                                          std::declval<Path>().s[0], std::declval<Path>().s[0]))>
MuInterval<Len> uniform_distance(const Path& a0, const Path& b0, const Metric& m,
                                 std::optional<Len> prune = std::nullopt) {
  if (a0.X != b0.X) throw std::invalid_argument("uniform_distance: different spaces");
  auto [a, b] = align(a0, b0);
  MuInterval<Len> r;
  r.N = a.N();
  std::vector<Len> d(r.N + 1, Len(0));
  for (int i = 0; i <= r.N; ++i) {
    if (a.s[i] == b.s[i]) continue;
    d[i] = m.dist(a.s[i], b.s[i]);
    if (r.grid_max < d[i]) r.grid_max = d[i];
    if (prune && !(r.grid_max < *prune)) {
      r.pruned = true;
      r.upper = r.grid_max;
      return r;
    }
  }
  if (a.s == b.s) {
    r.upper = Len(0);
    return r;
  }
  Len best(0);
  for (int i = 0; i < r.N; ++i) {
    if (a.s[i] == b.s[i] && a.s[i + 1] == b.s[i + 1]) continue;
    Len s = std::min(d[i], d[i + 1]);
    if (!(a.s[i] == a.s[i + 1])) s = s + m.seg_mesh(a.s[i], a.s[i + 1]);
    if (!(b.s[i] == b.s[i + 1])) s = s + m.seg_mesh(b.s[i], b.s[i + 1]);
    if (best < s) best = s;
  }
  r.upper = std::max(best, r.grid_max) + m.template tail<Len>();
  return r;
}

template <class Space, class P>
auto uniform_distance(const BasicPath<Space, P>& a, const BasicPath<Space, P>& b) {
  return uniform_distance(a, b, PlainMetric<Space>{*a.X});
}

}  // namespace pimet
