// Shortest essential edge cycle. Candidates are the lollipops
// T_x(u) . uv . T_x(v)^-1 over roots x and edges uv outside the shortest
// path tree T_x; the shortest essential cycle is always one of them.
// In a 2-complex an undecided candidate counts as essential, which can only
// make the result smaller.

#include <algorithm>
#include <tuple>

#include "pimet/group.hpp"

namespace pimet::detail {

std::optional<Q> compute_systole(const MetricComplex& X) {
  int n = X.num_vertices(), m = X.num_edges();
  if (m == n - 1) return std::nullopt;
  std::vector<std::tuple<Q, int, int>> cands;
  std::optional<Q> best;
  bool graph = X.triangles().empty();
  for (int x = 0; x < n; ++x)
    for (int e = 0; e < m; ++e) {
      const Edge& E = X.edge(e);
      if (X.tree_parent_edge(x, E.u) == e || X.tree_parent_edge(x, E.v) == e) continue;
      Q len = X.vdist(x, E.u) + E.len + X.vdist(x, E.v);
      if (graph) {
        if (!best || len < *best) best = len;
      } else {
        cands.emplace_back(len, x, e);
      }
    }
  if (graph) return best;
  std::sort(cands.begin(), cands.end());
  Presentation P = presentation(X);
  for (auto& [len, x, e] : cands) {
    const Edge& E = X.edge(e);
    auto w = X.vertex_path(E.u, x);
    std::reverse(w.begin(), w.end());
    auto back = X.vertex_path(E.v, x);
    w.insert(w.end(), back.begin(), back.end());
    if (is_trivial(walk_word(X, P, w), P) != Tri::True) return len;
  }
  return std::nullopt;
}

}  // namespace pimet::detail
