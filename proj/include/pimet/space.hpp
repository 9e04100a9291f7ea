#pragma once
// Compact metric spaces: finite metric 2-complexes with their path metric,
// plus two analytic models (punctured plane, flat cylinder).

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pimet/rational.hpp"

namespace pimet {

struct InvalidPoint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct AmbiguousGeodesic : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  int u = 0, v = 0;
  Q len;
};

// A point of the 1-skeleton. edge < 0 means the vertex `vertex`.
// Interior points of edge e sit at offset t in (0,1) measured from e.u.
struct Point {
  int edge = -1;
  int vertex = 0;
  Q t;

  static Point at(int v) { return Point{-1, v, Q(0)}; }
  bool is_vertex() const { return edge < 0; }
  friend bool operator==(const Point&, const Point&) = default;
};

// one straight run along an edge, offsets measured from edge.u
struct Piece {
  int edge;
  Q from, to;
};

namespace detail {
struct ComplexCache;
}

class MetricComplex {
public:
  MetricComplex() = default;
  MetricComplex(int nverts, std::vector<Edge> edges, std::vector<std::array<int, 3>> triangles,
                int basepoint);

  int num_vertices() const { return nv_; }
  int num_edges() const { return int(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<std::array<int, 3>>& triangles() const { return tris_; }
  int basepoint() const { return base_; }
  // (neighbor, edge id), sorted by neighbor
  const std::vector<std::pair<int, int>>& adj(int v) const { return adj_.at(v); }
  int edge_between(int a, int b) const;

  // optional ambient coordinates, one per vertex; only some models carry them
  std::vector<std::array<double, 3>> coords;
  std::vector<std::string> names;

  Point point(int e, const Q& t) const;  // canonical form
  void check(const Point& p) const;

  Q vdist(int a, int b) const;
  Q distance(const Point& p, const Point& q) const;
  // shortest route p -> q, deterministic choice among ties
  std::vector<Piece> route(const Point& p, const Point& q) const;
  Point point_along(const std::vector<Piece>& r, const Q& s) const;  // at arc length s
  Point geodesic_point(const Point& p, const Point& q, const Q& t) const;
  // vertex path a..b along the cached shortest path tree rooted at b
  std::vector<int> vertex_path(int a, int b) const;
  // predecessor edge of v in the shortest path tree rooted at root (-1 at root)
  int tree_parent_edge(int root, int v) const;

  // +infinity is nullopt
  std::optional<Q> systole() const;
  Q diameter() const;
  // length of a vertex walk
  Q walk_length(const std::vector<int>& walk) const;

private:
  void ensure_apsp() const;
  int nv_ = 0;
  int base_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tris_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::shared_ptr<detail::ComplexCache> cache_;
};

// offset of p along edge e when p lies on the closed edge, else nullopt
std::optional<Q> offset_on(const MetricComplex& X, const Point& p, int e);

struct Subdivision {
  MetricComplex complex;
  std::vector<Point> vertex_origin;  // new vertex -> point of the old complex
  std::vector<Piece> edge_origin;    // new edge -> run along an old edge
};

// Every edge split into pieces of length <= max_len. With triangles present a
// single split count is used for all edges and faces get the regular k^2
// subdivision, so the new faces stay simplicial.
Subdivision subdivide(const MetricComplex& X, const Q& max_len);

// k equal edges around a circle of the given circumference, based at vertex 0
MetricComplex make_circle(int k, const Q& circumference);
// one-point union at the basepoints; piece_maps[i][v] = vertex of piece i's v
MetricComplex wedge_sum(const std::vector<MetricComplex>& pieces,
                        std::vector<std::vector<int>>* piece_maps = nullptr);

// ---- analytic models (binary64) ----

using APoint = std::array<double, 2>;

struct AnalyticSpace {
  enum class Model { PuncturedPlane, Cylinder };
  Model model = Model::PuncturedPlane;
  APoint puncture{0.0, 0.0};  // plane only
  double circumference = 1.0;  // cylinder only; points are (z, arc position)
  APoint base{1.0, 0.0};

  static AnalyticSpace punctured_plane(APoint base = {1.0, 0.0});
  static AnalyticSpace cylinder(double circumference, APoint base = {0.0, 0.0});

  void check(const APoint& p) const;
  double distance(const APoint& p, const APoint& q) const;
  APoint geodesic_point(const APoint& p, const APoint& q, double t) const;
};

}  // namespace pimet
