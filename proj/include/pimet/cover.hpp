#pragma once
// Finite ball covers of metric complexes, their nerves, combinatorial
// canonical maps into the nerve and the induced homomorphisms, plus
// sampling of Spanier generators.

#include <cstdint>
#include <memory>
#include <vector>

#include "pimet/group.hpp"
#include "pimet/space.hpp"

namespace pimet {

struct Ball {
  Point center;
  Q radius;
};

struct Cover {
  const MetricComplex* X = nullptr;
  std::vector<Ball> balls;  // open balls d(x, center) < radius
  int distinguished = 0;
};

bool in_ball(const MetricComplex& X, const Ball& B, const Point& p);
// sup of d(., center) over the closed edge e is below the radius
bool edge_in_ball(const MetricComplex& X, const Ball& B, int e);
// exact: some point of the 1-skeleton lies in every listed ball
bool balls_meet(const MetricComplex& X, const std::vector<const Ball*>& balls);
// every point of the 1-skeleton is covered (checked edge by edge, exactly)
bool covers(const Cover& U);

// balls of the given radius at every vertex of the subdivision of mesh radius/2
Cover ball_cover(const MetricComplex& X, const Q& radius);

// vertices = cover elements, unit edges, triangles for triple intersections;
// basepoint = the distinguished element
MetricComplex nerve(const Cover& U);

struct CanonicalMap {
  std::shared_ptr<const Subdivision> sub;
  std::shared_ptr<const MetricComplex> nerve;
  SimplicialMap map;  // sub->complex -> *nerve
  Q mesh;             // edge bound of the subdivision that worked
};

// Subdivides until every closed vertex star sits in some element and sends
// each vertex to the first such element (last one with prefer_last; the two
// choices are contiguous). The basepoint must go to the distinguished element.
CanonicalMap canonical_map(const MetricComplex& X, const Cover& U, int max_depth = 12,
                           bool prefer_last = false);

struct PSharp {
  Presentation dom_fine;  // presentation of the subdivided complex
  Presentation nerve;
  Homomorphism hom;       // on the subdivided complex
  // p_U#(w) for a word over presentation(X)
  Word apply(const MetricComplex& X, const Presentation& PX, const CanonicalMap& c,
             const Word& w) const;
};
PSharp p_sharp(const CanonicalMap& c);

// V refining U: each element of V goes to an element of U containing it
// (certified by d(c, c') + r <= r'). Throws if some element has no such home.
SimplicialMap refinement_map(const Cover& V, const MetricComplex& NV, const Cover& U,
                             const MetricComplex& NU);

// `count` words [gamma . f . gamma^-1] over presentation(*U.X) with f a loop
// inside a single element
std::vector<Word> spanier_generators(const Cover& U, std::uint64_t seed, int count,
                                     int max_cycles = 3);

}  // namespace pimet
