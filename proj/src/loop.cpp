#include "pimet/loop.hpp"

namespace pimet {

std::vector<Point> interpolate(const MetricComplex& X, const Point& p, const Point& q, int k) {
  std::vector<Point> out;
  if (k <= 1) return out;
  Q d = X.distance(p, q);
  auto sys = X.systole();
  if (sys && !(d * Q(2) < *sys))
    throw AmbiguousGeodesic("interpolate: samples not within half the systole");
  auto r = X.route(p, q);
  for (int j = 1; j < k; ++j) out.push_back(X.point_along(r, d * Q(j, k)));
  return out;
}

std::vector<APoint> interpolate(const AnalyticSpace& X, const APoint& p, const APoint& q, int k) {
  std::vector<APoint> out;
  for (int j = 1; j < k; ++j) out.push_back(X.geodesic_point(p, q, double(j) / k));
  return out;
}

}  // namespace pimet
