#pragma once
// Certified bounds lower <= rho(a, b) <= upper for the pseudometric
// rho(a, b) = inf mu(alpha, beta) over representatives, with witnesses.

#include <optional>
#include <string>
#include <vector>

#include "pimet/group.hpp"
#include "pimet/limitsys.hpp"
#include "pimet/loop.hpp"

namespace pimet {

struct RhoContext {
  const MetricComplex* X = nullptr;  // the complex, or the top level of S
  const InverseSystem* S = nullptr;
  Presentation P;
  int grid = 64;     // samples per unit length for representatives
  int budget = 16;   // translation classes tried by the upper search
  int rotations = 3; // base vertices tried per conjugated core
  std::vector<SimplicialMap> pushforward;  // k = 1..J-1: embed_k o project_k on the top level

  static RhoContext of(const MetricComplex& X, int grid = 64, int budget = 16);
  static RhoContext of(const InverseSystem& S, int grid = 64, int budget = 16);

  Q slack() const { return Q(2, grid); }
  Q dist(const Point& p, const Point& q) const;
  MuInterval<Q> mu(const DiscreteLoop& a, const DiscreteLoop& b,
                   std::optional<Q> prune = std::nullopt) const;
  DiscreteLoop rep(const Word& w) const;
};

struct UpperWitness {
  DiscreteLoop alpha, beta;
  MuInterval<Q> mu;
  std::string kind;
};

struct LowerWitness {
  int level = 0;  // 0 for a single complex, projection level for systems, -1 when nothing separates
  Q margin;       // systole/2 used
  std::string note;
};

struct RhoUpper {
  Q value;
  UpperWitness witness;
};
struct RhoLower {
  Q value;
  LowerWitness witness;
};

struct RhoInterval {
  Q lower, upper;
  LowerWitness lower_witness;
  UpperWitness upper_witness;
};

RhoUpper rho_upper(const RhoContext& c, const Word& a, const Word& b);
RhoLower rho_lower(const RhoContext& c, const Word& a, const Word& b);
RhoInterval rho(const RhoContext& c, const Word& a, const Word& b);

enum class Verdict { In, Out, Unknown };
const char* to_string(Verdict v);
Verdict verdict(const RhoInterval& i, const Q& r);
Verdict ball_membership(const RhoContext& c, const Word& a, const Q& r);

struct LemmaReport {
  int triples = 0;
  int reversal = 0, translation = 0, max_law = 0, triangle = 0;  // violations
  Q worst_triangle_excess;  // max of lower(a,c) - upper(a,b) - upper(b,c), clipped at 0
  std::vector<std::string> counterexamples;
  int violations() const { return reversal + translation + max_law + triangle; }
};
struct Triple {
  Word a, b, c;
};
LemmaReport verify_lemma_chain(const RhoContext& c, const std::vector<Triple>& sample);

struct IndependenceReport {
  Q L12, L21;  // d2 <= L12 d1, d1 <= L21 d2
  int queries = 0;
  int disagreements = 0;
  int transport_failures = 0;
  int decided = 0;
  std::vector<std::string> counterexamples;
};
// X1, X2: the same complex with two edge-length assignments
IndependenceReport metric_independence_check(const MetricComplex& X1, const MetricComplex& X2,
                                             const std::vector<Word>& sample,
                                             const std::vector<Q>& radii, int grid = 64,
                                             int budget = 16);

// ---- analytic demos ----

struct AnalyticBound {
  double lower = 0, upper = 0;
  AnalyticLoop alpha, beta;
  MuInterval<double> mu;
};
// generator vs e on the punctured plane (puncture at 0, base (1,0)) with the
// pair (gamma_n * c, gamma_n * alpha_n); alpha_n the circle of radius 1/n
AnalyticBound punctured_plane_upper(const AnalyticSpace& Y, int n, int circle_samples = 4096);
// winding number of a loop around the puncture
int winding_number(const AnalyticLoop& a);
// generator vs e on the flat cylinder: lower from the 1-Lipschitz projection to
// the circle, upper from the waist circle against the constant loop
AnalyticBound cylinder_bounds(const AnalyticSpace& Z, int circle_samples = 4096);

}  // namespace pimet
