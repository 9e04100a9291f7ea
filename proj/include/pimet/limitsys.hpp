#pragma once
// Finite truncations X_1 <- X_2 <- ... <- X_J of inverse systems whose bonding
// maps are simplicial retractions with simplicial sections.
// Points of the truncated limit are points of X_J (stabilized threads); the
// limit metric is sum_j scale_j d_j / 2^j with an explicit 2^-J tail.

#include <memory>
#include <random>
#include <vector>

#include "pimet/group.hpp"
#include "pimet/loop.hpp"
#include "pimet/space.hpp"

namespace pimet {

class InverseSystem {
public:
  InverseSystem() = default;
  // levels[0] = X_1; bond[j] maps levels[j+1] -> levels[j], sect[j] the other way
  InverseSystem(std::vector<MetricComplex> levels, std::vector<std::vector<int>> bond,
                std::vector<std::vector<int>> sect);

  int depth() const { return int(lv_.size()); }
  // 1-based level access
  const MetricComplex& level(int k) const { return *lv_.at(k - 1); }
  const MetricComplex& top() const { return *lv_.back(); }
  const Presentation& pres(int k) const { return pres_.at(k - 1); }
  const Q& scale(int k) const { return scale_.at(k - 1); }
  const SimplicialMap& bonding(int k) const { return bond_.at(k - 1); }  // X_{k+1} -> X_k
  const SimplicialMap& section(int k) const { return sect_.at(k - 1); }  // X_k -> X_{k+1}
  // composite maps to and from the top level
  const SimplicialMap& project(int k) const { return proj_.at(k - 1); }  // X_J -> X_k
  const SimplicialMap& embed(int k) const { return emb_.at(k - 1); }     // X_k -> X_J
  const Homomorphism& project_hom(int k) const { return proj_hom_.at(k - 1); }
  const Homomorphism& embed_hom(int k) const { return emb_hom_.at(k - 1); }
  // per top-level edge: sum_j scale_j |r_j(e)| / (|e| 2^j)
  const std::vector<Q>& edge_weight() const { return weight_; }

private:
  std::vector<std::shared_ptr<const MetricComplex>> lv_;
  std::vector<Presentation> pres_;
  std::vector<Q> scale_;
  std::vector<SimplicialMap> bond_, sect_, proj_, emb_;
  std::vector<Homomorphism> proj_hom_, emb_hom_;
  std::vector<Q> weight_;
};

// sum_{j>k} 1/2^j
inline Q tail_bound(const InverseSystem& S, int k) {
  if (k < 0 || k > S.depth()) throw std::out_of_range("tail_bound: level out of range");
  return pow2_inv(k);
}

struct LimitDistance {
  Q finite;  // sum over j <= J
  Q tail;    // 0 for equal points, else 2^-J
  Q upper() const { return finite + tail; }
};
LimitDistance limit_distance(const InverseSystem& S, const Point& x, const Point& y);

// Metric adaptor for loops on the top level measured in the limit metric.
struct LimitMetric {
  const InverseSystem& S;
  Q dist(const Point& p, const Point& q) const;
  Q seg_mesh(const Point& p, const Point& q) const;
  template <class Len>
  Len tail() const { return pow2_inv(S.depth()); }
};

// X_J with edge lengths |e| * edge_weight(e); its path metric dominates the
// finite part of the limit metric
MetricComplex weighted_model(const InverseSystem& S);

// Levels are the partial wedges, bondings collapse the newest piece.
InverseSystem shrinking_wedge(const std::vector<MetricComplex>& pieces);

struct Thread {
  std::vector<Word> words;  // words[k-1] over pres(k)
  int stabilization = -1;   // smallest k with w_j = sections(w_k) for all j >= k; -1 if none
};
Thread make_thread(const InverseSystem& S, const Word& top_word);
// throws std::invalid_argument if r_{j+1,j#}(w_{j+1}) != w_j somewhere
void check_thread(const InverseSystem& S, const Thread& t);

struct PsiReport {
  std::vector<Tri> trivial;  // per level
  bool shape_trivial = true;  // trivial at every level up to J
  int first_nontrivial = -1;
};
PsiReport psi(const InverseSystem& S, const Thread& t);

// H_k samples: words w at the top level with r_k#(w) = e
Word sample_kernel(const InverseSystem& S, int k, std::mt19937_64& rng, int max_len);

}  // namespace pimet
