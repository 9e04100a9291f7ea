#pragma once
// Edge-path presentations of pi_1, free words, Tietze simplification,
// induced homomorphisms and the loop <-> word bridge.

#include <memory>
#include <string>
#include <vector>

#include "pimet/loop.hpp"
#include "pimet/space.hpp"

namespace pimet {

// letters are signed 1-based generator indices; -g is the inverse of g
using Word = std::vector<int>;

Word reduce(const Word& w);
Word inverse(const Word& w);
Word operator*(const Word& a, const Word& b);  // reduced product
// w = prefix . core . prefix^-1 with core cyclically reduced
Word cyclic_core(const Word& w, Word* prefix = nullptr);
std::string to_string(const Word& w);  // "[1,-2]"

enum class Tri { False, True, Unknown };
const char* to_string(Tri t);

struct MarginViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Result of eliminating generators by Tietze moves: each eliminated
// generator has an expansion in the surviving ones; `remaining` are the
// relators left among survivors (empty => the group is free on them).
struct TietzeState {
  std::vector<char> eliminated;  // index 1..rank
  std::vector<Word> expansion;
  std::vector<Word> remaining;
  bool expansion_overflow = false;
  bool complete() const { return remaining.empty() && !expansion_overflow; }
  Word rewrite(const Word& w) const;
};
TietzeState tietze_simplify(int rank, std::vector<Word> relators);

struct Presentation {
  int basepoint = 0;
  int rank = 0;                    // number of generators
  std::vector<int> gen_of_edge;    // 0 for tree edges
  std::vector<int> edge_of_gen;    // index 1..rank
  std::vector<int> parent_edge;    // BFS tree, -1 at the root
  std::vector<Word> relators;      // one per triangle, cyclically reduced, empty ones dropped
  std::shared_ptr<const TietzeState> tietze;

  bool free() const { return relators.empty(); }
  bool valid(const Word& w) const;
};

Presentation presentation(const MetricComplex& X);

// True / False exactly when decidable by free reduction after Tietze
// elimination; Unknown otherwise.
Tri is_trivial(const Word& w, const Presentation& P);
inline Tri same_class(const Word& a, const Word& b, const Presentation& P) {
  return is_trivial(a * inverse(b), P);
}

// vertex walks
std::vector<int> tree_walk(const Presentation& P, const MetricComplex& X, int v);  // base .. v
std::vector<int> word_walk(const MetricComplex& X, const Presentation& P, const Word& w);
std::vector<int> cancel_backtracks(const std::vector<int>& walk);
Word walk_word(const MetricComplex& X, const Presentation& P, const std::vector<int>& walk);
// word of a closed walk given as runs along edges (snapping interior points to edge.u)
Word pieces_word(const MetricComplex& X, const Presentation& P, int start,
                 const std::vector<Piece>& pieces);

// the same loop written over a subdivision, and back (interior runs snapped to edge.u)
Word refine_word(const MetricComplex& X, const Presentation& PX, const Subdivision& S,
                 const Presentation& PS, const Word& w);
Word coarsen_walk(const MetricComplex& X, const Presentation& PX, const Subdivision& S,
                  const std::vector<int>& walk);

struct SimplicialMap {
  const MetricComplex* dom = nullptr;
  const MetricComplex* cod = nullptr;
  std::vector<int> vmap;

  SimplicialMap() = default;
  SimplicialMap(const MetricComplex& d, const MetricComplex& c, std::vector<int> vm);
  Point apply(const Point& p) const;
  DiscreteLoop apply(const DiscreteLoop& a) const;
  // max over edges of |f(e)| / |e| (0 for collapsed edges)
  Q lipschitz() const;
};
SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f);  // g after f

struct Homomorphism {
  std::vector<Word> images;  // index 1..rank of the domain
  int unverified_relators = 0;  // relator images that Tietze could not decide
  Word apply(const Word& w) const;
};

Homomorphism induced_hom(const SimplicialMap& f, const Presentation& dom, const Presentation& cod);
Homomorphism compose(const Homomorphism& g, const Homomorphism& f);

Word loop_to_word(const MetricComplex& X, const Presentation& P, const DiscreteLoop& a);
DiscreteLoop word_to_loop(const MetricComplex& X, const Presentation& P, const Word& w,
                          int samples_per_unit_length);
DiscreteLoop walk_to_loop(const MetricComplex& X, const std::vector<int>& walk,
                          int samples_per_unit_length);

}  // namespace pimet
