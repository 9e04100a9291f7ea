#include <algorithm>
#include <cstdlib>
#include <tuple>

#include "pimet/group.hpp"

namespace pimet {

namespace {

int count_gen(const Word& r, int g) {
  int c = 0;
  for (int x : r) c += std::abs(x) == g;
  return c;
}

Word substitute(const Word& r, int g, const Word& img) {
  Word out;
  for (int x : r) {
    if (std::abs(x) != g) { out.push_back(x); continue; }
    if (x > 0) out.insert(out.end(), img.begin(), img.end());
    else { Word inv = inverse(img); out.insert(out.end(), inv.begin(), inv.end()); }
  }
  return cyclic_core(out);
}

constexpr std::size_t kExpansionCap = std::size_t(1) << 22;

}  // namespace

Word TietzeState::rewrite(const Word& w) const {
  Word out;
  for (int x : w) {
    int g = std::abs(x);
    if (g < int(eliminated.size()) && eliminated[g]) {
      const Word& e = expansion[g];
      if (x > 0) out.insert(out.end(), e.begin(), e.end());
      else { Word inv = inverse(e); out.insert(out.end(), inv.begin(), inv.end()); }
    } else {
      out.push_back(x);
    }
  }
  return reduce(out);
}

TietzeState tietze_simplify(int rank, std::vector<Word> R) {
  TietzeState st;
  st.eliminated.assign(rank + 1, 0);
  st.expansion.assign(rank + 1, {});
  std::vector<Word> expr(rank + 1);
  std::vector<int> order;
  std::vector<char> dead(R.size(), 0);
  std::vector<int> occ(rank + 1, 0);
  std::vector<std::vector<int>> where(rank + 1);
  for (std::size_t i = 0; i < R.size(); ++i) {
    R[i] = cyclic_core(R[i]);
    for (int x : R[i]) { ++occ[std::abs(x)]; where[std::abs(x)].push_back(int(i)); }
  }

  auto eliminate = [&](int i, int g, bool spread) {
    Word r = R[i];
    auto pos = std::find_if(r.begin(), r.end(), [g](int x) { return std::abs(x) == g; });
    std::rotate(r.begin(), pos, r.end());
    int lead = r[0];
    Word rest(r.begin() + 1, r.end());
    expr[g] = lead > 0 ? inverse(rest) : rest;
    order.push_back(g);
    st.eliminated[g] = 1;
    dead[i] = 1;
    for (int x : R[i]) --occ[std::abs(x)];
    R[i].clear();
    if (!spread) return;
    auto ids = where[g];
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int j : ids) {
      if (dead[j] || count_gen(R[j], g) == 0) continue;
      for (int x : R[j]) --occ[std::abs(x)];
      R[j] = substitute(R[j], g, expr[g]);
      for (int x : R[j]) { ++occ[std::abs(x)]; where[std::abs(x)].push_back(j); }
      if (R[j].empty()) dead[j] = 1;
    }
  };

  for (;;) {
    bool progress = false;
    // free faces first: a generator living in a single relator, once
    for (std::size_t i = 0; i < R.size(); ++i) {
      if (dead[i]) continue;
      if (R[i].empty()) { dead[i] = 1; continue; }
      for (int x : R[i]) {
        int g = std::abs(x);
        if (occ[g] == 1) { eliminate(int(i), g, false); progress = true; break; }
      }
    }
    if (progress) continue;
    // general move: shortest relator, rarest generator
    std::tuple<std::size_t, int, int, int> best{~std::size_t(0), 0, -1, 0};
    for (std::size_t i = 0; i < R.size(); ++i) {
      if (dead[i]) continue;
      for (int x : R[i]) {
        int g = std::abs(x);
        if (count_gen(R[i], g) != 1) continue;
        std::tuple<std::size_t, int, int, int> cand{R[i].size(), occ[g], int(i), g};
        if (cand < best) best = cand;
      }
    }
    if (std::get<2>(best) < 0) break;
    eliminate(std::get<2>(best), std::get<3>(best), true);
  }

  // expansions in reverse elimination order: later ones only use survivors
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int g = *it;
    Word w;
    for (int x : expr[g]) {
      int h = std::abs(x);
      if (st.eliminated[h]) {
        const Word& e = st.expansion[h];
        if (x > 0) w.insert(w.end(), e.begin(), e.end());
        else { Word inv = inverse(e); w.insert(w.end(), inv.begin(), inv.end()); }
      } else {
        w.push_back(x);
      }
    }
    st.expansion[g] = reduce(w);
    if (st.expansion[g].size() > kExpansionCap) {
      st.expansion_overflow = true;
      st.expansion[g].clear();
    }
  }
  for (std::size_t i = 0; i < R.size(); ++i)
    if (!dead[i] && !R[i].empty()) st.remaining.push_back(R[i]);
  return st;
}

}  // namespace pimet
