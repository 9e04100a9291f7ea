#pragma once
// Scenario runs producing machine-readable reports.

#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "pimet/cover.hpp"
#include "pimet/limitsys.hpp"
#include "pimet/rho.hpp"

namespace pimet {

using json = nlohmann::json;

enum class Status { Pass, Fail, Unknown };
const char* to_string(Status s);

struct CheckRecord {
  std::string name;
  Status status = Status::Pass;
  json numbers = json::object();
  json witness = json::object();
};

struct ScenarioReport {
  std::string scenario;
  json provenance = json::object();  // seeds, budgets, depths, inputs
  std::vector<CheckRecord> checks;
  json tables = json::object();

  void add(CheckRecord c) { checks.push_back(std::move(c)); }
  bool failed() const;
  int count(Status s) const;
  // checks sorted by name; the timestamp is the only run-dependent field
  json to_json(bool with_timestamp = true) const;
  std::string to_csv() const;  // one row per check
};

struct RunSettings {
  std::uint64_t seed = 1;
  int grid = 64;
  int budget = 16;
  int threads = 1;
  int samples = 100;
  int max_len = 6;
};

// results in index order whatever the number of workers
template <class T>
std::vector<T> parallel_map(int n, int threads, const std::function<T(int)>& f) {
  std::vector<T> out(n);
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> err(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += threads) out[i] = f(i);
      } catch (...) {
        err[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string fmt_double(double x);  // shortest round-trip form

ScenarioReport sandwich_check(const InverseSystem& S, const std::vector<Q>& radii, const RunSettings& cfg);

// ---- cylinder example, polyhedral truncations ----
struct CylinderModel {
  MetricComplex X;           // truncation m
  MetricComplex Y;           // cylinder plus arc
  MetricComplex C;           // cylinder only
  std::vector<int> to_Y;     // vertex map X -> Y collapsing the sine-curve sheet to x1
  std::vector<int> y_of_c;   // C vertex -> Y vertex
  std::vector<int> top_ring; // closed walk in X around the top ring from x0
  std::vector<int> last_ring, mid_ring;  // last sheet ring, cylinder ring at height 0 (X ids)
  int x0 = 0, x1 = 0;
  Q arc_length;
  int m = 1;
};
CylinderModel cylinder_model(int m, int ring = 12, int stations_per_half = 8);
ScenarioReport cylinder_demo(const std::vector<int>& ms, const RunSettings& cfg);

ScenarioReport punctured_plane_demo(int n_max, const RunSettings& cfg);
ScenarioReport shape_injectivity_probe(const InverseSystem& S, const RunSettings& cfg);
// triples of random words; works on a complex or (with S) a system
ScenarioReport lemma_suite(const RhoContext& c, const std::string& label, const RunSettings& cfg);
ScenarioReport metric_independence_scenario(const MetricComplex& X1, const MetricComplex& X2,
                                            const std::vector<Q>& radii, const RunSettings& cfg);

// pairwise certified intervals; CSV rows i,j,a,b,lower,upper (upper triangle, i <= j)
struct RhoMatrix {
  std::vector<Word> classes;
  std::vector<std::vector<RhoInterval>> cell;  // cell[i][j] for i <= j
  std::string to_csv() const;
  json to_json() const;
};
RhoMatrix rho_matrix(const RhoContext& c, const std::vector<Word>& classes, int threads = 1);

Word random_reduced_word(std::mt19937_64& rng, int rank, int max_len, bool nonempty = false);

}  // namespace pimet
