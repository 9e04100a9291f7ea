#include "pimet/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "pimet/io.hpp"

namespace pimet {

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    default: return "unknown";
  }
}

bool ScenarioReport::failed() const { return count(Status::Fail) > 0; }

int ScenarioReport::count(Status s) const {
  return int(std::count_if(checks.begin(), checks.end(), [&](const CheckRecord& c) { return c.status == s; }));
}

json ScenarioReport::to_json(bool with_timestamp) const {
  json j;
  j["schema"] = "pimet-report/1";
  j["scenario"] = scenario;
  j["provenance"] = provenance;
  auto sorted = checks;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  j["checks"] = json::array();
  for (const auto& c : sorted)
    j["checks"].push_back({{"name", c.name}, {"status", to_string(c.status)}, {"numbers", c.numbers}, {"witness", c.witness}});
  j["summary"] = {{"pass", count(Status::Pass)}, {"fail", count(Status::Fail)}, {"unknown", count(Status::Unknown)}};
  j["tables"] = tables;
  if (with_timestamp) {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    j["timestamp"] = buf;
  }
  return j;
}

namespace {
std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}
}  // namespace

std::string ScenarioReport::to_csv() const {
  auto sorted = checks;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::ostringstream os;
  os << "scenario,check,status,numbers\n";
  for (const auto& c : sorted)
    os << csv_field(scenario) << ',' << csv_field(c.name) << ',' << to_string(c.status) << ','
       << csv_field(c.numbers.dump()) << '\n';
  return os.str();
}

std::string fmt_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

RhoMatrix rho_matrix(const RhoContext& c, const std::vector<Word>& classes, int threads) {
  RhoMatrix m;
  m.classes = classes;
  int n = int(classes.size());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pairs.push_back({i, j});
  auto vals = parallel_map<RhoInterval>(int(pairs.size()), threads,
                                        [&](int p) { return rho(c, classes[pairs[p].first], classes[pairs[p].second]); });
  m.cell.assign(n, std::vector<RhoInterval>(n));
  for (std::size_t p = 0; p < pairs.size(); ++p) m.cell[pairs[p].first][pairs[p].second] = vals[p];
  return m;
}

std::string RhoMatrix::to_csv() const {
  std::ostringstream os;
  os << "i,j,a,b,lower,upper\n";
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = i; j < classes.size(); ++j)
      os << i << ',' << j << ',' << csv_field(to_string(classes[i])) << ',' << csv_field(to_string(classes[j])) << ','
         << cell[i][j].lower.str() << ',' << cell[i][j].upper.str() << '\n';
  return os.str();
}

json RhoMatrix::to_json() const {
  json j = json::array();
  for (std::size_t a = 0; a < classes.size(); ++a)
    for (std::size_t b = a; b < classes.size(); ++b)
      j.push_back({{"i", a}, {"j", b}, {"lower", cell[a][b].lower.str()}, {"upper", cell[a][b].upper.str()}});
  return j;
}

Word random_reduced_word(std::mt19937_64& rng, int rank, int max_len, bool nonempty) {
  if (rank < 1) return {};
  std::uniform_int_distribution<int> len(nonempty ? 1 : 0, std::max(nonempty ? 1 : 0, max_len));
  std::uniform_int_distribution<int> g(1, rank), s(0, 1);
  int n = len(rng);
  Word w;
  while (int(w.size()) < n) {
    int x = g(rng);
    if (s(rng)) x = -x;
    if (!w.empty() && w.back() == -x) continue;
    w.push_back(x);
  }
  return w;
}

namespace {

json words_json(const std::vector<Word>& ws) {
  json j = json::array();
  for (const auto& w : ws) j.push_back(w);
  return j;
}

json settings_json(const RunSettings& c) {
  return {{"seed", c.seed}, {"grid", c.grid}, {"budget", c.budget}, {"samples", c.samples}, {"max_len", c.max_len}};
}

// samples rho_upper(w, e) < delta; returns the check
CheckRecord upper_batch(const std::string& name, const RhoContext& ctx, const std::vector<Word>& ws,
                        const Q& delta, int threads, json extra) {
  auto ups = parallel_map<Q>(int(ws.size()), threads, [&](int i) { return rho_upper(ctx, ws[i], {}).value; });
  CheckRecord c;
  c.name = name;
  int in = 0;
  Q worst(0);
  std::vector<Word> bad;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (ups[i] < delta) ++in;
    else bad.push_back(ws[i]);
    worst = qmax(worst, ups[i]);
  }
  c.numbers = std::move(extra);
  c.numbers["delta"] = delta.str();
  c.numbers["sampled"] = int(ws.size());
  c.numbers["in"] = in;
  c.numbers["max_upper"] = worst.str();
  c.numbers["max_upper_decimal"] = worst.decimal();
  c.status = bad.empty() ? Status::Pass : Status::Fail;
  if (!bad.empty()) c.witness["outside"] = words_json(bad);
  return c;
}

std::string delta_tag(const Q& d) {
  std::string s = d.str();
  std::replace(s.begin(), s.end(), '/', '_');
  return "delta=" + s;
}

}  // namespace

ScenarioReport sandwich_check(const InverseSystem& S, const std::vector<Q>& radii, const RunSettings& cfg) {
  ScenarioReport rep;
  rep.scenario = "sandwich";
  rep.provenance = settings_json(cfg);
  rep.provenance["depth"] = S.depth();
  json rj = json::array();
  for (const Q& d : radii) rj.push_back(d.str());
  rep.provenance["radii"] = rj;
  auto ctx = RhoContext::of(S, cfg.grid, cfg.budget);
  MetricComplex W = weighted_model(S);
  for (std::size_t idx = 0; idx < radii.size(); ++idx) {
    const Q& delta = radii[idx];
    if (!(delta > Q(0))) throw std::invalid_argument("sandwich: radii must be positive");
    std::string tag = delta_tag(delta);
    // (i) kernels of the projections
    int k = 1;
    while (pow2_inv(k) > delta / Q(2)) ++k;
    if (k > S.depth()) {
      CheckRecord c{tag + "/kernel", Status::Unknown, {{"k", k}, {"depth", S.depth()}}, {{"note", "k exceeds the truncation depth"}}};
      rep.add(c);
    } else {
      std::mt19937_64 rng(cfg.seed * 1000003ULL + idx);
      std::vector<Word> ws;
      for (int i = 0; i < cfg.samples; ++i) ws.push_back(sample_kernel(S, k, rng, cfg.max_len));
      rep.add(upper_batch(tag + "/kernel", ctx, ws, delta, cfg.threads,
                          {{"k", k}, {"tail_bound", tail_bound(S, k).str()}}));
    }
    // (ii) Spanier generators of the delta/2 ball cover on the weighted top level
    Cover U = ball_cover(W, delta / Q(2));
    auto gens = spanier_generators(U, cfg.seed * 7919ULL + idx, cfg.samples);
    rep.add(upper_batch(tag + "/spanier", ctx, gens, delta, cfg.threads,
                        {{"cover_size", int(U.balls.size())}, {"cover_radius", (delta / Q(2)).str()}}));
    // (iii) Out verdicts must be seen by some projection
    std::mt19937_64 rng(cfg.seed * 104729ULL + idx);
    std::vector<Word> ws;
    for (int i = 0; i < cfg.samples; ++i) ws.push_back(random_reduced_word(rng, S.pres(S.depth()).rank, cfg.max_len, true));
    struct R {
      Verdict v = Verdict::Unknown;
      int first = -1;
    };
    auto res = parallel_map<R>(int(ws.size()), cfg.threads, [&](int i) {
      R r;
      r.v = ball_membership(ctx, ws[i], delta);
      if (r.v == Verdict::Out) r.first = psi(S, make_thread(S, ws[i])).first_nontrivial;
      return r;
    });
    int out = 0, seen = 0, in = 0;
    std::vector<Word> gaps;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (res[i].v == Verdict::In) ++in;
      if (res[i].v != Verdict::Out) continue;
      ++out;
      if (res[i].first > 0) ++seen;
      else gaps.push_back(ws[i]);
    }
    CheckRecord c;
    c.name = tag + "/shape";
    c.numbers = {{"delta", delta.str()}, {"sampled", int(ws.size())}, {"in", in}, {"out", out}, {"out_seen_by_projection", seen}};
    c.status = gaps.empty() ? Status::Pass : Status::Unknown;
    if (!gaps.empty()) c.witness["unexplained_out"] = words_json(gaps);
    rep.add(c);
  }
  return rep;
}

// ---- cylinder example ----

namespace {

struct Builder {
  std::vector<std::array<double, 3>> xyz;
  std::set<std::pair<int, int>> edges;
  std::vector<std::array<int, 3>> tris;

  int vertex(double x, double y, double z) {
    xyz.push_back({x, y, z});
    return int(xyz.size()) - 1;
  }
  void edge(int a, int b) { edges.insert({std::min(a, b), std::max(a, b)}); }
  void tri(int a, int b, int c) {
    edge(a, b);
    edge(b, c);
    edge(a, c);
    tris.push_back({a, b, c});
  }
  // annulus between two rings of equal size
  void band(const std::vector<int>& lo, const std::vector<int>& hi) {
    int n = int(lo.size());
    for (int i = 0; i < n; ++i) {
      int j = (i + 1) % n;
      tri(lo[i], lo[j], hi[i]);
      tri(lo[j], hi[j], hi[i]);
    }
  }
  double len(int a, int b) const {
    return std::hypot(xyz[a][0] - xyz[b][0], xyz[a][1] - xyz[b][1], xyz[a][2] - xyz[b][2]);
  }
  // subcomplex on the vertices < n
  MetricComplex complex(int n, int base) const {
    std::vector<Edge> es;
    for (auto [a, b] : edges)
      if (b < n) es.push_back({a, b, Q::from_double(len(a, b))});
    std::vector<std::array<int, 3>> ts;
    for (auto& t : tris)
      if (std::max({t[0], t[1], t[2]}) < n) ts.push_back(t);
    MetricComplex X(n, std::move(es), std::move(ts), base);
    X.coords.assign(xyz.begin(), xyz.begin() + n);
    return X;
  }
};

}  // namespace

CylinderModel cylinder_model(int m, int ring, int stations_per_half) {
  if (m < 1 || ring < 3 || stations_per_half < 1) throw std::invalid_argument("cylinder_model: bad parameters");
  const double pi = std::numbers::pi;
  Builder B;
  auto make_ring = [&](double radius, double h) {
    std::vector<int> r;
    for (int i = 0; i < ring; ++i) {
      double th = 2 * pi * i / ring;
      r.push_back(B.vertex(radius * std::cos(th), radius * std::sin(th), h));
    }
    for (int i = 0; i < ring; ++i) B.edge(r[i], r[(i + 1) % ring]);
    return r;
  };
  // cylinder C over the circle, heights -1 .. 1
  std::vector<std::vector<int>> cyl;
  for (int k = 0; k < 5; ++k) cyl.push_back(make_ring(1.0, -1.0 + 0.5 * k));
  for (int k = 0; k + 1 < 5; ++k) B.band(cyl[k], cyl[k + 1]);
  int nC = int(B.xyz.size());
  CylinderModel M;
  M.m = m;
  M.x0 = cyl[4][0];
  // the arc x0 -> (1,0,2) -> (0,0,2) -> (0,0,0) = x1 in steps of 1/4
  std::vector<std::array<double, 3>> corners{{1, 0, 1}, {1, 0, 2}, {0, 0, 2}, {0, 0, 0}};
  int prev = M.x0;
  M.arc_length = Q(0);
  for (int s = 0; s < 3; ++s) {
    auto a = corners[s], b = corners[s + 1];
    double L = std::hypot(b[0] - a[0], b[1] - a[1], b[2] - a[2]);
    int steps = int(std::lround(L * 4));
    for (int i = 1; i <= steps; ++i) {
      double t = double(i) / steps;
      int v = B.vertex(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2]));
      B.edge(prev, v);
      M.arc_length += Q(1, 4);
      prev = v;
    }
  }
  M.x1 = prev;
  int nY = int(B.xyz.size());
  // sheet over the truncated sine curve: station u in [pi, pi(m+1)], x = 1/u,
  // ring of radius 1 - pi x at height sin(u), coned off at x1
  std::vector<int> last{};
  int stations = stations_per_half * m;
  for (int s = 1; s <= stations; ++s) {
    double u = pi + pi * s / stations_per_half;
    double h = s == stations ? 0.0 : std::sin(u);
    auto r = make_ring(1.0 - pi / u, h);
    if (s == 1) {
      for (int i = 0; i < ring; ++i) B.tri(M.x1, r[i], r[(i + 1) % ring]);
    } else {
      B.band(last, r);
    }
    last = r;
  }
  M.X = B.complex(int(B.xyz.size()), M.x0);
  M.Y = B.complex(nY, M.x0);
  M.C = B.complex(nC, M.x0);
  M.to_Y.resize(M.X.num_vertices());
  for (int v = 0; v < M.X.num_vertices(); ++v) M.to_Y[v] = v < nY ? v : M.x1;
  M.y_of_c.resize(nC);
  for (int v = 0; v < nC; ++v) M.y_of_c[v] = v;
  M.top_ring = cyl[4];
  M.top_ring.push_back(cyl[4][0]);
  M.mid_ring = cyl[2];
  M.last_ring = last;
  return M;
}

namespace {

// K' = X plus a band joining the last sheet ring to the height-0 cylinder ring;
// with ambient balls of radius r at the vertices every simplex of K' lies in
// the nerve once r exceeds the returned certification radius.
struct Bridge {
  MetricComplex K;
  double r_cert = 0;
};

Bridge bridged(const CylinderModel& M) {
  const MetricComplex& X = M.X;
  std::set<std::pair<int, int>> es;
  std::vector<Edge> edges = X.edges();
  for (auto& e : edges) es.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
  auto dist = [&](int a, int b) {
    auto &p = X.coords[a], &q = X.coords[b];
    return std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]);
  };
  std::vector<std::array<int, 3>> tris = X.triangles(), extra;
  auto add_edge = [&](int a, int b) {
    if (es.insert({std::min(a, b), std::max(a, b)}).second) edges.push_back({a, b, Q::from_double(dist(a, b))});
  };
  int n = int(M.last_ring.size());
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    const auto &lo = M.last_ring, &hi = M.mid_ring;
    for (auto t : {std::array<int, 3>{lo[i], lo[j], hi[i]}, std::array<int, 3>{lo[j], hi[j], hi[i]}}) {
      add_edge(t[0], t[1]);
      add_edge(t[1], t[2]);
      add_edge(t[0], t[2]);
      extra.push_back(t);
    }
  }
  Bridge b;
  // model simplices: witness at a vertex or the centroid (a point of X)
  auto need = [&](const std::array<int, 3>& t, bool in_model) {
    double best = 1e300;
    for (int w : t) best = std::min(best, std::max({dist(w, t[0]), dist(w, t[1]), dist(w, t[2])}));
    if (in_model) {
      std::array<double, 3> c{};
      for (int v : t)
        for (int d = 0; d < 3; ++d) c[d] += X.coords[v][d] / 3;
      double r = 0;
      for (int v : t)
        r = std::max(r, std::hypot(c[0] - X.coords[v][0], c[1] - X.coords[v][1], c[2] - X.coords[v][2]));
      best = std::min(best, r);
    }
    return best;
  };
  for (auto& e : X.edges()) b.r_cert = std::max(b.r_cert, dist(e.u, e.v));  // vertex stars inside their balls
  for (auto& t : tris) b.r_cert = std::max(b.r_cert, need(t, true));
  for (auto& t : extra) b.r_cert = std::max(b.r_cert, need(t, false));
  tris.insert(tris.end(), extra.begin(), extra.end());
  b.K = MetricComplex(X.num_vertices(), std::move(edges), std::move(tris), X.basepoint());
  b.K.coords = X.coords;
  return b;
}

}  // namespace

ScenarioReport cylinder_demo(const std::vector<int>& ms, const RunSettings& cfg) {
  ScenarioReport rep;
  rep.scenario = "cylinder";
  rep.provenance = settings_json(cfg);
  rep.provenance["truncations"] = ms;
  const std::vector<double> ladder{0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0, 1.25};
  rep.provenance["cover_radii"] = json::array();
  for (double x : ladder) rep.provenance["cover_radii"].push_back(fmt_double(x));
  Q slack(2, cfg.grid);
  struct Row {
    Q lower, eps0, sysY, arc;
    Tri gen_in_X = Tri::Unknown, gen_in_K = Tri::Unknown;
    Q lip;
    double r_cert = 0;
    int nv = 0, nt = 0;
    double r_kill = -1;
  };
  auto rows = parallel_map<Row>(int(ms.size()), cfg.threads, [&](int i) {
    CylinderModel M = cylinder_model(ms[i]);
    Row r;
    r.nv = M.X.num_vertices();
    r.nt = int(M.X.triangles().size());
    auto PX = presentation(M.X);
    Word g = walk_word(M.X, PX, M.top_ring);
    r.gen_in_X = is_trivial(g, PX);
    auto ctxY = RhoContext::of(M.Y, cfg.grid, cfg.budget);
    SimplicialMap ret(M.X, M.Y, M.to_Y);
    r.lip = ret.lipschitz();
    Word gy = induced_hom(ret, PX, ctxY.P).apply(g);
    r.lower = rho_lower(ctxY, gy, {}).value;
    r.sysY = *M.Y.systole();
    r.arc = M.arc_length;
    r.eps0 = qmin(r.arc / Q(3), r.sysY / Q(2)) - slack;
    Bridge b = bridged(M);
    r.r_cert = b.r_cert;
    auto PK = presentation(b.K);
    r.gen_in_K = is_trivial(walk_word(b.K, PK, M.top_ring), PK);
    if (r.gen_in_K == Tri::True)
      for (double rad : ladder)
        if (rad > r.r_cert) {
          r.r_kill = rad;
          break;
        }
    return r;
  });
  // the constant is the same for every m: Y does not depend on m
  Q eps0 = rows.empty() ? Q(0) : rows[0].eps0;
  bool uniform = true, kills = true, sep = true, lip = true, ess = true;
  json table = json::array();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const Row& r = rows[i];
    uniform &= r.eps0 == eps0;
    sep &= r.lower >= eps0 && eps0 > Q(0);
    lip &= r.lip <= Q(1);
    ess &= r.gen_in_X != Tri::True;
    kills &= r.r_kill > 0;
    table.push_back({{"m", ms[i]},
                     {"vertices", r.nv},
                     {"triangles", r.nt},
                     {"lower", r.lower.str()},
                     {"lower_decimal", r.lower.decimal()},
                     {"eps0", r.eps0.str()},
                     {"systole_Y", r.sysY.str()},
                     {"generator_trivial_in_X", to_string(r.gen_in_X)},
                     {"generator_trivial_in_bridged_nerve", to_string(r.gen_in_K)},
                     {"r_cert", fmt_double(r.r_cert)},
                     {"r_kill", r.r_kill > 0 ? json(fmt_double(r.r_kill)) : json(nullptr)}});
  }
  rep.tables["truncations"] = table;
  rep.add({"separation/lower-bound", sep ? Status::Pass : Status::Fail,
           {{"eps0", eps0.str()}, {"eps0_decimal", eps0.decimal()}, {"slack", slack.str()}}, {}});
  rep.add({"separation/eps0-uniform", uniform ? Status::Pass : Status::Fail, {{"eps0", eps0.str()}}, {}});
  rep.add({"separation/retraction-1-lipschitz", lip ? Status::Pass : Status::Fail, {}, {}});
  rep.add({"separation/generator-essential", ess ? Status::Pass : Status::Fail, {}, {}});
  rep.add({"shape/coarse-cover-kills-generator", kills ? Status::Pass : Status::Fail, {}, {}});

  // the cylinder alone: lower = circumference/2 - slack
  CylinderModel M = cylinder_model(1);
  auto ctxC = RhoContext::of(M.C, cfg.grid, cfg.budget);
  std::vector<int> ring(M.top_ring);
  Q circ(0);
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) circ += M.C.edge(M.C.edge_between(ring[i], ring[i + 1])).len;
  Q lowC = rho_lower(ctxC, walk_word(M.C, ctxC.P, ring), {}).value;
  rep.add({"cylinder-only/lower", lowC == circ / Q(2) - slack ? Status::Pass : Status::Fail,
           {{"lower", lowC.str()}, {"circumference", circ.str()}, {"lower_decimal", lowC.decimal()}}, {}});
  return rep;
}

ScenarioReport punctured_plane_demo(int n_max, const RunSettings& cfg) {
  ScenarioReport rep;
  rep.scenario = "punctured-plane";
  rep.provenance = settings_json(cfg);
  rep.provenance["depth"] = n_max;
  const double tol = 0.01;
  auto Y = AnalyticSpace::punctured_plane();
  struct Row {
    double upper = 0;
    int wa = 0, wb = 0;
  };
  auto rows = parallel_map<Row>(n_max, cfg.threads, [&](int i) {
    auto b = punctured_plane_upper(Y, i + 1);
    return Row{b.upper, winding_number(b.alpha), winding_number(b.beta)};
  });
  bool bound = true, dec = true, cls = true;
  json table = json::array();
  for (int i = 0; i < n_max; ++i) {
    int n = i + 1;
    bound &= rows[i].upper <= 2.0 / n + tol;
    if (i > 0) dec &= rows[i].upper < rows[i - 1].upper;
    cls &= rows[i].wa == 1 && rows[i].wb == 0;
    table.push_back({{"n", n}, {"upper", fmt_double(rows[i].upper)}, {"target", fmt_double(2.0 / n)}});
  }
  rep.tables["plane_upper"] = table;
  rep.add({"plane/upper-within-2-over-n", bound ? Status::Pass : Status::Fail, {{"tolerance", fmt_double(tol)}}, {}});
  rep.add({"plane/strictly-decreasing", dec ? Status::Pass : Status::Fail, {}, {}});
  rep.add({"plane/witness-classes", cls ? Status::Pass : Status::Fail, {}, {}});
  auto Z = AnalyticSpace::cylinder(2 * std::numbers::pi);
  auto cb = cylinder_bounds(Z);
  rep.add({"cylinder/lower-half-circumference", cb.lower >= std::numbers::pi - tol ? Status::Pass : Status::Fail,
           {{"lower", fmt_double(cb.lower)}, {"upper", fmt_double(cb.upper)}, {"circumference", fmt_double(Z.circumference)}}, {}});
  double last = n_max > 0 ? rows.back().upper : 0;
  rep.add({"dichotomy", last < cb.lower ? Status::Pass : Status::Fail,
           {{"plane_upper_last", fmt_double(last)}, {"cylinder_lower", fmt_double(cb.lower)}}, {}});
  return rep;
}

ScenarioReport shape_injectivity_probe(const InverseSystem& S, const RunSettings& cfg) {
  ScenarioReport rep;
  rep.scenario = "shape-injectivity";
  rep.provenance = settings_json(cfg);
  rep.provenance["depth"] = S.depth();
  auto ctx = RhoContext::of(S, cfg.grid, cfg.budget);
  std::mt19937_64 rng(cfg.seed);
  std::vector<Word> ws{{1, 2, -1, -2}};
  if (S.pres(S.depth()).rank < 2) ws.clear();
  while (int(ws.size()) < cfg.samples) ws.push_back(random_reduced_word(rng, S.pres(S.depth()).rank, cfg.max_len, true));
  struct R {
    int first = -1;
    Q lower;
  };
  auto res = parallel_map<R>(int(ws.size()), cfg.threads, [&](int i) {
    return R{psi(S, make_thread(S, ws[i])).first_nontrivial, rho_lower(ctx, ws[i], {}).value};
  });
  int seen = 0, positive = 0;
  std::vector<Word> gaps, odd;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (res[i].first > 0) ++seen;
    if (res[i].lower > Q(0)) ++positive;
    if (res[i].first < 0 && res[i].lower == Q(0)) gaps.push_back(ws[i]);
    else if (res[i].first < 0 || res[i].lower == Q(0)) odd.push_back(ws[i]);
  }
  CheckRecord c{"injectivity/sample", gaps.empty() && odd.empty() ? Status::Pass : Status::Unknown,
                {{"sampled", int(ws.size())}, {"psi_nontrivial", seen}, {"lower_positive", positive}, {"gap_candidates", int(gaps.size())}},
                {}};
  if (!gaps.empty()) c.witness["gap_candidates"] = words_json(gaps);
  if (!odd.empty()) c.witness["partial"] = words_json(odd);
  rep.add(c);
  if (!ws.empty() && ws[0] == Word{1, 2, -1, -2})
    rep.add({"injectivity/commutator", res[0].first == 2 && res[0].lower > Q(0) ? Status::Pass : Status::Fail,
             {{"first_nontrivial_level", res[0].first}, {"lower", res[0].lower.str()}}, {}});
  return rep;
}

ScenarioReport lemma_suite(const RhoContext& c, const std::string& label, const RunSettings& cfg) {
  ScenarioReport rep;
  rep.scenario = "lemmas";
  rep.provenance = settings_json(cfg);
  rep.provenance["space"] = label;
  std::mt19937_64 rng(cfg.seed);
  std::vector<Triple> ts;
  for (int i = 0; i < cfg.samples; ++i) {
    Word a = random_reduced_word(rng, c.P.rank, cfg.max_len);
    Word b = random_reduced_word(rng, c.P.rank, cfg.max_len);
    Word d = random_reduced_word(rng, c.P.rank, cfg.max_len);
    ts.push_back({a, b, d});
  }
  auto parts = parallel_map<LemmaReport>(int(ts.size()), cfg.threads, [&](int i) { return verify_lemma_chain(c, {ts[i]}); });
  LemmaReport all;
  all.worst_triangle_excess = Q(0);
  json ce = json::array();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    all.triples += p.triples;
    all.reversal += p.reversal;
    all.translation += p.translation;
    all.max_law += p.max_law;
    all.triangle += p.triangle;
    all.worst_triangle_excess = qmax(all.worst_triangle_excess, p.worst_triangle_excess);
    for (auto& s : p.counterexamples) ce.push_back(s);
  }
  auto st = [](int v) { return v == 0 ? Status::Pass : Status::Fail; };
  json w = ce.empty() ? json::object() : json{{"counterexamples", ce}};
  rep.add({label + "/reversal", st(all.reversal), {{"triples", all.triples}, {"violations", all.reversal}}, w});
  rep.add({label + "/translation", st(all.translation), {{"triples", all.triples}, {"violations", all.translation}}, w});
  rep.add({label + "/max-law", st(all.max_law), {{"triples", all.triples}, {"violations", all.max_law}}, w});
  rep.add({label + "/triangle", st(all.triangle),
           {{"triples", all.triples}, {"violations", all.triangle}, {"worst_excess", all.worst_triangle_excess.str()},
            {"allowed_slack", Q(2, c.grid).str()}},
           w});
  return rep;
}

ScenarioReport metric_independence_scenario(const MetricComplex& X1, const MetricComplex& X2,
                                            const std::vector<Q>& radii, const RunSettings& cfg) {
  ScenarioReport rep;
  rep.scenario = "metric-independence";
  rep.provenance = settings_json(cfg);
  json rj = json::array();
  for (const Q& r : radii) rj.push_back(r.str());
  rep.provenance["radii"] = rj;
  int rank = presentation(X1).rank;
  std::mt19937_64 rng(cfg.seed);
  std::vector<Word> ws;
  for (int i = 0; i < cfg.samples; ++i) ws.push_back(random_reduced_word(rng, rank, cfg.max_len));
  int chunk = std::max(1, cfg.threads);
  auto parts = parallel_map<IndependenceReport>(chunk, chunk, [&](int w) {
    std::vector<Word> mine;
    for (std::size_t i = w; i < ws.size(); i += chunk) mine.push_back(ws[i]);
    return metric_independence_check(X1, X2, mine, radii, cfg.grid, cfg.budget);
  });
  IndependenceReport all = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    all.queries += parts[i].queries;
    all.disagreements += parts[i].disagreements;
    all.transport_failures += parts[i].transport_failures;
    all.decided += parts[i].decided;
    all.counterexamples.insert(all.counterexamples.end(), parts[i].counterexamples.begin(), parts[i].counterexamples.end());
  }
  std::sort(all.counterexamples.begin(), all.counterexamples.end());
  json w = all.counterexamples.empty() ? json::object() : json{{"counterexamples", all.counterexamples}};
    // nothing decided would make agreement vacuous
  Status agree = all.disagreements ? Status::Fail : (all.decided ? Status::Pass : Status::Unknown);
  rep.add({"verdicts-agree", agree,
           {{"L12", all.L12.str()}, {"L21", all.L21.str()}, {"classes", int(ws.size())}, {"queries", all.queries},
            {"decided_pairs", all.decided}, {"disagreements", all.disagreements}},
           w});
  rep.add({"witness-transport", all.transport_failures == 0 ? Status::Pass : Status::Fail,
           {{"failures", all.transport_failures}}, w});
  return rep;
}

}  // namespace pimet
