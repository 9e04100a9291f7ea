#include "pimet/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace pimet {

namespace fs = std::filesystem;

std::string resolve_data_path(const std::string& name) {
  if (fs::exists(name)) return name;
  if (const char* env = std::getenv("PIMET_DATA_DIR")) {
    fs::path p = fs::path(env) / name;
    if (fs::exists(p)) return p.string();
  }
#ifdef PIMET_SOURCE_DATA_DIR
  fs::path p = fs::path(PIMET_SOURCE_DATA_DIR) / name;
  if (fs::exists(p)) return p.string();
#endif
  throw InputError("no such file: " + name);
}

json read_json_file(const std::string& path) {
  std::ifstream in(resolve_data_path(path));
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

Q q_from_json(const json& j) {
  if (j.is_number_integer()) return Q(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Q::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw InputError("bad length '" + j.get<std::string>() + "'");
    }
  }
  throw InputError("lengths must be strings or integers: " + j.dump());
}

json q_json(const Q& q) { return q.str(); }

MetricComplex complex_from_json(const json& j) {
  try {
    int n = j.at("vertices").is_array() ? int(j.at("vertices").size()) : j.at("vertices").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), q_from_json(e.at(2))});
    std::vector<std::array<int, 3>> tris;
    if (j.contains("triangles"))
      for (const auto& t : j["triangles"]) tris.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    MetricComplex X(n, std::move(edges), std::move(tris), j.value("basepoint", 0));
    if (j.contains("coords"))
      for (const auto& c : j["coords"]) X.coords.push_back({c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()});
    return X;
  } catch (const json::exception& e) {
    throw InputError(std::string("complex JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("complex JSON: ") + e.what());
  }
}

json complex_json(const MetricComplex& X) {
  json j;
  j["vertices"] = X.num_vertices();
  j["edges"] = json::array();
  for (const Edge& e : X.edges()) j["edges"].push_back({e.u, e.v, e.len.str()});
  j["triangles"] = json::array();
  for (const auto& t : X.triangles()) j["triangles"].push_back({t[0], t[1], t[2]});
  j["basepoint"] = X.basepoint();
  return j;
}

MetricComplex load_complex(const std::string& name) { return complex_from_json(read_json_file(name)); }

Point point_from_json(const MetricComplex& X, const json& j) {
  try {
    if (j.is_number_integer()) {
      int v = j.get<int>();
      if (v < 0 || v >= X.num_vertices()) throw InputError("vertex out of range");
      return Point::at(v);
    }
    int e = j.at("edge").get<int>();
    if (e < 0 || e >= X.num_edges()) throw InputError("edge out of range");
    Q t = q_from_json(j.at("t"));
    if (t < Q(0) || t > Q(1)) throw InputError("offset outside [0,1]");
    return X.point(e, t);
  } catch (const json::exception& e) {
    throw InputError(std::string("point JSON: ") + e.what());
  }
}

json point_json(const Point& p) {
  if (p.is_vertex()) return p.vertex;
  return json{{"edge", p.edge}, {"t", p.t.str()}};
}

Cover cover_from_json(const MetricComplex& X, const json& j) {
  Cover U;
  U.X = &X;
  try {
    for (const auto& b : j.at("balls")) U.balls.push_back({point_from_json(X, b.at("center")), q_from_json(b.at("radius"))});
    U.distinguished = j.value("distinguished", 0);
  } catch (const json::exception& e) {
    throw InputError(std::string("cover JSON: ") + e.what());
  }
  if (U.balls.empty() || U.distinguished < 0 || U.distinguished >= int(U.balls.size()))
    throw InputError("cover JSON: no balls or bad distinguished element");
  return U;
}

json cover_json(const Cover& U) {
  json j;
  j["balls"] = json::array();
  for (const Ball& b : U.balls) j["balls"].push_back({{"center", point_json(b.center)}, {"radius", b.radius.str()}});
  j["distinguished"] = U.distinguished;
  return j;
}

namespace {
MetricComplex complex_ref(const json& j) {
  return j.is_string() ? load_complex(j.get<std::string>()) : complex_from_json(j);
}
}  // namespace

InverseSystem system_from_json(const json& j, int depth) {
  try {
    if (j.contains("shrinking_wedge")) {
      std::vector<MetricComplex> given;
      for (const auto& p : j["shrinking_wedge"]) given.push_back(complex_ref(p));
      if (given.empty()) throw InputError("shrinking_wedge: no pieces");
      int J = depth > 0 ? depth : j.value("depth", int(given.size()));
      if (J < 1) throw InputError("shrinking_wedge: depth must be positive");
      std::vector<MetricComplex> pieces;
      for (int k = 0; k < J; ++k) pieces.push_back(given[k % given.size()]);
      return shrinking_wedge(pieces);
    }
    std::vector<MetricComplex> levels;
    for (const auto& l : j.at("levels")) levels.push_back(complex_ref(l));
    auto maps = [&](const char* key) {
      std::vector<std::vector<int>> m;
      for (const auto& x : j.at(key)) m.push_back(x.get<std::vector<int>>());
      return m;
    };
    return InverseSystem(std::move(levels), maps("bondings"), maps("sections"));
  } catch (const json::exception& e) {
    throw InputError(std::string("system JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("system JSON: ") + e.what());
  }
}

InverseSystem load_system(const std::string& name, int depth) {
  return system_from_json(read_json_file(name), depth);
}

Word word_from_json(const json& j) {
  if (!j.is_array()) throw InputError("a word is a JSON array of nonzero integers");
  Word w;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<int>() == 0) throw InputError("a word is a JSON array of nonzero integers");
    w.push_back(x.get<int>());
  }
  return w;
}

Word parse_word(const std::string& s) {
  json j;
  try {
    j = json::parse(s);
  } catch (const json::parse_error&) {
    throw InputError("malformed word '" + s + "'");
  }
  return word_from_json(j);
}

json word_json(const Word& w) { return json(w); }

json loop_json(const DiscreteLoop& a) {
  json j;
  j["N"] = a.N();
  j["samples"] = json::array();
  for (const Point& p : a.s) j["samples"].push_back(point_json(p));
  return j;
}

Thread thread_from_json(const json& j) {
  Thread t;
  if (!j.is_object() || !j.contains("words") || !j["words"].is_array())
    throw InputError("thread JSON: expected {\"words\":[...]}");
  for (const auto& w : j["words"]) t.words.push_back(word_from_json(w));
  if (t.words.empty()) throw InputError("thread JSON: no words");
  return t;
}

json thread_json(const Thread& t) {
  json j;
  j["words"] = json::array();
  for (const Word& w : t.words) j["words"].push_back(word_json(w));
  return j;
}

}  // namespace pimet
