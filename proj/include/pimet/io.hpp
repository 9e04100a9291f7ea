#pragma once
// JSON in and out: complexes, covers, inverse systems, words, loops.
// Lengths travel as decimal or n/d strings and are read back exactly.

#include <string>

#include "json.hpp"
#include "pimet/cover.hpp"
#include "pimet/limitsys.hpp"
#include "pimet/loop.hpp"

namespace pimet {

using json = nlohmann::json;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// file name -> existing path: as given, then under $PIMET_DATA_DIR, then the
// bundled data directory. Throws InputError when none exists.
std::string resolve_data_path(const std::string& name);
json read_json_file(const std::string& path);

Q q_from_json(const json& j);  // "0.3", "1/3", or an integer
json q_json(const Q& q);       // exact string

MetricComplex complex_from_json(const json& j);
json complex_json(const MetricComplex& X);
MetricComplex load_complex(const std::string& name);

Point point_from_json(const MetricComplex& X, const json& j);  // vertex id or {"edge":e,"t":"1/2"}
json point_json(const Point& p);

Cover cover_from_json(const MetricComplex& X, const json& j);
json cover_json(const Cover& U);

// {"levels":[...],"bondings":[[...]],"sections":[[...]]} or
// {"shrinking_wedge":[...],"depth":J}; pieces cycle when depth exceeds them.
// depth > 0 overrides the file's depth for the builder form.
InverseSystem system_from_json(const json& j, int depth = 0);
InverseSystem load_system(const std::string& name, int depth = 0);

Word parse_word(const std::string& s);  // "[1,-2]"
Word word_from_json(const json& j);
json word_json(const Word& w);

json loop_json(const DiscreteLoop& a);

// {"words":[w_1,...,w_J]}, w_k over the level-k presentation
Thread thread_from_json(const json& j);
json thread_json(const Thread& t);

}  // namespace pimet
