#include <doctest.h>

#include <string>

#include "kacward/corpus.hpp"
#include "kacward/error.hpp"
#include "kacward/graph_file.hpp"
#include "kacward/report.hpp"

using namespace kw;

namespace {

std::string data(const std::string& name) { return read_text_file(std::string(KW_DATA_DIR) + "/" + name); }

ErrorCode parse_code(const std::string& text) {
  try {
    parse_graph_file(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::check_failed;
}

}  // namespace

TEST_SUITE("files") {

TEST_CASE("bundled graphs parse") {
  const auto sq = parse_graph_file(data("square.json"));
  CHECK(sq.projection.vertices.size() == 4);
  CHECK(sq.projection.edges.size() == 4);
  CHECK(sq.mode == WeightMode::coupling);
  const auto w = parse_graph_file(data("square_weights.json"));
  CHECK(w.mode == WeightMode::weight);
  CHECK(w.values[0] == 0.3);
  const auto cs = parse_graph_file(data("crossed_square.json"));
  CHECK(cs.crossed_pairs.size() == 1);
  const auto d = parse_graph_file(data("grid3x3_disorder.json"));
  CHECK(d.disorder_lines.size() == 2);
}

TEST_CASE("round trip") {
  for (const char* name : {"square.json", "k4_weights.json", "crossed_square.json", "grid3x3_disorder.json"}) {
    const auto a = parse_graph_file(data(name));
    const auto b = parse_graph_file(serialize_graph_file(a));
    CHECK(same_graph_file(a, b));
  }
  auto rng = corpus_rng(8);
  const auto spec = random_planar_projection(8, 12, rng);
  std::vector<double> j(spec.edges.size());
  for (std::size_t e = 0; e < j.size(); ++e) j[e] = 0.1 * static_cast<double>(e) - 0.4;
  const auto f = graph_file_from_projection(spec, WeightMode::coupling, j);
  const auto g = parse_graph_file(serialize_graph_file(f));
  CHECK(same_graph_file(f, g));
  CHECK(g.values == j);
}

TEST_CASE("coupling defaults to one") {
  const auto f = parse_graph_file(R"({"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0}],
                                      "edges":[{"id":0,"u":0,"v":1}]})");
  CHECK(f.values == std::vector<double>{1.0});
}

TEST_CASE("malformed documents are input errors") {
  CHECK(parse_code(data("malformed.json")) == ErrorCode::input);
  CHECK(parse_code("[]") == ErrorCode::input);
  CHECK(parse_code(R"({"vertices":[]})") == ErrorCode::input);
  CHECK(parse_code(R"({"vertices":[{"id":0,"x":0,"y":0},{"id":0,"x":1,"y":0}],"edges":[]})") == ErrorCode::input);
  CHECK(parse_code(R"({"vertices":[{"id":0,"x":0,"y":0}],"edges":[{"id":0,"u":0,"v":3}]})") == ErrorCode::input);
  CHECK(parse_code(R"({"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0}],
                       "edges":[{"id":0,"u":0,"v":1,"J":1,"W":0.5}]})") == ErrorCode::input);
  CHECK(parse_code(R"({"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0},{"id":2,"x":2,"y":1}],
                       "edges":[{"id":0,"u":0,"v":1,"W":0.5},{"id":1,"u":1,"v":2}]})") == ErrorCode::input);
  CHECK(parse_code(R"({"vertices":[{"id":0,"x":"a","y":0}],"edges":[]})") == ErrorCode::input);
  CHECK_THROWS_AS(read_text_file("/nonexistent/graph.json"), Error);
}

TEST_CASE("report formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::nan("")) == "null");
  CHECK(fnv1a_digest("") == "fnv1a64:cbf29ce484222325");
  ReportJson r = make_report("test", fnv1a_digest("abc"));
  r["outputs"]["x"] = 1.5;
  r["outputs"]["v"] = std::vector<double>{1.0, 2.0};
  const std::string s = dump_report(r);
  CHECK(s.find("\"schema\": 1") != std::string::npos);
  CHECK(s.find("[1, 2]") != std::string::npos);
  CHECK(ReportJson::parse(s)["command"] == "test");
}

}
