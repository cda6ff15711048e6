#include "kacward/graph_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kacward/error.hpp"
#include "kacward/report.hpp"

namespace kw {

namespace {

using json = nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCode::input, where + ": missing field '" + key + "'");
  return *it;
}

std::int64_t get_id(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) fail(ErrorCode::input, where + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(ErrorCode::input, where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(ErrorCode::input, where + " must be finite");
  return x;
}

std::vector<Point2> get_points(const json& v, const std::string& where) {
  if (!v.is_array()) fail(ErrorCode::input, where + " must be an array of [x, y] pairs");
  std::vector<Point2> pts;
  for (const auto& p : v) {
    if (!p.is_array() || p.size() != 2) fail(ErrorCode::input, where + " must be an array of [x, y] pairs");
    pts.push_back({get_number(p[0], where + " coordinate"), get_number(p[1], where + " coordinate")});
  }
  return pts;
}

}  // namespace

GraphFile parse_graph_file(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::input, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::input, "graph file must be a JSON object");
  GraphFile g;
  const json& vertices = field(doc, "vertices", "graph file");
  const json& edges = field(doc, "edges", "graph file");
  if (!vertices.is_array() || !edges.is_array()) fail(ErrorCode::input, "'vertices' and 'edges' must be arrays");
  std::set<std::int64_t> vids, eids;
  for (const auto& v : vertices) {
    if (!v.is_object()) fail(ErrorCode::input, "vertex entries must be objects");
    VertexSpec vs;
    vs.id = get_id(v, "id", "vertex");
    const std::string where = "vertex " + std::to_string(vs.id);
    vs.pos = {get_number(field(v, "x", where), where + " x"), get_number(field(v, "y", where), where + " y")};
    if (!vids.insert(vs.id).second) fail(ErrorCode::input, "duplicate vertex id " + std::to_string(vs.id));
    g.projection.vertices.push_back(vs);
  }
  int with_j = 0, with_w = 0;
  std::vector<double> j_values, w_values;
  for (const auto& e : edges) {
    if (!e.is_object()) fail(ErrorCode::input, "edge entries must be objects");
    EdgeSpec es;
    es.id = get_id(e, "id", "edge");
    const std::string where = "edge " + std::to_string(es.id);
    es.u = get_id(e, "u", where);
    es.v = get_id(e, "v", where);
    if (!eids.insert(es.id).second) fail(ErrorCode::input, "duplicate edge id " + std::to_string(es.id));
    if (!vids.count(es.u) || !vids.count(es.v)) fail(ErrorCode::input, where + " references an unknown vertex");
    if (e.contains("polyline")) es.polyline = get_points(e["polyline"], where + " polyline");
    const bool has_j = e.contains("J");
    const bool has_w = e.contains("W");
    if (has_j && has_w) fail(ErrorCode::input, where + " sets both J and W");
    with_j += has_j;
    with_w += has_w;
    j_values.push_back(has_j ? get_number(e["J"], where + " J") : 1.0);
    w_values.push_back(has_w ? get_number(e["W"], where + " W") : 0.0);
    g.projection.edges.push_back(es);
  }
  if (with_w > 0 && (with_j > 0 || with_w != static_cast<int>(edges.size()))) {
    fail(ErrorCode::input, "W-mode files must give W on every edge and no J");
  }
  g.mode = with_w > 0 ? WeightMode::weight : WeightMode::coupling;
  g.values = g.mode == WeightMode::weight ? w_values : j_values;
  if (doc.contains("crossed_pairs")) {
    const json& cps = doc["crossed_pairs"];
    if (!cps.is_array()) fail(ErrorCode::input, "'crossed_pairs' must be an array");
    for (const auto& c : cps) {
      if (!c.is_object()) fail(ErrorCode::input, "crossed pair entries must be objects");
      CrossedPairSpec cp;
      cp.alpha = get_id(c, "alpha", "crossed pair");
      cp.edge_plus = get_id(c, "edge_plus", "crossed pair");
      cp.edge_minus = get_id(c, "edge_minus", "crossed pair");
      if (!eids.count(cp.edge_plus) || !eids.count(cp.edge_minus)) {
        fail(ErrorCode::input, "crossed pair " + std::to_string(cp.alpha) + " references an unknown edge");
      }
      g.crossed_pairs.push_back(cp);
    }
  }
  if (doc.contains("disorder_lines")) {
    const json& lines = doc["disorder_lines"];
    if (!lines.is_array()) fail(ErrorCode::input, "'disorder_lines' must be an array");
    for (const auto& l : lines) {
      if (!l.is_object()) fail(ErrorCode::input, "disorder line entries must be objects");
      DisorderLineSpec d;
      d.id = get_id(l, "id", "disorder line");
      d.points = get_points(field(l, "points", "disorder line"), "disorder line points");
      g.disorder_lines.push_back(d);
    }
  }
  return g;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::input, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string serialize_graph_file(const GraphFile& g) {
  ReportJson doc;
  doc["vertices"] = ReportJson::array();
  for (const auto& v : g.projection.vertices) doc["vertices"].push_back({{"id", v.id}, {"x", v.pos.x}, {"y", v.pos.y}});
  doc["edges"] = ReportJson::array();
  for (std::size_t i = 0; i < g.projection.edges.size(); ++i) {
    const auto& e = g.projection.edges[i];
    ReportJson je{{"id", e.id}, {"u", e.u}, {"v", e.v}};
    if (!e.polyline.empty()) {
      je["polyline"] = ReportJson::array();
      for (const auto& p : e.polyline) je["polyline"].push_back({p.x, p.y});
    }
    je[g.mode == WeightMode::weight ? "W" : "J"] = g.values.at(i);
    doc["edges"].push_back(je);
  }
  if (!g.crossed_pairs.empty()) {
    doc["crossed_pairs"] = ReportJson::array();
    for (const auto& c : g.crossed_pairs) {
      doc["crossed_pairs"].push_back({{"alpha", c.alpha}, {"edge_plus", c.edge_plus}, {"edge_minus", c.edge_minus}});
    }
  }
  if (!g.disorder_lines.empty()) {
    doc["disorder_lines"] = ReportJson::array();
    for (const auto& d : g.disorder_lines) {
      ReportJson pts = ReportJson::array();
      for (const auto& p : d.points) pts.push_back({p.x, p.y});
      doc["disorder_lines"].push_back({{"id", d.id}, {"points", pts}});
    }
  }
  return dump_report(doc) + "\n";
}

bool same_graph_file(const GraphFile& a, const GraphFile& b) {
  const auto& pa = a.projection;
  const auto& pb = b.projection;
  if (a.mode != b.mode || a.values != b.values) return false;
  if (pa.vertices.size() != pb.vertices.size() || pa.edges.size() != pb.edges.size()) return false;
  for (std::size_t i = 0; i < pa.vertices.size(); ++i) {
    if (pa.vertices[i].id != pb.vertices[i].id || !(pa.vertices[i].pos == pb.vertices[i].pos)) return false;
  }
  for (std::size_t i = 0; i < pa.edges.size(); ++i) {
    const auto& x = pa.edges[i];
    const auto& y = pb.edges[i];
    if (x.id != y.id || x.u != y.u || x.v != y.v || x.polyline != y.polyline) return false;
  }
  if (a.crossed_pairs.size() != b.crossed_pairs.size() || a.disorder_lines.size() != b.disorder_lines.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.crossed_pairs.size(); ++i) {
    const auto& x = a.crossed_pairs[i];
    const auto& y = b.crossed_pairs[i];
    if (x.alpha != y.alpha || x.edge_plus != y.edge_plus || x.edge_minus != y.edge_minus) return false;
  }
  for (std::size_t i = 0; i < a.disorder_lines.size(); ++i) {
    if (a.disorder_lines[i].id != b.disorder_lines[i].id || a.disorder_lines[i].points != b.disorder_lines[i].points) {
      return false;
    }
  }
  return true;
}

GraphFile graph_file_from_projection(const ProjectionSpec& spec, WeightMode mode, std::vector<double> values) {
  if (values.size() != spec.edges.size()) fail(ErrorCode::input, "one weight per edge required");
  GraphFile g;
  g.projection = spec;
  g.mode = mode;
  g.values = std::move(values);
  return g;
}

}  // namespace kw
