#include "kacward/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "kacward/error.hpp"

namespace kw {

double norm(Point2 a) { return std::hypot(a.x, a.y); }
double distance(Point2 a, Point2 b) { return norm(a - b); }

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

Polyline Polyline::reversed() const {
  return Polyline{std::vector<Point2>(points.rbegin(), points.rend())};
}

namespace {

std::string fmt_point(Point2 p) {
  std::ostringstream os;
  os.precision(10);
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

bool reversing(Point2 a, Point2 b) {
  return std::abs(cross(a, b)) <= 1e-12 * norm(a) * norm(b) && dot(a, b) < 0.0;
}

bool same_direction(Point2 a, Point2 b) {
  return std::abs(cross(a, b)) <= kGeomEps * norm(a) * norm(b) && dot(a, b) > 0.0;
}

std::string polyline_problem(const Polyline& line) {
  if (line.points.size() < 2) return "fewer than two points";
  for (const auto& p : line.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return "non-finite coordinate";
  }
  for (std::size_t k = 0; k + 1 < line.points.size(); ++k) {
    if (distance(line.points[k], line.points[k + 1]) <= kGeomEps) {
      return "zero-length segment at point " + std::to_string(k);
    }
  }
  for (std::size_t k = 1; k + 1 < line.points.size(); ++k) {
    const Point2 a = line.points[k] - line.points[k - 1];
    const Point2 b = line.points[k + 1] - line.points[k];
    if (reversing(a, b)) return "segment reverses at point " + std::to_string(k);
  }
  return {};
}

}  // namespace

void check_polyline(const Polyline& line, const std::string& what) {
  const std::string problem = polyline_problem(line);
  if (!problem.empty()) fail(ErrorCode::geometry, what + ": " + problem);
}

double joint_turn(Point2 a, Point2 b) {
  if (reversing(a, b)) fail(ErrorCode::geometry, "backtracking excluded");
  double angle = std::atan2(cross(a, b), dot(a, b));
  if (angle <= -kPi) angle = kPi;
  return angle;
}

double interior_turning(const Polyline& line) {
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < line.points.size(); ++k) {
    total += joint_turn(line.points[k] - line.points[k - 1], line.points[k + 1] - line.points[k]);
  }
  return total;
}

double turning_angle(const Polyline& e_in, const Polyline& e_out) {
  if (distance(e_in.back(), e_out.front()) > kGeomEps) {
    fail(ErrorCode::geometry, "turning_angle: curves are not consecutive");
  }
  return interior_turning(e_in) + joint_turn(e_in.final_direction(), e_out.initial_direction());
}

SegmentCrossing segment_crossing(Point2 a1, Point2 a2, Point2 b1, Point2 b2) {
  SegmentCrossing out;
  const Point2 da = a2 - a1;
  const Point2 db = b2 - b1;
  const double o1 = cross(da, b1 - a1);
  const double o2 = cross(da, b2 - a1);
  const double o3 = cross(db, a1 - b1);
  const double o4 = cross(db, a2 - b1);
  if (!((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0))) return out;
  if (!((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return out;
  const double denom = cross(da, db);
  out.crosses = true;
  out.t = cross(b1 - a1, db) / denom;
  out.s = cross(b1 - a1, da) / denom;
  out.point = a1 + out.t * da;
  return out;
}

const char* violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::bad_id: return "bad_id";
    case ViolationKind::coincident_vertices: return "coincident_vertices";
    case ViolationKind::self_loop: return "self_loop";
    case ViolationKind::degenerate_polyline: return "degenerate_polyline";
    case ViolationKind::endpoint_mismatch: return "endpoint_mismatch";
    case ViolationKind::vertex_on_edge: return "vertex_on_edge";
    case ViolationKind::edge_not_simple: return "edge_not_simple";
    case ViolationKind::overlap: return "overlap";
    case ViolationKind::non_transversal: return "non_transversal";
    case ViolationKind::triple_point: return "triple_point";
  }
  return "unknown";
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << violations.size() << " geometry violation(s)";
  for (const auto& v : violations) os << "\n  [" << violation_name(v.kind) << "] " << v.message;
  return os.str();
}

namespace {

struct Seg {
  int edge;   // index into the resolved edge list
  int k;      // segment index within the edge
  int last;   // index of the final segment
  Point2 a, b;
};

bool boxes_apart(const Seg& s, const Seg& t) {
  const double e = kGeomEps;
  return std::max(s.a.x, s.b.x) + e < std::min(t.a.x, t.b.x) ||
         std::max(t.a.x, t.b.x) + e < std::min(s.a.x, s.b.x) ||
         std::max(s.a.y, s.b.y) + e < std::min(t.a.y, t.b.y) ||
         std::max(t.a.y, t.b.y) + e < std::min(s.a.y, s.b.y);
}

struct ResolvedEdge {
  std::int64_t id;
  int u, v;
  Polyline curve;
};

struct Resolved {
  std::vector<Point2> positions;
  std::vector<std::int64_t> vertex_ids;
  std::vector<ResolvedEdge> edges;
};

// Resolves ids and polylines; records id, endpoint and polyline violations.
Resolved resolve(const ProjectionSpec& spec, ValidationReport& report) {
  Resolved r;
  std::map<std::int64_t, int> index;
  for (const auto& vs : spec.vertices) {
    if (index.count(vs.id)) {
      report.violations.push_back({ViolationKind::bad_id, "duplicate vertex id " + std::to_string(vs.id)});
      continue;
    }
    if (!std::isfinite(vs.pos.x) || !std::isfinite(vs.pos.y)) {
      report.violations.push_back({ViolationKind::bad_id, "vertex " + std::to_string(vs.id) + " has non-finite coordinates"});
      continue;
    }
    index[vs.id] = static_cast<int>(r.positions.size());
    r.positions.push_back(vs.pos);
    r.vertex_ids.push_back(vs.id);
  }
  for (std::size_t i = 0; i < r.positions.size(); ++i) {
    for (std::size_t j = i + 1; j < r.positions.size(); ++j) {
      if (distance(r.positions[i], r.positions[j]) <= kGeomEps) {
        report.violations.push_back({ViolationKind::coincident_vertices,
                                     "vertices " + std::to_string(r.vertex_ids[i]) + " and " +
                                         std::to_string(r.vertex_ids[j]) + " coincide"});
      }
    }
  }
  std::map<std::int64_t, int> edge_seen;
  for (const auto& es : spec.edges) {
    const std::string name = "edge " + std::to_string(es.id);
    if (edge_seen.count(es.id)) {
      report.violations.push_back({ViolationKind::bad_id, "duplicate edge id " + std::to_string(es.id)});
      continue;
    }
    edge_seen[es.id] = 1;
    auto iu = index.find(es.u);
    auto iv = index.find(es.v);
    if (iu == index.end() || iv == index.end()) {
      report.violations.push_back({ViolationKind::bad_id, name + " references an unknown vertex"});
      continue;
    }
    if (iu->second == iv->second) {
      report.violations.push_back({ViolationKind::self_loop, name + " is a self-loop"});
      continue;
    }
    const Point2 pu = r.positions[iu->second];
    const Point2 pv = r.positions[iv->second];
    Polyline curve;
    if (es.polyline.empty()) {
      curve.points = {pu, pv};
    } else {
      curve.points = es.polyline;
      if (curve.points.size() < 2 || distance(curve.points.front(), pu) > kGeomEps ||
          distance(curve.points.back(), pv) > kGeomEps) {
        report.violations.push_back({ViolationKind::endpoint_mismatch,
                                     name + " polyline does not run from its u to its v position"});
        continue;
      }
      curve.points.front() = pu;
      curve.points.back() = pv;
    }
    const std::string problem = polyline_problem(curve);
    if (!problem.empty()) {
      report.violations.push_back({ViolationKind::degenerate_polyline, name + ": " + problem});
      continue;
    }
    r.edges.push_back({es.id, iu->second, iv->second, std::move(curve)});
  }
  return r;
}

// Vertex w sits at the start or end of segment s as the edge's own endpoint.
bool segment_end_at_vertex(const Seg& s, const ResolvedEdge& e, int w) {
  return (s.k == 0 && e.u == w) || (s.k == s.last && e.v == w);
}

void check_geometry(const Resolved& r, ValidationReport& report) {
  std::vector<Seg> segs;
  for (std::size_t i = 0; i < r.edges.size(); ++i) {
    const auto& pts = r.edges[i].curve.points;
    const int last = static_cast<int>(pts.size()) - 2;
    for (int k = 0; k <= last; ++k) segs.push_back({static_cast<int>(i), k, last, pts[k], pts[k + 1]});
  }
  auto edge_name = [&](int i) { return "edge " + std::to_string(r.edges[i].id); };

  for (const auto& s : segs) {
    const auto& e = r.edges[s.edge];
    for (int w = 0; w < static_cast<int>(r.positions.size()); ++w) {
      if (point_segment_distance(r.positions[w], s.a, s.b) > kGeomEps) continue;
      const bool at_start = s.k == 0 && e.u == w;
      const bool at_end = s.k == s.last && e.v == w;
      if (at_start || at_end) continue;
      report.violations.push_back({ViolationKind::vertex_on_edge,
                                   edge_name(s.edge) + " passes through vertex " +
                                       std::to_string(r.vertex_ids[w])});
    }
  }

  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const Seg& s = segs[i];
      const Seg& t = segs[j];
      if (boxes_apart(s, t)) continue;
      if (s.edge == t.edge) {
        if (std::abs(s.k - t.k) == 1) continue;
        const bool touch = point_segment_distance(s.a, t.a, t.b) <= kGeomEps ||
                           point_segment_distance(s.b, t.a, t.b) <= kGeomEps ||
                           point_segment_distance(t.a, s.a, s.b) <= kGeomEps ||
                           point_segment_distance(t.b, s.a, s.b) <= kGeomEps;
        if (touch || segment_crossing(s.a, s.b, t.a, t.b).crosses) {
          report.violations.push_back({ViolationKind::edge_not_simple, edge_name(s.edge) + " intersects itself"});
        }
        continue;
      }
      const auto& es = r.edges[s.edge];
      const auto& et = r.edges[t.edge];
      // Shared endpoint vertex, if both segments terminate there.
      int shared = -1;
      for (int w : {es.u, es.v}) {
        if ((w == et.u || w == et.v) && segment_end_at_vertex(s, es, w) && segment_end_at_vertex(t, et, w)) {
          shared = w;
        }
      }
      struct Contact { Point2 p; };
      std::vector<Contact> contacts;
      for (Point2 p : {s.a, s.b}) {
        if (point_segment_distance(p, t.a, t.b) <= kGeomEps) contacts.push_back({p});
      }
      for (Point2 p : {t.a, t.b}) {
        if (point_segment_distance(p, s.a, s.b) <= kGeomEps) contacts.push_back({p});
      }
      bool bad = false;
      for (const auto& c : contacts) {
        if (shared >= 0 && distance(c.p, r.positions[shared]) <= kGeomEps) continue;
        bad = true;
      }
      if (shared >= 0) {
        const Point2 w = r.positions[shared];
        const Point2 ds = distance(s.a, w) <= kGeomEps ? s.b - s.a : s.a - s.b;
        const Point2 dt = distance(t.a, w) <= kGeomEps ? t.b - t.a : t.a - t.b;
        if (same_direction(ds, dt)) {
          report.violations.push_back({ViolationKind::overlap, edge_name(s.edge) + " and " +
                                                                   edge_name(t.edge) + " overlap at vertex " +
                                                                   std::to_string(r.vertex_ids[shared])});
          continue;
        }
      }
      if (bad) {
        report.violations.push_back({ViolationKind::non_transversal,
                                     edge_name(s.edge) + " and " + edge_name(t.edge) +
                                         " touch away from a shared endpoint or at a polyline joint near " +
                                         fmt_point(contacts.front().p)});
        continue;
      }
      if (!contacts.empty()) continue;
      const auto hit = segment_crossing(s.a, s.b, t.a, t.b);
      if (!hit.crosses) continue;
      const Point2 da = s.b - s.a;
      const Point2 db = t.b - t.a;
      if (std::abs(cross(da, db)) <= kGeomEps * norm(da) * norm(db)) {
        report.violations.push_back({ViolationKind::non_transversal, edge_name(s.edge) + " and " +
                                                                         edge_name(t.edge) + " cross tangentially"});
        continue;
      }
      Crossing c;
      c.point = hit.point;
      if (s.edge < t.edge) {
        c.edge_a = s.edge; c.edge_b = t.edge;
        c.segment_a = s.k; c.segment_b = t.k;
        c.param_a = s.k + hit.t; c.param_b = t.k + hit.s;
      } else {
        c.edge_a = t.edge; c.edge_b = s.edge;
        c.segment_a = t.k; c.segment_b = s.k;
        c.param_a = t.k + hit.s; c.param_b = s.k + hit.t;
      }
      report.crossings.push_back(c);
    }
  }

  auto& cs = report.crossings;
  std::sort(cs.begin(), cs.end(), [](const Crossing& a, const Crossing& b) {
    if (a.edge_a != b.edge_a) return a.edge_a < b.edge_a;
    if (a.edge_b != b.edge_b) return a.edge_b < b.edge_b;
    return a.param_a < b.param_a;
  });
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (distance(cs[i].point, cs[j].point) <= kGeomEps) {
        report.violations.push_back({ViolationKind::triple_point,
                                     "three or more curves meet near " + fmt_point(cs[i].point)});
      }
    }
  }
}

}  // namespace

ValidationReport validate_projection(const ProjectionSpec& spec) {
  ValidationReport report;
  const Resolved r = resolve(spec, report);
  check_geometry(r, report);
  // Crossing edge indices refer to resolved edges; they coincide with spec order when valid.
  return report;
}

FaithfulProjection::FaithfulProjection(const ProjectionSpec& spec) {
  ValidationReport report;
  Resolved r = resolve(spec, report);
  check_geometry(r, report);
  if (!report.ok()) fail(ErrorCode::geometry, report.summary());

  vertex_ids_ = r.vertex_ids;
  positions_ = r.positions;
  graph_.vertex_count = static_cast<int>(positions_.size());
  for (auto& e : r.edges) {
    edge_ids_.push_back(e.id);
    graph_.edges.push_back({e.u, e.v});
    curves_.push_back(e.curve);
    curves_.push_back(e.curve.reversed());
  }
  space_ = OrientedEdgeSpace(graph_);
  departure_.resize(curves_.size());
  for (std::size_t d = 0; d < curves_.size(); ++d) {
    const Point2 t = curves_[d].initial_direction();
    departure_[d] = std::atan2(t.y, t.x);
  }
  crossings_ = std::move(report.crossings);
  by_edge_.assign(edge_ids_.size(), {});
  for (std::size_t c = 0; c < crossings_.size(); ++c) {
    by_edge_[crossings_[c].edge_a].push_back(static_cast<int>(c));
    by_edge_[crossings_[c].edge_b].push_back(static_cast<int>(c));
  }
}

int FaithfulProjection::vertex_index(std::int64_t id) const {
  for (std::size_t v = 0; v < vertex_ids_.size(); ++v) {
    if (vertex_ids_[v] == id) return static_cast<int>(v);
  }
  fail(ErrorCode::input, "unknown vertex id " + std::to_string(id));
}

int FaithfulProjection::edge_index(std::int64_t id) const {
  for (std::size_t e = 0; e < edge_ids_.size(); ++e) {
    if (edge_ids_[e] == id) return static_cast<int>(e);
  }
  fail(ErrorCode::input, "unknown edge id " + std::to_string(id));
}

int FaithfulProjection::crossing_count(int a, int b) const {
  int n = 0;
  for (int c : by_edge_[a]) {
    const auto& x = crossings_[c];
    if ((x.edge_a == a && x.edge_b == b) || (x.edge_a == b && x.edge_b == a)) ++n;
  }
  return n;
}

bool passages_interleave(double a1, double b1, double a2, double b2) {
  auto rel = [a1](double t) {
    double r = std::fmod(t - a1, kTwoPi);
    if (r < 0) r += kTwoPi;
    return r;
  };
  const double b = rel(b1);
  const double p = rel(a2);
  const double q = rel(b2);
  const bool in_p = p > 0.0 && p < b;
  const bool in_q = q > 0.0 && q < b;
  return in_p != in_q;
}

LoopGeometry loop_geometry(const FaithfulProjection& proj, std::span<const int> loop) {
  const auto& space = proj.space();
  if (!is_closed_non_backtracking(space, loop)) {
    fail(ErrorCode::input, "loop is not a closed non-backtracking edge sequence");
  }
  std::vector<char> used(proj.edge_count(), 0);
  for (int d : loop) {
    if (used[edge_of(d)]++) fail(ErrorCode::input, "loop repeats a bond");
  }
  LoopGeometry g;
  const std::size_t n = loop.size();
  for (std::size_t j = 0; j < n; ++j) {
    g.total_turning += turning_angle(proj.curve(loop[j]), proj.curve(loop[(j + 1) % n]));
  }
  const double w = g.total_turning / kTwoPi;
  g.win = static_cast<int>(std::llround(w));
  g.rounding_residual = std::abs(w - g.win);
  if (g.rounding_residual >= 1e-6) {
    fail(ErrorCode::numeric, "winding rounding residual " + std::to_string(g.rounding_residual));
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (int c : proj.crossings_of(edge_of(loop[j]))) {
      const auto& x = proj.crossings()[c];
      const int other = x.edge_a == edge_of(loop[j]) ? x.edge_b : x.edge_a;
      if (used[other] && other > edge_of(loop[j])) ++g.crossings;
    }
  }
  // Passages at vertices: (arrival end, departure end), both as edges leaving the vertex.
  std::map<int, std::vector<std::pair<int, int>>> passages;
  for (std::size_t j = 0; j < n; ++j) {
    const int in = loop[j];
    const int out = loop[(j + 1) % n];
    passages[space.terminal(in)].push_back({reversal(in), out});
  }
  for (const auto& [v, list] : passages) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t k = i + 1; k < list.size(); ++k) {
        if (passages_interleave(proj.departure_angle(list[i].first), proj.departure_angle(list[i].second),
                                proj.departure_angle(list[k].first), proj.departure_angle(list[k].second))) {
          ++g.vertex_crossings;
        }
      }
    }
  }
  g.crossings += g.vertex_crossings;
  return g;
}

std::vector<int> line_crossings(const FaithfulProjection& proj, const Polyline& line, LineEnds ends) {
  check_polyline(line, "disorder line");
  const auto& pts = line.points;
  const int last = static_cast<int>(pts.size()) - 2;
  std::vector<int> counts(proj.edge_count(), 0);
  auto endpoint_vertex = [&](Point2 p) {
    if (ends != LineEnds::at_vertices) return -1;
    if (!(distance(p, pts.front()) <= kGeomEps || distance(p, pts.back()) <= kGeomEps)) return -1;
    for (int w = 0; w < proj.vertex_count(); ++w) {
      if (distance(p, proj.position(w)) <= kGeomEps) return w;
    }
    return -1;
  };
  for (int k = 0; k <= last; ++k) {
    const Point2 a = pts[k];
    const Point2 b = pts[k + 1];
    for (int w = 0; w < proj.vertex_count(); ++w) {
      if (point_segment_distance(proj.position(w), a, b) > kGeomEps) continue;
      const bool ok = ends == LineEnds::at_vertices &&
                      ((k == 0 && distance(a, proj.position(w)) <= kGeomEps) ||
                       (k == last && distance(b, proj.position(w)) <= kGeomEps));
      if (!ok) {
        fail(ErrorCode::geometry, "disorder line passes through vertex " + std::to_string(proj.vertex_id(w)));
      }
    }
    for (int e = 0; e < proj.edge_count(); ++e) {
      const auto& cp = proj.curve(directed(e, true)).points;
      for (std::size_t j = 0; j + 1 < cp.size(); ++j) {
        const Point2 c = cp[j];
        const Point2 d = cp[j + 1];
        if (std::max(a.x, b.x) + kGeomEps < std::min(c.x, d.x) || std::max(c.x, d.x) + kGeomEps < std::min(a.x, b.x) ||
            std::max(a.y, b.y) + kGeomEps < std::min(c.y, d.y) || std::max(c.y, d.y) + kGeomEps < std::min(a.y, b.y)) {
          continue;
        }
        bool contact = false;
        for (Point2 p : {a, b}) {
          if (point_segment_distance(p, c, d) > kGeomEps) continue;
          const int w = endpoint_vertex(p);
          const auto [u, v] = proj.graph().edges[e];
          const bool at_edge_end = w >= 0 && ((j == 0 && u == w) || (j + 2 == cp.size() && v == w));
          if (!at_edge_end) {
            fail(ErrorCode::geometry, "disorder line meets edge " + std::to_string(proj.edge_id(e)) +
                                          " non-transversally near " + fmt_point(p));
          }
          const Point2 dl = distance(a, p) <= kGeomEps ? b - a : a - b;
          const Point2 de = distance(c, p) <= kGeomEps ? d - c : c - d;
          if (same_direction(dl, de)) {
            fail(ErrorCode::geometry, "disorder line runs along edge " + std::to_string(proj.edge_id(e)));
          }
          contact = true;
        }
        for (Point2 p : {c, d}) {
          if (point_segment_distance(p, a, b) > kGeomEps) continue;
          if (endpoint_vertex(p) >= 0 && (distance(p, a) <= kGeomEps || distance(p, b) <= kGeomEps)) {
            contact = true;
            continue;
          }
          fail(ErrorCode::geometry, "disorder line meets edge " + std::to_string(proj.edge_id(e)) +
                                        " at a polyline joint near " + fmt_point(p));
        }
        if (contact) continue;
        const auto hit = segment_crossing(a, b, c, d);
        if (!hit.crosses) continue;
        if (std::abs(cross(b - a, d - c)) <= kGeomEps * norm(b - a) * norm(d - c)) {
          fail(ErrorCode::geometry, "disorder line crosses edge " + std::to_string(proj.edge_id(e)) + " tangentially");
        }
        for (const auto& x : proj.crossings()) {
          if (distance(x.point, hit.point) <= kGeomEps) {
            fail(ErrorCode::geometry, "disorder line passes through an edge crossing near " + fmt_point(hit.point));
          }
        }
        ++counts[e];
      }
    }
  }
  return counts;
}

bool is_simple(const Polyline& line) {
  const auto& p = line.points;
  const std::size_t n = p.size();
  if (n < 2) return false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      const Point2 a = p[i], b = p[i + 1], c = p[j], d = p[j + 1];
      if (point_segment_distance(a, c, d) <= kGeomEps || point_segment_distance(b, c, d) <= kGeomEps ||
          point_segment_distance(c, a, b) <= kGeomEps || point_segment_distance(d, a, b) <= kGeomEps) {
        return false;
      }
      if (segment_crossing(a, b, c, d).crosses) return false;
    }
  }
  return true;
}

}  // namespace kw
