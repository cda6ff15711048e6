#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kacward/graph.hpp"

namespace kw {

inline constexpr double kGeomEps = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 a);
double distance(Point2 a, Point2 b);
double point_segment_distance(Point2 p, Point2 a, Point2 b);

struct Polyline {
  std::vector<Point2> points;

  Point2 front() const { return points.front(); }
  Point2 back() const { return points.back(); }
  std::size_t segment_count() const { return points.size() - 1; }
  Point2 initial_direction() const { return points[1] - points[0]; }
  Point2 final_direction() const { return points.back() - points[points.size() - 2]; }
  Polyline reversed() const;
};

// Throws Error(geometry) on fewer than two points, short segments or a reversing joint.
void check_polyline(const Polyline& line, const std::string& what = "polyline");

// Turn from direction a to direction b, in (-pi, pi]. Exact reversal throws.
double joint_turn(Point2 a, Point2 b);
double interior_turning(const Polyline& line);
// Interior turning of e_in plus the turn at the joint into e_out. Not reduced mod 2pi.
double turning_angle(const Polyline& e_in, const Polyline& e_out);

struct SegmentCrossing {
  bool crosses = false;
  Point2 point;
  double t = 0.0;  // parameter along the first segment
  double s = 0.0;  // parameter along the second segment
};

// Proper crossing of two segments whose endpoints are all farther than eps from the other
// segment; contacts are reported separately by point_segment_distance.
SegmentCrossing segment_crossing(Point2 a1, Point2 a2, Point2 b1, Point2 b2);

struct VertexSpec {
  std::int64_t id = 0;
  Point2 pos;
};

struct EdgeSpec {
  std::int64_t id = 0;
  std::int64_t u = 0;
  std::int64_t v = 0;
  std::vector<Point2> polyline;  // empty means the straight segment u-v
};

struct ProjectionSpec {
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;
};

struct Crossing {
  int edge_a = 0;  // edge_a < edge_b (indices)
  int edge_b = 0;
  Point2 point;
  int segment_a = 0;
  int segment_b = 0;
  double param_a = 0.0;
  double param_b = 0.0;
};

enum class ViolationKind {
  bad_id,
  coincident_vertices,
  self_loop,
  degenerate_polyline,
  endpoint_mismatch,
  vertex_on_edge,
  edge_not_simple,
  overlap,
  non_transversal,
  triple_point,
};

const char* violation_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<Crossing> crossings;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_projection(const ProjectionSpec& spec);

class FaithfulProjection {
 public:
  FaithfulProjection() = default;
  // Throws Error(geometry) listing every violation.
  explicit FaithfulProjection(const ProjectionSpec& spec);

  int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
  int edge_count() const { return static_cast<int>(edge_ids_.size()); }
  std::int64_t vertex_id(int v) const { return vertex_ids_[v]; }
  std::int64_t edge_id(int e) const { return edge_ids_[e]; }
  int vertex_index(std::int64_t id) const;  // throws Error(input) if unknown
  int edge_index(std::int64_t id) const;
  Point2 position(int v) const { return positions_[v]; }
  const std::vector<Point2>& positions() const { return positions_; }

  const Graph& graph() const { return graph_; }
  const OrientedEdgeSpace& space() const { return space_; }
  // Curve of a directed edge, from origin to terminal.
  const Polyline& curve(int d) const { return curves_[d]; }
  // Argument of the initial tangent of a directed edge at its origin.
  double departure_angle(int d) const { return departure_[d]; }

  const std::vector<Crossing>& crossings() const { return crossings_; }
  bool is_planar() const { return crossings_.empty(); }
  int crossing_count(int a, int b) const;
  // Crossing indices involving edge e.
  const std::vector<int>& crossings_of(int e) const { return by_edge_[e]; }

 private:
  std::vector<std::int64_t> vertex_ids_;
  std::vector<std::int64_t> edge_ids_;
  std::vector<Point2> positions_;
  Graph graph_;
  OrientedEdgeSpace space_;
  std::vector<Polyline> curves_;
  std::vector<double> departure_;
  std::vector<Crossing> crossings_;
  std::vector<std::vector<int>> by_edge_;
};

struct LoopGeometry {
  int win = 0;
  int crossings = 0;          // transversal self-crossings (vertex and non-vertex)
  int vertex_crossings = 0;
  double total_turning = 0.0;
  double rounding_residual = 0.0;
};

// Loop given as directed edges. Loops repeating an undirected edge are rejected.
LoopGeometry loop_geometry(const FaithfulProjection& proj, std::span<const int> loop);

// Whether two passages through a common vertex cross; each passage is a pair of directed
// edges leaving that vertex.
bool passages_interleave(double a1, double b1, double a2, double b2);

enum class LineEnds {
  in_faces,     // both endpoints at distance > eps from every edge and vertex
  at_vertices,  // endpoints may sit on vertex positions
};

// Number of crossings of the line with each edge. Throws Error(geometry) when the line
// touches a vertex, meets an edge non-transversally, crosses at a polyline joint, or passes
// through an existing crossing.
std::vector<int> line_crossings(const FaithfulProjection& proj, const Polyline& line,
                                LineEnds ends = LineEnds::in_faces);

// True if non-adjacent segments of the polyline do not meet.
bool is_simple(const Polyline& line);

}  // namespace kw
