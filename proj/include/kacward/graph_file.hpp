#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kacward/geometry.hpp"

namespace kw {

enum class WeightMode { coupling, weight };

struct CrossedPairSpec {
  std::int64_t alpha = 0;
  std::int64_t edge_plus = 0;   // edge ids
  std::int64_t edge_minus = 0;
};

struct DisorderLineSpec {
  std::int64_t id = 0;
  std::vector<Point2> points;
};

// {"vertices": [{id, x, y}], "edges": [{id, u, v, polyline?, J? | W?}],
//  "crossed_pairs"?: [{alpha, edge_plus, edge_minus}], "disorder_lines"?: [{id, points}]}
struct GraphFile {
  ProjectionSpec projection;
  WeightMode mode = WeightMode::coupling;
  std::vector<double> values;  // J (default 1) or W per edge, in edge order
  std::vector<CrossedPairSpec> crossed_pairs;
  std::vector<DisorderLineSpec> disorder_lines;
};

// Throws Error(input) on malformed documents; geometry is not validated here.
GraphFile parse_graph_file(std::string_view text);
std::string read_text_file(const std::string& path);
std::string serialize_graph_file(const GraphFile& file);
bool same_graph_file(const GraphFile& a, const GraphFile& b);

GraphFile graph_file_from_projection(const ProjectionSpec& spec, WeightMode mode, std::vector<double> values);

}  // namespace kw
