#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kw {

// Abstract multigraph; vertices are 0..vertex_count-1.
struct Graph {
  int vertex_count = 0;
  std::vector<std::array<int, 2>> edges;
};

// Directed edge d = 2*e for u->v and 2*e+1 for v->u.
inline constexpr int directed(int edge, bool forward) { return 2 * edge + (forward ? 0 : 1); }
inline constexpr int edge_of(int d) { return d >> 1; }
inline constexpr int reversal(int d) { return d ^ 1; }

class OrientedEdgeSpace {
 public:
  OrientedEdgeSpace() = default;
  explicit OrientedEdgeSpace(const Graph& graph);

  int size() const { return static_cast<int>(origin_.size()); }
  int edge_count() const { return size() / 2; }
  int vertex_count() const { return vertex_count_; }
  int origin(int d) const { return origin_[d]; }
  int terminal(int d) const { return terminal_[d]; }
  bool leads_into(int a, int b) const { return terminal_[a] == origin_[b]; }
  // Continuations b of a with a |> b and b != reversal(a).
  const std::vector<int>& successors(int d) const { return successors_[d]; }
  const std::vector<int>& outgoing(int v) const { return outgoing_[v]; }
  int max_degree() const;

 private:
  int vertex_count_ = 0;
  std::vector<int> origin_;
  std::vector<int> terminal_;
  std::vector<std::vector<int>> successors_;
  std::vector<std::vector<int>> outgoing_;
};

struct EdgePath {
  std::vector<int> edges;
  bool non_backtracking = true;
  int length() const { return edges.empty() ? 0 : static_cast<int>(edges.size()) - 1; }
};

// Throws Error(input) if consecutive edges do not lead into each other.
EdgePath make_path(const OrientedEdgeSpace& space, std::vector<int> edges);

struct LoopClass {
  std::vector<int> edges;  // canonical rotation
  bool primitive = true;
  int length() const { return static_cast<int>(edges.size()); }
};

// Closed loop e_0..e_{n-1} with e_{n-1} |> e_0 and no backtracking, including across the wrap.
bool is_closed_non_backtracking(const OrientedEdgeSpace& space, std::span<const int> loop);
std::vector<int> canonical_rotation(std::span<const int> loop);
// Minimum over both orientations of the canonical rotation.
std::vector<int> canonical_unoriented(std::span<const int> loop);
std::vector<int> reverse_loop(std::span<const int> loop);
bool is_primitive(std::span<const int> loop);
LoopClass make_loop_class(const OrientedEdgeSpace& space, std::span<const int> loop);

inline constexpr std::size_t kDefaultClassCap = 10'000'000;

// Optional restriction of the leads-into relation (e.g. the support of a flow matrix).
using TransitionFilter = std::function<bool(int, int)>;

// Streams each primitive oriented class with 1 <= |p| <= max_len exactly once, as its
// canonical rotation. Callback returns false to stop early. Returns the number of classes.
std::size_t for_each_primitive_loop(const OrientedEdgeSpace& space, int max_len,
                                    const std::function<bool(std::span<const int>)>& callback,
                                    const TransitionFilter& allowed = {},
                                    std::size_t cap = kDefaultClassCap);

std::vector<LoopClass> enumerate_primitive_loops(const OrientedEdgeSpace& space, int max_len,
                                                 std::size_t cap = kDefaultClassCap);

// Edge subsets are bitsets over edge indices.
using EdgeSet = std::uint64_t;

inline constexpr int kDefaultEvenSubgraphEdgeCap = 30;

struct EvenSubgraph {
  EdgeSet edges = 0;
  std::vector<int> boundary;  // sorted oddly-covered vertices
  bool even() const { return boundary.empty(); }
};

std::vector<int> boundary_of(const Graph& graph, EdgeSet edges);
EvenSubgraph make_subgraph(const Graph& graph, EdgeSet edges);

// Visits every edge subset with the given boundary exactly once (particular solution
// plus Gray-code walk over a fundamental cycle basis).
void enumerate_even_subgraphs(const Graph& graph, std::span<const int> boundary,
                              const std::function<void(EdgeSet)>& visit,
                              int edge_cap = kDefaultEvenSubgraphEdgeCap);

std::size_t count_even_subgraphs(const Graph& graph, std::span<const int> boundary,
                                 int edge_cap = kDefaultEvenSubgraphEdgeCap);

inline constexpr int kMaxPairingDegree = 8;

// Decompositions of an even subgraph into edge-disjoint loops, one per choice of pairing
// of the incident edge ends at every vertex. Each loop is a directed edge sequence.
void loop_decompositions(const Graph& graph, EdgeSet edges,
                         const std::function<void(const std::vector<std::vector<int>>&)>& visit,
                         int degree_cap = kMaxPairingDegree);

std::size_t count_loop_decompositions(const Graph& graph, EdgeSet edges,
                                      int degree_cap = kMaxPairingDegree);

}  // namespace kw
