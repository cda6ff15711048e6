#include "kacward/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "kacward/error.hpp"

namespace kw {

OrientedEdgeSpace::OrientedEdgeSpace(const Graph& graph) : vertex_count_(graph.vertex_count) {
  const int m = static_cast<int>(graph.edges.size());
  origin_.resize(2 * m);
  terminal_.resize(2 * m);
  outgoing_.assign(graph.vertex_count, {});
  for (int e = 0; e < m; ++e) {
    const auto [u, v] = graph.edges[e];
    if (u < 0 || v < 0 || u >= graph.vertex_count || v >= graph.vertex_count) {
      fail(ErrorCode::input, "edge " + std::to_string(e) + " references a missing vertex");
    }
    origin_[2 * e] = u;
    terminal_[2 * e] = v;
    origin_[2 * e + 1] = v;
    terminal_[2 * e + 1] = u;
    outgoing_[u].push_back(2 * e);
    outgoing_[v].push_back(2 * e + 1);
  }
  successors_.assign(2 * m, {});
  for (int d = 0; d < 2 * m; ++d) {
    for (int b : outgoing_[terminal_[d]]) {
      if (b != reversal(d)) successors_[d].push_back(b);
    }
  }
}

int OrientedEdgeSpace::max_degree() const {
  std::size_t best = 0;
  for (const auto& out : outgoing_) best = std::max(best, out.size());
  return static_cast<int>(best);
}

EdgePath make_path(const OrientedEdgeSpace& space, std::vector<int> edges) {
  EdgePath path;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (edges[j] < 0 || edges[j] >= space.size()) fail(ErrorCode::input, "path edge out of range");
    if (j > 0) {
      if (!space.leads_into(edges[j - 1], edges[j])) {
        fail(ErrorCode::input, "path step " + std::to_string(j) + " is not consecutive");
      }
      if (edges[j] == reversal(edges[j - 1])) path.non_backtracking = false;
    }
  }
  path.edges = std::move(edges);
  return path;
}

bool is_closed_non_backtracking(const OrientedEdgeSpace& space, std::span<const int> loop) {
  const std::size_t n = loop.size();
  if (n == 0) return false;
  for (std::size_t j = 0; j < n; ++j) {
    const int a = loop[j];
    const int b = loop[(j + 1) % n];
    if (a < 0 || a >= space.size()) return false;
    if (!space.leads_into(a, b) || b == reversal(a)) return false;
  }
  return true;
}

namespace {

// True if the rotation of loop starting at i is lexicographically smaller than at j.
int compare_rotations(std::span<const int> loop, std::size_t i, std::size_t j) {
  const std::size_t n = loop.size();
  for (std::size_t k = 0; k < n; ++k) {
    const int a = loop[(i + k) % n];
    const int b = loop[(j + k) % n];
    if (a != b) return a < b ? -1 : 1;
  }
  return 0;
}

std::size_t min_rotation_index(std::span<const int> loop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < loop.size(); ++i) {
    if (compare_rotations(loop, i, best) < 0) best = i;
  }
  return best;
}

}  // namespace

std::vector<int> canonical_rotation(std::span<const int> loop) {
  std::vector<int> out(loop.size());
  const std::size_t start = min_rotation_index(loop);
  for (std::size_t k = 0; k < loop.size(); ++k) out[k] = loop[(start + k) % loop.size()];
  return out;
}

std::vector<int> reverse_loop(std::span<const int> loop) {
  std::vector<int> out(loop.rbegin(), loop.rend());
  for (int& d : out) d = reversal(d);
  return out;
}

std::vector<int> canonical_unoriented(std::span<const int> loop) {
  auto a = canonical_rotation(loop);
  auto r = reverse_loop(loop);
  auto b = canonical_rotation(r);
  return std::min(a, b);
}

bool is_primitive(std::span<const int> loop) {
  const std::size_t n = loop.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t k = 0; k + p < n && periodic; ++k) periodic = loop[k] == loop[k + p];
    if (periodic) return false;
  }
  return true;
}

LoopClass make_loop_class(const OrientedEdgeSpace& space, std::span<const int> loop) {
  if (!is_closed_non_backtracking(space, loop)) {
    fail(ErrorCode::input, "sequence is not a closed non-backtracking loop");
  }
  return LoopClass{canonical_rotation(loop), is_primitive(loop)};
}

std::size_t for_each_primitive_loop(const OrientedEdgeSpace& space, int max_len,
                                    const std::function<bool(std::span<const int>)>& callback,
                                    const TransitionFilter& allowed, std::size_t cap) {
  if (max_len < 1) fail(ErrorCode::precondition, "max_len must be at least 1");
  std::size_t count = 0;
  std::vector<int> path;
  std::vector<std::size_t> cursor;
  path.reserve(max_len);
  cursor.reserve(max_len);
  bool stop = false;

  auto ok = [&](int a, int b) { return !allowed || allowed(a, b); };

  auto emit = [&]() {
    // path[0] is the minimum entry; accept only the least rotation and primitive words.
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (path[i] == path[0] && compare_rotations(path, i, 0) < 0) return;
    }
    if (!is_primitive(path)) return;
    if (++count > cap) {
      fail(ErrorCode::scale, "loop enumeration exceeded class cap of " + std::to_string(cap));
    }
    if (!callback(path)) stop = true;
  };

  for (int s = 0; s < space.size() && !stop; ++s) {
    path.assign(1, s);
    cursor.assign(1, 0);
    while (!path.empty() && !stop) {
      const int last = path.back();
      std::size_t& c = cursor.back();
      const auto& next = space.successors(last);
      if (c == 0) {
        // First visit of this prefix: test closure.
        if (space.leads_into(last, s) && s != reversal(last) && ok(last, s)) emit();
        if (stop) break;
      }
      bool advanced = false;
      while (c < next.size() && static_cast<int>(path.size()) < max_len) {
        const int b = next[c++];
        if (b < s || !ok(last, b)) continue;
        path.push_back(b);
        cursor.push_back(0);
        advanced = true;
        break;
      }
      if (!advanced) {
        path.pop_back();
        cursor.pop_back();
      }
    }
  }
  return count;
}

std::vector<LoopClass> enumerate_primitive_loops(const OrientedEdgeSpace& space, int max_len,
                                                 std::size_t cap) {
  std::vector<LoopClass> out;
  for_each_primitive_loop(
      space, max_len,
      [&](std::span<const int> loop) {
        out.push_back(LoopClass{std::vector<int>(loop.begin(), loop.end()), true});
        return true;
      },
      {}, cap);
  return out;
}

std::vector<int> boundary_of(const Graph& graph, EdgeSet edges) {
  std::vector<char> odd(graph.vertex_count, 0);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    if (!((edges >> e) & 1ULL)) continue;
    odd[graph.edges[e][0]] ^= 1;
    odd[graph.edges[e][1]] ^= 1;
  }
  std::vector<int> out;
  for (int v = 0; v < graph.vertex_count; ++v) {
    if (odd[v]) out.push_back(v);
  }
  return out;
}

EvenSubgraph make_subgraph(const Graph& graph, EdgeSet edges) {
  return EvenSubgraph{edges, boundary_of(graph, edges)};
}

namespace {

struct CycleSpace {
  bool solvable = true;
  EdgeSet particular = 0;
  std::vector<EdgeSet> basis;
};

CycleSpace build_cycle_space(const Graph& graph, std::span<const int> boundary, int edge_cap) {
  const int m = static_cast<int>(graph.edges.size());
  const int n = graph.vertex_count;
  if (m > edge_cap || m > 64) {
    fail(ErrorCode::scale, "oracle scale exceeded: " + std::to_string(m) + " edges (cap " +
                               std::to_string(std::min(edge_cap, 64)) + ")");
  }
  if (boundary.size() % 2 != 0) fail(ErrorCode::precondition, "boundary set must have even size");

  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (int e = 0; e < m; ++e) {
    adj[graph.edges[e][0]].push_back({graph.edges[e][1], e});
    adj[graph.edges[e][1]].push_back({graph.edges[e][0], e});
  }
  std::vector<int> parent(n, -1), parent_edge(n, -1), depth(n, -1), comp(n, -1), order;
  std::vector<char> tree_edge(m, 0);
  int ncomp = 0;
  for (int r = 0; r < n; ++r) {
    if (depth[r] >= 0) continue;
    depth[r] = 0;
    comp[r] = ncomp;
    std::vector<int> queue{r};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int x = queue[qi];
      order.push_back(x);
      for (auto [y, e] : adj[x]) {
        if (depth[y] >= 0) continue;
        depth[y] = depth[x] + 1;
        parent[y] = x;
        parent_edge[y] = e;
        comp[y] = ncomp;
        tree_edge[e] = 1;
        queue.push_back(y);
      }
    }
    ++ncomp;
  }

  CycleSpace cs;
  std::vector<char> odd(n, 0);
  for (int v : boundary) {
    if (v < 0 || v >= n) fail(ErrorCode::input, "boundary vertex out of range");
    odd[v] ^= 1;
  }
  std::vector<int> comp_parity(ncomp, 0);
  for (int v = 0; v < n; ++v) comp_parity[comp[v]] ^= odd[v];
  for (int p : comp_parity) {
    if (p) cs.solvable = false;
  }
  if (!cs.solvable) return cs;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (odd[v] && parent[v] >= 0) {
      cs.particular ^= 1ULL << parent_edge[v];
      odd[v] = 0;
      odd[parent[v]] ^= 1;
    }
  }
  for (int e = 0; e < m; ++e) {
    if (tree_edge[e]) continue;
    EdgeSet cyc = 1ULL << e;
    int a = graph.edges[e][0];
    int b = graph.edges[e][1];
    while (a != b) {
      if (depth[a] < depth[b]) std::swap(a, b);
      cyc ^= 1ULL << parent_edge[a];
      a = parent[a];
    }
    cs.basis.push_back(cyc);
  }
  return cs;
}

}  // namespace

void enumerate_even_subgraphs(const Graph& graph, std::span<const int> boundary,
                              const std::function<void(EdgeSet)>& visit, int edge_cap) {
  const CycleSpace cs = build_cycle_space(graph, boundary, edge_cap);
  if (!cs.solvable) return;
  EdgeSet cur = cs.particular;
  visit(cur);
  const std::uint64_t total = 1ULL << cs.basis.size();
  for (std::uint64_t i = 1; i < total; ++i) {
    cur ^= cs.basis[std::countr_zero(i)];
    visit(cur);
  }
}

std::size_t count_even_subgraphs(const Graph& graph, std::span<const int> boundary, int edge_cap) {
  const CycleSpace cs = build_cycle_space(graph, boundary, edge_cap);
  return cs.solvable ? (std::size_t{1} << cs.basis.size()) : 0;
}

namespace {

void all_pairings(std::vector<int>& items, std::vector<std::pair<int, int>>& current,
                  std::vector<std::vector<std::pair<int, int>>>& out) {
  if (items.empty()) {
    out.push_back(current);
    return;
  }
  const int first = items[0];
  for (std::size_t j = 1; j < items.size(); ++j) {
    const int partner = items[j];
    std::vector<int> rest;
    for (std::size_t k = 1; k < items.size(); ++k) {
      if (k != j) rest.push_back(items[k]);
    }
    current.push_back({first, partner});
    all_pairings(rest, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<int>> ends_by_vertex(const Graph& graph, EdgeSet edges, int degree_cap) {
  std::vector<std::vector<int>> ends(graph.vertex_count);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    if (!((edges >> e) & 1ULL)) continue;
    ends[graph.edges[e][0]].push_back(directed(static_cast<int>(e), true));
    ends[graph.edges[e][1]].push_back(directed(static_cast<int>(e), false));
  }
  for (int v = 0; v < graph.vertex_count; ++v) {
    if (ends[v].size() % 2 != 0) fail(ErrorCode::precondition, "subgraph is not even");
    if (static_cast<int>(ends[v].size()) > degree_cap) {
      fail(ErrorCode::scale, "vertex degree " + std::to_string(ends[v].size()) +
                                 " exceeds pairing cap " + std::to_string(degree_cap));
    }
  }
  return ends;
}

}  // namespace

void loop_decompositions(const Graph& graph, EdgeSet edges,
                         const std::function<void(const std::vector<std::vector<int>>&)>& visit,
                         int degree_cap) {
  const auto ends = ends_by_vertex(graph, edges, degree_cap);
  std::vector<std::vector<std::vector<std::pair<int, int>>>> options;
  for (const auto& list : ends) {
    if (list.empty()) continue;
    std::vector<int> items = list;
    std::vector<std::pair<int, int>> cur;
    std::vector<std::vector<std::pair<int, int>>> out;
    all_pairings(items, cur, out);
    options.push_back(std::move(out));
  }
  const int m = static_cast<int>(graph.edges.size());
  std::vector<int> partner(2 * m, -1);
  std::vector<std::size_t> digit(options.size(), 0);
  std::vector<std::vector<int>> loops;
  while (true) {
    for (std::size_t i = 0; i < options.size(); ++i) {
      for (auto [a, b] : options[i][digit[i]]) {
        partner[a] = b;
        partner[b] = a;
      }
    }
    loops.clear();
    std::vector<char> used(m, 0);
    for (int e = 0; e < m; ++e) {
      if (!((edges >> e) & 1ULL) || used[e]) continue;
      std::vector<int> loop;
      const int start = directed(e, true);
      int d = start;
      do {
        loop.push_back(d);
        used[edge_of(d)] = 1;
        d = partner[reversal(d)];
      } while (d != start);
      loops.push_back(std::move(loop));
    }
    visit(loops);
    std::size_t i = 0;
    while (i < options.size()) {
      if (++digit[i] < options[i].size()) break;
      digit[i] = 0;
      ++i;
    }
    if (i == options.size()) break;
  }
}

std::size_t count_loop_decompositions(const Graph& graph, EdgeSet edges, int degree_cap) {
  const auto ends = ends_by_vertex(graph, edges, degree_cap);
  std::size_t total = 1;
  for (const auto& list : ends) {
    for (std::size_t k = list.size(); k > 1; k -= 2) total *= k - 1;
  }
  return total;
}

}  // namespace kw
