#include "kacward/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "kacward/error.hpp"

namespace kw {

std::uint64_t corpus_seed() {
  const char* env = std::getenv("KACWARD_SEED");
  if (env == nullptr || *env == '\0') return kDefaultCorpusSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') return kDefaultCorpusSeed;
  return v;
}

std::mt19937_64 corpus_rng(std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(corpus_seed()), static_cast<std::uint32_t>(corpus_seed() >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

ProjectionSpec grid_projection(int lx, int ly) {
  if (lx < 1 || ly < 1) fail(ErrorCode::input, "grid dimensions must be positive");
  ProjectionSpec s;
  for (int y = 0; y < ly; ++y) {
    for (int x = 0; x < lx; ++x) s.vertices.push_back({x + lx * y, {double(x), double(y)}});
  }
  std::int64_t id = 0;
  for (int y = 0; y < ly; ++y) {
    for (int x = 0; x + 1 < lx; ++x) s.edges.push_back({id++, x + lx * y, x + 1 + lx * y, {}});
  }
  for (int y = 0; y + 1 < ly; ++y) {
    for (int x = 0; x < lx; ++x) s.edges.push_back({id++, x + lx * y, x + lx * (y + 1), {}});
  }
  return s;
}

namespace {

std::vector<VertexSpec> random_points(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<VertexSpec> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Point2 p{coord(rng), coord(rng)};
    bool ok = true;
    for (const auto& q : pts) ok = ok && distance(p, q.pos) > 0.08;
    if (ok) pts.push_back({static_cast<std::int64_t>(pts.size()), p});
  }
  return pts;
}

bool vertex_clear(const std::vector<VertexSpec>& pts, int a, int b) {
  for (const auto& v : pts) {
    if (v.id == a || v.id == b) continue;
    if (point_segment_distance(v.pos, pts[a].pos, pts[b].pos) < 0.02) return false;
  }
  return true;
}

}  // namespace

ProjectionSpec random_planar_projection(int vertices, int max_edges, std::mt19937_64& rng) {
  if (vertices < 2) fail(ErrorCode::input, "need at least two vertices");
  for (;;) {
    ProjectionSpec s;
    s.vertices = random_points(vertices, rng);
    std::vector<std::pair<int, int>> cand;
    for (int a = 0; a < vertices; ++a) {
      for (int b = a + 1; b < vertices; ++b) cand.push_back({a, b});
    }
    std::shuffle(cand.begin(), cand.end(), rng);
    for (auto [a, b] : cand) {
      if (static_cast<int>(s.edges.size()) >= max_edges) break;
      if (!vertex_clear(s.vertices, a, b)) continue;
      bool crosses = false;
      for (const auto& e : s.edges) {
        if (e.u == a || e.u == b || e.v == a || e.v == b) continue;
        if (segment_crossing(s.vertices[a].pos, s.vertices[b].pos, s.vertices[e.u].pos, s.vertices[e.v].pos).crosses ||
            point_segment_distance(s.vertices[a].pos, s.vertices[e.u].pos, s.vertices[e.v].pos) < 1e-6) {
          crosses = true;
          break;
        }
      }
      if (!crosses) s.edges.push_back({static_cast<std::int64_t>(s.edges.size()), a, b, {}});
    }
    const auto report = validate_projection(s);
    if (report.ok() && report.crossings.empty()) return s;
  }
}

ProjectionSpec random_crossing_projection(int vertices, int edges, std::mt19937_64& rng) {
  if (edges > vertices * (vertices - 1) / 2) fail(ErrorCode::input, "too many edges requested");
  for (;;) {
    ProjectionSpec s;
    s.vertices = random_points(vertices, rng);
    std::vector<std::pair<int, int>> cand;
    for (int a = 0; a < vertices; ++a) {
      for (int b = a + 1; b < vertices; ++b) {
        if (vertex_clear(s.vertices, a, b)) cand.push_back({a, b});
      }
    }
    if (static_cast<int>(cand.size()) < edges) continue;
    std::shuffle(cand.begin(), cand.end(), rng);
    for (int i = 0; i < edges; ++i) s.edges.push_back({i, cand[i].first, cand[i].second, {}});
    if (validate_projection(s).ok()) return s;
  }
}

ProjectionSpec k4_projection() {
  ProjectionSpec s;
  s.vertices = {{0, {0, 0}}, {1, {1, 0}}, {2, {1, 1}}, {3, {0, 1}}};
  s.edges = {{0, 0, 1, {}}, {1, 1, 2, {}}, {2, 2, 3, {}}, {3, 3, 0, {}}, {4, 0, 2, {}}, {5, 1, 3, {}}};
  return s;
}

ProjectionSpec k5_projection() {
  ProjectionSpec s;
  s.vertices = {{0, {0, 0}}, {1, {10, 0}}, {2, {5, 9}}, {3, {4, 3}}, {4, {6, 3}}};
  std::int64_t id = 0;
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) s.edges.push_back({id++, a, b, {}});
  }
  return s;
}

ProjectionSpec k33_projection() {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  for (;;) {
    ProjectionSpec s;
    for (int i = 0; i < 6; ++i) s.vertices.push_back({i, {coord(rng), coord(rng)}});
    std::int64_t id = 0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 3; b < 6; ++b) s.edges.push_back({id++, a, b, {}});
    }
    const auto r = validate_projection(s);
    if (r.ok() && r.crossings.size() == 1) return s;
  }
}

QuasiPlanarInstance quasi_planar_grid(int lx, int ly, const std::vector<int>& squares) {
  QuasiPlanarInstance q;
  q.spec = grid_projection(lx, ly);
  std::int64_t id = static_cast<std::int64_t>(q.spec.edges.size());
  std::int64_t alpha = 0;
  for (int sq : squares) {
    if (sq < 0 || sq >= (lx - 1) * (ly - 1)) fail(ErrorCode::input, "square index out of range");
    const int x = sq % (lx - 1);
    const int y = sq / (lx - 1);
    const std::int64_t a = x + lx * y, b = a + 1, c = a + lx + 1, d = a + lx;
    q.spec.edges.push_back({id, a, c, {}});
    q.spec.edges.push_back({id + 1, b, d, {}});
    q.pairs.push_back({alpha++, id, id + 1});
    id += 2;
  }
  return q;
}

std::vector<std::vector<int>> random_trails(const FaithfulProjection& proj, std::size_t count, int max_len,
                                            std::mt19937_64& rng) {
  const auto& space = proj.space();
  std::vector<std::vector<int>> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * (count + 1)) fail(ErrorCode::numeric, "trail generator made no progress");
    std::uniform_int_distribution<int> pick(0, space.size() - 1);
    const int first = pick(rng);
    std::vector<int> trail{first};
    std::vector<char> used(proj.edge_count(), 0);
    used[edge_of(first)] = 1;
    const int start = space.origin(first);
    while (static_cast<int>(trail.size()) < max_len) {
      const int last = trail.back();
      if (space.terminal(last) == start && trail.size() >= 3 && reversal(last) != first &&
          std::uniform_real_distribution<double>(0, 1)(rng) < 0.5) {
        out.push_back(trail);
        break;
      }
      std::vector<int> next;
      for (int b : space.successors(last)) {
        if (!used[edge_of(b)]) next.push_back(b);
      }
      if (next.empty()) break;
      const int b = next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
      used[edge_of(b)] = 1;
      trail.push_back(b);
    }
  }
  return out;
}

EdgeMatrix random_flow_matrix(const OrientedEdgeSpace& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mod(0.5, 1.0), arg(-kPi, kPi);
  const int n = space.size();
  EdgeMatrix m = EdgeMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b : space.successors(a)) m(a, b) = std::polar(mod(rng), arg(rng));
  }
  const double norm = inf_norm(m);
  if (norm > 0) m /= norm;
  return m;
}

}  // namespace kw
